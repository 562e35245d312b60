"""Computational graphs of LLM and non-LLM nodes, and their executor.

A graph is a DAG whose nodes either wrap one LLM call (prompt formatting,
the call itself, response parsing) or run an arbitrary pure Python
function.  Edges carry values between nodes; executing a valid graph visits
every node exactly once and records one ChatExchange per LLM node into an
ExecutionTrace.

Execution is deterministic: each node draws its randomness from a seed
derived from (run seed, node id), so evaluation order of independent nodes
cannot change any value.  Traces are canonically sorted by node id before
they are returned.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Sequence

from .errors import BackendError, ExecutionError, InvalidConfigurationError
from .seeding import derive_node_seed

# Sentinel for "no fallback: a parse failure aborts execution".
FAIL = object()


@dataclass(frozen=True)
class LLMNode:
    """A node containing exactly one LLM call.

    ``prompter`` maps the node's input values to the prompt text;
    ``parser`` maps the raw response text back to a value.  Both must be
    deterministic.  If parsing raises and ``fallback`` is not FAIL, the
    fallback value is substituted and the error recorded in the trace.
    """

    prompter: Callable[..., str]
    parser: Callable[[str], Any]
    fallback: Any = FAIL
    arity: int | None = None
    stage: str = ""


@dataclass(frozen=True)
class NonLLMNode:
    """A node running a pure symbolic computation; no model call."""

    compute: Callable[..., Any]
    arity: int | None = None
    stage: str = ""


NodeKind = LLMNode | NonLLMNode


@dataclass
class ComputationGraph:
    """DAG of named nodes with slot-indexed data-flow edges.

    ``edges`` entries are (source id, target id, input slot at the target).
    ``inputs`` lists the nodes that receive the external input values, one
    value each, positionally; input nodes must have no incoming edges.
    ``outputs`` lists the nodes whose values the graph returns.
    """

    nodes: dict[str, NodeKind] = field(default_factory=dict)
    edges: list[tuple[str, str, int]] = field(default_factory=list)
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)

    def add_node(self, node_id: str, kind: NodeKind) -> str:
        if node_id in self.nodes:
            raise InvalidConfigurationError(f"duplicate node id {node_id!r}")
        self.nodes[node_id] = kind
        return node_id

    def add_edge(self, src: str, dst: str, slot: int) -> None:
        self.edges.append((src, dst, slot))

    def predecessors(self, node_id: str) -> list[tuple[str, int]]:
        return [(s, slot) for s, d, slot in self.edges if d == node_id]


@dataclass
class ExecutionTrace:
    """Record of one graph execution.

    ``exchanges`` holds one ChatExchange per executed LLM node, sorted by
    node id.  ``values`` maps every node to its computed value.
    ``stage_order`` lists the distinct exchange stage labels in first-use
    order, which is what the cost model uses to group latencies.
    """

    exchanges: list = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)
    stage_order: list[str] = field(default_factory=list)
    parse_errors: list[tuple[str, str]] = field(default_factory=list)

    @property
    def prompt_tokens_total(self) -> int:
        return sum(e.prompt_tokens for e in self.exchanges)

    @property
    def completion_tokens_total(self) -> int:
        return sum(e.completion_tokens for e in self.exchanges)

    def exchanges_for_stage(self, stage: str) -> list:
        return [e for e in self.exchanges if e.stage == stage]


def validate(graph: ComputationGraph) -> list[str]:
    """Check structural invariants; returns all violations (empty = ok)."""
    violations: list[str] = []
    known = graph.nodes.keys()

    for src, dst, slot in graph.edges:
        if src not in known:
            violations.append(f"edge source {src!r} is not a node")
        if dst not in known:
            violations.append(f"edge target {dst!r} is not a node")
        if slot < 0:
            violations.append(f"edge {src!r}->{dst!r} has negative slot {slot}")
    for node_id in graph.inputs:
        if node_id not in known:
            violations.append(f"input {node_id!r} is not a node")
        elif graph.predecessors(node_id):
            violations.append(f"input node {node_id!r} has incoming edges")
    for node_id in graph.outputs:
        if node_id not in known:
            violations.append(f"output {node_id!r} is not a node")
    if not graph.outputs:
        violations.append("graph has an empty output set")
    if violations:
        return violations  # slot/reachability checks assume well-formed refs

    # Input slots must be dense and non-duplicated; honor declared arity.
    for node_id, kind in graph.nodes.items():
        slots = sorted(slot for _, d, slot in graph.edges if d == node_id)
        if len(set(slots)) != len(slots):
            violations.append(f"node {node_id!r} has a doubly-connected input slot")
            continue
        arity = kind.arity if kind.arity is not None else (max(slots) + 1 if slots else 0)
        expected = list(range(arity))
        if node_id in graph.inputs:
            if slots:
                continue  # already reported above
        elif slots != expected:
            missing = sorted(set(expected) - set(slots))
            violations.append(f"node {node_id!r} has dangling input slot(s) {missing}")

    # Every node must be an input or reachable from one.
    reachable = set(graph.inputs)
    frontier = list(graph.inputs)
    succ: dict[str, list[str]] = {}
    for src, dst, _ in graph.edges:
        succ.setdefault(src, []).append(dst)
    while frontier:
        for nxt in succ.get(frontier.pop(), ()):  # DFS
            if nxt not in reachable:
                reachable.add(nxt)
                frontier.append(nxt)
    for node_id in graph.nodes:
        if node_id not in reachable:
            violations.append(f"node {node_id!r} is unreachable from the graph inputs")

    # Cycle check by Kahn's algorithm over in-degrees.
    indeg = {node_id: 0 for node_id in graph.nodes}
    for _, dst, _ in graph.edges:
        indeg[dst] += 1
    queue = [node_id for node_id, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        seen += 1
        for nxt in succ.get(queue.pop(), ()):
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                queue.append(nxt)
    if seen != len(graph.nodes):
        violations.append("graph contains a cycle")

    return violations


def build_parallel_decomposition(
    k: int,
    subtask_node: Callable[[int], NodeKind] | NodeKind,
    aggregate_node: NodeKind,
    divide: Callable[[Any], list] | None = None,
) -> ComputationGraph:
    """Build the divide / k parallel subtasks / aggregate graph.

    ``subtask_node`` is a template: either a factory called with the
    subtask index i (its node then receives the full list of pieces and is
    expected to use piece i), or a single NodeKind reused for every branch.
    ``divide`` is the dividing node's computation; by default the graph
    input must already be a list of k pieces.
    """
    if k < 1:
        raise InvalidConfigurationError(f"parallel decomposition needs k >= 1, got {k}")

    def default_divide(pieces):
        if len(pieces) != k:
            raise ValueError(f"expected {k} pieces, got {len(pieces)}")
        return list(pieces)

    graph = ComputationGraph()
    graph.add_node("divide", NonLLMNode(compute=divide or default_divide, arity=1, stage="divide"))
    agg = replace(aggregate_node, arity=k, stage=aggregate_node.stage or "aggregate")
    graph.add_node("aggregate", agg)
    is_factory = callable(subtask_node) and not isinstance(subtask_node, (LLMNode, NonLLMNode))
    for i in range(k):
        kind = subtask_node(i) if is_factory else subtask_node
        kind = replace(kind, arity=1, stage=kind.stage or "subtask")
        node_id = graph.add_node(f"subtask:{i:04d}", kind)
        graph.add_edge("divide", node_id, 0)
        graph.add_edge(node_id, "aggregate", i)
    graph.inputs = ["divide"]
    graph.outputs = ["aggregate"]
    return graph


def execute(
    graph: ComputationGraph,
    inputs: Sequence[Any],
    backend,
    seed: int,
    workers: int = 1,
) -> tuple[list[Any], ExecutionTrace]:
    """Evaluate ``graph`` on ``inputs`` against ``backend``.

    Nodes are evaluated in topological waves; within a wave, ready nodes
    run in ascending node-id order (concurrently when ``workers`` > 1 --
    values cannot depend on scheduling because node functions are pure
    given their derived seeds).  Returns the output values and the trace,
    with exchanges canonically sorted by node id.
    """
    problems = validate(graph)
    if problems:
        raise InvalidConfigurationError("invalid graph: " + "; ".join(problems))
    if len(inputs) != len(graph.inputs):
        raise InvalidConfigurationError(
            f"graph takes {len(graph.inputs)} input(s), got {len(inputs)}"
        )

    trace = ExecutionTrace()
    values: dict[str, Any] = {}
    external = dict(zip(graph.inputs, inputs))
    pending = {node_id: len(graph.predecessors(node_id)) for node_id in graph.nodes}
    done: set[str] = set()

    def run_node(node_id: str):
        kind = graph.nodes[node_id]
        if node_id in external:
            args = [external[node_id]]
        else:
            preds = sorted(graph.predecessors(node_id), key=lambda p: p[1])
            args = [values[src] for src, _ in preds]
        if isinstance(kind, NonLLMNode):
            return kind.compute(*args), None, None
        prompt = kind.prompter(*args)
        try:
            exchange = backend.chat(prompt, seed=derive_node_seed(seed, node_id))
        except BackendError as err:
            raise ExecutionError(str(err), node_id=node_id) from err
        exchange = replace(exchange, node_id=node_id, stage=kind.stage)
        try:
            value = kind.parser(exchange.response_text)
        except Exception as err:
            if kind.fallback is FAIL:
                raise ExecutionError(f"parser failed: {err}", node_id=node_id) from err
            return kind.fallback, exchange, f"parser failed: {err}"
        return value, exchange, None

    while len(done) < len(graph.nodes):
        ready = sorted(
            node_id
            for node_id, count in pending.items()
            if count == 0 and node_id not in done
        )
        if not ready:
            raise ExecutionError("no ready nodes; graph is not schedulable")
        if workers > 1 and len(ready) > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run_node, ready))
        else:
            results = [run_node(node_id) for node_id in ready]
        for node_id, (value, exchange, parse_error) in zip(ready, results):
            values[node_id] = value
            if exchange is not None:
                trace.exchanges.append(exchange)
                if exchange.stage not in trace.stage_order:
                    trace.stage_order.append(exchange.stage)
            if parse_error is not None:
                trace.parse_errors.append((node_id, parse_error))
            done.add(node_id)
            for src, dst, _ in graph.edges:
                if src == node_id:
                    pending[dst] -= 1

    trace.exchanges.sort(key=lambda e: e.node_id)
    trace.parse_errors.sort()
    trace.values = values
    return [values[node_id] for node_id in graph.outputs], trace
