"""Cost and latency model for algorithms built from parallel LLM calls.

One LLM call costs cost_pre(L_pre) + cost_dec(L_pre, L_dec), where L_pre
and L_dec are the prefilled (prompt) and decoded (generated) lengths.  The
functional forms cover the usual serving regimes: per-token API pricing,
memory-bound latency, compute-bound linear latency, and quadratic FLOPs for
full attention.

End-to-end latency of k independent calls under idealized parallelism of
degree p groups the calls into ceil(k/p) consecutive waves; each wave is
bottlenecked by its slowest call.  Closed-form bounds over subtask size m
follow, along with the grid argmin used to predict the cost- or
latency-optimal m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import InvalidConfigurationError

INFINITE = math.inf

COST_KINDS = ("linear-api", "memory-bound-latency", "compute-bound-linear", "quadratic-flops")


@dataclass(frozen=True)
class CostFunctions:
    """Per-call prefill and decode cost functions, tagged by serving regime.

    kind             cost_pre(L_pre)        cost_dec(L_pre, L_dec)
    ----             ---------------        ----------------------
    linear-api       c_pre * L_pre          c_dec * L_dec
    memory-bound     c_const                c_dec * L_dec
    compute-bound    c_pre * L_pre          c_dec * L_dec
    quadratic-flops  c_pre * L_pre^2        c_dec * L_dec * L_pre^2
    """

    kind: str = "linear-api"
    c_pre: float = 1.0
    c_dec: float = 1.0
    c_const: float = 1.0

    def __post_init__(self):
        if self.kind not in COST_KINDS:
            raise InvalidConfigurationError(
                f"unknown cost kind {self.kind!r}; expected one of {COST_KINDS}"
            )
        if min(self.c_pre, self.c_dec, self.c_const) < 0:
            raise InvalidConfigurationError("cost coefficients must be nonnegative")

    def cost_pre(self, l_pre: float) -> float:
        if self.kind == "memory-bound-latency":
            return self.c_const
        if self.kind == "quadratic-flops":
            return self.c_pre * l_pre * l_pre
        return self.c_pre * l_pre

    def cost_dec(self, l_pre: float, l_dec: float) -> float:
        if self.kind == "quadratic-flops":
            return self.c_dec * l_dec * l_pre * l_pre
        return self.c_dec * l_dec


@dataclass(frozen=True)
class CostModel:
    """Cost functions plus the serving-side constants of the analysis.

    ``l_sys`` bounds the per-call system-prompt length, ``p`` is the
    maximum degree of parallelism (math.inf for unlimited), ``m_bar`` the
    largest subtask that fits the context window.
    """

    functions: CostFunctions = field(default_factory=CostFunctions)
    l_sys: int = 0
    p: float = 1
    m_bar: int = 1_000_000

    def __post_init__(self):
        if self.l_sys < 0 or self.m_bar < 1:
            raise InvalidConfigurationError("need l_sys >= 0 and m_bar >= 1")
        if self.p != INFINITE and (self.p < 1 or int(self.p) != self.p):
            raise InvalidConfigurationError(f"p must be a positive integer or inf, got {self.p}")


def cost_single_call(l_pre: float, l_dec: float, functions: CostFunctions) -> float:
    """Cost bound of one LLM call with the given prefill/decode lengths."""
    if l_pre < 0 or l_dec < 0:
        raise InvalidConfigurationError("lengths must be nonnegative")
    return functions.cost_pre(l_pre) + functions.cost_dec(l_pre, l_dec)


def latency_parallel(latencies: Sequence[float], p: float) -> float:
    """End-to-end latency of independent calls under parallelism degree p.

    Groups the calls, in order, into ceil(k/p) consecutive groups of p and
    sums the per-group maxima.  p=1 gives the plain sum, p=inf the max.
    """
    if not latencies:
        return 0.0
    if p == INFINITE:
        return max(latencies)
    p = int(p)
    if p < 1:
        raise InvalidConfigurationError(f"parallelism degree must be >= 1, got {p}")
    return sum(max(latencies[j : j + p]) for j in range(0, len(latencies), p))


def subtask_count(n: int, m: int, rule: str) -> int:
    """Number of parallel subtasks for the given decomposition rule."""
    if m < 1:
        raise InvalidConfigurationError(f"subtask size must be >= 1, got {m}")
    if m >= n:
        return 1
    if rule == "disjoint":
        return -(-n // m)  # ceil(n/m)
    if rule == "overlapping-half":
        return -(-(2 * n - m) // m)  # ceil(2n/m - 1)
    raise InvalidConfigurationError(f"unknown decomposition rule {rule!r}")


def subtask_cost_bound(
    n: int,
    m: int,
    l_dec_of_m: Callable[[int], float],
    model: CostModel,
    aggregation: str = "sum",
    rule: str = "disjoint",
) -> float:
    """Closed-form bound on the total cost of the subtask stage.

    aggregation="sum" charges every call: k * per-call bound.
    aggregation="parallel" charges sequential waves: ceil(k/p) * per-call.
    The per-call bound is cost_pre(l_sys + m) + cost_dec(l_sys + m, L_dec(m)).
    """
    if m > model.m_bar:
        raise InvalidConfigurationError(f"m={m} exceeds the context bound m_bar={model.m_bar}")
    k = subtask_count(n, m, rule)
    per_call = cost_single_call(model.l_sys + m, l_dec_of_m(m), model.functions)
    if aggregation == "sum":
        return k * per_call
    if aggregation == "parallel":
        waves = 1 if model.p == INFINITE else math.ceil(k / model.p)
        return waves * per_call
    raise InvalidConfigurationError(f"unknown aggregation {aggregation!r}")


def predict_optimal_m(
    n: int,
    model: CostModel,
    rule: str,
    l_dec_of_m: Callable[[int], float],
    objective: str,
    grid: Sequence[int],
) -> tuple[int, float]:
    """Grid argmin of the chosen cost bound; ties break toward larger m.

    objective="sum-cost" minimizes the summed-cost bound,
    objective="parallel-latency" the ceil(k/p)-wave latency bound.
    """
    if not grid:
        raise InvalidConfigurationError("candidate grid for m is empty")
    aggregation = {"sum-cost": "sum", "parallel-latency": "parallel"}.get(objective)
    if aggregation is None:
        raise InvalidConfigurationError(f"unknown objective {objective!r}")
    best_m, best_cost = None, None
    for m in sorted(grid):
        cost = subtask_cost_bound(n, m, l_dec_of_m, model, aggregation, rule)
        if best_cost is None or cost <= best_cost:
            best_m, best_cost = m, cost
    return best_m, best_cost


@dataclass(frozen=True)
class CostReport:
    """Aggregate cost metrics of one execution trace."""

    prefill_tokens_total: int
    decode_tokens_total: int
    call_count: int
    latency_sequential: float
    latency_parallel_p: float
    latency_parallel_inf: float
    p: float


def stage_latency(trace, p: float) -> float:
    """Simulated end-to-end latency of a trace at parallelism degree p.

    Calls are grouped only within a decomposition stage; stages run
    sequentially (the aggregation call starts after the last subtask
    finishes), so per-stage latencies add up.
    """
    total = 0.0
    for stage in trace.stage_order:
        total += latency_parallel([e.latency_ms for e in trace.exchanges_for_stage(stage)], p)
    return total


def trace_costs(trace, model: CostModel) -> CostReport:
    """Exact token totals plus simulated latencies for one trace."""
    return CostReport(
        prefill_tokens_total=trace.prompt_tokens_total,
        decode_tokens_total=trace.completion_tokens_total,
        call_count=len(trace.exchanges),
        latency_sequential=stage_latency(trace, 1),
        latency_parallel_p=stage_latency(trace, model.p),
        latency_parallel_inf=stage_latency(trace, INFINITE),
        p=model.p,
    )
