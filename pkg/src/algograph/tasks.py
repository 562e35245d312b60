"""The four parallel-decomposition algorithms and their plumbing.

Each solver builds a divide / subtask / aggregate computational graph from
a DecompositionPlan, runs it against a backend, and returns the final
answer together with the execution trace.  Counting and sorting split the
input into disjoint segments (k = ceil(n/m)); retrieval and RAG use
overlapping chunks whose neighbors share m/2 characters
(k = ceil(2n/m - 1)), so a needle shorter than the overlap always appears
whole in at least one chunk.
"""

from __future__ import annotations

import re
import warnings
from collections import Counter
from dataclasses import dataclass

from . import templates
from .backend import IDK
from .errors import InvalidConfigurationError
from .graph import LLMNode, NonLLMNode, build_parallel_decomposition, execute
from .instances import (
    CountingInstance,
    HaystackInstance,
    RagInstance,
    SortingInstance,
)
from .merging import merge_many

_INT = re.compile(r"-?\d+")
_FLOAT = re.compile(r"-?\d+(?:\.\d+)?(?:e-?\d+)?")
_PASSCODE = re.compile(r"\d{6}")
_PARTIAL_PASSCODE = re.compile(r"[0-9?]{6}")


@dataclass(frozen=True)
class DecompositionPlan:
    """Segments of [0, n) assigned to the k parallel subtasks."""

    kind: str
    n: int
    m: int
    k: int
    segments: tuple[tuple[int, int], ...]  # (start, length)
    clamped: bool = False


def plan_decomposition(n: int, m: int, kind: str = "disjoint") -> DecompositionPlan:
    """Segment [0, n) into subtasks of nominal size m.

    disjoint: consecutive segments of length m, last one shorter.
    overlapping-half: starts at multiples of m/2 (m is rounded down to an
    even value if needed), full length m except the last, whose length
    lands in [m/2, m].  m > n degenerates to a single segment.
    """
    if m < 1:
        raise InvalidConfigurationError(f"subtask size must be >= 1, got {m}")
    if n < 1:
        raise InvalidConfigurationError(f"problem size must be >= 1, got {n}")
    clamped = m > n
    if kind == "disjoint":
        if clamped:
            return DecompositionPlan(kind, n, m, 1, ((0, n),), clamped=True)
        segments = tuple((start, min(m, n - start)) for start in range(0, n, m))
        return DecompositionPlan(kind, n, m, len(segments), segments)
    if kind == "overlapping-half":
        if m % 2 == 1:
            warnings.warn(f"overlap requires even m; rounding {m} down to {m - 1}")
            m -= 1
            if m < 2:
                raise InvalidConfigurationError("overlapping plan needs m >= 2")
        if m >= n:
            return DecompositionPlan(kind, n, m, 1, ((0, n),), clamped=m > n)
        half = m // 2
        k = -(-(2 * n - m) // m)  # ceil(2n/m - 1) without floats
        segments = []
        for i in range(k):
            start = i * half
            length = m if i < k - 1 else n - start
            segments.append((start, length))
        return DecompositionPlan(kind, n, m, k, tuple(segments))
    raise InvalidConfigurationError(f"unknown decomposition kind {kind!r}")


# ---------------------------------------------------------------------------
# Response parsers (deterministic; solvers declare per-task fallbacks).

def parse_count(response: str) -> int:
    matches = _INT.findall(response)
    if not matches:
        raise ValueError(f"no integer in response {response!r}")
    return int(matches[-1])


def parse_float_list(response: str) -> list[float]:
    values = [float(v) for v in _FLOAT.findall(response)]
    if not values:
        raise ValueError(f"no numbers in response {response!r}")
    return values


def parse_passcode_answer(response: str) -> str:
    if IDK.lower() in response.lower():
        return IDK
    match = _PASSCODE.search(response)
    if not match:
        raise ValueError(f"no passcode in response {response!r}")
    return match.group(0)


def parse_sentence_list(response: str) -> list[str]:
    if response.strip().lower() == "none":
        return []
    return [line.strip() for line in response.splitlines() if line.strip()]


def parse_partial_passcode(response: str) -> str:
    match = _PARTIAL_PASSCODE.search(response)
    if not match:
        raise ValueError(f"no 6-character passcode in response {response!r}")
    return match.group(0)


def majority_vote(answers: list[str]):
    """Majority answer over non-abstaining votes.

    "I don't know" votes are excluded; an h-way tie returns the h
    candidates sorted lexicographically; all votes abstaining returns
    "I don't know".  A single committed vote among abstentions wins
    outright (h = 1).
    """
    votes = Counter(a for a in answers if a != IDK)
    if not votes:
        return IDK
    top = max(votes.values())
    winners = sorted(a for a, c in votes.items() if c == top)
    return winners[0] if len(winners) == 1 else winners


# ---------------------------------------------------------------------------
# Solvers.

def _segment_values(plan: DecompositionPlan, payload):
    return [payload[start : start + length] for start, length in plan.segments]


def _check_m_bar(m: int, model) -> None:
    if model is not None and m > model.m_bar:
        raise InvalidConfigurationError(f"m={m} exceeds the context bound m_bar={model.m_bar}")


def solve_counting(instance: CountingInstance, m: int, backend, model=None, seed: int = 0):
    """Count digits by summing per-segment counts from one LLM call each."""
    _check_m_bar(m, model)
    plan = plan_decomposition(len(instance.text), m, "disjoint")

    def subtask(i: int) -> LLMNode:
        return LLMNode(
            prompter=lambda pieces, i=i: templates.counting_prompt(pieces[i]),
            parser=parse_count,
            fallback=0,
        )

    graph = build_parallel_decomposition(
        plan.k,
        subtask,
        NonLLMNode(compute=lambda *counts: int(sum(counts))),
        divide=lambda text: _segment_values(plan, text),
    )
    (answer,), trace = execute(graph, [instance.text], backend, seed)
    return answer, trace


def solve_sorting(
    instance: SortingInstance,
    m: int,
    backend,
    model=None,
    merge_mode: str = "hierarchical",
    seed: int = 0,
):
    """Sort sub-lists with one LLM call each, then merge symbolically."""
    _check_m_bar(m, model)
    plan = plan_decomposition(len(instance.values), m, "disjoint")

    def subtask(i: int) -> LLMNode:
        return LLMNode(
            prompter=lambda pieces, i=i: templates.sorting_prompt(pieces[i]),
            parser=parse_float_list,
            fallback=[],
        )

    graph = build_parallel_decomposition(
        plan.k,
        subtask,
        NonLLMNode(compute=lambda *lists: merge_many(list(lists), merge_mode)),
        divide=lambda values: _segment_values(plan, list(values)),
    )
    (answer,), trace = execute(graph, [list(instance.values)], backend, seed)
    return answer, trace


def solve_retrieval(instance: HaystackInstance, m: int, backend, model=None, seed: int = 0):
    """Answer from overlapping chunks by majority vote over per-chunk calls."""
    _check_m_bar(m, model)
    plan = plan_decomposition(len(instance.text), m, "overlapping-half")
    if instance.needle_present and instance.needle_span is not None:
        needle_len = instance.needle_span[1] - instance.needle_span[0]
        if plan.k > 1 and plan.m // 2 < needle_len:
            warnings.warn(
                f"overlap {plan.m // 2} is shorter than the needle ({needle_len}); "
                "the needle may straddle every chunk boundary"
            )

    def subtask(i: int) -> LLMNode:
        return LLMNode(
            prompter=lambda pieces, i=i: templates.retrieval_prompt(
                pieces[i], instance.target_object
            ),
            parser=parse_passcode_answer,
            fallback=IDK,
        )

    graph = build_parallel_decomposition(
        plan.k,
        subtask,
        NonLLMNode(compute=lambda *answers: majority_vote(list(answers))),
        divide=lambda text: _segment_values(plan, text),
    )
    (answer,), trace = execute(graph, [instance.text], backend, seed)
    return answer, trace


def solve_rag(instance: RagInstance, m: int, backend, model=None, seed: int = 0):
    """Retrieve relevant sentences per chunk, then aggregate with one LLM call.

    Chunks whose retrieval comes back empty ("None") are excluded from the
    aggregation prompt; retrieved sentences are deduplicated (overlapping
    chunks see the same sentence twice) preserving first occurrence.
    """
    _check_m_bar(m, model)
    plan = plan_decomposition(len(instance.text), m, "overlapping-half")

    def subtask(i: int) -> LLMNode:
        return LLMNode(
            prompter=lambda pieces, i=i: templates.rag_retrieve_prompt(
                pieces[i], instance.target_object
            ),
            parser=parse_sentence_list,
            fallback=[],
        )

    def aggregate_prompter(*sentence_lists):
        seen: dict[str, None] = {}
        for chunk_sentences in sentence_lists:
            for sentence in chunk_sentences:
                seen.setdefault(sentence)
        return templates.rag_aggregate_prompt(list(seen), instance.target_object)

    graph = build_parallel_decomposition(
        plan.k,
        subtask,
        LLMNode(prompter=aggregate_prompter, parser=parse_partial_passcode, fallback="??????"),
        divide=lambda text: _segment_values(plan, text),
    )
    (answer,), trace = execute(graph, [instance.text], backend, seed)
    return answer, trace


SOLVERS = {
    "counting": solve_counting,
    "sorting": solve_sorting,
    "retrieval": solve_retrieval,
    "rag": solve_rag,
}
