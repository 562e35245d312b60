"""Symbolic merging of (approximately) sorted lists, plus insertion sort.

The two-pointer merge and both multi-list strategies are deterministic and
well-defined even when the inputs are not fully sorted, which matters here
because the sub-lists come from LLM calls.  On equal values the merge takes
from the first list.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .errors import InvalidConfigurationError


def merge_two_sorted_lists(list1: Sequence[float], list2: Sequence[float]) -> list[float]:
    """Two-pointer merge; length of the result is always len(list1) + len(list2)."""
    if not list1:
        return list(list2)
    if not list2:
        return list(list1)
    len1, len2 = len(list1), len(list2)
    idx1, idx2 = 0, 0
    solution: list[float] = []
    while len(solution) < len1 + len2:
        if idx1 == len1:
            solution.append(list2[idx2])
            idx2 += 1
        elif idx2 == len2:
            solution.append(list1[idx1])
            idx1 += 1
        elif list1[idx1] <= list2[idx2]:
            solution.append(list1[idx1])
            idx1 += 1
        else:
            solution.append(list2[idx2])
            idx2 += 1
    return solution


def merge_many(lists: Sequence[Sequence[float]], mode: str = "hierarchical") -> list[float]:
    """Merge several lists pairwise, either incrementally or hierarchically.

    incremental: repeatedly merge the two lists at the back of the queue.
    hierarchical: rounds of merging front pairs, appending results at the
    back, until one list remains.
    """
    if not lists:
        raise InvalidConfigurationError("need at least one list to merge")
    queue = [list(entry) for entry in lists]
    if mode == "incremental":
        for _ in range(len(queue) - 1):
            list1 = queue.pop()
            list2 = queue.pop()
            queue.append(merge_two_sorted_lists(list1, list2))
        return queue[0]
    if mode == "hierarchical":
        while len(queue) > 1:
            for _ in range(len(queue) // 2):
                list1 = queue.pop(0)
                list2 = queue.pop(0)
                queue.append(merge_two_sorted_lists(list1, list2))
        return queue[0]
    raise InvalidConfigurationError(f"unknown merge mode {mode!r}")


def insertion_sort(
    values: Sequence[float],
    on_swap: Callable[[list[float]], None] | None = None,
) -> list[float]:
    """Classical insertion sort by adjacent swaps; returns a sorted copy.

    ``on_swap``, when given, is called with the current list state after
    every swap, which lets tests check invariants that are preserved
    swap-by-swap.
    """
    z = list(values)
    for i in range(1, len(z)):
        for j in range(i, 0, -1):
            if z[j] >= z[j - 1]:
                break
            z[j], z[j - 1] = z[j - 1], z[j]
            if on_swap is not None:
                on_swap(z)
    return z
