"""Task-specific error metrics and error-composition bounds.

Counting is scored by absolute and normalized error; sorting by five
metrics covering its three failure modes (non-monotone output, wrong
length, wrong values); retrieval by exact match with 1 - 1/h credit for an
h-way tie containing the truth; the multi-needle RAG task by exact match
plus the fraction of wrong digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidConfigurationError, MalformedAnswerError

# Fixed metric identifiers, also used as CSV column headers.
COUNTING_METRICS = ("err_abs", "err_norm")
SORTING_METRICS = ("err_exact", "err_nonmono", "err_lenmis", "err_linf", "err_l1")
RETRIEVAL_METRICS = ("err_retrieval",)
RAG_METRICS = ("err_exact", "err_digits")


@dataclass(frozen=True)
class SortingErrors:
    exact_match: float
    non_monotonicity: float
    length_mismatch: float
    fuzzy_linf: float
    fuzzy_l1: float

    def as_dict(self) -> dict[str, float]:
        return {
            "err_exact": self.exact_match,
            "err_nonmono": self.non_monotonicity,
            "err_lenmis": self.length_mismatch,
            "err_linf": self.fuzzy_linf,
            "err_l1": self.fuzzy_l1,
        }


def counting_errors(y: int, y_star: int, n: int) -> tuple[float, float]:
    """Absolute counting error |y - y*| and its n-normalized version."""
    if n < 1:
        raise InvalidConfigurationError(f"problem size must be >= 1, got {n}")
    absolute = abs(y - y_star)
    return float(absolute), absolute / n


def non_monotonicity(y: Sequence[float]) -> float:
    """Sum of adjacent inversions max(y_i - y_{i+1}, 0); zero iff sorted."""
    if len(y) < 2:
        return 0.0
    arr = np.asarray(y, dtype=float)
    return float(np.maximum(arr[:-1] - arr[1:], 0.0).sum())


def fit_length(y: Sequence[float], n: int) -> list[float]:
    """Truncate or extend ``y`` to length n for the fuzzy metrics.

    Extension repeats the last entry; an empty list extends with zeros.
    (The choice of extension rule is ours; see README.)
    """
    y = list(y)
    if len(y) >= n:
        return y[:n]
    pad = y[-1] if y else 0.0
    return y + [pad] * (n - len(y))


def sorting_errors(y: Sequence[float], y_star: Sequence[float]) -> SortingErrors:
    """All five sorting metrics of output ``y`` against sorted truth ``y_star``."""
    n = len(y_star)
    if n < 1:
        raise InvalidConfigurationError("ground-truth list must be nonempty")
    y = list(y)
    exact = 0.0 if len(y) == n and all(a == b for a, b in zip(y, y_star)) else 1.0
    fitted = np.asarray(fit_length(y, n), dtype=float)
    truth = np.asarray(y_star, dtype=float)
    diff = np.abs(fitted - truth)
    return SortingErrors(
        exact_match=exact,
        non_monotonicity=non_monotonicity(y),
        length_mismatch=abs(len(y) - n) / n,
        fuzzy_linf=float(diff.max()),
        fuzzy_l1=float(diff.sum() / n),
    )


def retrieval_error(answer, truth: str) -> float:
    """Exact-match retrieval error with tie credit.

    0 for the exact answer; 1 - 1/h when the answer is a list of h tied
    candidates containing the truth; 1 otherwise (wrong answer, a list
    without the truth, or "I don't know" when a passcode was expected).
    """
    if isinstance(answer, str):
        return 0.0 if answer == truth else 1.0
    candidates = list(answer)
    if truth in candidates:
        return 1.0 - 1.0 / len(candidates)
    return 1.0


def rag_errors(answer: str, truth: str) -> tuple[float, float]:
    """Exact-match error and fraction of wrong digits ('?' counts as wrong)."""
    if len(answer) != 6 or len(truth) != 6:
        raise MalformedAnswerError(
            f"passcode answers must be 6 characters, got {answer!r} vs {truth!r}"
        )
    wrong = sum(1 for a, t in zip(answer, truth) if a != t)
    return (0.0 if wrong == 0 else 1.0), wrong / 6.0


def compose_error_bound(errors: Sequence[float], form: str) -> float:
    """Aggregate subtask errors into an overall-error bound."""
    if not errors:
        raise InvalidConfigurationError("need at least one subtask error")
    if form == "sum":
        return float(sum(errors))
    if form == "mean":
        return float(sum(errors) / len(errors))
    if form == "min":
        return float(min(errors))
    if form == "max":
        return float(max(errors))
    raise InvalidConfigurationError(f"unknown composition form {form!r}")
