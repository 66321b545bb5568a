"""Continued-fraction combinatorics of the Gauss map.

Inverse branches psi_n(x) = 1/(n + x), their compositions indexed by a
``Word``, cylinder intervals and the countable interpolation partitions
used by P_{l,N}.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gauss_spectral.errors import DomainError, ResourceError
from gauss_spectral.models import DEFAULT_LIMITS, Limits, PartitionSpec, Word

DEDUP_TOLERANCE = 1e-14


def _as_word(w: Word | tuple[int, ...] | list[int]) -> Word:
    return w if isinstance(w, Word) else Word(tuple(w))


def gauss_map(x: float) -> float:
    if not 0.0 < x < 1.0:
        raise DomainError(f"Gauss map is defined on (0, 1), got x={x}.")
    inv = 1.0 / x
    return inv - math.floor(inv)


def _check_unit(x: NDArray[np.float64]) -> None:
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("Branch arguments must lie in [0, 1].")


def _backward(w: Word, x: NDArray[np.float64]) -> list[NDArray[np.float64]]:
    # brackets[j] = [n_{j+1}, ..., n_k + x]
    brackets: list[NDArray[np.float64]] = []
    value = x
    for digit in reversed(w.digits):
        value = 1.0 / (digit + value)
        brackets.append(value)
    brackets.reverse()
    return brackets


def branch_eval(w: Word | tuple[int, ...], x: ArrayLike) -> float | NDArray[np.float64]:
    """Evaluate [n_1, ..., n_k + x] by backward recurrence."""
    w = _as_word(w)
    if w.depth == 0:
        raise DomainError("branch_eval needs a nonempty word.")
    arr = np.asarray(x, dtype=float)
    _check_unit(arr)
    value = _backward(w, arr)[0]
    return float(value) if value.ndim == 0 else value


def cylinder_interval(w: Word | tuple[int, ...]) -> tuple[float, float]:
    w = _as_word(w)
    left = float(branch_eval(w, 0.0))
    right = float(branch_eval(w, 1.0))
    return (left, right) if left <= right else (right, left)


def weight_product(
    w: Word | tuple[int, ...], x: ArrayLike, beta: complex
) -> complex | NDArray[np.complex128]:
    """Product over suffixes of [n_j, ..., n_k + x]^(2 beta), principal branch."""
    w = _as_word(w)
    if w.depth == 0:
        raise DomainError("weight_product needs a nonempty word.")
    arr = np.asarray(x, dtype=float)
    _check_unit(arr)
    two_beta = 2.0 * complex(beta)
    log_sum = sum(np.log(b) for b in _backward(w, arr))
    value = np.exp(two_beta * log_sum)
    return complex(value) if np.ndim(value) == 0 else value


def branch_images(points: NDArray[np.float64], digit_cutoff: int) -> NDArray[np.float64]:
    """All psi_n(p) for 1 <= n <= digit_cutoff, digit-major."""
    digits = np.arange(1, digit_cutoff + 1, dtype=float)
    return (1.0 / (digits[:, None] + points[None, :])).ravel()


def dedupe_sorted(points: NDArray[np.float64], tol: float = DEDUP_TOLERANCE) -> NDArray[np.float64]:
    if points.size == 0:
        return points
    ordered = np.sort(points)
    keep = np.concatenate(([True], np.diff(ordered) > tol))
    return ordered[keep]


def partition_points(spec: PartitionSpec, *, limits: Limits = DEFAULT_LIMITS) -> NDArray[np.float64]:
    """Truncated P~_{l,N}: images of {0, 1/N, ..., (N-1)/N} under words of length <= l, plus 1."""
    size = spec.estimated_size()
    if size > limits.max_partition_points:
        raise ResourceError(
            f"Partition (l={spec.l}, N={spec.N}, cutoff={spec.digit_cutoff}) has ~{size} points; "
            f"limit is {limits.max_partition_points}."
        )
    level = np.arange(spec.N, dtype=float) / spec.N
    levels = [level, np.array([1.0])]
    for _ in range(spec.l):
        level = branch_images(level, spec.digit_cutoff)
        levels.append(level)
    return dedupe_sorted(np.concatenate(levels))


def enumerate_words(depth: int, digit_cutoff: int, *, limits: Limits = DEFAULT_LIMITS) -> NDArray[np.int64]:
    """All words of the given depth with digits <= digit_cutoff, lexicographic order."""
    count = digit_cutoff**depth
    if count > limits.max_words:
        raise ResourceError(f"{count} words at depth {depth} exceed the limit {limits.max_words}.")
    if depth == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(1, digit_cutoff + 1)] * depth), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def words_brackets(words: NDArray[np.int64], z: float) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Vectorized [a_1..a_n + z] and sum_k log [a_k..a_n + z] for every row of ``words``.

    ``z`` may exceed 1 here: the bracket of a word is defined for any z > -1.
    """
    value = np.full(words.shape[0], float(z))
    log_sum = np.zeros(words.shape[0])
    for column in range(words.shape[1] - 1, -1, -1):
        value = 1.0 / (words[:, column] + value)
        log_sum += np.log(value)
    return value, log_sum
