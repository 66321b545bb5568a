"""Chebyshev-Lobatto nodes, barycentric interpolation and spectral
differentiation on an interval [a, b].
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gauss_spectral.errors import DomainError


def chebyshev_nodes(n: int, a: float = 0.0, b: float = 1.0) -> NDArray[np.float64]:
    """n Chebyshev-Lobatto points on [a, b], ascending, endpoints included."""
    if n < 2:
        raise DomainError(f"Need at least 2 Chebyshev nodes, got {n}.")
    theta = np.pi * np.arange(n) / (n - 1)
    nodes = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(theta)
    nodes[0], nodes[-1] = a, b
    return nodes


def barycentric_weights(n: int) -> NDArray[np.float64]:
    weights = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return weights


def cardinal_matrix(
    nodes: NDArray[np.float64], weights: NDArray[np.float64], x: ArrayLike
) -> NDArray[np.float64]:
    """Row r holds the Lagrange cardinals l_j(x_r) for all j."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    diff = x[:, None] - nodes[None, :]
    hit = diff == 0.0
    diff[hit] = 1.0
    ratio = weights[None, :] / diff
    out = ratio / ratio.sum(axis=1, keepdims=True)
    rows = hit.any(axis=1)
    if rows.any():
        out[rows] = hit[rows].astype(float)
    return out


def barycentric_eval(
    nodes: NDArray[np.float64],
    weights: NDArray[np.float64],
    values: NDArray[np.complex128],
    x: ArrayLike,
) -> NDArray[np.complex128]:
    return cardinal_matrix(nodes, weights, x) @ values


def differentiation_matrix(nodes: NDArray[np.float64], weights: NDArray[np.float64]) -> NDArray[np.float64]:
    dx = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(dx, 1.0)
    D = (weights[None, :] / weights[:, None]) / dx
    np.fill_diagonal(D, 0.0)
    # negative-sum trick keeps D @ 1 = 0 exactly
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


@lru_cache(maxsize=32)
def _taylor_rows(n: int, a: float, b: float, order: int) -> NDArray[np.float64]:
    nodes = chebyshev_nodes(n, a, b)
    D = differentiation_matrix(nodes, barycentric_weights(n))
    rows = np.empty((order + 1, n))
    row = np.zeros(n)
    row[0] = 1.0
    for m in range(order + 1):
        rows[m] = row / math.factorial(m)
        row = row @ D
    rows.setflags(write=False)
    return rows


def taylor_rows(n: int, a: float, b: float, order: int) -> NDArray[np.float64]:
    """Linear functionals v -> p^(m)(a)/m! of the interpolant, m = 0..order."""
    return _taylor_rows(n, float(a), float(b), order)
