"""Hoelder-space experiments: grid seminorms, the pointwise quotient |f|_alpha,
the countable interpolation P_{l,N}, the chaining lemma and Monte-Carlo
estimates of ||L^l - L^l P_{l,N}|| against the essential-radius bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gauss_spectral.cf_core import dedupe_sorted, partition_points
from gauss_spectral.errors import DomainError, ResourceError
from gauss_spectral.interpolation.base import ProgressCallback
from gauss_spectral.interpolation.grid import GridFunction
from gauss_spectral.interpolation.piecewise_linear import linear_eval
from gauss_spectral.models import DEFAULT_LIMITS, Limits, PartitionSpec
from gauss_spectral.transfer import apply_transfer, lambda1

_ROW_BLOCK = 256
NODE_MATCH_TOLERANCE = 1e-14


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"Hoelder exponent must lie in (0, 1), got {alpha}.")
    return alpha


@dataclass(frozen=True, slots=True, eq=False)
class HolderFunction:
    """A piecewise-linear GridFunction on [0, M], M >= 1, with its exponent alpha."""

    f: GridFunction
    alpha: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        if self.f.rule != "linear":
            raise DomainError("HolderFunction needs a piecewise-linear GridFunction.")
        if self.f.domain[0] != 0.0 or self.f.domain[1] < 1.0:
            raise DomainError(f"HolderFunction grid must cover [0, 1], got {self.f.domain}.")

    @classmethod
    def from_callable(cls, func, alpha: float, *, nodes: ArrayLike | None = None, n: int = 1025) -> HolderFunction:
        grid = np.linspace(0.0, 1.0, n) if nodes is None else np.asarray(nodes, dtype=float)
        f = GridFunction.from_callable(func, domain=(float(grid[0]), float(grid[-1])), rule="linear", nodes=grid)
        return cls(f, alpha)

    @property
    def nodes(self) -> NDArray[np.float64]:
        return self.f.nodes

    @property
    def values(self) -> NDArray[np.complex128]:
        return self.f.values

    def sup_norm(self) -> float:
        return self.f.sup_norm()

    def seminorm(self) -> float:
        return holder_seminorm(self)

    def norm(self) -> float:
        """||f||_inf + ||f||_alpha on the grid."""
        return self.sup_norm() + self.seminorm()

    def with_values(self, values: ArrayLike) -> HolderFunction:
        return HolderFunction(self.f.with_values(values), self.alpha)


def _quotient_rows(
    nodes: NDArray[np.float64], values: NDArray[np.complex128], alpha: float, rows: slice
) -> NDArray[np.float64]:
    dx = np.abs(nodes[rows, None] - nodes[None, :])
    dv = np.abs(values[rows, None] - values[None, :])
    same = dx == 0.0
    dx[same] = 1.0
    quotient = dv / dx**alpha
    quotient[same] = 0.0
    return quotient.max(axis=1)


def auxiliary_alpha_all(h: HolderFunction) -> NDArray[np.float64]:
    """|f|_alpha at every node, in row blocks to bound memory."""
    n = h.nodes.size
    out = np.empty(n)
    for start in range(0, n, _ROW_BLOCK):
        rows = slice(start, min(start + _ROW_BLOCK, n))
        out[rows] = _quotient_rows(h.nodes, h.values, h.alpha, rows)
    return out


def holder_seminorm(h: HolderFunction) -> float:
    """max |f(x) - f(y)| / |x - y|^alpha over node pairs: a lower bound of ||f||_alpha."""
    if h.nodes.size < 2:
        raise DomainError("A Hoelder seminorm needs at least two nodes.")
    return float(auxiliary_alpha_all(h).max())


def auxiliary_alpha(h: HolderFunction, x: ArrayLike) -> float | NDArray[np.float64]:
    scalar = np.ndim(x) == 0
    points = np.atleast_1d(np.asarray(x, dtype=float))
    index = np.searchsorted(h.nodes, points)
    index = np.clip(index, 0, h.nodes.size - 1)
    left = np.clip(index - 1, 0, h.nodes.size - 1)
    pick = np.where(np.abs(h.nodes[left] - points) < np.abs(h.nodes[index] - points), left, index)
    if np.any(np.abs(h.nodes[pick] - points) > NODE_MATCH_TOLERANCE):
        raise DomainError("auxiliary_alpha is evaluated at grid nodes only.")
    out = np.array([_quotient_rows(h.nodes, h.values, h.alpha, slice(i, i + 1))[0] for i in pick])
    return float(out[0]) if scalar else out


def pln_apply(h: HolderFunction, spec: PartitionSpec, *, limits: Limits = DEFAULT_LIMITS) -> HolderFunction:
    """Interpolate f linearly between consecutive points of the truncated P~_{l,N}.

    The result lives on the union of the input grid and the partition.
    """
    points = partition_points(spec, limits=limits)
    anchored = np.asarray(h.f(points), dtype=complex)
    grid = dedupe_sorted(np.concatenate((h.nodes, points)))
    values = linear_eval(points, anchored, grid)
    f = GridFunction(domain=h.f.domain, nodes=grid, values=values, rule="linear")
    return HolderFunction(f, h.alpha)


def chaining_constant(alpha: float) -> float:
    alpha = _check_alpha(alpha)
    return max(3.0 ** (1.0 - alpha), math.sqrt(3.0))


def chaining_violations(
    alpha: float,
    samples: int = 100_000,
    *,
    seed: int | None = 0,
    slack: float = 1e-12,
) -> tuple[int, float]:
    """Test the four-point chaining inequality on random a < b <= c < d.

    Returns the number of violations and the largest observed ratio of the
    outer quotient to the bound.
    """
    alpha = _check_alpha(alpha)
    rng = np.random.default_rng(seed)
    points = np.sort(rng.random((samples, 4)), axis=1)
    values = rng.standard_normal((samples, 4))

    def quotient(i: int, j: int) -> NDArray[np.float64]:
        gap = points[:, j] - points[:, i]
        diff = np.abs(values[:, j] - values[:, i])
        with np.errstate(divide="ignore", invalid="ignore"):
            q = diff / gap**alpha
        return np.where(gap > 0.0, q, 0.0)

    inner = np.maximum.reduce([quotient(0, 1), quotient(1, 2), quotient(2, 3)])
    bound = chaining_constant(alpha) * inner
    outer = quotient(0, 3)
    violations = int(np.count_nonzero(outer > bound * (1.0 + slack)))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(bound > 0.0, outer / bound, 0.0)
    return violations, float(ratios.max())


def essential_radius_bound(beta: complex, alpha: float, *, dim: int = 48) -> float:
    """lambda_1(Re beta + alpha), the bound on the essential spectral radius on C^alpha."""
    alpha = _check_alpha(alpha)
    sigma = complex(beta).real
    if not sigma > (1.0 - alpha) / 2.0:
        raise DomainError(f"Need Re(beta) > (1 - alpha)/2 = {(1.0 - alpha) / 2.0}, got {sigma}.")
    if not sigma + alpha > 0.5:
        raise DomainError(f"Need Re(beta) + alpha > 1/2, got {sigma + alpha}.")
    return lambda1(sigma + alpha, dim=dim)


def random_holder_function(
    alpha: float,
    *,
    n: int = 1025,
    terms: int = 64,
    seed: int | np.random.SeedSequence | None = None,
    lacunary: bool = False,
) -> HolderFunction:
    """Random Fourier series with coefficients ~ m^(-alpha-1/2), scaled to ||g|| = 1 on the grid.

    The frequencies are m = 1..terms, or with ``lacunary`` the powers of two
    up to a quarter of the grid size (at most ``terms`` of them).
    """
    alpha = _check_alpha(alpha)
    rng = np.random.default_rng(seed)
    if lacunary:
        octaves = int(math.log2(max(2, (n - 1) // 4))) + 1
        m = 2 ** np.arange(min(octaves, terms))
    else:
        m = np.arange(1, terms + 1)
    decay = m ** (-alpha - 0.5)
    a = rng.uniform(-1.0, 1.0, m.size) * decay
    b = rng.uniform(-1.0, 1.0, m.size) * decay
    nodes = np.linspace(0.0, 1.0, n)
    phase = 2.0 * np.pi * np.outer(nodes, m)
    values = np.cos(phase) @ a + np.sin(phase) @ b
    h = HolderFunction(GridFunction(domain=(0.0, 1.0), nodes=nodes, values=values, rule="linear"), alpha)
    return h.with_values(h.values / h.norm())


def _measurement_norm(f: GridFunction, alpha: float) -> float:
    return HolderFunction(f, alpha).norm()


def norm_defect_estimate(
    beta: complex,
    alpha: float,
    l: int,  # noqa: E741
    spec: PartitionSpec,
    trials: int,
    seed: int,
    *,
    grid_size: int = 1025,
    measure_size: int = 257,
    lacunary: bool = False,
    limits: Limits = DEFAULT_LIMITS,
    progress_callback: ProgressCallback | None = None,
) -> float:
    """max over random g of ||L^l (g - P_{l,N} g)||, a lower bound for the operator defect.

    Intermediate powers are resampled on a uniform grid of ``grid_size``
    nodes; the last one is measured on ``measure_size`` nodes.
    """
    alpha = _check_alpha(alpha)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}.")
    if l < 1:
        raise DomainError(f"Operator power l must be >= 1, got {l}.")
    if l * grid_size > limits.max_partition_points:
        raise ResourceError(f"l * grid size = {l * grid_size} exceeds {limits.max_partition_points}.")

    refine = np.linspace(0.0, 1.0, grid_size)
    measure = np.linspace(0.0, 1.0, measure_size)
    worst = 0.0
    for trial, child in enumerate(np.random.SeedSequence(seed).spawn(trials), start=1):
        g = random_holder_function(alpha, n=grid_size, seed=child, lacunary=lacunary)
        projected = pln_apply(g, spec, limits=limits)
        current = GridFunction(
            domain=(0.0, 1.0),
            nodes=projected.nodes,
            values=np.asarray(g.f(projected.nodes)) - projected.values,
            rule="linear",
        )
        for step in range(1, l + 1):
            target = measure if step == l else refine
            image = apply_transfer(beta, current, target, limits=limits)
            current = GridFunction(domain=(0.0, 1.0), nodes=target, values=image, rule="linear")
        worst = max(worst, _measurement_norm(current, alpha))
        if progress_callback:
            progress_callback(f"Defect trial {trial}/{trials}: running max {worst:.6g}")
    return worst


def lemma_defect_constant(
    h: HolderFunction,
    beta: complex,
    epsilon: float = 0.1,
    *,
    measure_size: int = 129,
) -> float:
    """Smallest D with |L f|_alpha(x) <= L_{Re beta + alpha}((1+eps)|f|_alpha)(x) + D ||f||_inf on the grid."""
    if epsilon <= 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}.")
    sup = h.sup_norm()
    if sup == 0.0:
        return 0.0
    measure = np.linspace(0.0, 1.0, measure_size)
    image = apply_transfer(beta, h.f, measure)
    image_quotient = auxiliary_alpha_all(
        HolderFunction(GridFunction(domain=(0.0, 1.0), nodes=measure, values=image, rule="linear"), h.alpha)
    )
    weight = h.f.with_values((1.0 + epsilon) * auxiliary_alpha_all(h))
    majorant = apply_transfer(complex(beta).real + h.alpha, weight, measure).real
    return float(max(0.0, np.max(image_quotient - majorant)) / sup)
