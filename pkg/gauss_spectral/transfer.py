"""The Mayer transfer operators of the Gauss map.

    (L_beta f)(z) = sum_{n>=1} (n + z)^(-2 beta) f(1 / (n + z))

continued to Re(beta) > -k/2 by subtracting the degree-k Taylor jet of f at 0
and adding the jet back through Hurwitz zeta values. Series are summed
directly up to a cutoff and the remainder is closed with Hurwitz zeta values
of the jet through ``tail_order``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P
from numpy.typing import ArrayLike, NDArray
from scipy import linalg
from scipy.stats import linregress

from gauss_spectral.errors import ConvergenceError, DomainError, NumericalWarning, ResourceError
from gauss_spectral.interpolation.base import Evaluable, ProgressCallback
from gauss_spectral.interpolation.chebyshev import (
    barycentric_weights,
    cardinal_matrix,
    chebyshev_nodes,
    taylor_rows,
)
from gauss_spectral.interpolation.grid import GridFunction
from gauss_spectral.models import DEFAULT_LIMITS, BetaParam, Limits
from gauss_spectral.special import hurwitz_zeta, hurwitz_zeta_ds

DEFAULT_TOL = 1e-12
MIN_DIM = 4
DEFAULT_TAIL_ORDER = 6
MIN_SERIES_CUTOFF = 64
CONDITIONING_WARNING_DIM = 200
IMAG_WARNING_LEVEL = 16.0
STABILITY_THRESHOLD = 1e-6
_BLOCK_ELEMENTS = 250_000


def as_beta(beta: BetaParam | complex) -> BetaParam:
    return beta if isinstance(beta, BetaParam) else BetaParam.auto(beta)


def _tail_order(beta: BetaParam, tail_order: int) -> int:
    return max(tail_order, beta.k + 2)


def _cutoff_for(bound: float, exponent: float, tol: float, z_min: float) -> int:
    # integral test: bound * sum_{n>N} (n+z)^(-exponent-1) <= bound (N+z)^(-exponent) / exponent
    if bound <= 0.0:
        return MIN_SERIES_CUTOFF
    needed = (bound / (exponent * tol)) ** (1.0 / exponent) - z_min
    return max(MIN_SERIES_CUTOFF, math.ceil(needed))


def _hurwitz_term(s: complex, a: NDArray[np.float64], derivative: bool) -> NDArray[np.complex128]:
    # d/dbeta zeta_H(2 beta + m, a) = 2 d/ds zeta_H(s, a)
    if derivative:
        return 2.0 * np.asarray(hurwitz_zeta_ds(s, a))
    return np.asarray(hurwitz_zeta(s, a))


def _check_points(z: ArrayLike) -> tuple[NDArray[np.float64], bool]:
    scalar = np.ndim(z) == 0
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    if not np.all(np.isfinite(zs)) or np.any(zs <= -1.0):
        raise DomainError("Transfer operator evaluation needs finite z > -1.")
    return zs, scalar


def _transfer_sum(
    beta: BetaParam,
    f: Evaluable,
    zs: NDArray[np.float64],
    tol: float,
    tail_order: int,
    limits: Limits,
    derivative: bool,
) -> NDArray[np.complex128]:
    beta.check_continuation()
    k = beta.k
    if getattr(f, "rule", None) == "linear" and k > 0:
        raise DomainError("Piecewise-linear functions only support continuation order k = 0.")
    p = _tail_order(beta, tail_order)
    coeffs = np.asarray(f.taylor(p + 1), dtype=complex)
    two_beta = beta.two_beta
    z_min = float(zs.min())

    radius = f.exact_jet_radius
    if radius > 0.0:
        cutoff = max(1, math.ceil(1.0 / radius - z_min))
    else:
        cutoff = max(
            f.series_floor,
            _cutoff_for(abs(coeffs[p + 1]), 2.0 * beta.real + p, tol, z_min),
        )
    if cutoff > limits.max_series_terms:
        raise ResourceError(
            f"Transfer series needs {cutoff} terms; limit is {limits.max_series_terms}."
        )

    result = np.zeros(zs.shape, dtype=complex)
    for m in range(k + 1):
        if coeffs[m] != 0:
            result += coeffs[m] * _hurwitz_term(two_beta + m, zs + 1.0, derivative)

    jet = coeffs[: k + 1]
    block = max(1, _BLOCK_ELEMENTS // zs.size)
    for start in range(1, cutoff + 1, block):
        n = np.arange(start, min(start + block, cutoff + 1), dtype=float)
        base = n[:, None] + zs[None, :]
        u = 1.0 / base
        values = np.asarray(f(u.ravel()), dtype=complex).reshape(u.shape) - P.polyval(u, jet)
        logs = np.log(base)
        weights = np.exp(-two_beta * logs)
        if derivative:
            weights = -2.0 * logs * weights
        result += (weights * values).sum(axis=0)

    tail_base = zs + cutoff + 1.0
    for m in range(k + 1, p + 1):
        if coeffs[m] != 0:
            result += coeffs[m] * _hurwitz_term(two_beta + m, tail_base, derivative)
    return result


def apply_transfer(
    beta: BetaParam | complex,
    f: Evaluable,
    z: ArrayLike,
    tol: float = DEFAULT_TOL,
    *,
    tail_order: int = DEFAULT_TAIL_ORDER,
    limits: Limits = DEFAULT_LIMITS,
) -> complex | NDArray[np.complex128]:
    """(L_beta f)(z) at one point or a vector of points.

    ``f`` must be evaluable on (0, 1/(1+min z)] and carry Taylor data at 0.
    """
    zs, scalar = _check_points(z)
    out = _transfer_sum(as_beta(beta), f, zs, tol, tail_order, limits, derivative=False)
    return complex(out[0]) if scalar else out


def apply_transfer_derivative(
    beta: BetaParam | complex,
    f: Evaluable,
    z: ArrayLike,
    tol: float = DEFAULT_TOL,
    *,
    tail_order: int = DEFAULT_TAIL_ORDER,
    limits: Limits = DEFAULT_LIMITS,
) -> complex | NDArray[np.complex128]:
    """(dL_beta/dbeta f)(z): every (n+z)^(-2 beta) picks up a factor -2 log(n+z)."""
    zs, scalar = _check_points(z)
    out = _transfer_sum(as_beta(beta), f, zs, tol, tail_order, limits, derivative=True)
    return complex(out[0]) if scalar else out


@dataclass(slots=True)
class CollocationOperator:
    """Matrix of L_beta on the Lagrange cardinals of Chebyshev nodes on [0, 1].

    Row i is the functional f -> (L_beta f)(x_i) restricted to the
    interpolants; ``tail_error`` bounds the neglected tail per unit of
    sup |f| at the nodes.
    """

    beta: BetaParam
    dim: int
    nodes: NDArray[np.float64]
    matrix: NDArray[np.complex128]
    tail_cutoff: int
    tail_order: int
    tail_error: float = 0.0

    def apply(self, values: ArrayLike) -> NDArray[np.complex128]:
        return self.matrix @ np.asarray(values, dtype=complex)

    def grid_function(self, values: ArrayLike) -> GridFunction:
        return GridFunction(domain=(0.0, 1.0), nodes=self.nodes, values=np.asarray(values), rule="chebyshev")

    def apply_function(self, f: GridFunction) -> GridFunction:
        if f.rule != "chebyshev" or f.size != self.dim or f.domain != (0.0, 1.0):
            raise DomainError("Collocation operator acts on Chebyshev GridFunctions of its own size on [0, 1].")
        return self.grid_function(self.apply(f.values))


def _warn_parameters(beta: BetaParam, N: int) -> None:
    if N > CONDITIONING_WARNING_DIM:
        warnings.warn(
            f"Collocation dimension {N} exceeds {CONDITIONING_WARNING_DIM}; the matrix may be ill-conditioned.",
            NumericalWarning,
            stacklevel=3,
        )
    if abs(beta.value.imag) > IMAG_WARNING_LEVEL:
        warnings.warn(
            f"|Im beta| = {abs(beta.value.imag):.2f} > {IMAG_WARNING_LEVEL}; double-precision accuracy degrades.",
            NumericalWarning,
            stacklevel=3,
        )


def build_collocation(
    beta: BetaParam | complex,
    N: int,
    tail: tuple[int, int] | None = None,
    tol: float = DEFAULT_TOL,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> CollocationOperator:
    """Assemble the N x N collocation matrix of L_beta, N >= MIN_DIM.

    ``tail`` fixes (N_tail, p); by default p = 6 and N_tail is the larger
    of N^2 and the cutoff at which the order-(p+1) remainder drops below tol.
    """
    if N < MIN_DIM:
        raise DomainError(f"Collocation dimension must be at least {MIN_DIM}, got {N}.")
    return assemble_collocation(beta, N, tail, tol, limits=limits)


def assemble_collocation(
    beta: BetaParam | complex,
    N: int,
    tail: tuple[int, int] | None = None,
    tol: float = DEFAULT_TOL,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> CollocationOperator:
    """The collocation matrix on any node count N >= 2, without the usable-size floor."""
    beta = as_beta(beta)
    beta.check_continuation()
    if N < 2:
        raise DomainError(f"Collocation needs at least 2 nodes, got {N}.")
    if N > limits.max_dim:
        raise ResourceError(f"Collocation dimension {N} exceeds the limit {limits.max_dim}.")
    _warn_parameters(beta, N)

    k = beta.k
    if tail is None:
        p = _tail_order(beta, DEFAULT_TAIL_ORDER)
        n_tail = None
    else:
        n_tail, p = tail
        if p <= k:
            raise DomainError(f"Tail order {p} must exceed the continuation order {k}.")
        if n_tail < 1:
            raise DomainError(f"Tail cutoff must be >= 1, got {n_tail}.")

    nodes = chebyshev_nodes(N)
    bary = barycentric_weights(N)
    rows = taylor_rows(N, 0.0, 1.0, p + 1)
    exponent = 2.0 * beta.real + p
    bound = float(np.abs(rows[p + 1]).sum())
    if n_tail is None:
        n_tail = max(N * N, _cutoff_for(bound, exponent, tol, 0.0))
    if n_tail > limits.max_series_terms:
        raise ResourceError(f"Collocation tail cutoff {n_tail} exceeds the limit {limits.max_series_terms}.")

    two_beta = beta.two_beta
    matrix = np.zeros((N, N), dtype=complex)
    for m in range(k + 1):
        matrix += np.asarray(hurwitz_zeta(two_beta + m, nodes + 1.0))[:, None] * rows[m][None, :]

    n = np.arange(1, n_tail + 1, dtype=float)
    for i, x in enumerate(nodes):
        base = n + x
        u = 1.0 / base
        weights = np.exp(-two_beta * np.log(base))
        cards = cardinal_matrix(nodes, bary, u)
        jet = np.vander(u, k + 1, increasing=True) @ rows[: k + 1]
        matrix[i] += weights @ (cards - jet)

    tail_base = nodes + n_tail + 1.0
    for m in range(k + 1, p + 1):
        matrix += np.asarray(hurwitz_zeta(two_beta + m, tail_base))[:, None] * rows[m][None, :]

    return CollocationOperator(
        beta=beta,
        dim=N,
        nodes=nodes,
        matrix=matrix,
        tail_cutoff=n_tail,
        tail_order=p,
        tail_error=bound * n_tail ** (-exponent) / exponent,
    )


def _sort_key(values: NDArray[np.complex128]) -> NDArray[np.int64]:
    # descending modulus, ties (to 1e-12) by ascending argument in (-pi, pi]
    return np.lexsort((np.angle(values), -np.round(np.abs(values), 12)))


def spectrum(op: CollocationOperator, count: int) -> list[tuple[complex, GridFunction]]:
    """The ``count`` largest eigenvalues with eigenfunctions normalised to 1 at 0."""
    if not 1 <= count <= op.dim:
        raise DomainError(f"count must be in [1, {op.dim}], got {count}.")
    try:
        values, vectors = linalg.eig(op.matrix)
    except linalg.LinAlgError as exc:
        raise ConvergenceError(f"Dense eigensolver failed: {exc}", iterations=30 * op.dim) from exc

    pairs: list[tuple[complex, GridFunction]] = []
    for index in _sort_key(values)[:count]:
        vector = vectors[:, index]
        pivot = vector[0] if abs(vector[0]) > 1e-8 * np.max(np.abs(vector)) else vector[np.argmax(np.abs(vector))]
        pairs.append((complex(values[index]), op.grid_function(vector / pivot)))
    return pairs


def _determinant(matrix: NDArray[np.complex128]) -> complex:
    lu, piv = linalg.lu_factor(matrix, check_finite=True)
    swaps = int(np.count_nonzero(piv != np.arange(piv.size)))
    return complex((-1.0) ** swaps * np.prod(np.diag(lu)))


@dataclass(slots=True)
class FredholmDeterminants:
    det_minus: complex
    det_plus: complex
    dim: int
    stable: bool = True
    drift: float = 0.0

    def __iter__(self):
        yield self.det_minus
        yield self.det_plus


def fredholm_dets(
    beta: BetaParam | complex,
    N: int,
    tol: float = DEFAULT_TOL,
    *,
    check_stability: bool = True,
    limits: Limits = DEFAULT_LIMITS,
) -> FredholmDeterminants:
    """det(I - M) and det(I + M) of the N-dimensional collocation matrix.

    With ``check_stability`` the pair is recomputed at N // 2 and the result
    is flagged unstable when the two disagree by more than 1e-6 (relative).
    """
    op = build_collocation(beta, N, tol=tol, limits=limits)
    eye = np.eye(N)
    det_minus = _determinant(eye - op.matrix)
    det_plus = _determinant(eye + op.matrix)
    result = FredholmDeterminants(det_minus, det_plus, N)
    if check_stability and N // 2 >= MIN_DIM:
        coarse = fredholm_dets(beta, N // 2, tol, check_stability=False, limits=limits)
        scale = max(1.0, abs(det_minus), abs(det_plus))
        result.drift = max(abs(det_minus - coarse.det_minus), abs(det_plus - coarse.det_plus)) / scale
        result.stable = result.drift < STABILITY_THRESHOLD
        if not result.stable:
            warnings.warn(
                f"Determinants at dim {N} and {N // 2} differ by {result.drift:.2e}; increase the dimension.",
                NumericalWarning,
                stacklevel=2,
            )
    return result


@dataclass(slots=True)
class PowerIterationResult:
    eigenvalue: complex
    eigenfunction: GridFunction
    iterations: int
    rayleigh_history: list[complex] = field(default_factory=list)
    step_norms: list[float] = field(default_factory=list)


def power_iterate(
    beta: BetaParam | complex,
    start: GridFunction,
    *,
    tol: float = 1e-12,
    max_iterations: int | None = None,
    series_tol: float | None = None,
    min_iterations: int = 3,
    limits: Limits = DEFAULT_LIMITS,
    progress_callback: ProgressCallback | None = None,
) -> PowerIterationResult:
    """Power iteration of L_beta on the grid of ``start``.

    Each step evaluates L_beta of the current interpolant at the nodes.
    Stops once the Rayleigh quotient changes by less than ``tol``
    (relatively). Iterates are scaled to unit sup norm and phase-aligned
    with their predecessor, so ``step_norms`` decay like |lambda_2/lambda_1|^n.
    """
    beta = as_beta(beta)
    budget = max_iterations if max_iterations is not None else limits.max_power_iterations
    if budget > limits.max_power_iterations:
        raise ResourceError(f"{budget} power iterations exceed the limit {limits.max_power_iterations}.")
    series_tol = series_tol if series_tol is not None else min(DEFAULT_TOL, tol)
    current = start.values / start.sup_norm()
    rayleigh: list[complex] = []
    steps: list[float] = []
    for iteration in range(1, budget + 1):
        image = apply_transfer(beta, start.with_values(current), start.nodes, series_tol, limits=limits)
        quotient = complex(np.vdot(current, image) / np.vdot(current, current))
        rayleigh.append(quotient)
        nxt = image / np.max(np.abs(image))
        overlap = np.vdot(current, nxt)
        if overlap != 0:
            nxt = nxt * (abs(overlap) / overlap)
        steps.append(float(np.max(np.abs(nxt - current))))
        current = nxt
        if progress_callback and (iteration == 1 or iteration % 10 == 0):
            progress_callback(f"Power iteration {iteration}: Rayleigh quotient {quotient.real:.12g}")
        if iteration >= min_iterations and abs(rayleigh[-1] - rayleigh[-2]) <= tol * abs(quotient):
            eigenfunction = start.with_values(current)
            return PowerIterationResult(quotient, eigenfunction, iteration, rayleigh, steps)
    raise ConvergenceError(
        f"Power iteration did not reach relative change {tol} for beta={beta.value}",
        iterations=budget,
    )


def fit_contraction_rate(step_norms: list[float], *, skip: int = 2, floor: float = 1e-11) -> float:
    """Geometric decay rate of the power-iteration steps by a log-linear fit."""
    usable = [(i, s) for i, s in enumerate(step_norms) if i >= skip and s > floor]
    if len(usable) < 3:
        raise ConvergenceError("Too few power-iteration steps above the noise floor to fit a rate.")
    index, norms = zip(*usable)
    fit = linregress(np.asarray(index, dtype=float), np.log(np.asarray(norms)))
    return float(math.exp(fit.slope))


def lambda1(
    t: float,
    tol: float = 1e-10,
    *,
    dim: int = 48,
    limits: Limits = DEFAULT_LIMITS,
    progress_callback: ProgressCallback | None = None,
) -> float:
    """Leading eigenvalue of L_t for real t > 1/2, by power iteration from 1/(1+x)."""
    if not t > 0.5 + 1e-6:
        raise DomainError(f"lambda1 needs t > 1/2, got {t}.")
    start = GridFunction.from_callable(lambda x: 1.0 / (1.0 + x), n=dim)
    result = power_iterate(BetaParam(t), start, tol=tol, limits=limits, progress_callback=progress_callback)
    return float(result.eigenvalue.real)


def extend_eigenfunction(
    beta: BetaParam | complex,
    eigenvalue: complex,
    f: Evaluable,
    z: ArrayLike,
    tol: float = DEFAULT_TOL,
) -> complex | NDArray[np.complex128]:
    """Continue an eigenfunction from [0, 1] to z >= 0 through f = lambda^-1 L_beta f."""
    if eigenvalue == 0:
        raise DomainError("Eigenvalue must be nonzero to extend an eigenfunction.")
    zs, scalar = _check_points(z)
    if np.any(zs < 0.0):
        raise DomainError("Eigenfunctions are extended to z >= 0 only.")
    out = np.asarray(apply_transfer(beta, f, zs, tol), dtype=complex) / eigenvalue
    inside = zs <= f.domain[1]
    if np.any(inside):
        out[inside] = np.atleast_1d(f(zs[inside]))
    return complex(out[0]) if scalar else out
