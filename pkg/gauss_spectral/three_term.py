"""Lewis' three-term functional equation

    lambda f(z) - lambda f(z+1) = (z+1)^(-2 beta) f(1/(z+1))

Solutions are built from a 1-periodic Q through f = Q + lambda^-1 L_beta f,
that is f = sum_n lambda^-n L_beta^n Q, and Q is recovered from a solution as
Q = f - lambda^-1 L_beta f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from gauss_spectral.cf_core import enumerate_words, words_brackets
from gauss_spectral.errors import ConvergenceError, DomainError, PeriodicFitError
from gauss_spectral.interpolation.base import ProgressCallback
from gauss_spectral.interpolation.grid import FunctionSum, GridFunction
from gauss_spectral.interpolation.periodic import PeriodicFunction
from gauss_spectral.models import DEFAULT_LIMITS, BetaParam, Limits, SeriesEvaluation
from gauss_spectral.special import asymptotic_coefficient, hurwitz_zeta
from gauss_spectral.transfer import DEFAULT_TOL, apply_transfer, as_beta, build_collocation, lambda1

Method = Literal["resolvent", "cylinder"]
METHODS: tuple[str, ...] = ("resolvent", "cylinder")
DEFAULT_RESIDUAL_TOL = 1e-8
MAX_EXPANSION_ORDER = 2
EFFECTIVE_ALPHA = 1.0


@lru_cache(maxsize=64)
def _leading_eigenvalue(t: float) -> float:
    return lambda1(t)


def _points(z: ArrayLike) -> tuple[NDArray[np.float64], bool]:
    scalar = np.ndim(z) == 0
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    if not np.all(np.isfinite(zs)) or np.any(zs <= -1.0):
        raise DomainError("Three-term solutions are evaluated at finite z > -1.")
    return zs, scalar


def _power(base: NDArray[np.float64], beta: BetaParam) -> NDArray[np.complex128]:
    return np.exp(-beta.two_beta * np.log(base))


@dataclass(slots=True)
class ThreeTermSolution:
    """The solution f = sum_n lambda^-n L_beta^n Q of the three-term equation.

    On [0, 1] the series is summed on the collocation model; for z > 1 the
    solution is continued through f = Q + lambda^-1 L_beta f and on (-1, 0)
    through the three-term equation itself. ``depth`` and ``digit_cutoff``
    configure the explicit cylinder-word summation of ``solve_from_Q``.
    """

    Q: PeriodicFunction
    lam: complex
    beta: BetaParam
    depth: int = 18
    digit_cutoff: int = 64
    dim: int = 64
    limits: Limits = DEFAULT_LIMITS
    error: float = field(init=False, default=0.0)
    _g: GridFunction = field(init=False, repr=False)
    _unit: FunctionSum = field(init=False, repr=False)

    domain = (-1.0, math.inf)

    def __post_init__(self) -> None:
        self.lam = complex(self.lam)
        self.beta = as_beta(self.beta)
        if self.lam == 0:
            raise DomainError("lambda must be nonzero.")
        if self.depth < 1 or self.digit_cutoff < 1:
            raise DomainError("depth and digit_cutoff must be >= 1.")
        t = self.beta.real + EFFECTIVE_ALPHA
        if not t > 0.5 + 1e-6:
            raise DomainError(f"Need Re(beta) > -1/2 for the resolvent series, got {self.beta.real}.")
        bound = _leading_eigenvalue(round(t, 12))
        if not abs(self.lam) > bound:
            raise DomainError(
                f"|lambda| = {abs(self.lam):.6g} must exceed lambda_1(Re beta + 1) = {bound:.6g}."
            )
        self._build()

    def _build(self) -> None:
        op = build_collocation(self.beta, self.dim, limits=self.limits)
        rhs = np.asarray(apply_transfer(self.beta, self.Q, op.nodes, limits=self.limits)) / self.lam
        system = np.eye(self.dim) - op.matrix / self.lam
        try:
            g_values = linalg.solve(system, rhs)
        except linalg.LinAlgError as exc:
            raise ConvergenceError(f"Resolvent system is singular at lambda={self.lam}: {exc}") from exc
        self._g = op.grid_function(g_values)
        self._unit = FunctionSum(self.Q, self._g)
        scale = self.Q.sup_bound() + self._g.sup_norm()
        self.error = op.tail_error * scale / abs(self.lam)

    @property
    def correction(self) -> GridFunction:
        """f - Q on [0, 1]."""
        return self._g

    @property
    def exact_jet_radius(self) -> float:
        return 0.0

    @property
    def series_floor(self) -> int:
        return self._g.series_floor

    def taylor(self, order: int) -> NDArray[np.complex128]:
        return self.Q.taylor(order) + self._g.taylor(order)

    def __call__(self, z: ArrayLike) -> complex | NDArray[np.complex128]:
        zs, scalar = _points(z)
        out = np.empty(zs.shape, dtype=complex)
        inner = (zs >= 0.0) & (zs <= 1.0)
        if np.any(inner):
            out[inner] = np.atleast_1d(self._unit(zs[inner]))
        outer = zs > 1.0
        if np.any(outer):
            image = apply_transfer(self.beta, self._unit, zs[outer], limits=self.limits)
            out[outer] = np.atleast_1d(self.Q(zs[outer])) + np.asarray(image) / self.lam
        negative = zs < 0.0
        if np.any(negative):
            w = zs[negative] + 1.0
            out[negative] = (
                np.atleast_1d(self(w)) + _power(w, self.beta) * np.atleast_1d(self(1.0 / w)) / self.lam
            )
        return complex(out[0]) if scalar else out


def _cylinder_sum(
    sol: ThreeTermSolution, z: float, progress_callback: ProgressCallback | None
) -> SeriesEvaluation:
    sigma = sol.beta.real
    if z < 0.0:
        raise DomainError("Cylinder summation needs z >= 0.")
    if not sigma > 0.5:
        raise DomainError(f"Cylinder summation needs Re(beta) > 1/2, got {sigma}.")

    lam_abs = abs(sol.lam)
    sup_q = sol.Q.sup_bound()
    full = float(np.real(hurwitz_zeta(2.0 * sigma, 1.0)))
    kept = full - float(np.real(hurwitz_zeta(2.0 * sigma, sol.digit_cutoff + 1.0)))

    base = complex(sol.Q(z))
    terms = [base]
    value = base
    digit_tail = 0.0
    growing = 0
    for depth in range(1, sol.depth + 1):
        words = enumerate_words(depth, sol.digit_cutoff, limits=sol.limits)
        points, log_weight = words_brackets(words, z)
        term = complex(np.sum(np.asarray(sol.Q(points)) * np.exp(sol.beta.two_beta * log_weight)))
        term /= sol.lam**depth
        previous = terms[-1]
        terms.append(term)
        value += term
        digit_tail += sup_q * (full**depth - kept**depth) / lam_abs**depth
        growing = growing + 1 if depth > 1 and abs(term) > abs(previous) else 0
        if growing >= 3:
            raise ConvergenceError(
                f"Cylinder series grows over three consecutive depths at lambda={sol.lam}",
                iterations=depth,
            )
        if progress_callback:
            progress_callback(f"Depth {depth}: {words.shape[0]} words, term {abs(term):.3e}")

    ratio = full / lam_abs
    if ratio < 1.0:
        depth_tail = sup_q * ratio ** (sol.depth + 1) / (1.0 - ratio)
    else:
        empirical = abs(terms[-1]) / abs(terms[-2]) if len(terms) > 2 and terms[-2] != 0 else math.inf
        depth_tail = abs(terms[-1]) * empirical / (1.0 - empirical) if empirical < 1.0 else math.inf
    return SeriesEvaluation(value=value, error=digit_tail + depth_tail, terms=terms)


def solve_from_Q(
    sol: ThreeTermSolution,
    z: float,
    *,
    method: Method = "resolvent",
    progress_callback: ProgressCallback | None = None,
) -> SeriesEvaluation:
    """Evaluate f(z) with an error estimate.

    ``resolvent`` sums the series in closed form on the collocation model.
    ``cylinder`` enumerates words depth by depth (lexicographic within a
    depth) through ``sol.depth`` with digits up to ``sol.digit_cutoff``; its
    error adds the digit-cutoff remainder and the depth tail.
    """
    if method not in METHODS:
        raise DomainError(f"Unknown summation method {method!r}; expected one of {METHODS}.")
    z = float(z)
    if method == "cylinder":
        return _cylinder_sum(sol, z, progress_callback)
    return SeriesEvaluation(value=complex(sol(z)), error=sol.error)


def residual(f, lam: complex, beta: BetaParam | complex, grid: ArrayLike) -> float:
    """max over the grid of |lambda f(z) - lambda f(z+1) - (z+1)^(-2 beta) f(1/(z+1))|."""
    zs, _ = _points(grid)
    beta = as_beta(beta)
    lam = complex(lam)
    w = zs + 1.0
    values = lam * np.asarray(f(zs)) - lam * np.asarray(f(w)) - _power(w, beta) * np.asarray(f(1.0 / w))
    return float(np.max(np.abs(values)))


@dataclass(slots=True)
class PeriodicFitReport:
    Q: PeriodicFunction
    fit_residual: float
    periodicity_defect: float


def associated_periodic_report(
    f,
    lam: complex,
    beta: BetaParam | complex,
    *,
    samples: int = 64,
    degree: int | None = None,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    tol: float = DEFAULT_TOL,
) -> PeriodicFitReport:
    """Fit Q = f - lambda^-1 L_beta f on [0, 1) and measure |Q(z) - Q(z+1)|.

    The defect is taken at the sample points whose shift stays inside the
    domain of ``f``.
    """
    lam = complex(lam)
    if lam == 0:
        raise DomainError("lambda must be nonzero.")
    beta = as_beta(beta)
    degree = samples // 2 - 1 if degree is None else degree
    z = np.arange(samples) / samples

    def q_at(points: NDArray[np.float64]) -> NDArray[np.complex128]:
        return np.asarray(f(points)) - np.asarray(apply_transfer(beta, f, points, tol)) / lam

    fitted, fit_residual = PeriodicFunction.fit(q_at(z), degree)
    upper = getattr(f, "domain", (0.0, math.inf))[1]
    shifted = z[z + 1.0 <= upper]
    defect = 0.0
    if shifted.size:
        defect = float(np.max(np.abs(q_at(shifted) - q_at(shifted + 1.0))))
    if defect > 10.0 * residual_tol:
        raise PeriodicFitError(
            f"Q = f - L f / lambda is not 1-periodic (defect {defect:.3e}); f does not solve the equation."
        )
    return PeriodicFitReport(fitted, fit_residual, defect)


def associated_periodic(
    f,
    lam: complex,
    beta: BetaParam | complex,
    *,
    samples: int = 64,
    degree: int | None = None,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> PeriodicFunction:
    return associated_periodic_report(
        f, lam, beta, samples=samples, degree=degree, residual_tol=residual_tol
    ).Q


def _shifted_coefficient(s: complex, j: int) -> complex:
    # zeta_H(s, z+1) = zeta_H(s, z) - z^(-s) flips the sign of the j = 1 term
    if j == 1:
        return -0.5 + 0j
    return asymptotic_coefficient(s, j)


def expansion_coefficients(
    jet: ArrayLike, lam: complex, beta: BetaParam | complex, k: int
) -> tuple[list[complex], list[complex]]:
    """C_0..C_k and C*_0..C*_k from the Taylor data c_m = f^(m)(0)/m!.

    f(z) = Q(z) + sum_n C_n z^(1-2beta-n) as z -> infinity and
    f(z-1) = lambda^-1 z^(-2beta) Q(1/z) + sum_n C*_n z^(n-1) as z -> 0+.
    """
    if not 0 <= k <= MAX_EXPANSION_ORDER:
        raise DomainError(f"Expansion order must be in [0, {MAX_EXPANSION_ORDER}], got {k}.")
    c = np.asarray(jet, dtype=complex)
    if c.size < k + 1:
        raise DomainError(f"Need {k + 1} Taylor coefficients, got {c.size}.")
    lam = complex(lam)
    two_beta = as_beta(beta).two_beta
    C = [
        sum(c[m] * _shifted_coefficient(two_beta + m, n - m) for m in range(n + 1)) / lam
        for n in range(k + 1)
    ]
    Cstar = [C[0] / lam] + [C[n] / lam + c[n - 1] for n in range(1, k + 1)]
    return [complex(v) for v in C], [complex(v) for v in Cstar]


def asymptotic_coefficients(sol: ThreeTermSolution, k: int) -> tuple[list[complex], list[complex]]:
    return expansion_coefficients(sol.taylor(max(k, 1)), sol.lam, sol.beta, k)


@dataclass(frozen=True, slots=True)
class LewisZagierFunction:
    """f(z) = Q(z) - (z+1)^(-2 beta) Q(-1/(z+1)).

    Solves the three-term equation with lambda = +1 for odd Q and
    lambda = -1 for even Q.
    """

    Q: PeriodicFunction
    beta: BetaParam
    sign: int

    domain = (-1.0, math.inf)

    def __call__(self, z: ArrayLike) -> complex | NDArray[np.complex128]:
        zs, scalar = _points(z)
        w = zs + 1.0
        out = np.atleast_1d(self.Q(zs)) - _power(w, self.beta) * np.atleast_1d(self.Q(-1.0 / w))
        return complex(out[0]) if scalar else out


def lewis_zagier_example(Q: PeriodicFunction, beta: BetaParam | complex, sign: int) -> LewisZagierFunction:
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}.")
    if sign == 1 and not Q.is_odd():
        raise DomainError("lambda = +1 needs an odd Q (pure sine series).")
    if sign == -1 and not Q.is_even():
        raise DomainError("lambda = -1 needs an even Q (cosine series and constant).")
    return LewisZagierFunction(Q, as_beta(beta), sign)


__all__ = [
    "LewisZagierFunction",
    "PeriodicFitReport",
    "PeriodicFunction",
    "ThreeTermSolution",
    "associated_periodic",
    "associated_periodic_report",
    "asymptotic_coefficients",
    "expansion_coefficients",
    "lewis_zagier_example",
    "residual",
    "solve_from_Q",
]
