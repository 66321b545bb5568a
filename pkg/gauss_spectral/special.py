"""Hurwitz zeta with analytic continuation in s, its large-z expansion,
Bernoulli numbers, and a Dirichlet-eta evaluation of the Riemann zeta
function used to locate zeta zeros independently of the transfer operator.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P
from numpy.typing import ArrayLike, NDArray
from scipy import optimize, special as sp_special

from gauss_spectral.errors import ConvergenceError, DomainError, PoleError

MAX_BERNOULLI_INDEX = 60
MAX_EM_ORDER = MAX_BERNOULLI_INDEX // 2
MAX_TAYLOR_TERMS = 400
# rounding bound (relative) beyond which a value is refused
MAX_ROUNDING = 1e-9
# Re(s) below this is summed by the Taylor series around z = 1
LEFT_HALF_PLANE = -1.0
EULER_GAMMA = float(np.euler_gamma)
_EPS = float(np.finfo(float).eps)
_POLE_GUARD = 1e-14


@lru_cache(maxsize=1)
def _bernoulli_table() -> tuple[Fraction, ...]:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0
    table = [Fraction(1)]
    for m in range(1, MAX_BERNOULLI_INDEX + 1):
        acc = sum(math.comb(m + 1, j) * table[j] for j in range(m))
        table.append(-acc / (m + 1))
    return tuple(table)


def bernoulli_fraction(m: int) -> Fraction:
    if m < 2 or m > MAX_BERNOULLI_INDEX or m % 2:
        raise DomainError(f"Bernoulli index must be even in [2, {MAX_BERNOULLI_INDEX}], got {m}.")
    return _bernoulli_table()[m]


def bernoulli(m: int) -> float:
    return float(bernoulli_fraction(m))


@lru_cache(maxsize=None)
def _bernoulli_over_factorial(k: int) -> float:
    return float(bernoulli_fraction(2 * k) / math.factorial(2 * k))


def _check_s(s: complex) -> complex:
    s = complex(s)
    if abs(s - 1.0) < _POLE_GUARD:
        raise PoleError("Hurwitz zeta has a pole at s = 1.")
    return s


def _em_terms(s: complex, a: NDArray[np.float64], order: int, derivative: bool = False):
    """Yield the Euler-Maclaurin correction terms k = 1..order at the points a.

    With ``derivative`` the terms are differentiated in s instead.
    """
    log_a = np.log(a)
    rising, d_rising = s, 1.0 + 0j  # (s)_{2k-1} and its s-derivative
    for k in range(1, order + 1):
        if k > 1:
            for offset in (2 * k - 3, 2 * k - 2):
                d_rising = d_rising * (s + offset) + rising
                rising = rising * (s + offset)
        power = np.exp((1.0 - s - 2 * k) * log_a)
        if derivative:
            yield _bernoulli_over_factorial(k) * (d_rising - rising * log_a) * power
        else:
            yield _bernoulli_over_factorial(k) * rising * power


def _direct_sum(
    s: complex, z: NDArray[np.float64], shift: int, derivative: bool = False
) -> tuple[NDArray[np.complex128], NDArray[np.float64]]:
    """Sum of (n + z)^(-s) for n < shift, and the sum of the magnitudes of its terms."""
    if shift == 0:
        return np.zeros(z.shape, dtype=complex), np.zeros(z.shape)
    n = np.arange(shift, dtype=float).reshape((shift,) + (1,) * z.ndim)
    logs = np.log(n + z)
    terms = np.exp(-s * logs)
    if derivative:
        terms = -logs * terms
    return terms.sum(axis=0), np.abs(terms).sum(axis=0)


def _em_head(s: complex, a: NDArray[np.float64], derivative: bool = False) -> NDArray[np.complex128]:
    log_a = np.log(a)
    integral = np.exp((1.0 - s) * log_a) / (s - 1.0)
    boundary = 0.5 * np.exp(-s * log_a)
    if derivative:
        return -log_a * integral - integral / (s - 1.0) - log_a * boundary
    return integral + boundary


def _unwrap(value: NDArray[np.complex128]) -> complex | NDArray[np.complex128]:
    return complex(value) if np.ndim(value) == 0 else value


def _evaluate_em(
    s: complex,
    z: NDArray[np.float64],
    tol: float,
    shift: int | None,
    order: int | None,
    derivative: bool,
) -> tuple[NDArray[np.complex128], float, float]:
    """Shifted direct sum plus Euler-Maclaurin tail.

    Returns the values, the truncation estimate and a bound on the rounding
    error of the summation, both relative to max(1, |value|).
    """
    z_min = float(np.min(z)) if z.size else 1.0
    if shift is None:
        shift = max(0, math.ceil(max(12.0, abs(s) + 8.0) - z_min))
    elif shift < 0:
        raise DomainError(f"Direct-sum shift must be >= 0, got {shift}.")
    if order is not None and not 0 <= order <= MAX_EM_ORDER:
        raise DomainError(f"Euler-Maclaurin order must be in [0, {MAX_EM_ORDER}].")

    attempts = 8
    for _ in range(attempts):
        a = z + shift
        direct, direct_abs = _direct_sum(s, z, shift, derivative)
        head = _em_head(s, a, derivative)
        value = direct + head
        scale = np.maximum(1.0, np.abs(value))
        # exp(-s log a) is good to about |s| log a ulps
        ulps = 4.0 + abs(s) * float(np.max(np.abs(np.log(a)))) if z.size else 4.0
        summed = (direct_abs + np.abs(head)) * ulps

        if order is not None:
            terms = list(_em_terms(s, a, order + 1, derivative))
            for term in terms[:order]:
                value = value + term
                summed = summed + ulps * np.abs(term)
            error = float(np.max(np.abs(terms[-1]) / scale)) if z.size else 0.0
            return value, error, _rounding_bound(summed, value)

        error = float("inf")
        previous = float("inf")
        for term in _em_terms(s, a, MAX_EM_ORDER, derivative):
            magnitude = float(np.max(np.abs(term) / scale)) if z.size else 0.0
            if magnitude < tol:
                error = magnitude
                break
            if magnitude > previous:
                # asymptotic series started to diverge; move further out
                break
            value = value + term
            summed = summed + ulps * np.abs(term)
            previous = magnitude
        if error < tol:
            return value, error, _rounding_bound(summed, value)
        shift = max(2 * shift, 16)
    raise ConvergenceError(f"Hurwitz zeta did not reach tol={tol} at s={s}", iterations=attempts)


def _rounding_bound(summed: NDArray[np.float64], value: NDArray[np.complex128]) -> float:
    """Largest of eps * summed / max(1, |value|), summed being magnitudes weighted by their ulps."""
    if summed.size == 0:
        return 0.0
    return _EPS * float(np.max(summed / np.maximum(1.0, np.abs(value))))


def _riemann_zeta(u: complex) -> tuple[complex, float]:
    """zeta(u) for u away from 1 with an absolute error bound.

    Re(u) < -1/2 is reflected onto Re(u) > 3/2 through the functional equation.
    """
    if u.real > 55.0:
        return complex(np.sum(np.arange(1.0, 5.0) ** -u)), 4.0 * _EPS
    if u.real >= -0.5:
        value, _, rounding = _evaluate_em(u, np.ones(()), _EPS, None, None, False)
        value = complex(value)
        return value, (4.0 * _EPS + rounding) * max(1.0, abs(value))
    w = 1.0 - u
    reflected, reflected_err = _riemann_zeta(w)
    log_factor = u * math.log(2.0) + (u - 1.0) * math.log(math.pi) + complex(sp_special.loggamma(w))
    factor = complex(np.exp(log_factor))
    angle = 0.5 * math.pi * u
    sine = complex(np.sin(angle))
    # the sine is only known up to eps * |angle| in absolute terms
    sine_err = _EPS * (abs(angle) * abs(complex(np.cos(angle))) + abs(sine))
    factor_err = _EPS * (4.0 + abs(log_factor)) * abs(factor)
    value = factor * sine * reflected
    error = abs(factor) * (sine_err * abs(reflected) + abs(sine) * reflected_err) + factor_err * abs(sine * reflected)
    return value, error


@lru_cache(maxsize=64)
def _taylor_at_one(s: complex, tol: float) -> tuple[NDArray[np.complex128], NDArray[np.float64], float]:
    """Coefficients binom(-s, k) zeta(s + k) of zeta_H(s, 1 + x) in powers of x.

    The series converges for |x| < 1 and is only used for |x| <= 1/2.
    Alongside the coefficients come their absolute error bounds and a bound
    on the omitted tail there.
    """
    k_min = max(math.ceil(-s.real) + 2, math.ceil(s.imag**2 / 4.0) + 1)
    first, first_err = _riemann_zeta(s)
    coeffs, errors = [first], [first_err]
    binom = 1.0 + 0j
    for k in range(1, MAX_TAYLOR_TERMS + 1):
        eps = s + k - 1.0
        previous = binom
        binom = binom * (-eps) / k
        if abs(eps) < 0.5:
            # the zero of binom(-s, k) cancels the pole of zeta(s + k)
            if abs(eps) < 1e-8:
                residue, residue_err = 1.0 + EULER_GAMMA * eps, _EPS
            else:
                zeta_near_pole, zeta_err = _riemann_zeta(1.0 + eps)
                residue, residue_err = eps * zeta_near_pole, abs(eps) * zeta_err
            coeff = -previous / k * residue
            error = abs(previous / k) * residue_err + (k + 4) * _EPS * abs(coeff)
        else:
            zeta_value, zeta_err = _riemann_zeta(s + k)
            coeff = binom * zeta_value
            error = abs(binom) * zeta_err + (k + 4) * _EPS * abs(coeff)
        coeffs.append(coeff)
        errors.append(error)
        tail = 2.0 * abs(coeff) * 0.5**k
        if k >= k_min and tail < tol:
            return np.asarray(coeffs, dtype=complex), np.asarray(errors), tail
    raise ConvergenceError(
        f"Taylor expansion of Hurwitz zeta at s={s} did not reach tol={tol}", iterations=MAX_TAYLOR_TERMS
    )


def _evaluate_left(s: complex, z: NDArray[np.float64], tol: float) -> tuple[NDArray[np.complex128], float, float]:
    """zeta_H(s, z) for Re(s) < -1 without the growing terms of a shifted sum.

    z is reduced to a in (0, 1], zeta_H(s, a) comes from the Taylor series
    around 1 (after peeling off a^(-s) when a <= 1/2) and the first z - a
    terms are subtracted again.
    """
    if z.size == 0:
        return np.zeros(z.shape, dtype=complex), 0.0, 0.0
    coeffs, coeff_errors, truncation = _taylor_at_one(s, tol)
    flat = z.ravel()
    m = np.ceil(flat) - 1.0
    a = flat - m
    peeled = a <= 0.5
    x = np.where(peeled, a, a - 1.0)
    own = np.where(peeled, np.exp(-s * np.log(a)), 0.0)
    value = P.polyval(x, coeffs) + own
    ulps = 4.0 + abs(s) * float(np.max(np.maximum(np.abs(np.log(a)), np.log(flat + 1.0))))
    summed = 4.0 * P.polyval(np.abs(x), np.abs(coeffs)) + ulps * np.abs(own)
    summed = summed + P.polyval(np.abs(x), coeff_errors) / _EPS
    for i in np.flatnonzero(m):
        terms = np.exp(-s * np.log(a[i] + np.arange(m[i])))
        value[i] -= terms.sum()
        summed[i] += ulps * np.abs(terms).sum()
    return value.reshape(z.shape), truncation, _rounding_bound(summed, value)


def _evaluate(
    s: complex,
    z: ArrayLike,
    tol: float,
    shift: int | None,
    order: int | None,
    derivative: bool,
) -> tuple[complex | NDArray[np.complex128], float]:
    s = _check_s(s)
    z_arr = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(z_arr)) or np.any(z_arr <= 0.0):
        raise DomainError("Hurwitz zeta needs z > 0.")

    if s.real < LEFT_HALF_PLANE and shift is None and order is None and not derivative:
        value, truncation, rounding = _evaluate_left(s, z_arr, tol)
    else:
        value, truncation, rounding = _evaluate_em(s, z_arr, tol, shift, order, derivative)
    if rounding > max(tol, MAX_ROUNDING):
        raise ConvergenceError(
            f"Hurwitz zeta at s={s} loses its digits to cancellation (rounding bound {rounding:.1e})"
        )
    return _unwrap(value), truncation + rounding


def hurwitz_zeta_with_error(
    s: complex,
    z: ArrayLike,
    tol: float = 1e-15,
    *,
    shift: int | None = None,
    order: int | None = None,
) -> tuple[complex | NDArray[np.complex128], float]:
    """zeta_H(s, z) for z > 0 and s != 1, with an a-posteriori error estimate.

    The first ``shift`` terms are summed directly and the remainder
    zeta_H(s, z + shift) is replaced by its Euler-Maclaurin expansion through
    ``order`` Bernoulli terms. Left as ``None`` both are chosen adaptively
    so that the first omitted term drops below ``tol`` (relative to the
    magnitude of the result).

    For Re(s) < -1 the shifted terms grow like (z + shift)^(-Re s), so the
    adaptive evaluation switches to the Taylor series of zeta_H(s, 1 + x)
    with Riemann zeta coefficients. The returned error includes a bound on
    the rounding error of the summation; ConvergenceError is raised when
    that bound exceeds max(tol, MAX_ROUNDING).
    """
    return _evaluate(s, z, tol, shift, order, derivative=False)


def hurwitz_zeta(
    s: complex,
    z: ArrayLike,
    tol: float = 1e-15,
    *,
    shift: int | None = None,
    order: int | None = None,
) -> complex | NDArray[np.complex128]:
    value, _ = _evaluate(s, z, tol, shift, order, derivative=False)
    return value


def hurwitz_zeta_ds(s: complex, z: ArrayLike, tol: float = 1e-15) -> complex | NDArray[np.complex128]:
    """Partial derivative of zeta_H(s, z) in s, -sum log(n+z) (n+z)^(-s) continued."""
    value, _ = _evaluate(s, z, tol, None, None, derivative=True)
    return value


def asymptotic_coefficient(s: complex, j: int) -> complex:
    """Coefficient of z^(1-s-j) in the large-z expansion of zeta_H(s, z)."""
    s = _check_s(s)
    if j == 0:
        return 1.0 / (s - 1.0)
    if j == 1:
        return 0.5 + 0j
    if j % 2:
        return 0j
    k = j // 2
    rising = complex(s)
    for i in range(2, k + 1):
        rising *= (s + 2 * i - 3) * (s + 2 * i - 2)
    return _bernoulli_over_factorial(k) * rising


def hurwitz_asymptotic(s: complex, z: ArrayLike, K: int) -> complex | NDArray[np.complex128]:
    s = _check_s(s)
    if not 0 <= K <= 20:
        raise DomainError(f"Asymptotic order K must be in [0, 20], got {K}.")
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 2.0):
        raise DomainError("The asymptotic expansion is only offered for z >= 2.")
    value = _em_head(s, z_arr)
    for term in _em_terms(s, z_arr, K):
        value = value + term
    return _unwrap(value)


@lru_cache(maxsize=8)
def _borwein_weights(n: int) -> tuple[float, ...]:
    acc = 0
    weights = []
    for i in range(n + 1):
        acc += Fraction(n * math.factorial(n + i - 1) * 4**i, math.factorial(n - i) * math.factorial(2 * i))
        weights.append(float(acc))
    return tuple(weights)


def riemann_zeta_eta(s: complex, terms: int = 60) -> complex:
    """zeta(s) for Re(s) > 0 from the alternating Dirichlet eta series.

    The eta series is accelerated with Borwein's Chebyshev weights; the
    error decays like (3 + sqrt 8)^(-terms).
    """
    s = _check_s(s)
    if s.real <= 0.0:
        raise DomainError("The Dirichlet eta evaluation needs Re(s) > 0.")
    factor = 1.0 - 2.0 ** (1.0 - s)
    if abs(factor) < 1e-12:
        raise DomainError(f"1 - 2^(1-s) vanishes at s={s}; eta does not determine zeta there.")
    d = np.array(_borwein_weights(terms))
    k = np.arange(terms)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    total = np.sum(signs * (d[:-1] - d[-1]) * np.exp(-s * np.log(k + 1.0)))
    return complex(-total / (d[-1] * factor))


def riemann_siegel_theta(t: float) -> float:
    return float(np.imag(sp_special.loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi))


def hardy_z(t: float) -> float:
    """Real-valued Z(t) = exp(i theta(t)) zeta(1/2 + i t)."""
    value = np.exp(1j * riemann_siegel_theta(t)) * riemann_zeta_eta(0.5 + 1j * t)
    return float(value.real)


def zeta_zero_ordinates(t_min: float, t_max: float, step: float = 0.05, xtol: float = 1e-12) -> list[float]:
    """Ordinates of zeta zeros on the critical line in [t_min, t_max] by sign changes of Z."""
    if not t_min < t_max or step <= 0.0:
        raise DomainError("Need t_min < t_max and step > 0.")
    grid = np.arange(t_min, t_max + 0.5 * step, step)
    values = [hardy_z(t) for t in grid]
    roots = []
    for left, right, f_left, f_right in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if f_left == 0.0:
            roots.append(float(left))
        elif f_left * f_right < 0.0:
            roots.append(float(optimize.brentq(hardy_z, left, right, xtol=xtol)))
    return roots


def first_zeta_zero_ordinate(t_max: float = 20.0) -> float:
    roots = zeta_zero_ordinates(1.0, t_max)
    if not roots:
        raise ConvergenceError(f"No zeta zero found on the critical line below t={t_max}.")
    return roots[0]
