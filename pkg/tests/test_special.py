import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gauss_spectral.errors import ConvergenceError, DomainError, PoleError
from gauss_spectral.special import (
    asymptotic_coefficient,
    bernoulli,
    first_zeta_zero_ordinate,
    hardy_z,
    hurwitz_asymptotic,
    hurwitz_zeta,
    hurwitz_zeta_ds,
    hurwitz_zeta_with_error,
    riemann_zeta_eta,
    zeta_zero_ordinates,
)


def test_bernoulli_small_values() -> None:
    assert bernoulli(2) == pytest.approx(1 / 6)
    assert bernoulli(4) == pytest.approx(-1 / 30)
    assert bernoulli(12) == pytest.approx(-691 / 2730)


@pytest.mark.parametrize("m", range(2, 61, 2))
def test_bernoulli_matches_mpmath(m: int) -> None:
    assert bernoulli(m) == pytest.approx(float(mpmath.bernoulli(m)), rel=1e-14)


@pytest.mark.parametrize("m", [0, 3, 62])
def test_bernoulli_rejects_unsupported_indices(m: int) -> None:
    with pytest.raises(DomainError):
        bernoulli(m)


def test_hurwitz_zeta_at_two() -> None:
    assert abs(hurwitz_zeta(2.0, 1.0) - math.pi**2 / 6) < 1e-12
    assert abs(hurwitz_zeta(2.0, 2.0) - (math.pi**2 / 6 - 1.0)) < 1e-12


@pytest.mark.parametrize(
    ("s", "z"),
    [(0.5 + 1j, 1.3), (3.0, 0.25), (-0.5 + 2j, 2.0), (1.5 - 7j, 0.8), (0.2 + 0.1j, 4.5)],
)
def test_hurwitz_zeta_matches_mpmath(s: complex, z: float) -> None:
    expected = complex(mpmath.zeta(s, z))
    assert abs(hurwitz_zeta(s, z) - expected) <= 1e-12 * max(1.0, abs(expected))


def test_hurwitz_zeta_vectorises_over_z() -> None:
    z = np.array([0.5, 1.0, 2.5])
    values = hurwitz_zeta(2.5 + 0.5j, z)
    for zi, value in zip(z, values):
        assert value == pytest.approx(hurwitz_zeta(2.5 + 0.5j, float(zi)), rel=1e-14)


def test_hurwitz_zeta_error_estimate_covers_refinement() -> None:
    s, z = 0.5 + 1j, 1.3
    coarse, coarse_err = hurwitz_zeta_with_error(s, z)
    fine, fine_err = hurwitz_zeta_with_error(s, z, shift=60, order=20)
    scale = max(1.0, abs(coarse))
    assert abs(coarse - fine) <= (coarse_err + fine_err + 1e-13) * scale


def test_hurwitz_zeta_fixed_order_reports_first_omitted_term() -> None:
    _, err_low = hurwitz_zeta_with_error(2.0, 1.0, shift=4, order=1)
    _, err_high = hurwitz_zeta_with_error(2.0, 1.0, shift=4, order=6)
    assert err_high < err_low


def test_hurwitz_zeta_rejects_pole_and_bad_argument() -> None:
    with pytest.raises(PoleError):
        hurwitz_zeta(1.0, 0.5)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, 0.0)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, -1.0)


@settings(max_examples=80, deadline=None)
@given(
    st.floats(min_value=-20.0, max_value=20.0),
    st.floats(min_value=-20.0, max_value=20.0),
    st.floats(min_value=0.1, max_value=5.0),
)
def test_hurwitz_zeta_shift_identity(re: float, im: float, z: float) -> None:
    s = complex(re, im)
    assume(abs(s) <= 20.0 and abs(s - 1.0) >= 0.1)
    here, here_err = hurwitz_zeta_with_error(s, z)
    there, there_err = hurwitz_zeta_with_error(s, z + 1.0)
    reported = here_err * max(1.0, abs(here)) + there_err * max(1.0, abs(there))
    scale = max(1.0, abs(here), abs(there))
    assert abs(here - there - z**-s) <= reported + 1e-12 * scale


@pytest.mark.parametrize(
    ("s", "z"),
    [(-15 + 2j, 0.7), (-18 + 0.5j, 2.0), (-10 + 3j, 0.5), (-5 + 12j, 3.3), (-3.0, 1.0), (-2.5 + 0.25j, 7.2)],
)
def test_hurwitz_zeta_far_left_matches_mpmath(s: complex, z: float) -> None:
    expected = complex(mpmath.zeta(s, z))
    value, error = hurwitz_zeta_with_error(s, z)
    assert abs(value - expected) <= 1e-10 * max(1.0, abs(expected))
    assert error < 1e-9


def test_hurwitz_zeta_far_left_vectorises_over_z() -> None:
    z = np.array([0.3, 0.5, 0.9, 1.0, 2.7])
    values = hurwitz_zeta(-7.5 + 1j, z)
    for zi, value in zip(z, values):
        expected = complex(mpmath.zeta(-7.5 + 1j, float(zi)))
        assert abs(value - expected) <= 1e-10 * max(1.0, abs(expected))


def test_hurwitz_zeta_at_negative_integers_is_a_bernoulli_polynomial() -> None:
    # zeta_H(-n, z) = -B_{n+1}(z) / (n + 1)
    for n, z in [(2, 0.25), (3, 0.8), (5, 1.6)]:
        expected = -float(mpmath.bernpoly(n + 1, z)) / (n + 1)
        assert abs(hurwitz_zeta(-n, z) - expected) <= 1e-12 * max(1.0, abs(expected))


def test_hurwitz_zeta_refuses_cancelled_shifted_sums() -> None:
    with pytest.raises(ConvergenceError):
        hurwitz_zeta_with_error(-15 + 2j, 0.7, shift=24, order=10)
    with pytest.raises(ConvergenceError):
        hurwitz_zeta_ds(-15 + 2j, 0.7)


@pytest.mark.parametrize(("s", "z"), [(2.0, 1.3), (0.3 + 4j, 2.0), (2.5 - 1j, 0.7)])
def test_hurwitz_zeta_ds_matches_mpmath(s: complex, z: float) -> None:
    expected = complex(mpmath.zeta(s, z, derivative=1))
    assert abs(hurwitz_zeta_ds(s, z) - expected) <= 1e-10 * max(1.0, abs(expected))


def test_asymptotic_coefficients() -> None:
    assert asymptotic_coefficient(3.0, 0) == pytest.approx(0.5)
    assert asymptotic_coefficient(3.0, 1) == pytest.approx(0.5)
    assert asymptotic_coefficient(3.0, 2) == pytest.approx(3.0 / 12.0)
    assert asymptotic_coefficient(3.0, 3) == 0


def test_hurwitz_asymptotic_examples() -> None:
    assert abs(hurwitz_asymptotic(2.0, 10.0, 3) - hurwitz_zeta(2.0, 10.0)) < 1e-10
    exact = hurwitz_zeta(2.0, 50.0)
    assert abs(hurwitz_asymptotic(2.0, 50.0, 1) - exact) / abs(exact) < 1e-6
    assert hurwitz_asymptotic(2.0, 4.0, 0) == pytest.approx(1 / 4 + 1 / 32)


def test_hurwitz_asymptotic_rejects_small_z() -> None:
    with pytest.raises(DomainError):
        hurwitz_asymptotic(2.0, 1.0, 2)


@pytest.mark.parametrize("s", [2.0, 3.0, 0.5 + 14j, 0.75 + 3j])
def test_riemann_zeta_eta_matches_mpmath(s: complex) -> None:
    expected = complex(mpmath.zeta(s))
    assert abs(riemann_zeta_eta(s) - expected) < 1e-10
    assert abs(hurwitz_zeta(s, 1.0) - expected) < 1e-10


def test_riemann_zeta_eta_rejects_left_half_plane() -> None:
    with pytest.raises(DomainError):
        riemann_zeta_eta(-0.5 + 1j)


def test_hardy_z_is_real_and_changes_sign_at_first_zero() -> None:
    assert hardy_z(14.0) * hardy_z(14.3) < 0.0


def test_first_zeta_zero() -> None:
    assert first_zeta_zero_ordinate() == pytest.approx(14.134725141734694, abs=1e-8)
    roots = zeta_zero_ordinates(10.0, 26.0)
    assert roots == pytest.approx([14.134725141734694, 21.022039638771555, 25.01085758014569], abs=1e-8)
