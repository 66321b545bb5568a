import math

import numpy as np
import pytest

from gauss_spectral.errors import ConvergenceError, DomainError, NumericalWarning, PoleError, ResourceError
from gauss_spectral.interpolation import GridFunction
from gauss_spectral.models import BetaParam
from gauss_spectral.special import hurwitz_zeta, hurwitz_zeta_ds
from gauss_spectral.transfer import (
    apply_transfer,
    apply_transfer_derivative,
    assemble_collocation,
    build_collocation,
    extend_eigenfunction,
    fit_contraction_rate,
    fredholm_dets,
    lambda1,
    power_iterate,
    spectrum,
)

ZETA3 = 1.2020569031595942
WIRSING = -0.3036630028987326


def gauss_density(x):
    return 1.0 / (1.0 + x)


def test_beta_param_rejects_poles() -> None:
    for pole in (0.5, 0.0, -0.5, -1.0, 0.5 + 1e-11j):
        with pytest.raises(PoleError):
            BetaParam(pole)
    assert BetaParam(0.5 + 1e-3j).value == 0.5 + 1e-3j


def test_beta_param_auto_picks_continuation_order() -> None:
    assert BetaParam.auto(1.0).k == 0
    assert BetaParam.auto(-0.3).k == 1
    assert BetaParam.auto(-1.2 + 2j).k == 3


def test_continuation_order_must_reach_beta() -> None:
    f = GridFunction.constant(1.0, n=8)
    with pytest.raises(ConvergenceError):
        apply_transfer(BetaParam(-0.3, 0), f, 0.5)


def test_gauss_density_is_fixed() -> None:
    f = GridFunction.from_callable(gauss_density, n=32)
    z = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(apply_transfer(1.0, f, z), gauss_density(z), atol=1e-10)


def test_constant_function_gives_hurwitz_zeta() -> None:
    beta = 1.3 + 0.5j
    f = GridFunction.constant(1.0, n=8)
    for z in (0.0, 0.4, 1.0):
        assert abs(apply_transfer(beta, f, z) - hurwitz_zeta(2 * beta, z + 1.0)) < 1e-12


def test_identity_function_sums_to_zeta_three() -> None:
    f = GridFunction.from_callable(lambda x: x, n=8)
    assert abs(apply_transfer(1.0, f, 0.0) - ZETA3) < 1e-10


def test_transfer_is_linear() -> None:
    beta = 0.9 - 0.4j
    f = GridFunction.from_callable(np.exp, n=24)
    g = GridFunction.from_callable(np.cos, n=24)
    z = np.linspace(0.0, 1.0, 7)
    combined = apply_transfer(beta, 2.0 * f + (-0.5j) * g, z)
    separate = 2.0 * apply_transfer(beta, f, z) - 0.5j * apply_transfer(beta, g, z)
    np.testing.assert_allclose(combined, separate, atol=1e-12)


def test_continuation_orders_agree() -> None:
    beta = 0.8 + 0.3j
    f = GridFunction.from_callable(np.exp, n=24)
    z = np.random.default_rng(5).uniform(0.0, 1.0, 20)
    plain = apply_transfer(BetaParam(beta, 0), f, z)
    continued = apply_transfer(BetaParam(beta, 2), f, z)
    np.testing.assert_allclose(plain, continued, atol=1e-10)


def test_continued_transfer_left_of_the_half_line() -> None:
    # for f = 1 the continued operator is still zeta_H(2 beta, z + 1)
    beta = BetaParam.auto(-0.2 + 1.5j)
    f = GridFunction.constant(1.0, n=8)
    assert abs(apply_transfer(beta, f, 0.3) - hurwitz_zeta(2 * beta.value, 1.3)) < 1e-10


def test_derivative_of_constant_function() -> None:
    beta = 1.1 + 0.2j
    f = GridFunction.constant(1.0, n=8)
    expected = 2.0 * hurwitz_zeta_ds(2 * beta, 1.4)
    assert abs(apply_transfer_derivative(beta, f, 0.4) - expected) < 1e-10
    assert apply_transfer_derivative(beta, GridFunction.constant(0.0, n=8), 0.4) == 0


def test_derivative_matches_finite_difference() -> None:
    f = GridFunction.from_callable(gauss_density, n=32)
    h = 1e-5
    difference = (apply_transfer(1.0 + h, f, 0.3) - apply_transfer(1.0 - h, f, 0.3)) / (2 * h)
    assert abs(apply_transfer_derivative(1.0, f, 0.3) - difference) < 1e-6


def test_evaluation_points_must_exceed_minus_one() -> None:
    f = GridFunction.constant(1.0, n=8)
    with pytest.raises(DomainError):
        apply_transfer(1.0, f, -1.0)


def test_collocation_reproduces_gauss_density() -> None:
    op = build_collocation(1.0, 32)
    h = gauss_density(op.nodes)
    assert np.max(np.abs(op.apply(h) - h)) < 1e-10


def test_collocation_maps_constant_to_hurwitz_zeta() -> None:
    beta = 1.2 + 0.5j
    op = build_collocation(beta, 16)
    expected = hurwitz_zeta(2 * beta, op.nodes + 1.0)
    assert np.max(np.abs(op.apply(np.ones(16)) - expected)) < 1e-10


def test_two_point_collocation_by_hand() -> None:
    # cardinals 1 - u and u on the nodes {0, 1}
    op = assemble_collocation(1.0, 2)
    zeta2 = math.pi**2 / 6
    expected = np.array([[zeta2 - ZETA3, ZETA3], [zeta2 - ZETA3, ZETA3 - 1.0]])
    np.testing.assert_allclose(op.matrix, expected, atol=1e-12)


def test_collocation_agrees_with_pointwise_transfer() -> None:
    beta = 1.0 + 0.7j
    op = build_collocation(beta, 24)
    rng = np.random.default_rng(17)
    for _ in range(10):
        coeffs = rng.standard_normal(6)
        f = GridFunction.from_callable(lambda x: np.polynomial.polynomial.polyval(x, coeffs), n=24)
        pointwise = apply_transfer(beta, f, op.nodes)
        assert np.max(np.abs(op.apply(f.values) - pointwise)) < 1e-9


def test_collocation_limits_and_warnings() -> None:
    with pytest.raises(ResourceError):
        build_collocation(1.0, 600)
    with pytest.raises(DomainError):
        build_collocation(1.0, 3)
    with pytest.raises(DomainError):
        assemble_collocation(1.0, 1)
    with pytest.warns(NumericalWarning):
        build_collocation(1.0 + 20j, 4)


def test_spectrum_at_one() -> None:
    op = build_collocation(1.0, 48)
    pairs = spectrum(op, 3)
    (lead, f), (second, _), (third, _) = pairs
    assert abs(lead - 1.0) < 1e-10
    assert np.max(np.abs(f.values - 1.0 / (1.0 + op.nodes))) < 1e-8
    assert abs(second - WIRSING) < 1e-8
    assert abs(third) < abs(second)
    with pytest.raises(DomainError):
        spectrum(op, 0)


def test_leading_eigenvalue_drops_below_one() -> None:
    lead, _ = spectrum(build_collocation(1.5, 48), 1)[0]
    assert 0.0 < lead.real < 1.0
    assert abs(lead.imag) < 1e-12


def test_fredholm_determinants() -> None:
    at_one = fredholm_dets(1.0, 48)
    assert abs(at_one.det_minus) < 1e-8
    assert abs(at_one.det_plus) > 0.1
    assert at_one.stable
    det_minus, det_plus = fredholm_dets(2.0, 32)
    assert abs(det_minus) > 0.1 and abs(det_plus) > 0.1


def test_lambda1_examples() -> None:
    assert lambda1(1.0) == pytest.approx(1.0, abs=1e-8)
    assert lambda1(0.75) > 1.0
    lead, _ = spectrum(build_collocation(2.0, 48), 1)[0]
    value = lambda1(2.0)
    assert value < 1.0
    assert value == pytest.approx(lead.real, abs=1e-8)
    with pytest.raises(DomainError):
        lambda1(0.5)


@pytest.mark.slow
def test_lambda1_is_decreasing() -> None:
    values = [lambda1(t) for t in np.arange(0.6, 3.0001, 0.1)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_power_iteration_rate_matches_spectral_gap() -> None:
    start = GridFunction.constant(1.0, n=32)
    result = power_iterate(1.0, start, tol=1e-13)
    assert abs(result.eigenvalue - 1.0) < 1e-10
    rate = fit_contraction_rate(result.step_norms)
    assert rate == pytest.approx(abs(WIRSING), rel=0.1)


def test_contraction_rate_needs_enough_steps() -> None:
    with pytest.raises(ConvergenceError):
        fit_contraction_rate([1.0, 0.1, 1e-12])


@pytest.mark.slow
def test_holder_and_holomorphic_eigenfunctions_agree() -> None:
    op = build_collocation(1.0, 48)
    _, smooth = spectrum(op, 1)[0]
    start = GridFunction.from_callable(lambda x: np.ones_like(x), n=2000, rule="linear")
    result = power_iterate(1.0, start, tol=1e-12)
    rough = result.eigenfunction.normalized_at_zero()
    assert np.max(np.abs(rough.values - smooth(rough.nodes))) < 1e-6


def test_extend_eigenfunction_beyond_unit_interval() -> None:
    f = GridFunction.from_callable(gauss_density, n=32)
    z = np.array([0.5, 2.5, 7.0])
    np.testing.assert_allclose(extend_eigenfunction(1.0, 1.0, f, z), gauss_density(z), atol=1e-10)
    with pytest.raises(DomainError):
        extend_eigenfunction(1.0, 0.0, f, 2.0)


@pytest.mark.slow
def test_second_eigenvalue_is_stable_under_refinement() -> None:
    coarse = spectrum(build_collocation(1.0, 48), 2)[1][0]
    fine = spectrum(build_collocation(1.0, 96), 2)[1][0]
    assert abs(abs(coarse) - abs(fine)) < 1e-8
