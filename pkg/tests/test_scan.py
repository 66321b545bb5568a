import math

import numpy as np
import pytest

from gauss_spectral.errors import ConvergenceError, DomainError
from gauss_spectral.models import Limits, ScanRecord
from gauss_spectral.scan import find_zero, locate_minima, scan_grid, scan_line, selberg_zeta, worker_count
from gauss_spectral.special import first_zeta_zero_ordinate
from gauss_spectral.transfer import fredholm_dets


def _record(r: float, det: complex) -> ScanRecord:
    return ScanRecord(beta=complex(0.5, r), det_minus=det, det_plus=1.0, selberg_Z=det, dim_used=8)


def test_selberg_zeta_is_product_of_determinants() -> None:
    rec = selberg_zeta(2.0, 32)
    dets = fredholm_dets(2.0, 32)
    assert rec.selberg_Z == rec.det_minus * rec.det_plus
    assert rec.det_minus == dets.det_minus
    assert abs(rec.selberg_Z) > 0.01
    assert rec.dim_used == 32 and rec.ok


def test_selberg_zeta_vanishes_at_one() -> None:
    rec = selberg_zeta(1.0, 48)
    assert abs(rec.det_minus) < 1e-8
    assert abs(rec.selberg_Z) < 1e-8


def test_real_beta_gives_real_determinants() -> None:
    rec = selberg_zeta(1.7, 32)
    assert abs(rec.det_minus.imag) < 1e-10
    assert abs(rec.det_plus.imag) < 1e-10


def test_scan_grid_is_closed() -> None:
    grid = scan_grid(9.0, 10.0, 0.05)
    assert grid.size == 21
    assert grid[0] == 9.0 and grid[-1] == pytest.approx(10.0)
    with pytest.raises(DomainError):
        scan_grid(1.0, 1.0, 0.1)
    with pytest.raises(DomainError):
        scan_grid(0.0, 1.0, 0.0)


def test_worker_count_respects_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("GAUSS_SPECTRAL_THREADS", "3")
    assert worker_count() == 3
    assert worker_count(8) == 3
    assert worker_count(2) == 2
    with pytest.raises(DomainError):
        worker_count(0)
    monkeypatch.setenv("GAUSS_SPECTRAL_THREADS", "many")
    with pytest.raises(DomainError):
        worker_count()


def test_scan_line_is_sorted_and_reports_progress() -> None:
    messages: list[str] = []
    records = scan_line(1.5, 0.0, 0.2, 0.1, N=8, workers=1, progress_callback=messages.append)
    assert [rec.r for rec in records] == pytest.approx([0.0, 0.1, 0.2])
    assert all(rec.ok for rec in records)
    assert len(messages) == 3


def test_scan_line_records_failures_in_band() -> None:
    records = scan_line(1.5, 0.0, 0.1, 0.1, N=16, workers=1, limits=Limits(max_dim=8))
    assert len(records) == 2
    for rec in records:
        assert not rec.ok
        assert "exceeds" in rec.error
        assert math.isnan(rec.selberg_Z.real)


def test_scan_line_in_worker_processes_matches_serial() -> None:
    serial = scan_line(1.5, 0.0, 0.3, 0.1, N=8, workers=1)
    pooled = scan_line(1.5, 0.0, 0.3, 0.1, N=8, workers=2)
    assert [rec.r for rec in pooled] == [rec.r for rec in serial]
    for a, b in zip(serial, pooled):
        assert a.selberg_Z == pytest.approx(b.selberg_Z, abs=1e-14)


def test_locate_minima_refines_with_a_parabola() -> None:
    records = [_record(r, r - 0.33) for r in np.arange(11) / 10]
    minima = locate_minima(records, "minus")
    assert minima == pytest.approx([0.33], abs=1e-12)
    assert locate_minima(records, "plus") == []


def test_locate_minima_skips_failed_points() -> None:
    records = [_record(r, r - 0.33) for r in np.arange(11) / 10]
    records.insert(3, ScanRecord(complex(0.5, 0.35), math.nan, math.nan, math.nan, 8, error="boom"))
    assert locate_minima(records, "Z") == pytest.approx([0.33], abs=1e-12)
    with pytest.raises(DomainError):
        locate_minima(records, "both")


def test_find_zero_returns_to_one() -> None:
    result = find_zero(1.02, "minus", N=32)
    assert abs(result.beta - 1.0) < 1e-8
    assert result.iterations >= 1
    assert result.history[0] == 1.02


def test_find_zero_fails_away_from_zeros() -> None:
    with pytest.raises(ConvergenceError):
        find_zero(3.0, "minus", N=32)
    with pytest.raises(ConvergenceError):
        find_zero(1.02, "minus", N=32, bracket=1e-6)
    with pytest.raises(DomainError):
        find_zero(1.0, "either")


@pytest.mark.slow
@pytest.mark.parametrize(
    ("which", "r_min", "r_max", "expected"),
    [("plus", 9.0, 10.0, 9.5337), ("minus", 13.5, 14.0, 13.7797)],
)
def test_scan_finds_maass_eigenvalues(which: str, r_min: float, r_max: float, expected: float) -> None:
    records = scan_line(0.5, r_min, r_max, 0.05, N=64)
    assert any(abs(m - expected) < 0.01 for m in locate_minima(records, which))


@pytest.mark.slow
def test_scan_finds_half_the_first_zeta_zero() -> None:
    records = scan_line(0.25, 6.8, 7.3, 0.05, N=64)
    target = first_zeta_zero_ordinate() / 2.0
    assert any(abs(m - target) < 0.01 for m in locate_minima(records, "minus"))


@pytest.mark.slow
def test_maass_zero_is_stable_under_refinement() -> None:
    coarse = find_zero(0.5 + 9.5337j, "plus", N=64)
    fine = find_zero(0.5 + 9.5337j, "plus", N=96)
    assert abs(coarse.beta - fine.beta) < 0.005
    assert abs(fine.beta.real - 0.5) < 0.005
