"""Determinant scans along lines Re(beta) = sigma and Newton refinement of zeros.

Z(beta) = det(1 - L_beta) det(1 + L_beta) is assembled from the collocation
determinants; zeros of the minus (plus) factor signal even (odd) Maass
forms on Re(beta) = 1/2 and zeta zeros 2 beta on Re(beta) = 1/4.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Literal

import numpy as np

from gauss_spectral.errors import ConvergenceError, DomainError, GaussSpectralError
from gauss_spectral.interpolation.base import ProgressCallback
from gauss_spectral.models import DEFAULT_LIMITS, Limits, ScanRecord
from gauss_spectral.transfer import DEFAULT_TOL, fredholm_dets

Which = Literal["minus", "plus", "Z"]
WHICH: tuple[str, ...] = ("minus", "plus", "Z")
THREADS_ENV = "GAUSS_SPECTRAL_THREADS"
DEFAULT_DIM = 64
NEWTON_STEP = 1e-5
BRACKET_THRESHOLD = 1.0
TRUST_RADIUS = 0.5
_NAN = complex(math.nan, math.nan)


def selberg_zeta(
    beta: complex,
    N: int = DEFAULT_DIM,
    tol: float = DEFAULT_TOL,
    *,
    check_stability: bool = False,
    limits: Limits = DEFAULT_LIMITS,
) -> ScanRecord:
    dets = fredholm_dets(beta, N, tol, check_stability=check_stability, limits=limits)
    return ScanRecord(
        beta=complex(beta),
        det_minus=dets.det_minus,
        det_plus=dets.det_plus,
        selberg_Z=dets.det_minus * dets.det_plus,
        dim_used=N,
    )


def _scan_point(task: tuple[complex, int, float, Limits]) -> ScanRecord:
    beta, N, tol, limits = task
    try:
        return selberg_zeta(beta, N, tol, limits=limits)
    except GaussSpectralError as exc:
        return ScanRecord(beta=beta, det_minus=_NAN, det_plus=_NAN, selberg_Z=_NAN, dim_used=N, error=str(exc))


def worker_count(requested: int | None = None) -> int:
    """Worker processes for scans, capped by GAUSS_SPECTRAL_THREADS when set."""
    cap = os.getenv(THREADS_ENV)
    available = os.cpu_count() or 1
    if cap:
        try:
            available = max(1, int(cap))
        except ValueError as exc:
            raise DomainError(f"{THREADS_ENV} must be a positive integer, got {cap!r}.") from exc
    if requested is None:
        return available
    if requested < 1:
        raise DomainError(f"workers must be >= 1, got {requested}.")
    return min(requested, available)


def scan_grid(r_min: float, r_max: float, step: float) -> np.ndarray:
    if not r_min < r_max:
        raise DomainError(f"Need r_min < r_max, got [{r_min}, {r_max}].")
    if step <= 0.0:
        raise DomainError(f"step must be positive, got {step}.")
    count = int(math.floor((r_max - r_min) / step + 1e-9))
    return r_min + step * np.arange(count + 1)


def scan_line(
    sigma: float,
    r_min: float,
    r_max: float,
    step: float,
    N: int = DEFAULT_DIM,
    *,
    tol: float = DEFAULT_TOL,
    workers: int | None = None,
    limits: Limits = DEFAULT_LIMITS,
    progress_callback: ProgressCallback | None = None,
) -> list[ScanRecord]:
    """Evaluate Z at beta = sigma + i r on the closed grid r_min, r_min + step, ... <= r_max.

    Points are independent; a failing point is recorded with its error
    message and NaN determinants while the scan continues.
    """
    tasks = [(complex(sigma, float(r)), N, tol, limits) for r in scan_grid(r_min, r_max, step)]
    processes = min(worker_count(workers), len(tasks))
    records: list[ScanRecord] = []

    def _collect(record: ScanRecord) -> None:
        records.append(record)
        if progress_callback:
            status = "ok" if record.ok else f"failed: {record.error}"
            progress_callback(f"[{len(records)}/{len(tasks)}] r={record.r:.6g} {status}")

    if processes <= 1:
        for task in tasks:
            _collect(_scan_point(task))
    else:
        with Pool(processes=processes) as pool:
            for record in pool.imap(_scan_point, tasks):
                _collect(record)
    records.sort(key=lambda record: record.r)
    return records


def _selected(record: ScanRecord, which: Which) -> complex:
    if which == "minus":
        return record.det_minus
    if which == "plus":
        return record.det_plus
    return record.selberg_Z


def locate_minima(records: list[ScanRecord], which: Which = "Z") -> list[float]:
    """Interior local minima of |det| along a scan, refined by a parabola through |det|^2.

    Records carrying an error are skipped.
    """
    if which not in WHICH:
        raise DomainError(f"which must be one of {WHICH}, got {which!r}.")
    usable = sorted((rec for rec in records if rec.ok), key=lambda rec: rec.r)
    r = np.array([rec.r for rec in usable])
    power = np.array([abs(_selected(rec, which)) ** 2 for rec in usable])
    minima: list[float] = []
    for i in range(1, len(usable) - 1):
        if not (power[i] < power[i - 1] and power[i] <= power[i + 1]):
            continue
        h = r[i + 1] - r[i]
        curvature = power[i - 1] - 2.0 * power[i] + power[i + 1]
        shift = 0.5 * h * (power[i - 1] - power[i + 1]) / curvature if curvature > 0 else 0.0
        minima.append(float(r[i] + np.clip(shift, -h, h)))
    return minima


@dataclass(slots=True)
class ZeroResult:
    beta: complex
    value: complex
    iterations: int
    history: list[complex] = field(default_factory=list)


def find_zero(
    beta0: complex,
    which: Which = "minus",
    tol: float = 1e-10,
    N: int = DEFAULT_DIM,
    *,
    h: float = NEWTON_STEP,
    max_iterations: int = 50,
    bracket: float = BRACKET_THRESHOLD,
    trust_radius: float = TRUST_RADIUS,
    limits: Limits = DEFAULT_LIMITS,
    progress_callback: ProgressCallback | None = None,
) -> ZeroResult:
    """Newton iteration on the selected determinant as a holomorphic function of beta.

    The derivative is the centred difference with step ``h``. Iteration
    stops when |det| < tol or the step is below 1e-10.
    """
    if which not in WHICH:
        raise DomainError(f"which must be one of {WHICH}, got {which!r}.")

    def det(beta: complex) -> complex:
        return _selected(selberg_zeta(beta, N, limits=limits), which)

    beta = complex(beta0)
    value = det(beta)
    if abs(value) > bracket:
        raise ConvergenceError(
            f"|det_{which}| = {abs(value):.3e} at beta={beta} is above the bracket threshold {bracket}",
            iterations=0,
        )
    history = [beta]
    for iteration in range(1, max_iterations + 1):
        if abs(value) < tol:
            return ZeroResult(beta, value, iteration - 1, history)
        slope = (det(beta + h) - det(beta - h)) / (2.0 * h)
        if abs(slope) < 1e-14:
            raise ConvergenceError(f"Vanishing derivative of det_{which} at beta={beta}", iterations=iteration)
        step = -value / slope
        if abs(step) > trust_radius:
            raise ConvergenceError(
                f"Newton step {abs(step):.3g} leaves the trust radius {trust_radius} at beta={beta}",
                iterations=iteration,
            )
        beta += step
        value = det(beta)
        history.append(beta)
        if progress_callback:
            progress_callback(f"Newton {iteration}: beta={beta.real:.10f}{beta.imag:+.10f}i |det|={abs(value):.3e}")
        if abs(step) < 1e-10:
            return ZeroResult(beta, value, iteration, history)
    raise ConvergenceError(f"Newton iteration for det_{which} did not converge", iterations=max_iterations)
