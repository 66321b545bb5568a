"""Fast invariant checks behind ``gauss-spectral --self-test``."""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from gauss_spectral.cf_core import branch_eval, cylinder_interval, gauss_map
from gauss_spectral.holder import HolderFunction, chaining_violations, pln_apply
from gauss_spectral.interpolation.base import ProgressCallback
from gauss_spectral.interpolation.grid import GridFunction
from gauss_spectral.interpolation.periodic import PeriodicFunction
from gauss_spectral.models import PartitionSpec, Word
from gauss_spectral.special import hurwitz_zeta, hurwitz_zeta_with_error, riemann_zeta_eta
from gauss_spectral.three_term import (
    ThreeTermSolution,
    associated_periodic,
    lewis_zagier_example,
    residual,
)
from gauss_spectral.transfer import apply_transfer, lambda1

Check = Callable[[], tuple[bool, str]]


@dataclass(slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _hurwitz_shift() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        s = 20.0 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if abs(s - 1.0) < 0.1:
            continue
        z = rng.uniform(0.1, 5.0)
        (here, here_err), (there, there_err) = hurwitz_zeta_with_error(s, z), hurwitz_zeta_with_error(s, z + 1.0)
        scale = max(1.0, abs(here), abs(there))
        reported = here_err * max(1.0, abs(here)) + there_err * max(1.0, abs(there))
        worst = max(worst, max(0.0, abs(here - there - z**-s) - reported) / scale)
    return worst < 1e-12, f"max defect beyond the error estimates {worst:.2e}"


def _riemann_reduction() -> tuple[bool, str]:
    worst = max(abs(hurwitz_zeta(s, 1.0) - riemann_zeta_eta(s)) for s in (2.0, 3.0, 4.0, 0.5 + 14j))
    return worst < 1e-10, f"max gap {worst:.2e}"


def _conjugacy() -> tuple[bool, str]:
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(50):
        digits = tuple(int(d) for d in rng.integers(1, 20, size=rng.integers(2, 6)))
        x = float(rng.uniform(0.0, 0.999))
        w = Word(digits)
        worst = max(worst, abs(gauss_map(branch_eval(w, x)) - branch_eval(w.tail(), x)))
    return worst < 1e-12, f"max defect {worst:.2e}"


def _nesting() -> tuple[bool, str]:
    ok = True
    for digits in ((1,), (2, 3), (1, 1, 4), (5, 2, 7, 1)):
        outer = cylinder_interval(digits)
        for n in (1, 2, 9):
            inner = cylinder_interval(digits + (n,))
            ok &= outer[0] - 1e-15 <= inner[0] and inner[1] <= outer[1] + 1e-15
    return ok, "nested" if ok else "cylinder escapes its parent"


def _chaining() -> tuple[bool, str]:
    violations, ratio = chaining_violations(0.5, 10_000, seed=3)
    return violations == 0, f"{violations} violations, max ratio {ratio:.4f}"


def _pln_idempotent() -> tuple[bool, str]:
    h = HolderFunction.from_callable(lambda x: np.sqrt(x) * np.cos(7 * x), 0.5, n=257)
    spec = PartitionSpec(l=1, N=16, digit_cutoff=16)
    once = pln_apply(h, spec)
    twice = pln_apply(once, spec)
    gap = float(np.max(np.abs(twice.f(once.nodes) - once.values)))
    return gap <= 1e-14, f"max gap {gap:.2e}"


def _gauss_fixed_point() -> tuple[bool, str]:
    f = GridFunction.from_callable(lambda x: 1.0 / (1.0 + x), n=32)
    z = np.linspace(0.0, 1.0, 50)
    gap = float(np.max(np.abs(apply_transfer(1.0, f, z) - 1.0 / (1.0 + z))))
    return gap < 1e-10, f"max error {gap:.2e}"


def _lambda1_at_one() -> tuple[bool, str]:
    value = lambda1(1.0)
    return abs(value - 1.0) < 1e-8, f"lambda_1(1) = {value:.12f}"


def _lewis_zagier() -> tuple[bool, str]:
    Q = PeriodicFunction(0.0, [], [1.0, 0.5])
    f = lewis_zagier_example(Q, 0.5 + 9.5j, 1)
    value = residual(f, 1.0, 0.5 + 9.5j, np.linspace(0.1, 2.0, 40))
    return value < 1e-8, f"residual {value:.2e}"


def _round_trip() -> tuple[bool, str]:
    Q = PeriodicFunction(0.3, [1.0, -0.2], [0.0, 0.4])
    sol = ThreeTermSolution(Q, 2.0, 1.0, dim=48)
    gap = associated_periodic(sol, 2.0, 1.0, samples=32).max_coefficient_gap(Q)
    return gap < 1e-8, f"coefficient gap {gap:.2e}"


CHECKS: tuple[tuple[str, Check], ...] = (
    ("hurwitz shift identity", _hurwitz_shift),
    ("hurwitz reduces to zeta", _riemann_reduction),
    ("gauss map conjugacy", _conjugacy),
    ("cylinder nesting", _nesting),
    ("chaining lemma", _chaining),
    ("P_{l,N} idempotent", _pln_idempotent),
    ("gauss density fixed point", _gauss_fixed_point),
    ("lambda_1(1) = 1", _lambda1_at_one),
    ("lewis-zagier residual", _lewis_zagier),
    ("three-term round trip", _round_trip),
)


def run_self_test(progress_callback: ProgressCallback | None = None) -> list[CheckResult]:
    results = []
    for name, check in CHECKS:
        start = time.monotonic()
        try:
            passed, detail = check()
        except Exception as exc:  # a crashing check is a failed check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail, time.monotonic() - start))
        if progress_callback:
            progress_callback(f"{name}: {'PASS' if passed else 'FAIL'}")
    return results


def format_table(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  result  time     detail"]
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<{width}}  {mark:<6}  {r.seconds:6.2f}s  {r.detail}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)
