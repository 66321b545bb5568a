from __future__ import annotations

import argparse
import cmath
import json
import sys
import time
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from gauss_spectral import io
from gauss_spectral.errors import ConvergenceError, DomainError, NumericalWarning, ResourceError
from gauss_spectral.holder import (
    HolderFunction,
    chaining_constant,
    chaining_violations,
    essential_radius_bound,
    holder_seminorm,
    norm_defect_estimate,
    pln_apply,
)
from gauss_spectral.models import DEFAULT_LIMITS, Limits, PartitionSpec
from gauss_spectral.scan import find_zero, locate_minima, scan_line
from gauss_spectral.selftest import all_passed, format_table, run_self_test
from gauss_spectral.special import hurwitz_zeta_with_error
from gauss_spectral.three_term import (
    ThreeTermSolution,
    asymptotic_coefficients,
    lewis_zagier_example,
    residual,
    solve_from_Q,
)
from gauss_spectral.transfer import MIN_DIM, apply_transfer, build_collocation, fredholm_dets, lambda1, spectrum

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_NUMERICAL = 2
EXIT_USAGE = 64
EXIT_INTERRUPTED = 130

_POSITIVE_INTS = ("count", "workers", "depth", "digit_cutoff", "N", "cutoff", "trials", "samples")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _status(message: str, *, quiet: bool) -> None:
    if quiet:
        return
    print(f"[gauss-spectral] {message}", file=sys.stderr, flush=True)


def parse_complex(text: str) -> complex:
    """``re,im`` or a bare real number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected a complex number as 're,im', got {text!r}")


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _format_complex(value: complex, digits: int = 10) -> str:
    value = complex(value)
    if abs(value.imag) <= 1e-15 * max(1.0, abs(value.real)):
        return f"{value.real:.{digits}f}"
    return f"{value.real:.{digits}f}{value.imag:+.{digits}f}i"


@dataclass(slots=True)
class RunConfig:
    command: str
    params: dict[str, Any] = field(default_factory=dict)
    output_path: Path | None = None
    output_format: str = "csv"
    seed: int = 0
    limits: Limits = DEFAULT_LIMITS

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        skip = {"command", "three_term_command", "out", "format", "seed", "quiet", "self_test"}
        params = {k: v for k, v in vars(args).items() if k not in skip}
        command = args.command
        if getattr(args, "three_term_command", None):
            command = f"{command} {args.three_term_command}"
        return cls(
            command=command,
            params=params,
            output_path=args.out,
            output_format=args.format,
            seed=args.seed,
        )

    def validate(self) -> None:
        """Reject out-of-range numeric parameters before any work starts."""
        params = self.params
        for name, value in params.items():
            values = value if isinstance(value, (list, tuple)) else [value]
            if any(isinstance(v, (int, float, complex)) and not cmath.isfinite(v) for v in values):
                raise DomainError(f"{_flag(name)} must be finite, got {value}.")
        dim = params.get("dim")
        if dim is not None and not MIN_DIM <= dim <= self.limits.max_dim:
            raise DomainError(f"--dim must lie in [{MIN_DIM}, {self.limits.max_dim}], got {dim}.")
        for name in ("tol", "step"):
            if params.get(name) is not None and not params[name] > 0.0:
                raise DomainError(f"{_flag(name)} must be positive, got {params[name]}.")
        for name in _POSITIVE_INTS:
            if params.get(name) is not None and params[name] < 1:
                raise DomainError(f"{_flag(name)} must be a positive integer, got {params[name]}.")
        if params.get("l") is not None:
            least = 1 if self.command == "defect" else 0
            if params["l"] < least:
                raise DomainError(f"--l must be at least {least}, got {params['l']}.")
        if params.get("k") is not None and params["k"] < 0:
            raise DomainError(f"--k must be non-negative, got {params['k']}.")
        alpha = params.get("alpha")
        if alpha is not None and not 0.0 < alpha < 1.0:
            raise DomainError(f"--alpha must lie in (0, 1), got {alpha}.")
        if params.get("r_min") is not None and not params["r_min"] < params["r_max"]:
            raise DomainError(f"--r-min must be below --r-max, got {params['r_min']} and {params['r_max']}.")
        grid = params.get("grid")
        if grid is not None:
            lo, hi, points = grid
            if not (lo < hi and points >= 2 and points == int(points)):
                raise DomainError(f"--grid needs MIN < MAX and an integer POINTS >= 2, got {grid}.")

    def to_json(self) -> str:
        def encode(value: Any) -> Any:
            if isinstance(value, complex):
                return io.complex_to_json(value)
            if isinstance(value, Path):
                return str(value)
            if isinstance(value, (list, tuple)):
                return [encode(v) for v in value]
            return value

        payload = {
            "command": self.command,
            "params": {k: encode(v) for k, v in sorted(self.params.items())},
            "output_path": encode(self.output_path),
            "output_format": self.output_format,
            "seed": self.seed,
            "limits": asdict(self.limits),
        }
        return json.dumps(payload, sort_keys=False)


def _common(dim: int, tol: float) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--dim", type=int, default=dim, help="Collocation dimension")
    parent.add_argument("--tol", type=float, default=tol, help="Target accuracy")
    parent.add_argument("--seed", type=int, default=0)
    parent.add_argument("--format", choices=["csv", "json"], default="csv")
    parent.add_argument("--out", type=Path, help="Write the result here instead of stdout")
    parent.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="Suppress status messages")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="gauss-spectral",
        description="Transfer operators of the Gauss map: spectra, determinants, Hoelder and three-term experiments.",
    )
    parser.add_argument("--self-test", action="store_true", help="Run the invariant checks and print a table")
    parser.add_argument("--quiet", action="store_true", help="Suppress status messages")
    sub = parser.add_subparsers(dest="command")

    cmd = sub.add_parser("hurwitz", parents=[_common(48, 1e-15)], help="Hurwitz zeta value")
    cmd.add_argument("--s", type=parse_complex, required=True)
    cmd.add_argument("--z", type=float, required=True)

    cmd = sub.add_parser("apply", parents=[_common(48, 1e-12)], help="Apply L_beta to a GridFunction CSV")
    cmd.add_argument("--input", type=Path, required=True, help="CSV with header x,re,im")
    cmd.add_argument("--beta", type=parse_complex, required=True)
    cmd.add_argument("--z", type=float, nargs="+", help="Evaluation points (default: the input nodes)")
    cmd.add_argument("--rule", choices=["chebyshev", "linear"])

    cmd = sub.add_parser("spectrum", parents=[_common(48, 1e-12)], help="Leading eigenvalues")
    cmd.add_argument("--beta", type=parse_complex, required=True)
    cmd.add_argument("--count", type=int, default=5)

    cmd = sub.add_parser("dets", parents=[_common(48, 1e-12)], help="det(1 - L_beta) and det(1 + L_beta)")
    cmd.add_argument("--beta", type=parse_complex, required=True)

    cmd = sub.add_parser("lambda1", parents=[_common(48, 1e-10)], help="Leading eigenvalue of L_t, t real")
    cmd.add_argument("--t", type=float, required=True)

    cmd = sub.add_parser("scan", parents=[_common(64, 1e-12)], help="Determinant scan along Re(beta) = sigma")
    cmd.add_argument("--sigma", type=float, required=True)
    cmd.add_argument("--r-min", type=float, required=True)
    cmd.add_argument("--r-max", type=float, required=True)
    cmd.add_argument("--step", type=float, required=True)
    cmd.add_argument("--workers", type=int)

    cmd = sub.add_parser("find-zero", parents=[_common(64, 1e-10)], help="Newton refinement of a determinant zero")
    cmd.add_argument("--beta0", type=parse_complex, required=True)
    cmd.add_argument("--which", choices=["minus", "plus", "Z"], default="minus")

    three = sub.add_parser("three-term", help="Lewis' three-term equation")
    three_sub = three.add_subparsers(dest="three_term_command", required=True)
    for name, text in (("solve", "Evaluate the solution built from Q"), ("residual", "Residual of a solution"),
                       ("coeffs", "Asymptotic coefficients C_n and C*_n")):
        cmd = three_sub.add_parser(name, parents=[_common(64, 1e-12)], help=text)
        cmd.add_argument("--q", type=Path, help="PeriodicFunction JSON")
        cmd.add_argument("--lam", type=parse_complex, default=complex(2.0))
        cmd.add_argument("--beta", type=parse_complex, required=True)
        if name == "solve":
            cmd.add_argument("--z", type=float, nargs="+", required=True)
            cmd.add_argument("--method", choices=["resolvent", "cylinder"], default="resolvent")
            cmd.add_argument("--depth", type=int, default=4)
            cmd.add_argument("--digit-cutoff", type=int, default=30)
        elif name == "residual":
            cmd.add_argument("--grid", type=float, nargs=3, default=[0.0, 2.0, 41], metavar=("MIN", "MAX", "POINTS"))
            cmd.add_argument("--lewis-zagier", type=int, choices=[1, -1], dest="sign",
                             help="Use the closed-form example with lambda = sign")
        else:
            cmd.add_argument("--k", type=int, default=0)

    cmd = sub.add_parser("pln", parents=[_common(48, 1e-12)], help="Apply the interpolation operator P_{l,N}")
    cmd.add_argument("--input", type=Path, required=True)
    cmd.add_argument("--alpha", type=float, required=True)
    cmd.add_argument("--l", type=int, required=True)
    cmd.add_argument("--N", type=int, required=True)
    cmd.add_argument("--cutoff", type=int, default=64)

    cmd = sub.add_parser("defect", parents=[_common(48, 1e-12)], help="Monte-Carlo ||L^l - L^l P_{l,N}||")
    cmd.add_argument("--beta", type=parse_complex, required=True)
    cmd.add_argument("--alpha", type=float, required=True)
    cmd.add_argument("--l", type=int, required=True)
    cmd.add_argument("--N", type=int, required=True)
    cmd.add_argument("--cutoff", type=int, default=64)
    cmd.add_argument("--trials", type=int, default=20)
    cmd.add_argument("--lacunary", action="store_true", help="Draw test functions with power-of-two frequencies")

    cmd = sub.add_parser("chain-test", parents=[_common(48, 1e-12)], help="Random four-point chaining experiment")
    cmd.add_argument("--alpha", type=float, required=True)
    cmd.add_argument("--samples", type=int, default=100_000)
    return parser


def _table(header: list[str], rows: list[list[Any]]) -> str:
    def cell(value: Any) -> str:
        if isinstance(value, (float, np.floating)):
            return io.fmt(value)
        return str(value)

    lines = [",".join(header)] + [",".join(cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _json(payload: Any) -> str:
    return json.dumps(payload) + "\n"


def _complex_rows(z: np.ndarray, values: np.ndarray) -> tuple[list[str], list[list[Any]]]:
    return ["z", "re", "im"], [[float(x), float(v.real), float(v.imag)] for x, v in zip(z, values)]


def _emit(text: str, config: RunConfig, *, quiet: bool) -> None:
    if config.output_format == "json":
        text = config.to_json() + "\n" + text
    if config.output_path is None:
        sys.stdout.write(text)
        return
    path = config.output_path.expanduser().resolve()
    io.write_text(text, path)
    _status(f"Wrote {path}", quiet=quiet)


def _tabular(header: list[str], rows: list[list[Any]], config: RunConfig) -> str:
    if config.output_format == "json":
        return "".join(_json({k: v for k, v in zip(header, row)}) for row in rows)
    return _table(header, rows)


def _scalar(name: str, value: complex | float, config: RunConfig) -> str:
    if config.output_format == "json":
        payload = io.complex_to_json(value) if isinstance(value, complex) else value
        return _json({name: payload})
    return (_format_complex(value) if isinstance(value, complex) else f"{value:.10f}") + "\n"


def _load_q(args: argparse.Namespace):
    if args.q is None:
        raise DomainError("--q is required: a PeriodicFunction JSON file.")
    return io.read_periodic(args.q.expanduser())


def _run_three_term(args: argparse.Namespace, config: RunConfig, progress) -> str:
    Q = _load_q(args)
    action = args.three_term_command
    if action == "residual" and args.sign is not None:
        f = lewis_zagier_example(Q, args.beta, args.sign)
        lam = complex(args.sign)
    else:
        sol = ThreeTermSolution(
            Q, args.lam, args.beta, dim=args.dim,
            depth=getattr(args, "depth", 18), digit_cutoff=getattr(args, "digit_cutoff", 64),
        )
        f, lam = sol, sol.lam

    if action == "solve":
        rows = []
        for z in args.z:
            result = solve_from_Q(f, z, method=args.method, progress_callback=progress)
            rows.append([z, result.value.real, result.value.imag, result.error])
        return _tabular(["z", "re", "im", "error"], rows, config)
    if action == "residual":
        low, high, points = args.grid
        grid = np.linspace(low, high, int(points))
        return _scalar("residual", residual(f, lam, args.beta, grid), config)
    C, Cstar = asymptotic_coefficients(f, args.k)
    rows = [[n, c.real, c.imag, cs.real, cs.imag] for n, (c, cs) in enumerate(zip(C, Cstar))]
    return _tabular(["n", "C_re", "C_im", "Cstar_re", "Cstar_im"], rows, config)


def _dispatch(args: argparse.Namespace, config: RunConfig) -> str:
    quiet = args.quiet
    progress = None if quiet else (lambda msg: _status(msg, quiet=False))
    command = args.command

    if command == "hurwitz":
        value, error = hurwitz_zeta_with_error(args.s, args.z, args.tol)
        _status(f"Estimated relative error {error:.2e}", quiet=quiet)
        return _scalar("value", complex(value), config)

    if command == "apply":
        f = io.read_grid_function(args.input.expanduser(), rule=args.rule)
        z = np.asarray(args.z if args.z else f.nodes, dtype=float)
        values = np.atleast_1d(apply_transfer(args.beta, f, z, args.tol, limits=config.limits))
        return _tabular(*_complex_rows(z, values), config)

    if command == "spectrum":
        op = build_collocation(args.beta, args.dim, tol=args.tol, limits=config.limits)
        pairs = spectrum(op, min(args.count, args.dim))
        rows = [[i, lam.real, lam.imag, abs(lam)] for i, (lam, _) in enumerate(pairs)]
        return _tabular(["index", "re", "im", "abs"], rows, config)

    if command == "dets":
        dets = fredholm_dets(args.beta, args.dim, args.tol, limits=config.limits)
        rows = [[dets.det_minus.real, dets.det_minus.imag, dets.det_plus.real, dets.det_plus.imag,
                 dets.dim, dets.stable, dets.drift]]
        header = ["det_minus_re", "det_minus_im", "det_plus_re", "det_plus_im", "dim", "stable", "drift"]
        return _tabular(header, rows, config)

    if command == "lambda1":
        return _scalar("lambda1", lambda1(args.t, args.tol, dim=args.dim, progress_callback=progress), config)

    if command == "scan":
        records = scan_line(
            args.sigma, args.r_min, args.r_max, args.step, args.dim,
            tol=args.tol, workers=args.workers, limits=config.limits, progress_callback=progress,
        )
        for which in ("minus", "plus"):
            minima = ", ".join(f"{r:.4f}" for r in locate_minima(records, which)) or "none"
            _status(f"Interior minima of |det_{which}|: {minima}", quiet=quiet)
        failed = [rec for rec in records if not rec.ok]
        if failed:
            _status(f"{len(failed)} of {len(records)} points failed", quiet=quiet)
        if config.output_format == "json":
            return "".join(_json(io.record_to_dict(rec)) for rec in records)
        return io.scan_csv(records)

    if command == "find-zero":
        result = find_zero(args.beta0, args.which, args.tol, args.dim, limits=config.limits, progress_callback=progress)
        _status(f"Converged in {result.iterations} Newton steps, |det| = {abs(result.value):.2e}", quiet=quiet)
        return _scalar("beta", result.beta, config)

    if command == "three-term":
        return _run_three_term(args, config, progress)

    if command == "pln":
        f = io.read_grid_function(args.input.expanduser(), rule="linear")
        h = HolderFunction(f, args.alpha)
        projected = pln_apply(h, PartitionSpec(args.l, args.N, args.cutoff), limits=config.limits)
        before, after = holder_seminorm(h), holder_seminorm(projected)
        _status(
            f"Seminorm {before:.6g} -> {after:.6g} (chaining constant {chaining_constant(args.alpha):.6g})",
            quiet=quiet,
        )
        return _tabular(*_complex_rows(projected.nodes, projected.values), config)

    if command == "defect":
        spec = PartitionSpec(args.l, args.N, args.cutoff)
        value = norm_defect_estimate(
            args.beta, args.alpha, args.l, spec, args.trials, args.seed,
            lacunary=args.lacunary, limits=config.limits, progress_callback=progress,
        )
        bound = essential_radius_bound(args.beta, args.alpha, dim=args.dim)
        rows = [[value, value ** (1.0 / args.l), bound]]
        return _tabular(["defect", "defect_root", "essential_radius_bound"], rows, config)

    if command == "chain-test":
        violations, ratio = chaining_violations(args.alpha, args.samples, seed=args.seed)
        rows = [[violations, ratio, chaining_constant(args.alpha)]]
        return _tabular(["violations", "max_ratio", "constant"], rows, config)

    raise DomainError(f"Unknown command {command!r}.")


def run(args: argparse.Namespace) -> int:
    if args.self_test:
        results = run_self_test(None if args.quiet else (lambda msg: _status(msg, quiet=False)))
        sys.stdout.write(format_table(results))
        return EXIT_OK if all_passed(results) else EXIT_DOMAIN
    if not args.command:
        raise DomainError("No command given; see --help.")

    start = time.monotonic()
    config = RunConfig.from_args(args)
    config.validate()
    _status(f"Command: {config.command}", quiet=args.quiet)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NumericalWarning)
        text = _dispatch(args, config)
    for warning in caught:
        _status(f"Warning: {warning.message}", quiet=args.quiet)
    _emit(text, config, quiet=args.quiet)
    _status(f"Done ({time.monotonic() - start:.1f}s).", quiet=args.quiet)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(args)
    except KeyboardInterrupt:
        print("Interrupted.", file=sys.stderr)
        return EXIT_INTERRUPTED
    except DomainError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, ResourceError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Exception as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
