import json
from pathlib import Path

import pytest

from gauss_spectral import io
from gauss_spectral.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, RunConfig, build_parser, main, parse_complex
from gauss_spectral.interpolation import GridFunction, PeriodicFunction


def test_parse_complex() -> None:
    assert parse_complex("2,0") == 2.0
    assert parse_complex("0.5,9.5") == 0.5 + 9.5j
    assert parse_complex("-1.5") == -1.5


def test_lambda1_at_one(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["--quiet", "lambda1", "--t", "1.0", "--tol", "1e-10"]) == EXIT_OK
    assert capsys.readouterr().out == "1.0000000000\n"


def test_hurwitz_prints_zeta_two(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["hurwitz", "--s", "2,0", "--z", "1"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out == "1.6449340668\n"
    assert "[gauss-spectral]" in captured.err


def test_usage_errors_exit_64(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["lambda1", "--t", "1.0", "--bogus"]) == EXIT_USAGE
    assert main(["hurwitz", "--s", "two", "--z", "1"]) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_domain_errors_exit_1(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["lambda1", "--t", "0.4"]) == EXIT_DOMAIN
    assert main(["spectrum", "--beta", "1,0", "--dim", "1"]) == EXIT_DOMAIN
    assert main([]) == EXIT_DOMAIN
    assert "Error:" in capsys.readouterr().err


def test_json_output_starts_with_run_config(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["--quiet", "lambda1", "--t", "2.0", "--format", "json"]) == EXIT_OK
    header, body = capsys.readouterr().out.splitlines()
    config = json.loads(header)
    assert config["command"] == "lambda1"
    assert config["params"]["t"] == 2.0
    assert config["limits"]["max_dim"] == 512
    assert 0.0 < json.loads(body)["lambda1"] < 1.0


def test_run_config_records_three_term_action() -> None:
    args = build_parser().parse_args(["three-term", "coeffs", "--beta", "1,0", "--k", "1"])
    config = RunConfig.from_args(args)
    assert config.command == "three-term coeffs"
    assert config.params["k"] == 1


def test_scan_writes_csv(tmp_path: Path) -> None:
    out = tmp_path / "runs" / "scan.csv"
    argv = ["--quiet", "scan", "--sigma", "1.5", "--r-min", "0", "--r-max", "0.1", "--step", "0.1",
            "--dim", "8", "--workers", "1", "--out", str(out)]
    assert main(argv) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(io.SCAN_COLUMNS)
    assert len(lines) == 3


def test_apply_reads_grid_function(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = tmp_path / "one.csv"
    io.write_grid_function(GridFunction.constant(1.0, n=8), path)
    assert main(["--quiet", "apply", "--input", str(path), "--beta", "1.5", "--z", "0.0"]) == EXIT_OK
    header, row = capsys.readouterr().out.splitlines()
    assert header == "z,re,im"
    z, re, im = (float(cell) for cell in row.split(","))
    assert z == 0.0
    assert re == pytest.approx(1.2020569031595942, abs=1e-10)


def test_three_term_residual_of_closed_form(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = tmp_path / "q.json"
    io.write_periodic(PeriodicFunction(0.0, [], [1.0, 0.5]), path)
    argv = ["--quiet", "three-term", "residual", "--q", str(path), "--beta", "0.5,9.5",
            "--lewis-zagier", "1", "--grid", "0.1", "2.0", "40"]
    assert main(argv) == EXIT_OK
    assert float(capsys.readouterr().out) < 1e-8


def test_three_term_requires_q(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["three-term", "coeffs", "--beta", "1,0"]) == EXIT_DOMAIN
    assert "--q" in capsys.readouterr().err


def test_chain_test_reports_no_violations(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["--quiet", "chain-test", "--alpha", "0.5", "--samples", "2000"]) == EXIT_OK
    header, row = capsys.readouterr().out.splitlines()
    assert header == "violations,max_ratio,constant"
    assert row.split(",")[0] == "0"


@pytest.mark.slow
def test_self_test_passes(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["--quiet", "--self-test"]) == EXIT_OK
    assert "FAIL" not in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["scan", "--sigma", "1.5", "--r-min", "0", "--r-max", "1", "--step", "-0.1"],
        ["scan", "--sigma", "1.5", "--r-min", "1", "--r-max", "0", "--step", "0.1"],
        ["chain-test", "--alpha", "1.5"],
        ["chain-test", "--alpha", "0"],
        ["chain-test", "--alpha", "0.5", "--samples", "0"],
        ["defect", "--beta", "1", "--alpha", "0.6", "--l", "0", "--N", "8"],
        ["defect", "--beta", "1", "--alpha", "0.6", "--l", "1", "--N", "8", "--trials", "-2"],
        ["spectrum", "--beta", "1", "--count", "0"],
        ["hurwitz", "--s", "2", "--z", "nan"],
    ],
)
def test_numeric_parameters_are_checked_before_work(argv: list[str], capsys: pytest.CaptureFixture[str]) -> None:
    assert main(argv) == EXIT_DOMAIN
    err = capsys.readouterr().err
    assert "Error:" in err
    assert "Command:" not in err


def test_seeded_commands_are_reproducible(tmp_path: Path) -> None:
    commands = {
        "defect": ["defect", "--beta", "1", "--alpha", "0.6", "--l", "1", "--N", "8", "--cutoff", "8",
                   "--trials", "2", "--seed", "3", "--dim", "16"],
        "scan": ["scan", "--sigma", "1.5", "--r-min", "0", "--r-max", "0.2", "--step", "0.1",
                 "--dim", "8", "--workers", "1"],
    }
    for name, argv in commands.items():
        first, second = tmp_path / f"{name}-1.csv", tmp_path / f"{name}-2.csv"
        assert main(["--quiet", *argv, "--out", str(first)]) == EXIT_OK
        assert main(["--quiet", *argv, "--out", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
