from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from gauss_spectral.errors import DomainError
from gauss_spectral.interpolation.chebyshev import chebyshev_nodes
from gauss_spectral.interpolation.grid import NODE_TOLERANCE, GridFunction, Rule
from gauss_spectral.interpolation.periodic import PeriodicFunction
from gauss_spectral.models import ScanRecord

GRID_HEADER = "x,re,im"
SCAN_COLUMNS = ("r", "det_minus_re", "det_minus_im", "det_plus_re", "det_plus_im", "Z_re", "Z_im", "dim", "error")


def fmt(value: float) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(value))


def complex_to_json(value: complex) -> dict[str, float]:
    value = complex(value)
    return {"re": value.real, "im": value.imag}


def write_text(text: str, output_path: Path) -> None:
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with output_path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def grid_function_csv(f: GridFunction) -> str:
    lines = [GRID_HEADER]
    for x, value in zip(f.nodes, f.values):
        lines.append(f"{fmt(x)},{fmt(value.real)},{fmt(value.imag)}")
    return "\n".join(lines) + "\n"


def write_grid_function(f: GridFunction, output_path: Path) -> None:
    write_text(grid_function_csv(f), output_path)


def _detect_rule(nodes: np.ndarray) -> Rule:
    if nodes.size >= 2:
        expected = chebyshev_nodes(nodes.size, nodes[0], nodes[-1])
        if np.max(np.abs(expected - nodes)) <= NODE_TOLERANCE * max(1.0, nodes[-1]):
            return "chebyshev"
    return "linear"


def read_grid_function(input_path: Path, *, rule: Rule | None = None) -> GridFunction:
    """Read an ``x,re,im`` CSV. Chebyshev-Lobatto node sets get the chebyshev rule unless ``rule`` is given."""
    with input_path.open("r", encoding="utf-8") as handle:
        header = handle.readline().strip()
        if header != GRID_HEADER:
            raise DomainError(f"{input_path}: expected header {GRID_HEADER!r}, got {header!r}.")
        rows = []
        for lineno, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            parts = line.strip().split(",")
            if len(parts) != 3:
                raise DomainError(f"{input_path}:{lineno}: expected 3 columns, got {len(parts)}.")
            try:
                rows.append(tuple(float(p) for p in parts))
            except ValueError as exc:
                raise DomainError(f"{input_path}:{lineno}: {exc}") from exc
    if len(rows) < 2:
        raise DomainError(f"{input_path}: a GridFunction needs at least two rows.")
    data = np.array(rows)
    nodes = data[:, 0]
    values = data[:, 1] + 1j * data[:, 2]
    return GridFunction(
        domain=(float(nodes[0]), float(nodes[-1])),
        nodes=nodes,
        values=values,
        rule=rule or _detect_rule(nodes),
    )


def periodic_to_dict(Q: PeriodicFunction) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "constant": Q.constant.real,
        "cos": [c.real for c in Q.cos],
        "sin": [s.real for s in Q.sin],
    }
    if Q.constant.imag or np.any(Q.cos.imag) or np.any(Q.sin.imag):
        payload["constant_im"] = Q.constant.imag
        payload["cos_im"] = [c.imag for c in Q.cos]
        payload["sin_im"] = [s.imag for s in Q.sin]
    return payload


def periodic_from_dict(payload: dict[str, Any]) -> PeriodicFunction:
    try:
        constant = complex(payload.get("constant", 0.0), payload.get("constant_im", 0.0))
        cos = np.asarray(payload.get("cos", []), dtype=float)
        sin = np.asarray(payload.get("sin", []), dtype=float)
        cos_im = np.asarray(payload.get("cos_im", np.zeros(cos.size)), dtype=float)
        sin_im = np.asarray(payload.get("sin_im", np.zeros(sin.size)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"Malformed periodic function: {exc}") from exc
    if cos_im.size != cos.size or sin_im.size != sin.size:
        raise DomainError("Imaginary coefficient lists must match the real ones in length.")
    return PeriodicFunction(constant, cos + 1j * cos_im, sin + 1j * sin_im)


def write_periodic(Q: PeriodicFunction, output_path: Path) -> None:
    write_text(json.dumps(periodic_to_dict(Q)) + "\n", output_path)


def read_periodic(input_path: Path) -> PeriodicFunction:
    with input_path.open("r", encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{input_path}: invalid JSON ({exc}).") from exc
    if not isinstance(payload, dict):
        raise DomainError(f"{input_path}: expected a JSON object.")
    return periodic_from_dict(payload)


def _csv_field(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def scan_csv(records: list[ScanRecord]) -> str:
    lines = [",".join(SCAN_COLUMNS)]
    for rec in records:
        cells = [
            rec.r,
            rec.det_minus.real,
            rec.det_minus.imag,
            rec.det_plus.real,
            rec.det_plus.imag,
            rec.selberg_Z.real,
            rec.selberg_Z.imag,
        ]
        lines.append(",".join(fmt(c) for c in cells) + f",{rec.dim_used}," + _csv_field(rec.error or ""))
    return "\n".join(lines) + "\n"


def record_to_dict(rec: ScanRecord) -> dict[str, Any]:
    return {
        "beta": complex_to_json(rec.beta),
        "det_minus": complex_to_json(rec.det_minus),
        "det_plus": complex_to_json(rec.det_plus),
        "selberg_Z": complex_to_json(rec.selberg_Z),
        "dim": rec.dim_used,
        "error": rec.error,
    }


def write_scan(records: list[ScanRecord], output_path: Path) -> None:
    write_text(scan_csv(records), output_path)
