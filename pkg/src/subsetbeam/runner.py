"""Experiment runner: executes a configured sweep and writes the CSV.

Output format: comment lines (``#``) carrying the tool version, the config
hash, the seed and the symbol count, then a header row, then one data row per
sweep point. Floats are printed with ``repr`` so a reader recovers every
value bit for bit. The file is written atomically (temp file + rename).
"""

from __future__ import annotations

import csv
import os
import tempfile
from pathlib import Path

from . import __version__, simulator
from .config import RunConfig

__all__ = ["execute", "run", "read_rows"]

_ANGLE_HEADER = ["x_deg", "r_theory_bits", "r_empirical_bits", "beta_mean_emp", "beta_var_emp"]
_M_HEADER = ["m", "r_theory_bits", "r_empirical_bits", "beta_mean_emp", "beta_var_emp"]
_VAR_HEADER = ["x_deg", "beam_var_emp"]


def execute(config: RunConfig, workers: int = 1) -> tuple[list[str], list[tuple]]:
    """Run the configured experiment; returns (header, data rows)."""
    s = config.scenario
    if config.sweep_kind in ("angle", "single-point"):
        angles = config.grid if config.sweep_kind == "angle" else (s.eavesdropper.angle_deg,)
        rows = simulator.sweep_eavesdropper_angle(
            s, config.m, angles, config.k_symbols, config.seed,
            scheme=config.scheme, split=config.split, workers=workers,
        )
        return _ANGLE_HEADER, [
            (r.x, r.r_theory_bits, r.r_empirical_bits, r.beta_mean_emp, r.beta_var_emp)
            for r in rows
        ]
    if config.sweep_kind == "subset-size":
        rows = simulator.sweep_subset_size(
            s, [int(v) for v in config.grid], config.k_symbols, config.seed,
            scheme=config.scheme, split=config.split, workers=workers,
        )
        return _M_HEADER, [
            (int(r.x), r.r_theory_bits, r.r_empirical_bits, r.beta_mean_emp, r.beta_var_emp)
            for r in rows
        ]
    profile = simulator.beam_variance_profile(
        config.scheme, s, config.m, config.grid, config.k_symbols, config.seed,
        split=config.split, workers=workers,
    )
    return _VAR_HEADER, [(angle, var) for angle, var in profile]


def _format(value) -> str:
    return str(value) if isinstance(value, int) else repr(float(value))


def _write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    parent = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(config: RunConfig, workers: int = 1) -> Path:
    """Execute the sweep and write its CSV; returns the output path."""
    header, rows = execute(config, workers)
    lines = [
        f"# tool_version={__version__}",
        f"# config_hash={config.config_hash()}",
        f"# seed={config.seed}",
        f"# k_symbols={config.k_symbols}",
        ",".join(header),
    ]
    for row in rows:
        lines.append(",".join(_format(v) for v in row))
    _write_atomic(config.output_path, "\n".join(lines) + "\n")
    return config.output_path


def read_rows(path: str | Path) -> tuple[list[str], list[dict[str, float]]]:
    """Parse a results CSV back into (header, rows of floats)."""
    with open(path, newline="") as handle:
        body = [line for line in handle if not line.startswith("#")]
    reader = csv.DictReader(body)
    rows = [{k: float(v) for k, v in row.items()} for row in reader]
    return list(reader.fieldnames or []), rows
