"""Convergence and spectral experiments producing CSV tables.

Tables are lists of rows; :func:`write_csv` formats reals in scientific
notation with six significant digits so that identical runs give
byte-identical files.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .assembly import Formulation, HTMethod, build_system, eoc, l2_error, solve
from .cases import get_case
from .mesh import ProblemGeometry, uniform_mesh
from .spectral import figure1_sweep

logger = logging.getLogger(__name__)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ConvergenceRow",
    "run_convergence",
    "run_spectral",
    "convergence_table",
    "spectral_table",
    "format_real",
    "write_csv",
    "parse_levels",
    "parse_grid",
]

CASES = ("smooth", "singular", "traveling")
CONVERGENCE_HEADER = ("level", "N_total", "error_l2", "eoc")
SPECTRAL_HEADER = ("T", "sqrt_lambda_max", "conjectured", "abs_diff")


class ConfigError(ValueError):
    """Invalid experiment parameters."""


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    case: str = "smooth"
    formulation: str = "ht"
    L: float = 3.0
    T: float = 6.0
    level_range: tuple[int, int] = (3, 8)
    T_grid: tuple[float, ...] = ()
    m: int = 2000
    kmax_factor: int = 8
    output_path: str = "-"
    method: str = "kernel"

    def __post_init__(self):
        if self.command not in ("convergence", "spectral", "verify"):
            raise ConfigError(f"unknown command {self.command!r}")
        if self.case not in CASES:
            raise ConfigError(f"unknown case {self.case!r}")
        try:
            Formulation(self.formulation)
            HTMethod(self.method)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not (math.isfinite(self.L) and self.L > 0.0):
            raise ConfigError(f"L must be positive, got {self.L}")
        if self.command == "convergence" and not (math.isfinite(self.T) and self.T > 0.0):
            raise ConfigError(f"T must be positive, got {self.T}")
        lo, hi = self.level_range
        if lo < 0 or hi < lo:
            raise ConfigError(f"invalid level range {lo}:{hi}")
        if any(not (math.isfinite(t) and t > 0.0) for t in self.T_grid):
            raise ConfigError("T values must be positive")
        if self.m < 1 or self.kmax_factor < 1:
            raise ConfigError("m and kmax-factor must be positive")


def parse_levels(text: str) -> tuple[int, int]:
    """``"a:b"`` (or a single level ``"a"``) to an inclusive range."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise ConfigError(f"levels must look like a:b, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise ConfigError(f"invalid level range {text!r}")
    return lo, hi


def parse_grid(text: str) -> tuple[float, ...]:
    """``"a"``, ``"a:b"`` or ``"a:b:step"`` to an inclusive grid (default step 1)."""
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"grid must look like a:b[:step], got {text!r}") from None
    if len(vals) == 1:
        return (vals[0],)
    if len(vals) not in (2, 3):
        raise ConfigError(f"grid must look like a:b[:step], got {text!r}")
    a, b = vals[0], vals[1]
    step = vals[2] if len(vals) == 3 else 1.0
    if not (step > 0.0) or b < a:
        raise ConfigError(f"invalid grid {text!r}")
    n = int(math.floor((b - a) / step + 1e-9))
    return tuple(float(np.round(a + i * step, 12)) for i in range(n + 1))


@dataclass(frozen=True)
class ConvergenceRow:
    level: int
    N_total: int
    error_l2: float
    eoc: float | None


def run_convergence(cfg: ExperimentConfig) -> list[ConvergenceRow]:
    """Uniform refinement with ``N_0 = N_L = 2^(level + 1)``."""
    geometry = ProblemGeometry(cfg.L, cfg.T)
    case = get_case(cfg.case, geometry)
    lo, hi = cfg.level_range
    levels = list(range(lo, hi + 1))
    errors = []
    for level in levels:
        mesh = uniform_mesh(geometry, 2 ** (level + 1))
        system = build_system(mesh, case, cfg.formulation, cfg.method)
        w_h = solve(system)
        errors.append(l2_error(w_h, case))
        logger.info("level %d: %d unknowns, error %.6e", level, mesh.ndof, errors[-1])
    rates = [None] + [float(r) for r in eoc(errors)] if len(errors) > 1 else [None]
    return [
        ConvergenceRow(level, 2 * 2 ** (level + 1), err, rate) for level, err, rate in zip(levels, errors, rates)
    ]


def run_spectral(cfg: ExperimentConfig):
    return figure1_sweep(cfg.L, cfg.T_grid, cfg.m, kmax_factor=cfg.kmax_factor)


def format_real(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.5e}"


def convergence_table(rows: Iterable[ConvergenceRow]) -> list[list[str]]:
    out = [list(CONVERGENCE_HEADER)]
    for r in rows:
        out.append([str(r.level), str(r.N_total), format_real(r.error_l2), format_real(r.eoc)])
    return out


def spectral_table(rows) -> list[list[str]]:
    out = [list(SPECTRAL_HEADER)]
    for r in rows:
        out.append([format_real(r.T), format_real(r.sqrt_lambda_max), format_real(r.conjectured), format_real(r.abs_diff)])
    return out


def write_csv(table: Sequence[Sequence[str]], path: str = "-", stream=None) -> str:
    """Write rows as UTF-8 CSV with LF line endings; returns the text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(table)
    text = buf.getvalue()
    if path == "-":
        if stream is not None:
            stream.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
