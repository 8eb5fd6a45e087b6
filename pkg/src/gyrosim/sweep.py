"""Damping and temperature sweeps over the closed-form responses."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, List, Optional, Sequence, Union

import numpy as np

from .core import (
    DampingModel,
    GyroParams,
    Rate,
    damping_ratio,
    detect_phasor_from_drive,
    drive_response_damped,
    quality_factor,
    total_damping,
)
from .errors import ConfigurationError, DomainError
from .formatting import fmt_full

VARIABLES = ("damping_c", "temperature")
SCALES = ("linear", "logarithmic")
CSV_HEADER = ("value", "xi", "q", "phase_deg", "drive_amp_m", "detect_amp_m")


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    min: float
    max: float
    points: int
    base_params: GyroParams
    scale: str = "linear"
    damping_model: Optional[DampingModel] = None
    rate: Rate = 1.0

    def __post_init__(self) -> None:
        if self.variable not in VARIABLES:
            raise ConfigurationError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        if self.scale not in SCALES:
            raise ConfigurationError(f"scale must be one of {SCALES}, got {self.scale!r}")
        if isinstance(self.points, bool) or not isinstance(self.points, (int, np.integer)) or self.points < 2:
            raise ConfigurationError(f"points must be an integer >= 2, got {self.points!r}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ConfigurationError("min and max must be finite")
        if not self.min < self.max:
            raise ConfigurationError(f"min must be < max, got min={self.min!r} max={self.max!r}")
        if self.variable == "temperature":
            if self.min <= 0.0:
                raise ConfigurationError(f"temperature sweep requires min > 0, got {self.min!r}")
            if self.damping_model is None:
                raise ConfigurationError("temperature sweep requires a damping_model")
        if self.variable == "damping_c" and self.min < 0.0:
            raise ConfigurationError(f"damping sweep requires min >= 0, got {self.min!r}")
        if self.scale == "logarithmic" and self.min <= 0.0:
            raise ConfigurationError(f"logarithmic scale requires min > 0, got {self.min!r}")
        if not math.isfinite(float(self.rate)):
            raise ConfigurationError("rate must be finite")

    def grid(self) -> np.ndarray:
        if self.scale == "linear":
            values = np.linspace(self.min, self.max, self.points)
        else:
            values = np.geomspace(self.min, self.max, self.points)
        # pin endpoints against round-off in geomspace
        values[0], values[-1] = self.min, self.max
        return values


@dataclass(frozen=True)
class SweepRow:
    value: float
    xi: float
    q: Optional[float]
    phase_deg: float
    drive_amp_m: float
    detect_amp_m: float

    def as_tuple(self) -> tuple:
        return (self.value, self.xi, self.q, self.phase_deg, self.drive_amp_m, self.detect_amp_m)


def evaluate_point(value: float, params: GyroParams, rate: Rate) -> SweepRow:
    """One sweep row for a fully specified device (damping already set)."""
    xi = damping_ratio(params.damping, params.mass, params.stiffness)
    drive = drive_response_damped(params)
    detect = detect_phasor_from_drive(drive, rate)
    return SweepRow(
        value=float(value),
        xi=xi,
        q=quality_factor(xi) if xi > 0.0 else None,
        phase_deg=math.degrees(drive.lag),
        drive_amp_m=drive.amplitude,
        detect_amp_m=detect.amplitude,
    )


def run_damping_sweep(spec: SweepSpec) -> List[SweepRow]:
    if spec.variable != "damping_c":
        raise ConfigurationError(f"run_damping_sweep needs variable 'damping_c', got {spec.variable!r}")
    try:
        return [evaluate_point(c, spec.base_params.replace(damping=float(c)), spec.rate) for c in spec.grid()]
    except DomainError as exc:
        raise ConfigurationError(str(exc)) from exc


def run_temperature_sweep(spec: SweepSpec) -> List[SweepRow]:
    if spec.variable != "temperature":
        raise ConfigurationError(f"run_temperature_sweep needs variable 'temperature', got {spec.variable!r}")
    rows = []
    try:
        for temperature in spec.grid():
            c = total_damping(spec.damping_model, float(temperature))
            rows.append(evaluate_point(temperature, spec.base_params.replace(damping=c), spec.rate))
    except DomainError as exc:
        raise ConfigurationError(str(exc)) from exc
    return rows


def run_sweep(spec: SweepSpec) -> List[SweepRow]:
    if spec.variable == "damping_c":
        return run_damping_sweep(spec)
    return run_temperature_sweep(spec)


def _write_rows(rows: Sequence[SweepRow], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(["" if item is None else fmt_full(item) for item in row.as_tuple()])


def write_csv(rows: Sequence[SweepRow], destination: Union[str, Path, IO[str]]) -> None:
    """Write sweep rows as CSV to a path or an open text stream.

    An absent quality factor is written as an empty field.
    """
    if not rows:
        raise DomainError("no rows to write")
    if hasattr(destination, "write"):
        _write_rows(rows, destination)
        return
    path = Path(destination)
    try:
        with path.open("w", newline="") as fh:
            _write_rows(rows, fh)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_csv(source: Union[str, Path, IO[str]]) -> List[SweepRow]:
    if hasattr(source, "read"):
        lines = list(csv.reader(source))
    else:
        with Path(source).open(newline="") as fh:
            lines = list(csv.reader(fh))
    if not lines or tuple(lines[0]) != CSV_HEADER:
        raise DomainError("not a sweep CSV: header mismatch")
    rows = []
    for fields in lines[1:]:
        value, xi, q, phase, drive, detect = fields
        rows.append(
            SweepRow(float(value), float(xi), float(q) if q else None, float(phase), float(drive), float(detect))
        )
    return rows


def rows_to_columns(rows: Iterable[SweepRow]) -> dict:
    """Column-wise float arrays keyed by the CSV header (absent Q as nan)."""
    rows = list(rows)
    return {
        name: np.array([np.nan if getattr(r, name) is None else getattr(r, name) for r in rows], dtype=float)
        for name in CSV_HEADER
    }


__all__ = [
    "SweepSpec",
    "SweepRow",
    "evaluate_point",
    "run_damping_sweep",
    "run_temperature_sweep",
    "run_sweep",
    "write_csv",
    "read_csv",
    "rows_to_columns",
]
