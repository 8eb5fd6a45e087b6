"""JSON device configuration: schema, defaults, strict loading and overrides.

A configuration document has up to four top-level entries::

    {
      "gyro":          {GyroParams fields},
      "damping_model": {DampingModel fields},
      "rate":          1.0,
      "integrator":    {IntegratorConfig fields}
    }

Every section and every field is optional and falls back to
:data:`DEFAULTS`.  In ``integrator``, ``dt`` and ``settle_cycles`` default
to ``null``, meaning "derive from the device": 200 steps per drive period
and :func:`gyrosim.ode.default_settle_cycles`.  Unknown keys are errors.

Default device
--------------
Comb overlap width 20 um and gap 3 um; natural frequency 500 Hz, driven at
500 Hz.  The mass (1e-8 kg) is a modelling choice, and the stiffness is
``m (2 pi 500)**2`` written out so that ``sqrt(k/m)`` equals the drive
frequency bit for bit.  Comb count, voltages, damping, rate and the gas
model constants are likewise illustrative choices, not measured values.
The 200 um comb length does not enter the lumped force model.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

from .core import DampingModel, GyroParams, RateInput
from .errors import ConfigurationError, DomainError
from .ode import DEFAULT_STEPS_PER_CYCLE, IntegratorConfig, default_settle_cycles

DEFAULTS: Dict[str, Any] = {
    "gyro": {
        "mass": 1e-8,
        "stiffness": 0.09869604401089356,
        "damping": 1e-6,
        "comb_count": 10,
        "overlap_width": 20e-6,
        "gap": 3e-6,
        "rel_permittivity": 1.0,
        "vacuum_permittivity": 8.85e-12,
        "bias_voltage": 10.0,
        "drive_voltage": 5.0,
        "drive_freq": 2.0 * math.pi * 500.0,
    },
    "damping_model": {
        "base_damping": 1e-7,
        "ref_viscosity": 1.8e-5,
        "ref_temperature": 300.0,
        "viscosity_exponent": 0.7,
        "geometry_factor": 1e-2,
    },
    "rate": 1.0,
    "integrator": {
        "dt": None,
        "settle_cycles": None,
        "measure_cycles": 20,
        "initial_displacement": 0.0,
        "initial_velocity": 0.0,
    },
}

_INTEGER_FIELDS = {"comb_count", "settle_cycles", "measure_cycles"}


@dataclass(frozen=True)
class Config:
    gyro: GyroParams
    damping_model: DampingModel
    rate: float
    integrator: IntegratorConfig


def _coerce(path: str, name: str, value: Any) -> Any:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{path} must be a number, got {value!r}")
    if name in _INTEGER_FIELDS:
        if isinstance(value, float):
            if not value.is_integer():
                raise ConfigurationError(f"{path} must be an integer, got {value!r}")
            value = int(value)
        return value
    return float(value)


def _merge(raw: Dict[str, Any]) -> Dict[str, Any]:
    if not isinstance(raw, dict):
        raise ConfigurationError("configuration must be a JSON object")
    merged = copy.deepcopy(DEFAULTS)
    for key, value in raw.items():
        if key not in DEFAULTS:
            raise ConfigurationError(f"unknown key {key!r}")
        if key == "rate":
            merged["rate"] = value
            continue
        if not isinstance(value, dict):
            raise ConfigurationError(f"{key} must be an object")
        for field, item in value.items():
            if field not in DEFAULTS[key]:
                raise ConfigurationError(f"unknown key {key}.{field!r}")
            merged[key][field] = item
    return merged


def build_config(raw: Dict[str, Any]) -> Config:
    """Validate a parsed document (already merged or partial) into a Config."""
    merged = _merge(raw)
    sections = {}
    for key in ("gyro", "damping_model", "integrator"):
        values = {}
        for field, item in merged[key].items():
            if item is None and key == "integrator" and field in ("dt", "settle_cycles"):
                continue
            values[field] = _coerce(f"{key}.{field}", field, item)
        sections[key] = values

    try:
        gyro = GyroParams(**sections["gyro"])
    except DomainError as exc:
        raise ConfigurationError(f"gyro.{exc}") from exc
    try:
        damping_model = DampingModel(**sections["damping_model"])
    except DomainError as exc:
        raise ConfigurationError(f"damping_model.{exc}") from exc
    rate = _coerce("rate", "rate", merged["rate"])
    try:
        RateInput(rate)
    except DomainError as exc:
        raise ConfigurationError(str(exc)) from exc

    integ = sections["integrator"]
    integ.setdefault("dt", 2.0 * math.pi / gyro.drive_freq / DEFAULT_STEPS_PER_CYCLE)
    integ.setdefault("settle_cycles", default_settle_cycles(gyro))
    try:
        integrator = IntegratorConfig(**integ)
    except ConfigurationError as exc:
        raise ConfigurationError(f"integrator.{exc}") from exc
    return Config(gyro, damping_model, rate, integrator)


def parse_override(text: str) -> tuple:
    """Split ``section.field=value`` (or ``rate=value``) into (key path, value)."""
    key, sep, value_text = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigurationError(f"override must look like key=value, got {text!r}")
    try:
        value = json.loads(value_text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"override {key}: cannot parse value {value_text!r}") from exc
    parts = key.split(".")
    if len(parts) == 1:
        # bare field name: accept when it names exactly one section field
        if parts[0] in DEFAULTS:
            return (parts[0],), value
        owners = [s for s, fields in DEFAULTS.items() if isinstance(fields, dict) and parts[0] in fields]
        if len(owners) != 1:
            raise ConfigurationError(f"unknown key {key!r}")
        return (owners[0], parts[0]), value
    if len(parts) != 2:
        raise ConfigurationError(f"unknown key {key!r}")
    return tuple(parts), value


def apply_overrides(raw: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    raw = copy.deepcopy(raw)
    for text in overrides:
        path, value = parse_override(text)
        if len(path) == 1:
            raw[path[0]] = value
        else:
            section = raw.setdefault(path[0], {})
            if not isinstance(section, dict):
                raise ConfigurationError(f"{path[0]} must be an object")
            section[path[1]] = value
    return raw


def load_config(path: Union[str, Path], overrides: Optional[Iterable[str]] = None) -> Config:
    """Read, merge with defaults, apply ``key=value`` overrides, validate."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path}: configuration must be a JSON object")
    return build_config(apply_overrides(raw, overrides or ()))


def default_config() -> Config:
    return build_config({})


def config_to_dict(config: Config) -> Dict[str, Any]:
    g, d, i = config.gyro, config.damping_model, config.integrator
    return {
        "gyro": {name: getattr(g, name) for name in DEFAULTS["gyro"]},
        "damping_model": {name: getattr(d, name) for name in DEFAULTS["damping_model"]},
        "rate": config.rate,
        "integrator": {name: getattr(i, name) for name in DEFAULTS["integrator"]},
    }
