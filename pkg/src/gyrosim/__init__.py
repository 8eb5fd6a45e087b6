"""Lumped-parameter simulator for the MEMS comb-drive linear vibratory gyroscope."""

__version__ = "0.1.0"

from .core import (
    DampingModel,
    DerivedParams,
    GyroParams,
    Phasor,
    RateInput,
    coriolis_acceleration,
    damping_ratio,
    damping_ratio_at_temperature,
    derive,
    detect_phasor_from_drive,
    detect_response_damped,
    detect_response_undamped,
    drive_force_amplitude,
    drive_response_damped,
    drive_response_undamped,
    instantaneous_comb_force,
    natural_frequency,
    net_drive_force,
    phase_lag,
    quality_factor,
    total_damping,
    viscosity_at_temperature,
)
from .errors import ConfigurationError, DomainError, ResonanceError, UndampedError
from .ode import IntegratorConfig, Trajectory, extract_steady_state, integrate_detect, integrate_drive
from .sweep import SweepRow, SweepSpec, run_damping_sweep, run_temperature_sweep, write_csv

__all__ = [
    "DampingModel",
    "DerivedParams",
    "GyroParams",
    "Phasor",
    "RateInput",
    "coriolis_acceleration",
    "damping_ratio",
    "damping_ratio_at_temperature",
    "derive",
    "detect_phasor_from_drive",
    "detect_response_damped",
    "detect_response_undamped",
    "drive_force_amplitude",
    "drive_response_damped",
    "drive_response_undamped",
    "instantaneous_comb_force",
    "natural_frequency",
    "net_drive_force",
    "phase_lag",
    "quality_factor",
    "total_damping",
    "viscosity_at_temperature",
    "ConfigurationError",
    "DomainError",
    "ResonanceError",
    "UndampedError",
    "IntegratorConfig",
    "Trajectory",
    "extract_steady_state",
    "integrate_detect",
    "integrate_drive",
    "SweepRow",
    "SweepSpec",
    "run_damping_sweep",
    "run_temperature_sweep",
    "write_csv",
]
