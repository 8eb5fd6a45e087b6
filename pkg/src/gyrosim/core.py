"""Closed-form physics of the comb-drive linear vibratory gyroscope.

The proof mass is driven along x by two opposing comb banks and oscillates
at the drive frequency.  A rotation about y couples the drive velocity into
a Coriolis acceleration along z, which is read out as the detect motion.

Sign and phase conventions
--------------------------
A :class:`Phasor` ``p`` stands for the steady-state signal
``p.amplitude * sin(p.freq * t + p.phase)`` with ``amplitude >= 0`` and
``phase`` in ``[0, 2*pi)``.  The phase *lag* of the drive displacement
behind the force ``F sin(w_c t)`` is ``Phi``, so a drive phasor carries
``phase = -Phi (mod 2*pi)``.

The detect displacement is the zero-mean antiderivative of
``2 * rate * x(t)``: its amplitude is ``2 |rate| X / w_c`` and it lags the
drive displacement by a quarter period (half a period more when the rate
is negative).

All functions are pure; all dataclasses are frozen.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError, ResonanceError, UndampedError

TWO_PI = 2.0 * math.pi
VACUUM_PERMITTIVITY = 8.85e-12  # F/m


def normalize_phase(phase: float) -> float:
    """Wrap an angle into [0, 2*pi)."""
    wrapped = math.fmod(phase, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod of a tiny negative angle can round up to exactly 2*pi
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


def _check_positive(name: str, value: float) -> None:
    _check_finite(name, value)
    if value <= 0.0:
        raise DomainError(f"{name} must be > 0, got {value!r}")


def _check_non_negative(name: str, value: float) -> None:
    _check_finite(name, value)
    if value < 0.0:
        raise DomainError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class GyroParams:
    """Physical constants of the device, all in SI base units.

    ``drive_freq`` is an angular frequency (rad/s).  ``damping`` is the
    total viscous damping coefficient acting on the drive axis.
    """

    mass: float
    stiffness: float
    damping: float
    comb_count: int
    overlap_width: float
    gap: float
    rel_permittivity: float
    bias_voltage: float
    drive_voltage: float
    drive_freq: float
    vacuum_permittivity: float = VACUUM_PERMITTIVITY

    def __post_init__(self) -> None:
        _check_positive("mass", self.mass)
        _check_positive("stiffness", self.stiffness)
        _check_non_negative("damping", self.damping)
        if isinstance(self.comb_count, bool) or not isinstance(self.comb_count, (int, np.integer)):
            raise DomainError(f"comb_count must be an integer, got {self.comb_count!r}")
        if self.comb_count < 1:
            raise DomainError(f"comb_count must be >= 1, got {self.comb_count!r}")
        _check_positive("overlap_width", self.overlap_width)
        _check_positive("gap", self.gap)
        _check_finite("rel_permittivity", self.rel_permittivity)
        if self.rel_permittivity < 1.0:
            raise DomainError(f"rel_permittivity must be >= 1, got {self.rel_permittivity!r}")
        _check_positive("vacuum_permittivity", self.vacuum_permittivity)
        _check_non_negative("bias_voltage", self.bias_voltage)
        _check_non_negative("drive_voltage", self.drive_voltage)
        _check_positive("drive_freq", self.drive_freq)

    def replace(self, **changes) -> "GyroParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class DerivedParams:
    natural_freq: float
    damping_ratio: float
    quality_factor: Optional[float]
    force_amplitude: float


@dataclass(frozen=True)
class DampingModel:
    """Temperature-dependent damping: ``c(T) = c0 + g * mu0 * (T/T0)**n``.

    ``geometry_factor`` (metres) turns a gas viscosity into a damping
    coefficient.  With ``geometry_factor = 1`` the viscosity is added to
    ``base_damping`` numerically as is.
    """

    base_damping: float
    ref_viscosity: float
    ref_temperature: float
    viscosity_exponent: float
    geometry_factor: float = 1.0

    def __post_init__(self) -> None:
        _check_non_negative("base_damping", self.base_damping)
        _check_non_negative("ref_viscosity", self.ref_viscosity)
        _check_positive("ref_temperature", self.ref_temperature)
        _check_finite("viscosity_exponent", self.viscosity_exponent)
        _check_positive("geometry_factor", self.geometry_factor)

    def replace(self, **changes) -> "DampingModel":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class Phasor:
    """Steady-state sinusoid ``amplitude * sin(freq * t + phase)``."""

    amplitude: float
    phase: float
    freq: float

    def __post_init__(self) -> None:
        _check_non_negative("amplitude", self.amplitude)
        _check_finite("phase", self.phase)
        _check_positive("freq", self.freq)
        object.__setattr__(self, "phase", normalize_phase(self.phase))

    @property
    def lag(self) -> float:
        """Phase lag behind ``sin(freq * t)``, in [0, 2*pi)."""
        return normalize_phase(-self.phase)

    def __call__(self, t):
        return self.amplitude * np.sin(self.freq * np.asarray(t) + self.phase)


@dataclass(frozen=True)
class RateInput:
    """Input angular rate about the y axis, rad/s."""

    rate: float

    def __post_init__(self) -> None:
        _check_finite("rate", self.rate)

    def __float__(self) -> float:
        return float(self.rate)


Rate = Union[float, RateInput]


# ---------------------------------------------------------------------------
# modal parameters


def natural_frequency(mass: float, stiffness: float) -> float:
    """Undamped natural angular frequency ``sqrt(k/m)`` in rad/s."""
    _check_positive("mass", mass)
    _check_positive("stiffness", stiffness)
    return math.sqrt(stiffness / mass)


def damping_ratio(damping: float, mass: float, stiffness: float) -> float:
    """Dimensionless damping ratio ``c / (2 sqrt(m k))``."""
    _check_positive("mass", mass)
    _check_positive("stiffness", stiffness)
    _check_non_negative("damping", damping)
    return damping / (2.0 * math.sqrt(mass * stiffness))


def quality_factor(damping_ratio: float) -> float:
    """``Q = 1 / (2 xi)``; raises :class:`UndampedError` for ``xi == 0``."""
    _check_finite("damping_ratio", damping_ratio)
    if damping_ratio < 0.0:
        raise DomainError(f"damping_ratio must be >= 0, got {damping_ratio!r}")
    if damping_ratio == 0.0:
        raise UndampedError("undamped: quality factor is unbounded for zero damping")
    # overflows to inf for subnormal damping ratios
    return 1.0 / (2.0 * damping_ratio)


def derive(params: GyroParams) -> DerivedParams:
    xi = damping_ratio(params.damping, params.mass, params.stiffness)
    return DerivedParams(
        natural_freq=natural_frequency(params.mass, params.stiffness),
        damping_ratio=xi,
        quality_factor=quality_factor(xi) if xi > 0.0 else None,
        force_amplitude=drive_force_amplitude(params),
    )


# ---------------------------------------------------------------------------
# electrostatic drive


def _comb_prefactor(params: GyroParams) -> float:
    return (
        (2 * params.comb_count - 1)
        * params.rel_permittivity
        * params.vacuum_permittivity
        * params.overlap_width
    )


def drive_force_amplitude(params: GyroParams) -> float:
    """Net push-pull force amplitude ``2(2n-1) eps_r eps_0 w V0 Va / d``."""
    return 2.0 * _comb_prefactor(params) * params.bias_voltage * params.drive_voltage / params.gap


def instantaneous_comb_force(params: GyroParams, time, polarity) -> float:
    """Attractive force of one comb bank at ``time``.

    The bank is biased with ``V = V0 + Va sin(w_c t)`` for ``polarity`` ``+``
    (or ``+1``) and ``V = V0 - Va sin(w_c t)`` for ``-`` (or ``-1``).
    Accepts scalar or array ``time``.
    """
    if polarity in ("+", 1):
        sign = 1.0
    elif polarity in ("-", -1):
        sign = -1.0
    else:
        raise DomainError(f"polarity must be '+' or '-', got {polarity!r}")
    voltage = params.bias_voltage + sign * params.drive_voltage * np.sin(params.drive_freq * np.asarray(time))
    return _comb_prefactor(params) * voltage**2 / (2.0 * params.gap)


def net_drive_force(params: GyroParams, time):
    """Difference of the two opposing comb banks, ``F sin(w_c t)``.

    The constant ``V0**2`` and second-harmonic ``Va**2 sin**2`` terms of the
    two banks cancel; the simplified form is returned to avoid the
    cancellation error of subtracting two nearly equal forces.
    """
    return drive_force_amplitude(params) * np.sin(params.drive_freq * np.asarray(time))


# ---------------------------------------------------------------------------
# drive-mode response


def phase_lag(natural_freq: float, drive_freq: float, quality_factor: float) -> float:
    """Lag of the drive displacement behind the force, in (0, pi).

    Uses the two-argument arctangent so that the branch through resonance
    is continuous and the value at ``drive_freq == natural_freq`` is
    exactly ``pi/2``.
    """
    _check_positive("natural_freq", natural_freq)
    _check_positive("drive_freq", drive_freq)
    if not quality_factor > 0.0:
        raise DomainError(f"quality_factor must be > 0, got {quality_factor!r}")
    detuning = natural_freq * natural_freq - drive_freq * drive_freq
    if detuning == 0.0:
        return 0.5 * math.pi
    return math.atan2(natural_freq * drive_freq / quality_factor, detuning)


def drive_response_undamped(params: GyroParams) -> Phasor:
    """Vacuum steady state: damping in ``params`` is ignored."""
    wn = natural_frequency(params.mass, params.stiffness)
    wc = params.drive_freq
    detuning = wn * wn - wc * wc
    if detuning == 0.0:
        raise ResonanceError("resonance singularity: undamped system driven at its natural frequency")
    amplitude = drive_force_amplitude(params) / (params.mass * detuning)
    return Phasor(abs(amplitude), 0.0 if wc < wn else math.pi, wc)


def drive_response_damped(params: GyroParams) -> Phasor:
    """Damped steady state of ``m x'' + c x' + k x = F sin(w_c t)``."""
    wn = natural_frequency(params.mass, params.stiffness)
    xi = damping_ratio(params.damping, params.mass, params.stiffness)
    wc = params.drive_freq
    detuning = wn * wn - wc * wc
    if xi == 0.0:
        if detuning == 0.0:
            raise ResonanceError("resonance singularity: undamped system driven at its natural frequency")
        lag = 0.0 if wc < wn else math.pi
    else:
        lag = phase_lag(wn, wc, quality_factor(xi))
    denominator = params.mass * math.hypot(detuning, 2.0 * xi * wn * wc)
    amplitude = drive_force_amplitude(params) / denominator if denominator > 0.0 else math.inf
    if math.isinf(amplitude):
        raise ResonanceError("resonance singularity: damping too small to bound the response")
    return Phasor(amplitude, -lag, wc)


# ---------------------------------------------------------------------------
# Coriolis coupling and detect-mode response


def coriolis_acceleration(rate: Rate, velocity):
    """Coriolis acceleration ``2 * rate * v`` along the detect axis."""
    return 2.0 * float(rate) * velocity


def detect_phasor_from_drive(drive: Phasor, rate: Rate) -> Phasor:
    rate = float(rate)
    _check_finite("rate", rate)
    amplitude = 2.0 * abs(rate) * drive.amplitude / drive.freq
    phase = drive.phase - 0.5 * math.pi
    if rate < 0.0:
        phase += math.pi
    return Phasor(amplitude, phase, drive.freq)


def detect_response_undamped(params: GyroParams, rate: Rate) -> Phasor:
    return detect_phasor_from_drive(drive_response_undamped(params), rate)


def detect_response_damped(params: GyroParams, rate: Rate) -> Phasor:
    return detect_phasor_from_drive(drive_response_damped(params), rate)


# ---------------------------------------------------------------------------
# temperature-dependent gas damping


def viscosity_at_temperature(model: DampingModel, temperature: float) -> float:
    """Power-law gas viscosity ``mu0 * (T/T0)**n`` in Pa s."""
    _check_positive("temperature", temperature)
    return model.ref_viscosity * (temperature / model.ref_temperature) ** model.viscosity_exponent


def total_damping(model: DampingModel, temperature: float) -> float:
    return model.base_damping + model.geometry_factor * viscosity_at_temperature(model, temperature)


def damping_ratio_at_temperature(
    model: DampingModel, mass: float, stiffness: float, temperature: float
) -> float:
    return damping_ratio(total_damping(model, temperature), mass, stiffness)
