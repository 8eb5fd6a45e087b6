"""Time-domain integration of the drive and detect motion.

This is the numerical counterpart of :mod:`gyrosim.core`: it never calls
the closed-form responses, so agreement between the two is a real check.
The drive equation ``m x'' + c x' + k x = F sin(w_c t)`` is stepped with
classic fixed-step fourth-order Runge-Kutta; the detect channel is the
cumulative trapezoid integral of ``2 * rate * x``; amplitudes and phases
are recovered by synchronous demodulation over whole drive cycles.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .core import (
    TWO_PI,
    GyroParams,
    Phasor,
    Rate,
    damping_ratio,
    drive_force_amplitude,
    natural_frequency,
)
from .errors import ConfigurationError, DomainError

MIN_STEPS_PER_CYCLE = 20
DEFAULT_STEPS_PER_CYCLE = 200
DEFAULT_MEASURE_CYCLES = 20
SETTLE_BOUNDS = (50, 20000)


def default_settle_cycles(params: GyroParams) -> int:
    """Drive periods needed for the start-up transient to decay by ``e**-10``.

    The homogeneous solution decays as ``exp(-xi w_n t)``; expressed in
    drive periods that is ``10 w_c / (2 pi xi w_n)``, clamped to
    ``SETTLE_BOUNDS``.
    """
    lo, hi = SETTLE_BOUNDS
    xi = damping_ratio(params.damping, params.mass, params.stiffness)
    if xi == 0.0:
        return hi
    wn = natural_frequency(params.mass, params.stiffness)
    cycles = math.ceil(10.0 * params.drive_freq / (TWO_PI * xi * wn))
    return int(min(max(cycles, lo), hi))


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    settle_cycles: int
    measure_cycles: int = DEFAULT_MEASURE_CYCLES
    initial_displacement: float = 0.0
    initial_velocity: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ConfigurationError(f"dt must be > 0, got {self.dt!r}")
        for name in ("settle_cycles", "measure_cycles"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigurationError(f"{name} must be an integer, got {value!r}")
        if self.settle_cycles < 0:
            raise ConfigurationError(f"settle_cycles must be >= 0, got {self.settle_cycles!r}")
        if self.measure_cycles < 1:
            raise ConfigurationError(f"measure_cycles must be >= 1, got {self.measure_cycles!r}")
        for name in ("initial_displacement", "initial_velocity"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")

    @classmethod
    def for_params(
        cls,
        params: GyroParams,
        steps_per_cycle: int = DEFAULT_STEPS_PER_CYCLE,
        measure_cycles: int = DEFAULT_MEASURE_CYCLES,
        settle_cycles: Optional[int] = None,
        **initial,
    ) -> "IntegratorConfig":
        """Config with a whole number of steps per drive period."""
        if settle_cycles is None:
            settle_cycles = default_settle_cycles(params)
        return cls(
            dt=TWO_PI / params.drive_freq / steps_per_cycle,
            settle_cycles=settle_cycles,
            measure_cycles=measure_cycles,
            **initial,
        )

    def replace(self, **changes) -> "IntegratorConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled drive (and optionally detect) motion.

    ``drive_freq`` and ``measure_cycles`` describe the trailing window that
    is treated as steady state.
    """

    t0: float
    dt: float
    x: np.ndarray
    v: np.ndarray
    drive_freq: float
    measure_cycles: int
    z: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if len(self.x) < 2 or len(self.x) != len(self.v):
            raise DomainError("x and v must have equal length >= 2")
        if self.z is not None and len(self.z) != len(self.x):
            raise DomainError("z must have the same length as x")

    def __len__(self) -> int:
        return len(self.x)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.x))

    def window_samples(self, cycles: Optional[float] = None) -> int:
        """Number of trailing samples spanning ``cycles`` drive periods."""
        if cycles is None:
            cycles = self.measure_cycles
        return int(round(cycles * TWO_PI / self.drive_freq / self.dt))


def integrate_drive(params: GyroParams, config: IntegratorConfig) -> Trajectory:
    """RK4 solution of the drive equation over settle + measure cycles."""
    period = TWO_PI / params.drive_freq
    if not config.dt < period / MIN_STEPS_PER_CYCLE:
        raise ConfigurationError(
            f"dt={config.dt!r} too large: need at least {MIN_STEPS_PER_CYCLE} steps per "
            f"drive period ({period!r} s)"
        )
    span = (config.settle_cycles + config.measure_cycles) * period
    steps = span / config.dt
    n_steps = int(round(steps)) if abs(steps - round(steps)) < 1e-6 else int(math.ceil(steps))

    inv_m = 1.0 / params.mass
    force = drive_force_amplitude(params) * inv_m
    c = params.damping * inv_m
    k = params.stiffness * inv_m
    w = params.drive_freq
    h = config.dt
    half = 0.5 * h
    sin = math.sin

    xs = np.empty(n_steps + 1)
    vs = np.empty(n_steps + 1)
    x = float(config.initial_displacement)
    v = float(config.initial_velocity)
    xs[0] = x
    vs[0] = v
    for i in range(n_steps):
        t = i * h
        f0 = force * sin(w * t)
        fh = force * sin(w * (t + half))
        f1 = force * sin(w * (t + h))

        k1x = v
        k1v = f0 - c * v - k * x
        x2 = x + half * k1x
        v2 = v + half * k1v
        k2x = v2
        k2v = fh - c * v2 - k * x2
        x3 = x + half * k2x
        v3 = v + half * k2v
        k3x = v3
        k3v = fh - c * v3 - k * x3
        x4 = x + h * k3x
        v4 = v + h * k3v
        k4x = v4
        k4v = f1 - c * v4 - k * x4

        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        xs[i + 1] = x
        vs[i + 1] = v

    xs.flags.writeable = False
    vs.flags.writeable = False
    return Trajectory(0.0, h, xs, vs, params.drive_freq, config.measure_cycles)


def integrate_detect(traj: Trajectory, rate: Rate) -> Trajectory:
    """Fill ``z`` with the zero-mean running integral of ``2 * rate * x``.

    The mean is taken over the trajectory's trailing measurement window.
    """
    if len(traj.x) < 2:
        raise DomainError("need at least 2 samples to integrate")
    z = cumulative_trapezoid(2.0 * float(rate) * np.asarray(traj.x), dx=traj.dt, initial=0.0)
    n = min(max(traj.window_samples(), 1), len(z))
    z -= z[-n:].mean()
    z.flags.writeable = False
    return dataclasses.replace(traj, z=z)


def extract_steady_state(
    traj: Trajectory,
    drive_freq: Optional[float] = None,
    window_cycles: Optional[float] = None,
    signal: str = "x",
) -> Phasor:
    """Synchronous demodulation of the trailing ``window_cycles`` periods.

    Returns the phasor of the first harmonic at ``drive_freq`` of the chosen
    signal (``"x"``, ``"v"`` or ``"z"``).  Exact for a pure sinusoid when
    the window holds a whole number of samples per period.
    """
    if drive_freq is None:
        drive_freq = traj.drive_freq
    if window_cycles is None:
        window_cycles = traj.measure_cycles
    if not drive_freq > 0.0 or not window_cycles > 0:
        raise DomainError("drive_freq and window_cycles must be > 0")
    samples = getattr(traj, signal)
    if samples is None:
        raise DomainError(f"trajectory has no {signal!r} samples")
    n = int(round(window_cycles * TWO_PI / drive_freq / traj.dt))
    if n < 2 or n > len(samples):
        raise DomainError(
            f"window of {window_cycles} cycles ({n} samples) does not fit a trajectory "
            f"of {len(samples)} samples"
        )
    t = traj.t[-n:]
    s = np.asarray(samples[-n:])
    in_phase = np.mean(s * np.sin(drive_freq * t))
    quadrature = np.mean(s * np.cos(drive_freq * t))
    return Phasor(2.0 * math.hypot(in_phase, quadrature), math.atan2(quadrature, in_phase), drive_freq)
