"""Command-line front end.

Subcommands::

    gyrosim derive   --config CFG
    gyrosim respond  --config CFG --freq-min HZ --freq-max HZ --points N [--out CSV]
    gyrosim simulate --config CFG [--out CSV]
    gyrosim sweep    --config CFG --variable {damping,temperature} --min A --max B
                     --points N [--scale {linear,log}] [--out CSV]

Every subcommand accepts repeated ``--params key=value`` overrides applied
after the file is loaded.  Exit status: 0 on success, 2 for configuration
or validation errors, 1 for runtime and I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from contextlib import contextmanager
from typing import Iterator, List, Optional, TextIO

import numpy as np

from . import __version__
from .config import load_config
from .core import derive, detect_phasor_from_drive, drive_response_damped
from .errors import ConfigurationError, DomainError, ResonanceError
from .formatting import fmt_full, fmt_sci
from .ode import extract_steady_state, integrate_detect, integrate_drive
from .sweep import SweepSpec, run_sweep, write_csv

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2

RESPOND_HEADER = ("freq_hz", "drive_amp_m", "phase_deg", "detect_amp_m")
SIMULATE_HEADER = ("t_s", "x_m", "v_mps", "z_m")
_VARIABLES = {"damping": "damping_c", "damping_c": "damping_c", "temperature": "temperature"}
_SCALES = {"linear": "linear", "log": "logarithmic", "logarithmic": "logarithmic"}


@contextmanager
def _open_out(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    with fh:
        yield fh


def cmd_derive(args: argparse.Namespace) -> int:
    config = load_config(args.config, args.params)
    d = derive(config.gyro)
    lines = [
        ("omega_n", fmt_sci(d.natural_freq)),
        ("f_n", fmt_sci(d.natural_freq / (2.0 * math.pi))),
        ("xi", fmt_sci(d.damping_ratio)),
        ("Q", "undamped" if d.quality_factor is None else fmt_sci(d.quality_factor)),
        ("F", fmt_sci(d.force_amplitude)),
    ]
    for name, value in lines:
        print(f"{name} = {value}")
    return EXIT_OK


def cmd_respond(args: argparse.Namespace) -> int:
    if not 0.0 < args.freq_min < args.freq_max:
        raise ConfigurationError(
            f"need 0 < freq-min < freq-max, got freq-min={args.freq_min!r} freq-max={args.freq_max!r}"
        )
    if args.points < 2:
        raise ConfigurationError(f"points must be >= 2, got {args.points!r}")
    config = load_config(args.config, args.params)
    with _open_out(args.out) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(RESPOND_HEADER)
        for f in np.linspace(args.freq_min, args.freq_max, args.points):
            params = config.gyro.replace(drive_freq=2.0 * math.pi * float(f))
            try:
                drive = drive_response_damped(params)
            except ResonanceError:
                print(f"gyrosim: undamped resonance at {fmt_full(f)} Hz: response unbounded", file=sys.stderr)
                writer.writerow([fmt_full(f), "nan", "nan", "nan"])
                continue
            detect = detect_phasor_from_drive(drive, config.rate)
            writer.writerow(
                [fmt_full(f), fmt_full(drive.amplitude), fmt_full(math.degrees(drive.lag)), fmt_full(detect.amplitude)]
            )
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = load_config(args.config, args.params)
    traj = integrate_detect(integrate_drive(config.gyro, config.integrator), config.rate)
    drive = extract_steady_state(traj)
    detect = extract_steady_state(traj, signal="z")
    with _open_out(args.out) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(SIMULATE_HEADER)
        for row in zip(traj.t, traj.x, traj.v, traj.z):
            writer.writerow([fmt_full(item) for item in row])
    print(
        f"steady_state drive_amp_m = {fmt_sci(drive.amplitude)} "
        f"phase_deg = {fmt_sci(math.degrees(drive.lag))} "
        f"detect_amp_m = {fmt_sci(detect.amplitude)}"
    )
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config, args.params)
    spec = SweepSpec(
        variable=_VARIABLES[args.variable],
        min=args.min,
        max=args.max,
        points=args.points,
        scale=_SCALES[args.scale],
        base_params=config.gyro,
        damping_model=config.damping_model,
        rate=config.rate,
    )
    rows = run_sweep(spec)
    with _open_out(args.out) as out:
        write_csv(rows, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gyrosim", description="MEMS comb-drive vibratory gyroscope simulator"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON device configuration")
    common.add_argument(
        "--params",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config field, e.g. gyro.damping=2e-6 (repeatable)",
    )

    p = sub.add_parser("derive", parents=[common], help="print w_n [rad/s], f_n [Hz], xi, Q, F [N]")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("respond", parents=[common], help="closed-form frequency response CSV")
    p.add_argument("--freq-min", type=float, required=True, help="Hz")
    p.add_argument("--freq-max", type=float, required=True, help="Hz")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_respond)

    p = sub.add_parser("simulate", parents=[common], help="RK4 time-domain trajectory CSV")
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", parents=[common], help="damping or temperature sweep CSV")
    p.add_argument("--variable", choices=sorted(_VARIABLES), required=True)
    p.add_argument("--min", type=float, required=True, help="N s/m or K")
    p.add_argument("--max", type=float, required=True, help="N s/m or K")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--scale", choices=sorted(_SCALES), default="linear")
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, DomainError) as exc:
        print(f"gyrosim: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ArithmeticError, RuntimeError) as exc:
        print(f"gyrosim: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
