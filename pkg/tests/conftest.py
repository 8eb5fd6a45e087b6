import math
from pathlib import Path

import pytest

from gyrosim.core import GyroParams

REPO = Path(__file__).resolve().parent.parent
CONFIGS = REPO / "configs"

_acceptance_lines = []


def build_params(mass=1.0, stiffness=1.0, damping=0.0, force=1.0, drive_freq=1.0, xi=None):
    """Device with the requested force amplitude ``F`` (V0 = Va = w = d = n = 1)."""
    if xi is not None:
        damping = 2.0 * xi * math.sqrt(mass * stiffness)
    return GyroParams(
        mass=mass,
        stiffness=stiffness,
        damping=damping,
        comb_count=1,
        overlap_width=1.0,
        gap=1.0,
        rel_permittivity=1.0,
        vacuum_permittivity=force / 2.0 if force > 0 else 1.0,
        bias_voltage=1.0,
        drive_voltage=1.0 if force > 0 else 0.0,
        drive_freq=drive_freq,
    )


@pytest.fixture(scope="session")
def make_params():
    return build_params


@pytest.fixture(scope="session")
def configs_dir():
    return CONFIGS


@pytest.fixture
def acceptance_report():
    def report(criterion, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
        _acceptance_lines.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
