import csv
import io
import math
import subprocess
import sys

import numpy as np
import pytest

from gyrosim.calibration import load_calibration
from gyrosim.cli import main
from gyrosim.config import default_config


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    return list(csv.reader(io.StringIO(text)))


@pytest.fixture
def default_cfg(configs_dir):
    return str(configs_dir / "default.json")


class TestDerive:
    def test_default(self, capsys, default_cfg):
        code, out, _ = run(capsys, "derive", "--config", default_cfg)
        assert code == 0
        lines = out.splitlines()
        assert "f_n = 5.000000e2" in lines
        assert [line.split(" = ")[0] for line in lines] == ["omega_n", "f_n", "xi", "Q", "F"]
        values = dict(line.split(" = ") for line in lines)
        assert float(values["omega_n"]) == pytest.approx(2 * math.pi * 500, rel=1e-6)
        assert float(values["Q"]) * 2 * float(values["xi"]) == pytest.approx(1.0, rel=1e-6)

    def test_undamped(self, capsys, default_cfg):
        code, out, _ = run(capsys, "derive", "--config", default_cfg, "--params", "gyro.damping=0")
        assert code == 0
        assert "Q = undamped" in out.splitlines()

    def test_negative_mass(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text('{"gyro": {"mass": -1e-8}}')
        code, _, err = run(capsys, "derive", "--config", str(cfg))
        assert code == 2
        assert "mass" in err

    def test_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text('{"gyro": {"stifness": 1.0}}')
        code, _, err = run(capsys, "derive", "--config", str(cfg))
        assert code == 2 and "stifness" in err

    def test_config_required(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["derive"])
        assert exc.value.code == 2


class TestRespond:
    def test_two_points(self, capsys, default_cfg):
        code, out, _ = run(capsys, "respond", "--config", default_cfg, "--freq-min", "100", "--freq-max", "900", "--points", "2")
        assert code == 0
        rows = parse_csv(out)
        assert len(out.splitlines()) == 3
        assert rows[0] == ["freq_hz", "drive_amp_m", "phase_deg", "detect_amp_m"]

    def test_peak_location(self, capsys, default_cfg, tmp_path):
        gyro = default_config().gyro
        xi = 0.05
        c = 2 * xi * math.sqrt(gyro.mass * gyro.stiffness)
        fn = math.sqrt(gyro.stiffness / gyro.mass) / (2 * math.pi)
        f_lo, f_hi, points = fn / math.sqrt(10), fn * math.sqrt(10), 1001
        out = tmp_path / "resp.csv"
        code, _, _ = run(
            capsys, "respond", "--config", default_cfg, "--params", f"gyro.damping={c!r}",
            "--freq-min", repr(f_lo), "--freq-max", repr(f_hi), "--points", str(points), "--out", str(out),
        )
        assert code == 0
        table = np.array(parse_csv(out.read_text())[1:], dtype=float)
        # dense-grid oracle for the amplitude peak, written from the textbook response
        dense = np.linspace(f_lo, f_hi, 2_000_001)
        w, wn = 2 * np.pi * dense, 2 * np.pi * fn
        amp = 1.0 / np.hypot(wn**2 - w**2, 2 * xi * wn * w)
        f_peak = dense[np.argmax(amp)]
        assert f_peak == pytest.approx(fn * math.sqrt(1 - 2 * xi**2), abs=2 * (dense[1] - dense[0]))
        grid = table[:, 0]
        assert np.argmax(table[:, 1]) == np.argmin(np.abs(grid - f_peak))
        # phase near resonance is 90 deg within what one grid step can move it
        i = np.argmin(np.abs(grid - fn))
        step = grid[1] - grid[0]
        slope = 1.0 / (xi * math.pi * fn)  # d(phase)/df at resonance, rad/Hz
        assert abs(table[i, 2] - 90.0) <= math.degrees(slope * step)
        assert np.all(np.isfinite(table))

    def test_undamped_resonance_row(self, capsys, default_cfg):
        code, out, err = run(
            capsys, "respond", "--config", default_cfg, "--params", "gyro.damping=0",
            "--freq-min", "400", "--freq-max", "600", "--points", "3",
        )
        assert code == 0
        rows = parse_csv(out)
        assert rows[2][1:] == ["nan", "nan", "nan"]
        assert all(math.isfinite(float(v)) for v in rows[1] + rows[3])
        assert "resonance" in err

    @pytest.mark.parametrize("args", [("--freq-min", "0", "--freq-max", "10", "--points", "3"),
                                      ("--freq-min", "10", "--freq-max", "5", "--points", "3"),
                                      ("--freq-min", "1", "--freq-max", "5", "--points", "1")])
    def test_validation(self, capsys, default_cfg, args):
        code, _, _ = run(capsys, "respond", "--config", default_cfg, *args)
        assert code == 2


class TestSimulate:
    def test_zero_force(self, capsys, default_cfg, tmp_path):
        out = tmp_path / "sim.csv"
        code, stdout, _ = run(capsys, "simulate", "--config", default_cfg, "--params", "gyro.drive_voltage=0",
                              "--params", "integrator.settle_cycles=5", "--out", str(out))
        assert code == 0
        rows = parse_csv(out.read_text())
        assert rows[0] == ["t_s", "x_m", "v_mps", "z_m"]
        assert all(float(r[1]) == 0.0 for r in rows[1:])
        assert stdout.startswith("steady_state")

    def test_default_agrees_with_respond(self, capsys, default_cfg, tmp_path):
        code, stdout, _ = run(capsys, "simulate", "--config", default_cfg, "--out", str(tmp_path / "sim.csv"))
        assert code == 0
        fields = stdout.strip().splitlines()[-1].split()
        reported = dict(zip(fields[1::3], map(float, fields[3::3])))
        code, resp, _ = run(capsys, "respond", "--config", default_cfg, "--freq-min", "500", "--freq-max", "600", "--points", "2")
        row = parse_csv(resp)[1]
        assert reported["drive_amp_m"] == pytest.approx(float(row[1]), rel=5e-3)
        assert reported["phase_deg"] == pytest.approx(float(row[2]), abs=0.2)
        assert reported["detect_amp_m"] == pytest.approx(float(row[3]), rel=1e-2)

    def test_stdout_final_line_is_summary(self, capsys, default_cfg):
        code, stdout, _ = run(capsys, "simulate", "--config", default_cfg, "--params", "integrator.settle_cycles=2",
                              "--params", "integrator.measure_cycles=2")
        assert code == 0
        lines = stdout.splitlines()
        assert lines[0] == "t_s,x_m,v_mps,z_m"
        assert lines[-1].startswith("steady_state drive_amp_m = ")

    def test_dt_too_large(self, capsys, default_cfg):
        code, _, err = run(capsys, "simulate", "--config", default_cfg, "--params", "integrator.dt=1e-3")
        assert code == 2
        assert "dt" in err


class TestSweep:
    def test_calibrated_damping_sweep(self, capsys, configs_dir, tmp_path):
        record = load_calibration(configs_dir)
        out = tmp_path / "fig2.csv"
        code, _, _ = run(
            capsys, "sweep", "--config", str(configs_dir / record["config"]), "--variable", "damping",
            "--min", repr(record["min"]), "--max", repr(record["max"]), "--points", "100", "--out", str(out),
        )
        assert code == 0
        phase = np.array([float(r[3]) for r in parse_csv(out.read_text())[1:]])
        assert phase.min() == pytest.approx(0.17, abs=0.02)
        assert phase.max() == pytest.approx(0.47, abs=0.02)

    def test_temperature_without_gas(self, capsys, default_cfg):
        code, out, _ = run(capsys, "sweep", "--config", default_cfg, "--params", "damping_model.ref_viscosity=0",
                           "--variable", "temperature", "--min", "250", "--max", "400", "--points", "5")
        assert code == 0
        assert len({r[1] for r in parse_csv(out)[1:]}) == 1

    def test_min_equals_max(self, capsys, default_cfg):
        code, _, err = run(capsys, "sweep", "--config", default_cfg, "--variable", "damping",
                           "--min", "1e-6", "--max", "1e-6", "--points", "2")
        assert code == 2 and "min" in err

    def test_log_scale(self, capsys, default_cfg):
        code, out, _ = run(capsys, "sweep", "--config", default_cfg, "--variable", "damping",
                           "--min", "1e-8", "--max", "1e-5", "--points", "4", "--scale", "log")
        assert code == 0
        values = [float(r[0]) for r in parse_csv(out)[1:]]
        assert values == pytest.approx([1e-8, 1e-7, 1e-6, 1e-5], rel=1e-12)

    def test_deterministic(self, capsys, default_cfg):
        args = ("sweep", "--config", default_cfg, "--variable", "temperature", "--min", "200", "--max", "400", "--points", "9")
        assert run(capsys, *args) == run(capsys, *args)

    def test_io_error_exit_code(self, capsys, default_cfg, tmp_path):
        code, _, err = run(capsys, "sweep", "--config", default_cfg, "--variable", "damping", "--min", "1e-7",
                           "--max", "1e-6", "--points", "3", "--out", str(tmp_path / "no" / "such.csv"))
        assert code == 1 and "such.csv" in err


def test_module_entry_point(configs_dir):
    ok = subprocess.run([sys.executable, "-m", "gyrosim", "derive", "--config", str(configs_dir / "default.json")],
                        capture_output=True, text=True)
    assert ok.returncode == 0 and "f_n = 5.000000e2" in ok.stdout
    bad = subprocess.run([sys.executable, "-m", "gyrosim", "derive", "--config", str(configs_dir / "default.json"),
                          "--params", "gyro.mass=-1"], capture_output=True, text=True)
    assert bad.returncode == 2 and "mass" in bad.stderr
