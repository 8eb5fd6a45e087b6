#!/usr/bin/env python3
"""Regenerate configs/figure2_calibrated.json and configs/figure2_calibration.json.

Usage: python scripts/calibrate_figure2.py [output-dir]
"""

import sys
from pathlib import Path

from gyrosim.calibration import load_calibration, write_calibration

if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "configs"
    config_path, record_path = write_calibration(out)
    record = load_calibration(out)
    print(f"wrote {config_path}")
    print(f"wrote {record_path}")
    print(f"damping range: {record['min']!r} .. {record['max']!r} N s/m")
