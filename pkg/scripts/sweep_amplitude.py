#!/usr/bin/env python3
"""Certified-horizon sweep: bisect the largest converging horizon for a
doubling ladder of initial amplitudes."""

import argparse
import sys
from pathlib import Path

from lanslab.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/sweep_amplitude")
    ap.add_argument("--values", nargs="+", default=["8", "16", "32"])
    ap.add_argument("--t-max", default="1.0")
    args = ap.parse_args()
    sys.exit(
        main(
            [
                "sweep",
                "--config", str(ROOT / "configs" / "small_run.json"),
                "--axis", "amplitude",
                "--values", *args.values,
                "--t-max", args.t_max,
                "--out", args.out,
            ]
        )
    )
