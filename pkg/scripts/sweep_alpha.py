#!/usr/bin/env python3
"""Filter-length sweep: L2 gap between filtered runs and the unfiltered
limit, with the log-log slope in the summary JSON."""

import argparse
import sys
from pathlib import Path

from lanslab.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/sweep_alpha")
    ap.add_argument("--values", nargs="+", default=["0.025", "0.05", "0.1"])
    args = ap.parse_args()
    sys.exit(
        main(
            [
                "sweep",
                "--config", str(ROOT / "configs" / "small_run.json"),
                "--axis", "alpha",
                "--values", *args.values,
                "--out", args.out,
            ]
        )
    )
