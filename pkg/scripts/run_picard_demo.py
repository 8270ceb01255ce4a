#!/usr/bin/env python3
"""Small-data fixed-point demo: residual history and report JSON."""

import argparse
import sys
from pathlib import Path

from lanslab.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/picard_demo")
    ap.add_argument("--config", default=str(ROOT / "configs" / "picard_demo.json"))
    args = ap.parse_args()
    sys.exit(main(["picard", "--config", args.config, "--out", args.out]))
