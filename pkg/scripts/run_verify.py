#!/usr/bin/env python3
"""Run the default verification suite (add --extended for the operator
mapping and dynamic checks)."""

import argparse
import sys
from pathlib import Path

from lanslab.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/verify")
    ap.add_argument("--extended", action="store_true")
    ap.add_argument("--trial-csv", action="store_true")
    args = ap.parse_args()
    suite = "verify_extended.json" if args.extended else "verify_default.json"
    argv = ["verify", "--config", str(ROOT / "configs" / suite), "--out", args.out]
    if args.trial_csv:
        argv.append("--trial-csv")
    sys.exit(main(argv))
