#!/usr/bin/env python3
"""Taylor-Green demo run: trajectory norms CSV plus run manifest."""

import argparse
import sys
from pathlib import Path

from lanslab.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/taylor_green")
    ap.add_argument("--config", default=str(ROOT / "configs" / "taylor_green.json"))
    ap.add_argument("--seed", type=int, default=None)
    args = ap.parse_args()
    argv = ["solve", "--config", args.config, "--out", args.out]
    if args.seed is not None:
        argv += ["--seed", str(args.seed)]
    sys.exit(main(argv))
