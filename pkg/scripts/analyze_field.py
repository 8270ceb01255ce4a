#!/usr/bin/env python3
"""Generate a band-limited random field snapshot and dump its dyadic
tables and per-block norms."""

import argparse
import sys
import tempfile
from pathlib import Path

from lanslab.cli import main
from lanslab.fieldio import write_field
from lanslab.fields import random_band_limited
from lanslab.grid import Grid

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/lp_analyze")
    ap.add_argument("--field", default=None, help="existing snapshot; default generates one")
    ap.add_argument("--N", type=int, default=32)
    ap.add_argument("--j", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    field_path = args.field
    if field_path is None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        field_path = str(out_dir / "sample_field.lans")
        write_field(field_path, random_band_limited(Grid(3, args.N), args.j, args.seed),
                    field_id=f"band-j{args.j}-seed{args.seed}")
    sys.exit(main(["lp-analyze", "--field", field_path, "--out", args.out,
                   "--indices", "0.75,2,2", "1.5,2,2", "2.5,2,1"]))
