"""Command-line runner: solve, picard, verify, sweep, lp-analyze.

Exit codes: 0 success, 2 configuration/suite error, 3 blow-up,
4 fixed-point non-convergence, 5 failing verification check.

Outputs are deterministic: identical config + seed produce byte-identical
CSV/JSON data files (the manifest also records wall-clock timings, which
naturally vary).  Floats are printed with 17 significant digits, '.'
decimal separator, '\n' line endings, header row first.
"""

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, _fft
from .errors import (
    AdmissibilityError,
    BlowUpError,
    ConfigError,
    ParameterGateError,
)
from .solver import config_from_dict, solve_ivp

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_NO_CONVERGENCE = 4
EXIT_CHECK_FAILED = 5


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_json(path, obj):
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_config(path):
    raw_text = Path(path).read_text()
    try:
        raw = json.loads(raw_text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: JSON parse error: {exc.msg}"
        ) from exc
    return config_from_dict(raw)


class Manifest:
    def __init__(self, command, out_dir, config_snapshot, seed):
        self.data = {
            "command": command,
            "artifact_version": f"lanslab {__version__}",
            "seed": seed,
            "output_dir": str(out_dir),
            "config": config_snapshot,
            "outputs": [],
            "timings_s": {},
        }
        self._t0 = time.perf_counter()

    def add_output(self, name):
        self.data["outputs"].append(str(name))

    def finish(self, out_dir):
        self.data["timings_s"]["total"] = time.perf_counter() - self._t0
        path = out_dir / "manifest.json"
        write_json(path, self.data)
        return path


def _prepare(args, command):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_updates(seed=int(args.seed))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(command, out_dir, cfg.to_dict(), cfg.seed)
    return cfg, out_dir, manifest


def _trajectory_csv(cfg, traj, out_dir, manifest, name="trajectory.csv"):
    series = traj.series
    bes_t = series.get("besov_t")
    rows = []
    if bes_t is None:
        for i, t in enumerate(series["t"]):
            rows.append(
                (
                    float(t),
                    float(series["energy"][i]),
                    float(series["l2"][i]),
                    float(series["grad_l2"][i]),
                    float("nan"),
                    float("nan"),
                    float(series["div_residual"][i]),
                )
            )
    else:
        lookup = {round(float(t), 12): i for i, t in enumerate(series["t"])}
        for k, t in enumerate(bes_t):
            i = lookup[round(float(t), 12)]
            rows.append(
                (
                    float(t),
                    float(series["energy"][i]),
                    float(series["l2"][i]),
                    float(series["grad_l2"][i]),
                    float(series["besov_base"][k]),
                    float(series["besov_critical"][k]),
                    float(series["div_residual"][i]),
                )
            )
    header = ["t", "E", "u_L2", "grad_u_L2", "u_besov_base", "u_besov_critical", "div_residual"]
    path = out_dir / name
    write_csv(path, header, rows)
    manifest.add_output(name)
    return path


def _write_snapshots(cfg, traj, out_dir, manifest):
    # sampling already happens at cfg.snapshot_stride steps, so every
    # stored sample becomes one snapshot file
    if cfg.snapshot_stride <= 0:
        return
    from .fieldio import write_field

    for i, (t, f) in enumerate(zip(traj.times, traj.fields)):
        name = f"field_{i:05d}.lans"
        write_field(out_dir / name, f, field_id=f"t={t:.9g}")
        manifest.add_output(name)


def cmd_solve(args):
    cfg, out_dir, manifest = _prepare(args, "solve")
    t0 = time.perf_counter()
    traj = solve_ivp(
        cfg.initial_field(),
        cfg,
        sample_stride=max(1, cfg.snapshot_stride) if cfg.snapshot_stride else None,
        besov_stride=max(1, cfg.csv_stride),
    )
    manifest.data["timings_s"]["solve"] = time.perf_counter() - t0
    _trajectory_csv(cfg, traj, out_dir, manifest)
    _write_snapshots(cfg, traj, out_dir, manifest)
    manifest.finish(out_dir)
    return EXIT_OK


def cmd_picard(args):
    from .picard import picard_solve

    cfg, out_dir, manifest = _prepare(args, "picard")
    t0 = time.perf_counter()
    traj, report = picard_solve(cfg.initial_field(), cfg)
    manifest.data["timings_s"]["picard"] = time.perf_counter() - t0
    write_json(out_dir / "picard_report.json", report.to_dict())
    manifest.add_output("picard_report.json")
    rows = [
        (i + 1, float(r)) for i, r in enumerate(report.residuals)
    ]
    write_csv(out_dir / "residuals.csv", ["iterate", "residual"], rows)
    manifest.add_output("residuals.csv")
    from .dyadic import BesovIndex, build_dyadic_family

    fam = build_dyadic_family(cfg.grid)
    idx = BesovIndex(cfg.besov.r, cfg.besov.p, cfg.besov.q)
    traj_rows = [
        (float(t), fam.besov_norm(f, idx)) for t, f in zip(traj.times, traj.fields)
    ]
    write_csv(out_dir / "picard_trajectory.csv", ["t", "u_besov_base"], traj_rows)
    manifest.add_output("picard_trajectory.csv")
    manifest.finish(out_dir)
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def cmd_verify(args):
    from .checks import run_check

    suite_path = Path(args.config)
    try:
        suite = json.loads(suite_path.read_text())
    except json.JSONDecodeError as exc:
        print(
            f"error: {suite_path}:{exc.lineno}:{exc.colno}: {exc.msg}", file=sys.stderr
        )
        return EXIT_CONFIG
    if not isinstance(suite, dict) or "checks" not in suite:
        print("error: suite must be an object with a 'checks' array", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = Manifest("verify", out_dir, {"suite": str(suite_path)}, args.seed or 0)

    from .checks import CHECKS

    for entry in suite["checks"]:
        cid = entry.get("id")
        if cid not in CHECKS:
            print(f"error: unknown check_id '{cid}'", file=sys.stderr)
            return EXIT_CONFIG

    reports, all_pass = [], True
    for entry in suite["checks"]:
        cid = entry["id"]
        params = dict(entry.get("params", {}))
        if args.seed is not None:
            params.setdefault("seed", int(args.seed))
        t0 = time.perf_counter()
        try:
            rep = run_check(cid, params)
            record = rep.to_dict()
        except ParameterGateError as exc:
            record = {
                "check_id": cid,
                "params": params,
                "status": "rejected",
                "reason": str(exc),
                "condition": exc.condition,
                "pass": False,
            }
        elapsed = time.perf_counter() - t0
        manifest.data["timings_s"][cid] = elapsed
        ok = record.get("pass", False)
        all_pass = all_pass and ok
        status = "pass" if ok else record.get("status", "FAIL")
        print(f"[{status:>8}] {cid}  (max_ratio={record.get('max_ratio', 'n/a')})")
        reports.append(record)
    write_json(out_dir / "verify_report.json", {"checks": reports, "all_pass": all_pass})
    manifest.add_output("verify_report.json")
    if args.trial_csv:
        rows = []
        for rec in reports:
            for i, r in enumerate(rec.get("ratios", [])):
                rows.append((rec["check_id"], i, float(r)))
        write_csv(out_dir / "trial_ratios.csv", ["check_id", "trial", "ratio"], rows)
        manifest.add_output("trial_ratios.csv")
    manifest.finish(out_dir)
    return EXIT_OK if all_pass else EXIT_CHECK_FAILED


def _sweep_amplitude(cfg, values, out_dir, manifest, t_max):
    from .picard import estimate_existence_time

    rows = estimate_existence_time(values, cfg, t_max=t_max)
    table = [(r["amplitude"], r["u0_norm"], r["certified_T"]) for r in rows]
    write_csv(out_dir / "sweep.csv", ["amplitude", "u0_norm_base", "certified_T"], table)
    manifest.add_output("sweep.csv")
    return EXIT_OK


def _sweep_alpha(cfg, values, out_dir, manifest):
    from .fields import l2_norm

    base_cfg = cfg.with_updates(alpha=0.0)
    base = solve_ivp(base_cfg.initial_field(), base_cfg).final()
    rows = []
    gaps, alphas = [], []
    for a in values:
        run_cfg = cfg.with_updates(alpha=float(a))
        final = solve_ivp(run_cfg.initial_field(), run_cfg).final()
        gap = l2_norm(final - base)
        rows.append((float(a), gap))
        if a > 0 and gap > 0:
            alphas.append(math.log(a))
            gaps.append(math.log(gap))
    write_csv(out_dir / "sweep.csv", ["alpha", "l2_gap_vs_alpha0"], rows)
    manifest.add_output("sweep.csv")
    slope = None
    if len(gaps) >= 2:
        slope = float(np.polyfit(alphas, gaps, 1)[0])
    write_json(out_dir / "sweep_summary.json", {"axis": "alpha", "loglog_slope": slope})
    manifest.add_output("sweep_summary.json")
    return EXIT_OK


def _sweep_grid(cfg, values, out_dir, manifest):
    rows = []
    for N in values:
        run_cfg = cfg.with_updates(N=int(N))
        traj = solve_ivp(run_cfg.initial_field(), run_cfg)
        s = traj.series
        rows.append(
            (int(N), float(s["energy"][-1]), float(s["l2"][-1]), float(s["grad_l2"][-1]),
             float(s["div_residual"][-1]))
        )
    write_csv(
        out_dir / "sweep.csv",
        ["N", "E_final", "u_L2_final", "grad_u_L2_final", "div_residual_final"],
        rows,
    )
    manifest.add_output("sweep.csv")
    return EXIT_OK


def cmd_sweep(args):
    cfg, out_dir, manifest = _prepare(args, "sweep")
    values = [float(v) for v in args.values]
    if sorted(values) != values:
        raise ConfigError("sweep values must be sorted ascending")
    if not all(math.isfinite(v) for v in values):
        raise ConfigError("sweep values must be finite")
    if args.axis == "amplitude":
        code = _sweep_amplitude(cfg, values, out_dir, manifest, args.t_max)
    elif args.axis == "alpha":
        code = _sweep_alpha(cfg, values, out_dir, manifest)
    else:
        code = _sweep_grid(cfg, values, out_dir, manifest)
    manifest.finish(out_dir)
    return code


def cmd_lp_analyze(args):
    from .dyadic import BesovIndex, build_dyadic_family, norm_report_record
    from .fieldio import read_field
    from .grid import kmag

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        f = read_field(args.field)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    manifest = Manifest("lp-analyze", out_dir, {"field": str(args.field)}, 0)
    fam = build_dyadic_family(f.grid)
    covered = kmag(f.grid) <= 2.0**fam.j_max
    partition = fam.low_hat + fam.psi_hat.sum(axis=0)
    km_tab = {
        "j_max": fam.j_max,
        "annuli": [
            {"j": j, "support": [2.0 ** (j - 1), 2.0 ** (j + 1)]}
            for j in range(fam.j_max + 1)
        ],
        "partition_max_defect": float(np.max(np.abs(partition[covered] - 1.0))),
    }
    write_json(out_dir / "dyadic_family.json", km_tab)
    manifest.add_output("dyadic_family.json")
    indices = [tuple(v) for v in (args.indices or [(1.0, 2.0, 2.0)])]
    with open(out_dir / "norms.jsonl", "w", newline="\n") as fh:
        for s, p, q in indices:
            rec = norm_report_record(
                fam, f, BesovIndex(s, p, q), field_id=Path(args.field).name
            )
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    manifest.add_output("norms.jsonl")
    manifest.finish(out_dir)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lans-lab",
        description="Pseudo-spectral filtered-fluid solver and Besov analysis lab",
    )
    ap.add_argument("--threads", type=int, default=None, help="FFT worker count")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override config seed")

    p = sub.add_parser("solve", help="run the time stepper, emit trajectory CSV")
    common(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("picard", help="run the fixed-point iteration")
    common(p)
    p.set_defaults(fn=cmd_picard)

    p = sub.add_parser("verify", help="run a verification suite")
    common(p)
    p.add_argument("--trial-csv", action="store_true", help="emit per-trial ratios CSV")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("sweep", help="parameter sweeps (alpha | amplitude | N)")
    common(p)
    p.add_argument("--axis", choices=["alpha", "amplitude", "N"], required=True)
    p.add_argument("--values", nargs="+", required=True)
    p.add_argument("--t-max", type=float, default=2.0, help="existence-time cap")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("lp-analyze", help="dyadic tables and per-block norms of a field file")
    p.add_argument("--field", required=True, help="field snapshot path")
    p.add_argument("--out", default="out")
    p.add_argument(
        "--indices",
        type=lambda s: tuple(float(x) for x in s.split(",")),
        nargs="+",
        default=None,
        metavar="s,p,q",
    )
    p.set_defaults(fn=cmd_lp_analyze)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    workers = args.threads if args.threads is not None else _fft.workers_from_env()
    _fft.set_workers(workers)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AdmissibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
