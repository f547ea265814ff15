"""Command-line front end: reproducible experiments with manifest + CSV/JSON output.

Exit codes: 0 pass, 1 declared tolerance failed, 2 usage/validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidWeightError, SrrwError
from .eta import EtaKernel, stationary_distribution
from .harness import config_from_dict, load_expectations, map_blocks, run_campaign, substream
from .lclt import conditional_sup_error, exact_bivariate_pmf, lclt_sup_error, stationary_step_law
from .rayknight import RayKnightSampler
from .reporting import RunManifest, dump_json, write_csv
from .walk import range_extremes, simulate_walk
from .weights import WeightFunction

USAGE_ERROR = 2
TOLERANCE_ERROR = 1


def _weight(text: str) -> WeightFunction:
    try:
        return WeightFunction.parse(text)
    except InvalidWeightError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _outdir(args) -> Path:
    out = args.out
    if out is None:
        out = f"srrw-out-{time.strftime('%Y%m%d-%H%M%S')}"
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _finish(manifest: RunManifest, outdir: Path, watch_t0: float, outputs: list) -> None:
    manifest.outputs = [str(o) for o in outputs]
    manifest.wall_clock_s = time.perf_counter() - watch_t0
    manifest.write(outdir / "manifest.json")


def cmd_simulate(args) -> int:
    outdir = _outdir(args)
    t0 = time.perf_counter()
    config = {"w": args.w.spec(), "steps": args.steps, "seed": args.seed}
    manifest = RunManifest("simulate", config, args.seed, __version__)
    manifest.write(outdir / "manifest.json")
    t = simulate_walk(args.w, args.steps, substream(args.seed, 0))
    rho, lam = range_extremes(t, len(t))
    rows = [
        {"x": x, "l_plus": t.localtimes.l_plus(x), "l_minus": t.localtimes.l_minus(x)}
        for x in t.localtimes.visited_sites()
    ]
    lt_path = outdir / "localtimes.csv"
    write_csv(lt_path, "localtimes", rows)
    summary_path = outdir / "walk_summary.csv"
    write_csv(summary_path, "walk_summary", [{
        "steps": args.steps,
        "final_position": int(t.positions[-1]),
        "rho": "" if rho is None else rho,
        "lam": "" if lam is None else lam,
    }])
    _finish(manifest, outdir, t0, [lt_path, summary_path])
    print(f"simulate: {args.steps} steps, X = {int(t.positions[-1])}, outputs in {outdir}")
    return 0


def cmd_stationary(args) -> int:
    outdir = _outdir(args)
    t0 = time.perf_counter()
    config = {"w": args.w.spec(), "window": args.window}
    manifest = RunManifest("stationary", config, args.seed, __version__)
    manifest.write(outdir / "manifest.json")
    res = stationary_distribution(EtaKernel(args.w), window=(-args.window, args.window))
    rows = [
        {"eta": int(v), "nu_prob": float(p), "r_value": float(v) + 0.5, "r_prob": float(p)}
        for v, p in zip(res.nu.values(), res.nu.probs)
    ]
    law_path = outdir / "stationary_law.csv"
    write_csv(law_path, "stationary_law", rows)
    payload = {
        "mean": res.mean,
        "sigma2": res.sigma2,
        "residual": res.residual,
        "boundary_mass": res.boundary_mass,
        "iterations": res.iterations,
        "window": list(res.window),
        "r_symmetry_defect": res.r_law.symmetry_defect(),
    }
    json_path = outdir / "stationary.json"
    dump_json(json_path, payload)
    _finish(manifest, outdir, t0, [law_path, json_path])
    print(f"stationary: mean {res.mean:.8f}, sigma2 {res.sigma2:.8f}, outputs in {outdir}")
    return 0


def cmd_profile(args) -> int:
    outdir = _outdir(args)
    t0 = time.perf_counter()
    config = {"w": args.w.spec(), "x": args.x, "m": args.m, "replicas": args.replicas, "seed": args.seed}
    manifest = RunManifest("profile", config, args.seed, __version__)
    manifest.write(outdir / "manifest.json")
    sampler = RayKnightSampler(args.w)
    y_lo, y_hi = args.x - 2 * args.m - 64, 2 * args.m + 64
    out = {}
    done = 0
    bi = 0
    while done < args.replicas:
        count = min(65536, args.replicas - done)
        got = sampler.batch_profile_window(args.x, args.m, count, substream(args.seed, 1, bi), y_lo, y_hi)
        for y, vals in got.items():
            out.setdefault(y, []).append(vals)
        done += count
        bi += 1
    rows = []
    for y in sorted(out):
        vals = np.concatenate(out[y]).astype(np.float64)
        rows.append({
            "y": y,
            "mean": float(vals.mean()),
            "se": float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0,
            "zero_frac": float((vals == 0).mean()),
        })
    prof_path = outdir / "profile.csv"
    write_csv(prof_path, "profile", rows)
    _finish(manifest, outdir, t0, [prof_path])
    print(f"profile: x={args.x} m={args.m}, {args.replicas} replicas, outputs in {outdir}")
    return 0


def cmd_lclt(args) -> int:
    outdir = _outdir(args)
    t0 = time.perf_counter()
    config = {"w": args.w.spec(), "N": args.N, "law": args.law, "box": args.box, "stride": args.stride}
    manifest = RunManifest("lclt", config, args.seed, __version__)
    manifest.write(outdir / "manifest.json")
    if args.law != "from-stationary":
        print(f"unknown step law {args.law!r}", file=sys.stderr)
        return USAGE_ERROR
    step_law = stationary_step_law(args.w)
    pmf = exact_bivariate_pmf(step_law, args.N)
    comparison = lclt_sup_error(pmf, u_max=args.box, v_max=args.box)
    cond_sup, cond_arg = conditional_sup_error(pmf)
    s2 = pmf.sigma2
    scale = math.pi * s2 / math.sqrt(3.0) * args.N**2
    rows = []
    sqn, n32 = math.sqrt(args.N), args.N**1.5
    a_vals = pmf.a_values()
    for ia in range(0, len(a_vals), max(args.stride, 1)):
        a = float(a_vals[ia])
        if abs(a / sqn) > args.box:
            continue
        bt = pmf.bt_values()
        b_vals = bt + pmf.c * a
        probs = pmf.arr[pmf.box[0] + ia, pmf.box[2]:pmf.box[3]]
        for ib in range(0, len(b_vals), max(args.stride, 1)):
            b = float(b_vals[ib])
            v = b / n32
            if abs(v) > args.box:
                continue
            u = a / sqn
            q = (u * u + 3 * v * v - 3 * u * v) * 2.0 / s2
            pred = math.exp(-q)
            exact = float(probs[ib])
            rows.append({"a": a, "b": b, "exact": exact, "predicted": pred,
                         "scaled_error": abs(scale * exact - pred)})
    grid_path = outdir / "lclt_grid.csv"
    write_csv(grid_path, "lclt_grid", rows)
    payload = {
        "N": args.N,
        "sigma2": s2,
        "sup_scaled_error": comparison.sup_scaled_error,
        "sup_argmax": list(comparison.argmax),
        "conditional_sup_error": cond_sup,
        "conditional_argmax": list(cond_arg),
        "truncated_mass": pmf.truncated_mass,
        "total_mass": pmf.total_mass(),
    }
    json_path = outdir / "lclt.json"
    dump_json(json_path, payload)
    _finish(manifest, outdir, t0, [grid_path, json_path])
    print(f"lclt: N={args.N} sup_scaled_error={comparison.sup_scaled_error:.4f}, outputs in {outdir}")
    if args.max_sup is not None and comparison.sup_scaled_error >= args.max_sup:
        return TOLERANCE_ERROR
    return 0


def cmd_campaign(args) -> int:
    outdir = _outdir(args)
    t0 = time.perf_counter()
    if args.manifest:
        loaded = RunManifest.load(args.manifest)
        cfg_dict = dict(loaded.config)
        if args.threads is not None:
            cfg_dict["threads"] = args.threads
        cfg = config_from_dict(cfg_dict)
    else:
        if args.kind is None:
            print("campaign requires --kind or --manifest", file=sys.stderr)
            return USAGE_ERROR
        cfg_dict = {}
        if args.config:
            with open(args.config) as fh:
                cfg_dict.update(json.load(fh))
        cfg_dict["kind"] = args.kind.replace("-", "_")
        cfg_dict.setdefault("weight", args.w.spec() if args.w else {"family": "exponential", "rate": 1.0})
        if args.w is not None:
            cfg_dict["weight"] = args.w.spec()
        if args.seed is not None:
            cfg_dict["master_seed"] = args.seed
        if args.threads is not None:
            cfg_dict["threads"] = args.threads
        if args.replicas is not None:
            cfg_dict["replicas"] = args.replicas
        if args.param:
            for kv in args.param:
                key, _, val = kv.partition("=")
                cfg_dict[key] = json.loads(val)
        try:
            cfg = config_from_dict(cfg_dict)
        except (KeyError, TypeError) as exc:
            print(f"bad campaign config: {exc}", file=sys.stderr)
            return USAGE_ERROR
    manifest = RunManifest("campaign", cfg.to_dict(), cfg.master_seed, __version__)
    manifest.write(outdir / "manifest.json")
    report = run_campaign(cfg)
    outputs = report.write_outputs(outdir)
    _finish(manifest, outdir, t0, outputs)
    for c in report.checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    print(f"campaign {cfg.kind}: outputs in {outdir}")
    return 0 if report.passed() else TOLERANCE_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="srrw", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed_default=0):
        sp.add_argument("--out", default=None, help="output directory (default: timestamped)")
        sp.add_argument("--seed", type=int, default=seed_default)
        sp.add_argument("--threads", type=int, default=None)

    sp = sub.add_parser("simulate", help="simulate one walk, dump local times")
    sp.add_argument("--w", type=_weight, required=True, help="exp:RATE | ramp:SLOPE:FLOOR | table:Z0:v,v,...")
    sp.add_argument("--steps", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("stationary", help="stationary law of the embedded chain")
    sp.add_argument("--w", type=_weight, required=True)
    sp.add_argument("--window", type=int, default=40)
    common(sp)
    sp.set_defaults(func=cmd_stationary)

    sp = sub.add_parser("profile", help="profile sampler summary at an inverse local time")
    sp.add_argument("--w", type=_weight, required=True)
    sp.add_argument("--x", type=int, default=0)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--replicas", type=int, default=10_000)
    common(sp)
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("lclt", help="exact bivariate local-CLT comparison")
    sp.add_argument("--w", type=_weight, default=WeightFunction("exponential", (1.0,)))
    sp.add_argument("--N", type=int, default=100)
    sp.add_argument("--law", default="from-stationary")
    sp.add_argument("--box", type=float, default=3.0)
    sp.add_argument("--stride", type=int, default=0, help="CSV grid stride (0 = auto)")
    sp.add_argument("--max-sup", type=float, default=None, help="fail (exit 1) if sup error exceeds this")
    common(sp)
    sp.set_defaults(func=cmd_lclt)

    sp = sub.add_parser("campaign", help="run a Monte Carlo verification campaign")
    sp.add_argument("--kind", choices=["endpoint", "lclt-table", "profile-shape", "tails", "inverse-time", "wterms"],
                    default=None)
    sp.add_argument("--w", type=_weight, default=None)
    sp.add_argument("--replicas", type=int, default=None)
    sp.add_argument("--config", default=None, help="JSON config file (flags win)")
    sp.add_argument("--manifest", default=None, help="re-run a previous campaign manifest")
    sp.add_argument("--param", action="append", default=None, metavar="KEY=JSON",
                    help="extra config field, e.g. --param n_ladder=[50,100]")
    common(sp)
    sp.set_defaults(func=cmd_campaign)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "lclt" and args.stride == 0:
        # target ~50k CSV rows: the full box grid has ~36 N^2 lattice points
        args.stride = max(1, math.ceil(6 * args.N / 224))
    try:
        return args.func(args)
    except SrrwError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
