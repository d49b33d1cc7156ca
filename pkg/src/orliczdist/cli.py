"""Command line interface.

Subcommands:
  distort     build the distorted gauge for (A, phi, n) and tabulate it
  examples    tabulate the known closed-form shapes next to the numerics
  netmeasure  exact dyadic net pre-measure of a cube set or point cloud
  fractal     run the lacunary construction experiments
  verify      run the built-in invariant checks

Every CSV artifact starts with a comment line carrying the hash of the
configuration that produced it, then a named header row; a JSON metadata
sidecar with the full configuration sits next to each output file.
Identical configuration and seed give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import gauge as gauge_mod
from . import young as young_mod
from .asymptotics import crosscheck, distort_form, fit_power_slope
from .distortion import build_distortion, key_inequality_gap
from .fractal import (RandomMapSpec, energy_integral_mc,
                      gradient_norm_estimate, image_cover_sums,
                      slow_target_gauge, build_cantor)
from .netmeasure import CubeSet, net_premeasure, sandwich_check
from .scaling import classify_stability, theta_value, xi

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BADCONFIG = 2
EXIT_INCONCLUSIVE = 3


def _threads() -> int:
    """Requested parallelism cap (recorded in metadata; computations are
    numpy-vectorized and single-process)."""
    try:
        return max(1, int(os.environ.get("ORLICZ_DISTORT_THREADS", "1")))
    except ValueError:
        return 1


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def write_csv(path: Path, header: list, rows, cfg: dict):
    h = config_hash(cfg)
    with open(path, "w", newline="\n") as f:
        f.write(f"# config_hash={h}\n")
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")
    meta = {"config": cfg, "config_hash": h, "columns": header,
            "threads": _threads()}
    with open(path.with_suffix(path.suffix + ".meta.json"), "w") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _load_config(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as f:
            cfg = json.load(f)
    return cfg


def _build_inputs(cfg: dict, args):
    try:
        A = young_mod.from_descriptor(cfg["A"])
        phi = gauge_mod.from_descriptor(cfg["phi"])
        n = int(cfg.get("n", cfg["phi"]["n"]))
    except (KeyError, TypeError) as e:
        raise SystemExit(EXIT_BADCONFIG) from e
    kappa = args.kappa if args.kappa is not None else cfg.get("kappa", 1.0)
    cn = args.cn if args.cn is not None else cfg.get("cn", None)
    return A, phi, n, kappa, cn


def cmd_distort(args) -> int:
    cfg = _load_config(args)
    A, phi, n, kappa, cn = _build_inputs(cfg, args)
    bundle = build_distortion(A, phi, n, kappa=kappa, cn=cn)
    full_cfg = dict(bundle.config(), seed=args.seed, command="distort")
    logr = np.linspace(math.log(1e-40), math.log(0.25),
                       int(cfg.get("points", 400)))
    psil = bundle.psi.log_at(logr)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    rows = [(float(np.exp(x)), float(np.exp(y))) for x, y in zip(logr, psil)]
    write_csv(out / "distorted_gauge.csv", ["r", "psi"], rows, full_cfg)
    report = classify_stability(bundle.psi, bundle.B_inverse)
    with open(out / "distort_summary.json", "w") as f:
        json.dump({"config_hash": config_hash(full_cfg),
                   "regime": report.regime,
                   "conclusive": report.conclusive,
                   "kappa": kappa, "cn": bundle.cn,
                   "power_slope_head": fit_power_slope(
                       np.exp(logr[:100]), np.exp(psil[:100]))},
                  f, indent=2, sort_keys=True)
        f.write("\n")
    return EXIT_OK if report.conclusive else EXIT_INCONCLUSIVE


_EXAMPLE_PRESETS = [
    ("superdim", {"A": {"family": "powerlog", "p": 4.0, "q": 0.0},
                  "phi": {"family": "power", "alpha": 1.0, "n": 2}, "n": 2},
     dict(kind="superdim", n=2, p=4.0, q=0.0, alpha=1.0, beta=0.0)),
    ("critical", {"A": {"family": "powerlog", "p": 2.0, "q": 2.0},
                  "phi": {"family": "power", "alpha": 1.0, "n": 2}, "n": 2},
     dict(kind="critical", n=2, q=2.0, alpha=1.0, beta=0.0)),
    ("expgrowth", {"A": {"family": "exp", "gamma": 1.0},
                   "phi": {"family": "power", "alpha": 1.0, "n": 2}, "n": 2},
     dict(kind="expgrowth", n=2, gamma=1.0, alpha=1.0, beta=0.0)),
    ("stable", {"A": {"family": "power", "p": 4.0},
                "phi": {"family": "powerlog", "alpha": 0.0, "beta": -1.0,
                        "n": 2}, "n": 2},
     dict(kind="stable", n=2, alpha=0.0, beta=-1.0)),
]


def cmd_examples(args) -> int:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for name, cfg, form_kw in _EXAMPLE_PRESETS:
        A = young_mod.from_descriptor(cfg["A"])
        phi = gauge_mod.from_descriptor(cfg["phi"])
        bundle = build_distortion(A, phi, cfg["n"])
        form = distort_form(**form_kw)
        rep = crosscheck(bundle.psi, form, r_hi=1e-6, decades=3.0)
        rows.append((name, form.describe(), rep.spread, rep.drift,
                     rep.mean_log_ratio))
    cfg_all = {"command": "examples", "presets": [p[0] for p in _EXAMPLE_PRESETS]}
    write_csv(out / "examples.csv",
              ["case", "closed_form", "log_ratio_spread", "drift",
               "mean_log_ratio"], rows, cfg_all)
    worst = max(r[2] for r in rows)
    return EXIT_OK if worst < 0.5 else EXIT_FAIL


def _load_cubes(cfg: dict, args):
    if "cubes" in cfg:
        return CubeSet.from_json_obj(cfg["cubes"])
    path = cfg.get("points_csv")
    if path is None:
        raise SystemExit(EXIT_BADCONFIG)
    pts = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    return CubeSet.from_points(pts, int(cfg.get("snap_level", 6)))


def cmd_netmeasure(args) -> int:
    cfg = _load_config(args)
    try:
        E = _load_cubes(cfg, args)
        phi = gauge_mod.from_descriptor(cfg["phi"])
        sigma = float(cfg.get("sigma", math.inf))
    except (KeyError, TypeError, ValueError) as e:
        print(f"bad configuration: {e}", file=sys.stderr)
        return EXIT_BADCONFIG
    res = net_premeasure(E, phi, sigma)
    sw = sandwich_check(E, phi, sigma if math.isfinite(sigma) else 1.0,
                        cn=args.cn)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    full_cfg = dict(cfg, command="netmeasure")
    rows = [(c.level, " ".join(map(str, c.coords)), c.diameter)
            for c in res.cover]
    write_csv(out / "net_cover.csv", ["level", "coords", "diameter"],
              rows, full_cfg)
    with open(out / "net_summary.json", "w") as f:
        json.dump({"value": res.value, "sigma": sigma,
                   "cover_size": len(res.cover),
                   "value_at_half_sigma": sw.net_value_halved,
                   "lower_bound": sw.lower_bound, "cn": sw.cn,
                   "config_hash": config_hash(full_cfg)},
                  f, indent=2, sort_keys=True)
        f.write("\n")
    return EXIT_OK


def cmd_fractal(args) -> int:
    cfg = _load_config(args)
    try:
        spec = RandomMapSpec(
            n=int(cfg.get("n", 2)), q=float(cfg.get("q", 2.0)),
            nu=float(cfg.get("nu", 1.0)), delta=float(cfg.get("delta", 1.5)),
            depth=int(cfg.get("depth", 5)), seed=int(args.seed or 0))
    except (ValueError, TypeError) as e:
        print(f"bad configuration: {e}", file=sys.stderr)
        return EXIT_BADCONFIG
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    full_cfg = {"command": "fractal", "n": spec.n, "q": spec.q, "nu": spec.nu,
                "delta": spec.delta, "depth": spec.depth, "seed": spec.seed}

    cantor = build_cantor(spec.cantor_spec())
    norm_rows = []
    for j in range(1, min(spec.depth, 4) + 1):
        rep = gradient_norm_estimate(spec.n, spec.q, j, cantor=cantor)
        norm_rows.append((j, rep.single, rep.reference, rep.ratio,
                          rep.aggregate, rep.aggregate_bound, rep.count))
    write_csv(out / "bump_norms.csv",
              ["level", "single", "reference", "ratio", "aggregate",
               "aggregate_bound", "count"], norm_rows, full_cfg)

    energy = energy_integral_mc(spec, pairs=int(cfg.get("pairs", 20000)),
                                resamples=int(cfg.get("resamples", 8)))
    rows = [(int(j), c, m, r) for j, c, m, r in
            zip(energy.levels, energy.contributions, energy.model,
                energy.ratios)]
    write_csv(out / "energy_levels.csv",
              ["level", "contribution", "model", "ratio"], rows, full_cfg)

    probe = slow_target_gauge(energy.sigma, energy.mu, energy.b)
    cover = image_cover_sums(spec, probe)
    write_csv(out / "image_cover_sums.csv", ["level", "sum"],
              [(int(j), s) for j, s in zip(cover.levels, cover.sums)],
              full_cfg)
    with open(out / "fractal_summary.json", "w") as f:
        json.dump({"config_hash": config_hash(full_cfg),
                   "sigma": energy.sigma, "mu": energy.mu, "b": energy.b,
                   "energy_total": energy.total,
                   "pairs_used": energy.pairs_used,
                   "skipped": energy.skipped}, f, indent=2, sort_keys=True)
        f.write("\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    """Fast built-in invariant sweep; exit 3 when any check is undecided."""
    results = {}
    inconclusive = False

    A = young_mod.powerlog(2.0, 2.0)
    phi = gauge_mod.power_gauge(1.0, 2)
    bundle = build_distortion(A, phi, 2)
    rng = np.random.default_rng(args.seed or 0)
    s = np.exp(rng.uniform(0.5, 20.0, 500))
    t = np.exp(rng.uniform(-30.0, -1.0, 500))
    gap, rhs, rel = key_inequality_gap(bundle, s, t)
    results["key_inequality"] = bool(np.all(rel <= 1e-8))

    emb = young_mod.check_condition(A, 2, "embedding")
    results["embedding_condition"] = emb.holds
    inconclusive |= emb.holds is None

    grid = np.exp(rng.uniform(-20, -1, 200))
    vals = xi(bundle.psi, bundle.B_inverse, np.sort(grid))
    results["critical_profile_monotone"] = bool(np.all(np.diff(vals) > -1e-9))

    rep = classify_stability(bundle.psi, bundle.B_inverse)
    results["stability_classification"] = rep.regime
    inconclusive |= not rep.conclusive

    ok = all(v is not False for v in results.values())
    print(json.dumps(results, indent=2, sort_keys=True, default=str))
    if not ok:
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE if inconclusive else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--kappa", type=float, default=None,
                        help="gradient constant in the oscillation bound")
    common.add_argument("--cn", type=float, default=None,
                        help="ambient covering constant (default 6^n)")
    common.add_argument("--tol", type=float, default=1e-8)
    p = argparse.ArgumentParser(prog="orliczdist",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in [("distort", cmd_distort), ("examples", cmd_examples),
                     ("netmeasure", cmd_netmeasure),
                     ("fractal", cmd_fractal), ("verify", cmd_verify)]:
        sp = sub.add_parser(name, parents=[common])
        sp.set_defaults(func=fn)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_FAIL
    except (KeyError, json.JSONDecodeError) as e:
        print(f"bad configuration: {e}", file=sys.stderr)
        return EXIT_BADCONFIG


if __name__ == "__main__":
    sys.exit(main())
