"""Command-line driver writing plot-ready CSV files plus a JSON manifest.

    python -m qentangle trajectory --n 8 --geometry nonlocal --steps 200 --runs 2000 --seed 1 --out traj.csv
    python -m qentangle saturation --n-range 4-10 --runs 1000 --seed 1 --out sat.csv
    python -m qentangle distribution --n 8 --t 10,20,100 --baseline --runs 2000 --seed 1 --out fg.csv
    python -m qentangle baseline --n 8 --runs 2000 --seed 1 --out base.csv

Every command writes ``<out>`` and ``<out>.manifest.json``; the manifest
holds the full configuration and can be fed back with ``--manifest`` to
regenerate identical files. Output never depends on ``--threads``.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .experiment import (MEASURES, histogram_density, ks_convergence, monte_carlo,
                         random_state_baseline, saturation_study)
from .groverian import OptimizerOptions
from .sampling import Geometry
from .scheme import SchemeConfig, default_record_times

log = logging.getLogger("qentangle")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

# argument names that describe the computation (echoed into the manifest)
_CONFIG_KEYS = {
    "trajectory": ["n", "geometry", "steps", "runs", "seed", "record_every", "g_dense_until", "g_every",
                   "restarts", "tolerance", "max_sweeps", "no_groverian"],
    "saturation": ["n_range", "geometry", "steps", "steps_per_qubit", "runs", "seed", "record_every",
                   "g_dense_until", "g_every", "restarts", "tolerance", "max_sweeps", "fraction",
                   "tail_fraction", "batches", "interpolate"],
    "distribution": ["n", "geometry", "t", "runs", "seed", "bins", "baseline", "restarts", "tolerance",
                     "max_sweeps"],
    "baseline": ["n", "runs", "seed", "restarts", "tolerance", "max_sweeps"],
}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Full-precision decimal text; 'inf' and 'nan' for non-finite values."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])


def _write_json(path: Path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _options(args) -> OptimizerOptions:
    return OptimizerOptions(restarts=args.restarts, max_sweeps=args.max_sweeps, tolerance=args.tolerance)


def _positive(name, value, minimum=1):
    if value < minimum:
        raise UsageError(f"--{name.replace('_', '-')} must be >= {minimum}")


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def _geometries(value: str) -> list[Geometry]:
    if value == "both":
        return [Geometry.LOCAL, Geometry.NONLOCAL]
    return [Geometry.parse(value)]


def cmd_trajectory(args, out: Path):
    _positive("n", args.n, 2)
    _positive("runs", args.runs, 2)
    _positive("steps", args.steps, 0)
    _positive("record_every", args.record_every)
    cfg = SchemeConfig(args.n, Geometry.parse(args.geometry), args.steps, args.seed)
    record = list(range(0, args.steps + 1, args.record_every))
    if record[-1] != args.steps:
        record.append(args.steps)
    options = None if args.no_groverian else _options(args)
    g_times = None
    if options is not None:
        rs = set(record)
        g_times = [t for t in default_record_times(args.steps, args.g_dense_until, args.g_every) if t in rs]
    ens = monte_carlo(cfg, args.runs, record, options, g_times, threads=args.threads)
    rows = []
    for k, t in enumerate(ens.times):
        rows.append([t, ens.mean["K"][k], ens.sem["K"][k], ens.k_excluded[k],
                     ens.mean["Q"][k], ens.sem["Q"][k], ens.mean["G"][k], ens.sem["G"][k]])
    _write_csv(out, ["t", "mean_K", "sem_K", "k_excluded", "mean_Q", "sem_Q", "mean_G", "sem_G"], rows)
    return [out]


def cmd_saturation(args, out: Path):
    ns = _int_list(args.n_range)
    if not ns or min(ns) < 2:
        raise UsageError("--n-range must list qubit counts >= 2")
    _positive("runs", args.runs, 2)
    if not 0 < args.fraction < 1:
        raise UsageError("--fraction must lie in (0, 1)")

    def steps_for_n(n):
        return args.steps if args.steps is not None else args.steps_per_qubit * n

    rows, fits = saturation_study(
        ns, _geometries(args.geometry), steps_for_n, args.runs, args.seed, _options(args),
        fraction=args.fraction, tail_fraction=args.tail_fraction, record_every=args.record_every,
        g_dense_until=args.g_dense_until, g_every=args.g_every, batches=args.batches, threads=args.threads,
        interpolate=args.interpolate, progress=lambda n, g: log.info("saturation: n=%d %s done", n, g.value))
    _write_csv(out, ["n", "geometry", "measure", "saturation_value", "t_star", "undetected", "t_star_sem"],
               [[r.n, r.geometry.value, r.measure, r.saturation_value, r.t_star, not r.detected, r.t_star_sem]
                for r in rows])
    report = {}
    for (geometry, m), byd in fits.items():
        report[f"{geometry.value}/{m}"] = {
            f"degree_{d}": {"coefficients": [fmt(c) for c in f.coefficients], "rss": fmt(f.rss), "r2": fmt(f.r2)}
            for d, f in byd.items()
        }
    fit_path = out.with_name(out.name + ".fits.json")
    _write_json(fit_path, report)
    return [out, fit_path]


def cmd_distribution(args, out: Path):
    _positive("n", args.n, 2)
    _positive("runs", args.runs, 2)
    _positive("bins", args.bins)
    ts = _int_list(args.t)
    if not ts or min(ts) < 0 or sorted(set(ts)) != ts:
        raise UsageError("--t must be increasing non-negative step counts")
    options = _options(args)
    cfg = SchemeConfig(args.n, Geometry.parse(args.geometry), max(ts), args.seed)
    ens = monte_carlo(cfg, args.runs, ts, options, ts, threads=args.threads)
    series = {f"t={t}": ens.samples["G"][:, k] for k, t in enumerate(ts)}
    if args.baseline:
        _, g = random_state_baseline(args.n, args.runs, options, seed=args.seed, threads=args.threads)
        for label, res in ks_convergence(series, g).items():
            log.info("KS %s vs baseline: D=%.4f p=%.3g", label, res.statistic, res.pvalue)
        series["baseline"] = g
    allg = np.concatenate(list(series.values()))
    value_range = (allg.min(), allg.max())
    rows = []
    for label, g in series.items():
        h = histogram_density(g, args.bins, value_range)
        for a, b, d in zip(h.edges[:-1], h.edges[1:], h.density):
            rows.append([label, a, b, d])
    _write_csv(out, ["series_label", "bin_left", "bin_right", "density"], rows)
    return [out]


def cmd_baseline(args, out: Path):
    _positive("n", args.n, 1)
    _positive("runs", args.runs, 1)
    q, g = random_state_baseline(args.n, args.runs, _options(args), seed=args.seed, threads=args.threads)
    _write_csv(out, ["sample", "Q", "G"], [[i, q[i], g[i]] for i in range(q.size)])
    return [out]


COMMANDS = {
    "trajectory": cmd_trajectory,
    "saturation": cmd_saturation,
    "distribution": cmd_distribution,
    "baseline": cmd_baseline,
}


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a non-negative 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qentangle", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_required=True):
        p.add_argument("--runs", type=int, default=2000, help="realizations (default 2000)")
        p.add_argument("--seed", type=_seed, required=seed_required, help="master seed (decimal 64-bit)")
        p.add_argument("--restarts", type=int, default=20, help="optimizer restarts for G")
        p.add_argument("--tolerance", type=float, default=1e-9, help="optimizer overlap tolerance per sweep")
        p.add_argument("--max-sweeps", type=int, default=1000)
        p.add_argument("--out", type=Path, required=seed_required, help="output CSV path")
        p.add_argument("--threads", type=int, default=1, help="worker threads; output is identical for any value")
        p.add_argument("--manifest", type=Path, help="re-run the configuration stored in this manifest")
        p.add_argument("--record-timing", action="store_true", help="store wall-clock duration in the manifest")
        p.add_argument("-v", "--verbose", action="store_true")

    def schedule(p):
        p.add_argument("--record-every", type=int, default=1, help="record K and Q every k steps")
        p.add_argument("--g-dense-until", type=int, default=50, help="evaluate G at every step up to here")
        p.add_argument("--g-every", type=int, default=5, help="then evaluate G every k steps")

    p = sub.add_parser("trajectory", help="ensemble means of K, Q, G vs t")
    p.add_argument("--n", type=int)
    p.add_argument("--geometry", choices=["local", "nonlocal"], default="nonlocal")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--no-groverian", action="store_true", help="skip G (K and Q only)")
    schedule(p)
    common(p, seed_required=False)

    p = sub.add_parser("saturation", help="90%% saturation times vs n with polynomial fits")
    p.add_argument("--n-range", default="4-10", help="qubit counts, e.g. 4-10 or 4,6,8")
    p.add_argument("--geometry", choices=["local", "nonlocal", "both"], default="both")
    p.add_argument("--steps", type=int, help="steps for every n")
    p.add_argument("--steps-per-qubit", type=int, default=40, help="steps = k * n when --steps is absent")
    p.add_argument("--fraction", type=float, default=0.9)
    p.add_argument("--tail-fraction", type=float, default=0.2, help="share of points averaged for saturation")
    p.add_argument("--batches", type=int, default=10, help="run batches used for the t* standard error")
    p.add_argument("--interpolate", action="store_true",
                   help="place t* between recorded steps by linear interpolation")
    schedule(p)
    common(p, seed_required=False)

    p = sub.add_parser("distribution", help="histograms of G at fixed t")
    p.add_argument("--n", type=int)
    p.add_argument("--geometry", choices=["local", "nonlocal"], default="nonlocal")
    p.add_argument("--t", default="10,20,100", help="comma-separated step counts")
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--baseline", action="store_true", help="add the random-state reference series")
    common(p, seed_required=False)

    p = sub.add_parser("baseline", help="Q and G of Haar-random states")
    p.add_argument("--n", type=int)
    common(p, seed_required=False)
    return parser


def _apply_manifest(args):
    data = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    if data.get("command") != args.command:
        raise UsageError(f"manifest is for {data.get('command')!r}, not {args.command!r}")
    for key, value in data["config"].items():
        setattr(args, key, value)


def _manifest(args, paths, duration):
    config = {k: getattr(args, k) for k in _CONFIG_KEYS[args.command]}
    out = {
        "tool": "qentangle",
        "version": __version__,
        "command": args.command,
        "config": config,
        "outputs": [p.name for p in paths],
    }
    if args.record_timing:
        out["wall_clock_seconds"] = duration
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.manifest is not None:
            _apply_manifest(args)
        for key in ("seed", "out"):
            if getattr(args, key, None) is None:
                raise UsageError(f"--{key} is required")
        if getattr(args, "n", 0) is None:
            raise UsageError("--n is required")
        _positive("threads", args.threads)
        _positive("restarts", args.restarts)
        _positive("max_sweeps", args.max_sweeps)
        if not args.tolerance > 0:
            raise UsageError("--tolerance must be > 0")
        out = Path(args.out)
        start = time.perf_counter()
        paths = COMMANDS[args.command](args, out)
        duration = time.perf_counter() - start
        manifest_path = out.with_name(out.name + ".manifest.json")
        _write_json(manifest_path, _manifest(args, paths, duration))
        log.info("%s finished in %.1fs", args.command, duration)
    except UsageError as exc:
        print(f"qentangle {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qentangle {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        print(f"qentangle {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
