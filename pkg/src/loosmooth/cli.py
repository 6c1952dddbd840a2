"""Command-line entry point: ``loosmooth {simulate,estimate,tune,bench}``.

Exit status: 0 success, 2 usage error, 3 input-data error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .graphon import check_adjacency, substream
from .estimator import fit_loo
from .harness import EDGE_COLUMNS, DEFAULT_SEED, SimConfig, run_replicated, run_simulation
from .inference import DEFAULT_ALPHA, DEFAULT_C_BIAS, interval_matrices
from .io import InputDataError, read_adjacency, write_adjacency, write_csv, write_interval_reports, write_json
from .neighborhood import check_bandwidth, default_bandwidth, undersmooth_bandwidth
from .tuning import cv_select, default_grid, select_global_bandwidth

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4

ESTIMATE_COLUMNS = ("i", "j", "p_tilde", "p_hat", "eb_lo", "eb_hi", "n_lo", "n_hi")


class UsageError(Exception):
    pass


def _set_threads(k):
    if k is None:
        return
    import numba

    if k < 1:
        raise UsageError("--threads must be at least 1")
    numba.set_num_threads(min(k, numba.config.NUMBA_NUM_THREADS))


def _parse_grid(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--grid expects comma-separated integers, got {text!r}") from None


def _print_table(rows, out=sys.stdout):
    width = max(len(str(k)) for k, _ in rows)
    for k, v in rows:
        if isinstance(v, float):
            v = f"{v:.6g}"
        print(f"  {str(k):<{width}}  {v}", file=out)


# --- simulate ---------------------------------------------------------------

_SIM_FLAGS = ("graphon", "n", "h", "alpha", "c_bias", "seed", "replicates", "metrics_row", "cv_rows")


def _sim_config(args) -> SimConfig:
    cfg = {}
    if args.config is not None:
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputDataError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise InputDataError("config file must hold a JSON object")
    for key in _SIM_FLAGS:
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    if args.undersmooth:
        cfg["h"] = "undersmooth"
    try:
        return SimConfig.from_dict(cfg)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args) -> int:
    cfg = _sim_config(args)
    _set_threads(args.threads)
    print(f"graphon={cfg.graphon.name} n={cfg.n} h={cfg.static_h() or cfg.h} alpha={cfg.alpha} "
          f"c_bias={cfg.c_bias} seed={cfg.seed} replicates={cfg.replicates}")

    if cfg.replicates == 1 or args.edges or args.dump_adjacency:
        report, run = run_simulation(cfg, replicate=0, keep=True)
        if args.dump_adjacency:
            write_adjacency(args.dump_adjacency, run.A)
        if args.edges:
            write_csv(args.edges, EDGE_COLUMNS, run.edge_rows())
    if cfg.replicates == 1:
        print(f"resolved h = {report.h}")
        _print_table(list(report.metrics().items()))
        payload = report.to_dict()
    else:
        agg = run_replicated(cfg)
        print(f"resolved h (mean over replicates) = {agg.mean['h']:g}")
        _print_table([(k, f"{agg.mean[k]:.6g} ± {agg.stderr[k]:.2g}") for k in agg.mean])
        payload = agg.to_dict()
    if args.out:
        write_json(args.out, payload)
    return 0


# --- estimate / tune ----------------------------------------------------------

def _load(args):
    A = read_adjacency(args.input, symmetrize=args.symmetrize)
    try:
        return check_adjacency(A)
    except ValueError as exc:
        raise InputDataError(str(exc)) from None


def _resolve_h(text, A, args):
    n = A.shape[0]
    try:
        if text == "auto":
            return default_bandwidth(n), None
        if text == "undersmooth":
            return undersmooth_bandwidth(n), None
        if text == "cv":
            grid = _parse_grid(args.grid) if args.grid else default_grid(n)
            rng = substream(args.seed, "tuning")
            rows = np.sort(rng.choice(n, size=min(args.cv_rows, n), replace=False))
            h, results = select_global_bandwidth(A, rows, grid)
            return h, {"selected": h, "rule": "lower median of per-row selections",
                       "rows": [r.to_dict() for r in results]}
        return check_bandwidth(int(text), n), None
    except ValueError as exc:
        raise UsageError(f"--h {text}: {exc}") from None


def cmd_estimate(args) -> int:
    _set_threads(args.threads)
    A = _load(args)
    n = A.shape[0]
    h, tuning = _resolve_h(args.h, A, args)
    try:
        fit = fit_loo(A, h)
        iv = interval_matrices(fit, args.alpha, args.c_bias)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    def rows():
        for i in range(n):
            for j in range(n):
                if i != j:
                    yield (i, j, repr(float(fit.tilde[i, j])), repr(float(fit.hat[i, j])),
                           repr(float(iv.eb_lo[i, j])), repr(float(iv.eb_hi[i, j])),
                           repr(float(iv.n_lo[i, j])), repr(float(iv.n_hi[i, j])))

    write_csv(args.out, ESTIMATE_COLUMNS, rows())
    if args.intervals:
        write_interval_reports(args.intervals, fit_reports(fit, iv))
    if tuning is not None:
        sidecar = args.tuning_out or str(Path(args.out).with_suffix("")) + ".tuning.json"
        write_json(sidecar, tuning)
        print(f"tuning written to {sidecar}")
    print(f"n={n} h={h} rows={n * (n - 1)} -> {args.out}")
    return 0


def fit_reports(fit, iv):
    return iv.reports(fit, "EB") + iv.reports(fit, "Normal")


def cmd_tune(args) -> int:
    _set_threads(args.threads)
    A = _load(args)
    n = A.shape[0]
    grid = _parse_grid(args.grid) if args.grid else default_grid(n)
    if not 0 <= args.row < n:
        raise UsageError(f"--row {args.row} out of range for n={n}")
    try:
        res = cv_select(A, args.row, grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"row {res.row}: CV scores")
    print(f"  {'h':>6}  {'score':>12}")
    for h, s in zip(res.grid, res.scores):
        mark = "  <- selected" if h == res.selected else ""
        print(f"  {h:>6}  {s:>12.6g}{mark}")
    print(json.dumps(res.to_dict()))
    if args.out:
        write_json(args.out, res.to_dict())
    return 0


def cmd_bench(args) -> int:
    from .bench import run_bench

    _set_threads(args.threads)
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError:
        raise UsageError(f"--sizes expects comma-separated integers, got {args.sizes!r}") from None
    result = run_bench(sizes, seed=args.seed, pipeline=not args.no_pipeline)
    for row in result["sizes"]:
        _print_table(list(row.items()))
        print()
    c = result["correction"]
    print(f"per-column correction {c['correction_s'] * 1e3:.3f} ms vs naive re-squaring "
          f"{c['naive_resquare_s'] * 1e3:.3f} ms at n={c['n']}: {c['speedup']:.1f}x")
    print(json.dumps(result))
    if args.out:
        write_json(args.out, result)
    if not result["correction_path_used"]:
        print("per-column correction is not faster than re-squaring", file=sys.stderr)
        return EXIT_INTERNAL
    return 0


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="loosmooth", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run the simulation study on a synthetic graphon")
    s.add_argument("--config", help="JSON file of SimConfig fields; flags override it")
    s.add_argument("--graphon", help="smooth|block|wiggly|rank1|spiky|constant:<c>")
    s.add_argument("--n", type=int)
    s.add_argument("--h", help="integer, auto, cv or undersmooth")
    s.add_argument("--undersmooth", action="store_true", help="use h = floor(sqrt(n) / ln n)")
    s.add_argument("--alpha", type=float)
    s.add_argument("--c-bias", dest="c_bias", type=float)
    s.add_argument("--seed", type=int, help=f"master seed (default {DEFAULT_SEED})")
    s.add_argument("--replicates", type=int)
    s.add_argument("--metrics-row", dest="metrics_row", type=int)
    s.add_argument("--cv-rows", dest="cv_rows", type=int)
    s.add_argument("--out", help="write the report as JSON")
    s.add_argument("--edges", help="write per-edge estimates and intervals as CSV")
    s.add_argument("--dump-adjacency", dest="dump_adjacency", help="write the sampled graph as an edge list")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_simulate)

    def data_args(q):
        q.add_argument("input", help="edge list ('# n=<count>' header) or dense 0/1 CSV")
        q.add_argument("--symmetrize", action="store_true", help="use A or A^T and clear the diagonal")
        q.add_argument("--threads", type=int)
        q.add_argument("--grid", help="comma-separated candidate bandwidths for CV")

    e = sub.add_parser("estimate", help="LOO estimates and intervals for an observed graph")
    data_args(e)
    e.add_argument("--h", default="auto", help="integer, auto, cv or undersmooth (default auto)")
    e.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    e.add_argument("--c-bias", dest="c_bias", type=float, default=DEFAULT_C_BIAS)
    e.add_argument("--out", required=True, help="per-edge CSV output")
    e.add_argument("--intervals", help="also write one row per interval (long format)")
    e.add_argument("--tuning-out", dest="tuning_out", help="CV sidecar JSON (with --h cv)")
    e.add_argument("--cv-rows", dest="cv_rows", type=int, default=5)
    e.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for the CV row subsample")
    e.set_defaults(func=cmd_estimate)

    t = sub.add_parser("tune", help="cross-validate the bandwidth for one row")
    data_args(t)
    t.add_argument("--row", type=int, default=0)
    t.add_argument("--out", help="write the CV result as JSON")
    t.set_defaults(func=cmd_tune)

    b = sub.add_parser("bench", help="time the two-hop and smoothing paths")
    b.add_argument("--sizes", default="100,200,500")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--no-pipeline", dest="no_pipeline", action="store_true")
    b.add_argument("--out", help="write timings as JSON")
    b.add_argument("--threads", type=int)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"loosmooth {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputDataError as exc:
        print(f"loosmooth {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, FloatingPointError) as exc:
        print(f"loosmooth {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
