"""Wall-clock timings for the two-hop, per-column and full pipeline paths."""

from __future__ import annotations

import time
import timeit

import numpy as np

from .graphon import GraphonModel, sample_adjacency, sample_latent, substream
from .harness import SimConfig, run_simulation
from .neighborhood import default_bandwidth, loo_neighborhoods_for_column
from .twohop import full_twohop, loo_twohop


def naive_loo_counts(A, j: int) -> np.ndarray:
    """Delete node j and square from scratch; the O(n^3) reference path."""
    keep = np.arange(A.shape[0]) != j
    B = np.asarray(A)[np.ix_(keep, keep)].astype(np.float64)
    return np.rint(B @ B).astype(np.int32)


def _best(fn, number, repeat=5):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def _graph(n, seed):
    model = GraphonModel("smooth")
    sample = sample_latent(model, n, substream(seed, "latent"))
    return sample_adjacency(sample, substream(seed, "edges"))


def correction_speedup(n: int = 500, seed: int = 0, columns=(0, 1, 2)) -> dict:
    """Per-column rank-one correction vs deleting the node and re-squaring."""
    A = _graph(n, seed)
    M = full_twohop(A)
    loo_twohop(A, M, 0)  # compile
    t_corr = np.median([_best(lambda: loo_twohop(A, M, j), number=20) for j in columns])
    t_naive = np.median([_best(lambda: naive_loo_counts(A, j), number=3) for j in columns])
    return {"n": n, "correction_s": float(t_corr), "naive_resquare_s": float(t_naive),
            "speedup": float(t_naive / t_corr)}


# wall-clock budgets printed alongside the pipeline timings
PIPELINE_BUDGET_S = {100: 10.0, 200: 60.0, 500: 900.0}


def run_bench(sizes=(100, 200, 500), seed: int = 0, pipeline: bool = True) -> dict:
    # warm the JIT so compile time is not billed to the first size
    small = _graph(20, seed)
    loo_neighborhoods_for_column(small, full_twohop(small), 0, 4)
    run_simulation(SimConfig(n=20, h=4, seed=seed))

    rows = []
    for n in sizes:
        A = _graph(n, seed)
        h = default_bandwidth(n)
        t_full = _best(lambda: full_twohop(A), number=3, repeat=3)
        M = full_twohop(A)
        t_col = _best(lambda: loo_neighborhoods_for_column(A, M, 0, h), number=1, repeat=3)
        row = {"n": n, "h": h, "full_twohop_s": t_full, "per_column_pass_s": t_col,
               "projected_all_columns_s": t_col * n}
        if pipeline:
            t0 = time.perf_counter()
            run_simulation(SimConfig(n=n, seed=seed))
            row["pipeline_s"] = time.perf_counter() - t0
            budget = PIPELINE_BUDGET_S.get(n)
            if budget is not None:
                row["pipeline_budget_s"] = budget
                row["within_budget"] = row["pipeline_s"] <= budget
        rows.append(row)
    sp = correction_speedup(max(sizes), seed)
    return {"sizes": rows, "correction": sp, "correction_path_used": sp["speedup"] >= 10.0}
