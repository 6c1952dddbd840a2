"""Leave-one-out and classical (ZLZ) neighborhood selection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from .twohop import (
    LooTwoHopView,
    TwoHop,
    _loo_counts,
    loo_distance_counts,
    pair_maxdiff,
    row_maxdiff,
    zlz_distance_counts,
)


@dataclass(frozen=True)
class Neighborhood:
    anchor: int
    excluded: int | None  # deleted node for LOO, None for ZLZ
    members: np.ndarray  # sorted by (distance, index)
    h: int

    def __len__(self):
        return len(self.members)


def default_bandwidth(n: int, scale: float = 1.5) -> int:
    """floor(scale * sqrt(n log n)), clamped to [2, n - 2]."""
    if n < 8:
        raise ValueError(f"default bandwidth needs n >= 8, got {n}")
    h = math.floor(scale * math.sqrt(n * math.log(n)))
    return int(min(max(h, 2), n - 2))


def undersmooth_bandwidth(n: int) -> int:
    """floor(sqrt(n) / log n), clamped to [2, n - 2]."""
    if n < 8:
        raise ValueError(f"undersmoothing bandwidth needs n >= 8, got {n}")
    h = math.floor(math.sqrt(n) / math.log(n))
    return int(min(max(h, 2), n - 2))


def check_bandwidth(h: int, n: int) -> int:
    if isinstance(h, bool) or int(h) != h:
        raise ValueError(f"bandwidth must be an integer, got {h!r}")
    h = int(h)
    if not 2 <= h <= n - 2:
        raise ValueError(f"bandwidth h={h} outside [2, {n - 2}] for n={n}")
    return h


@nb.njit(cache=True)
def select_smallest(d, h, out):
    """Write the ``h`` indices with smallest ``d`` into ``out``, ordered by (d, index).

    Negative entries of ``d`` mark excluded nodes. ``d`` holds small
    non-negative integers, so a counting pass replaces sorting.
    """
    n = d.shape[0]
    top = 0
    for k in range(n):
        if d[k] > top:
            top = d[k]
    cnt = np.zeros(top + 2, dtype=np.int64)
    for k in range(n):
        if d[k] >= 0:
            cnt[d[k]] += 1
    below = 0
    t = 0
    while below + cnt[t] < h:
        below += cnt[t]
        t += 1
    off = np.empty(t + 1, dtype=np.int64)
    acc = 0
    for v in range(t + 1):
        off[v] = acc
        acc += cnt[v]
    quota = h - below
    for k in range(n):
        v = d[k]
        if v < 0 or v > t:
            continue
        if v == t:
            if quota == 0:
                continue
            quota -= 1
        out[off[v]] = k
        off[v] += 1


def loo_neighborhood(view: LooTwoHopView, i: int, h: int) -> Neighborhood:
    """The ``h`` nodes nearest ``i`` under the LOO distance, ties to smaller index."""
    h = check_bandwidth(h, view.n)
    d = loo_distance_counts(view, i)
    members = np.empty(h, dtype=np.int64)
    select_smallest(d, h, members)
    return Neighborhood(anchor=i, excluded=view.j, members=members, h=h)


def zlz_neighborhood(M: TwoHop, i: int, h: int, dist_counts: np.ndarray | None = None) -> Neighborhood:
    """All k != i whose ZLZ distance is at most the h-th smallest distance."""
    n = M.n
    if not 1 <= h <= n - 1:
        raise ValueError(f"bandwidth h={h} outside [1, {n - 1}] for n={n}")
    if dist_counts is None:
        d = np.empty(n, dtype=np.int32)
        row_maxdiff(M.counts, i, -1, d)
    else:
        d = dist_counts[i].astype(np.int32).copy()
        d[i] = -1
    others = np.delete(d, i)
    q = np.partition(others, h - 1)[h - 1]
    cand = np.flatnonzero((d >= 0) & (d <= q))
    members = cand[np.lexsort((cand, d[cand]))]
    return Neighborhood(anchor=i, excluded=None, members=members, h=h)


def zlz_neighborhoods(M: TwoHop, h: int) -> list[Neighborhood]:
    dist = zlz_distance_counts(M)
    return [zlz_neighborhood(M, i, h, dist_counts=dist) for i in range(M.n)]


def _index_dtype(n):
    return np.int16 if n < np.iinfo(np.int16).max else np.int32


@nb.njit(cache=True)
def _column_pass(S, A, j, h, T, D, out):
    # neighborhoods N_i^(-j) for every i, written to out[i, :]
    n = S.shape[0]
    _loo_counts(S, A, j, T)
    pair_maxdiff(T, j, D)
    for i in range(n):
        if i == j:
            for t in range(h):
                out[i, t] = -1
            continue
        row = D[i]
        row[i] = -1
        row[j] = -1
        select_smallest(row, h, out[i])


@nb.njit(cache=True, parallel=True)
def _all_columns_pass(S, A, h, nbrs):
    n = S.shape[0]
    for j in nb.prange(n):
        T = np.empty((n, n), dtype=np.int32)
        D = np.empty((n, n), dtype=np.int32)
        buf = np.empty((n, h), dtype=np.int64)
        _column_pass(S, A, j, h, T, D, buf)
        for i in range(n):
            for t in range(h):
                nbrs[i, j, t] = buf[i, t]


def loo_neighborhoods_for_column(A, M: TwoHop, j: int, h: int) -> np.ndarray:
    """Members of N_i^(-j) for all anchors i as an (n, h) array; row j is -1."""
    n = M.n
    h = check_bandwidth(h, n)
    T = np.empty((n, n), dtype=np.int32)
    D = np.empty((n, n), dtype=np.int32)
    out = np.empty((n, h), dtype=np.int64)
    _column_pass(M.counts, np.ascontiguousarray(A, dtype=np.int32), j, h, T, D, out)
    return out


def loo_neighborhoods(A, M: TwoHop, h: int) -> np.ndarray:
    """All LOO neighborhoods as an (n, n, h) index array ``nbrs[i, j]``.

    Diagonal slots ``nbrs[i, i]`` are -1. Each column j is handled
    independently, so the result does not depend on the thread count.
    """
    n = M.n
    h = check_bandwidth(h, n)
    nbrs = np.empty((n, n, h), dtype=_index_dtype(n))
    _all_columns_pass(M.counts, np.ascontiguousarray(A, dtype=np.int32), h, nbrs)
    return nbrs


@nb.njit(cache=True, parallel=True)
def _row_pass(S, A, i, R):
    n = S.shape[0]
    for j in nb.prange(n):
        if j == i:
            for k in range(n):
                R[j, k] = -1
            continue
        T = np.empty((n, n), dtype=np.int32)
        _loo_counts(S, A, j, T)
        row_maxdiff(T, i, j, R[j])


def loo_row_distance_counts(A, M: TwoHop, i: int) -> np.ndarray:
    """``R[j, k]`` = (n - 1) * d^(-j)(i, k); -1 where k in {i, j} and on row i."""
    n = M.n
    R = np.empty((n, n), dtype=np.int32)
    _row_pass(M.counts, np.ascontiguousarray(A, dtype=np.int32), i, R)
    return R


def row_neighborhoods(R: np.ndarray, i: int, h: int) -> np.ndarray:
    """Select N_i^(-j) for every j from precomputed row distances; (n, h), row i is -1."""
    n = R.shape[0]
    h = check_bandwidth(h, n)
    out = np.full((n, h), -1, dtype=np.int64)
    for j in range(n):
        if j == i:
            continue
        select_smallest(R[j], h, out[j])
    return out
