"""Two-hop path-count matrices and the distances built on them.

Everything is held as integer path counts. ``M = A @ A / n`` and the
leave-one-out ``M^(-j)`` only differ by a rank-one correction on the counts,
so neither the correction nor distance comparisons ever touch floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np


@dataclass(frozen=True)
class TwoHop:
    counts: np.ndarray  # (A @ A) as int32

    @property
    def n(self) -> int:
        return self.counts.shape[0]

    @property
    def M(self) -> np.ndarray:
        return self.counts / self.n


@dataclass(frozen=True)
class LooTwoHopView:
    """``M^(-j)`` kept in the original n x n indexing.

    Row and column ``j`` of ``counts`` are zero and must not be read as data.
    """

    j: int
    counts: np.ndarray

    @property
    def n(self) -> int:
        return self.counts.shape[0]

    @property
    def divisor(self) -> int:
        return self.n - 1

    def value(self, i: int, l: int) -> float:
        if i == self.j or l == self.j:
            raise IndexError(f"node {self.j} is deleted in this view")
        return self.counts[i, l] / self.divisor

    @property
    def M(self) -> np.ndarray:
        out = self.counts / self.divisor
        out[self.j, :] = np.nan
        out[:, self.j] = np.nan
        return out

    def reduced(self) -> np.ndarray:
        """The (n-1) x (n-1) matrix with row/column ``j`` removed."""
        keep = np.arange(self.n) != self.j
        return self.counts[np.ix_(keep, keep)] / self.divisor


def full_twohop(A) -> TwoHop:
    A = np.asarray(A)
    # float64 BLAS is exact for path counts (< 2**53)
    Af = A.astype(np.float64)
    counts = np.rint(Af @ Af).astype(np.int32)
    return TwoHop(counts)


@nb.njit(cache=True)
def _loo_counts(S, A, j, out):
    n = S.shape[0]
    for i in range(n):
        ai = A[i, j]
        for l in range(n):
            out[i, l] = S[i, l] - ai * A[l, j]
    for l in range(n):
        out[j, l] = 0
        out[l, j] = 0


def loo_twohop(A, M: TwoHop, j: int) -> LooTwoHopView:
    """Remove node ``j`` from the path counts in O(n^2).

    Uses ``(A^2)_{il} - (A^(-j))^2_{il} = A_ij A_jl`` for i, l != j.
    """
    n = M.n
    if not 0 <= j < n:
        raise IndexError(f"node {j} out of range for n={n}")
    out = np.empty((n, n), dtype=np.int32)
    _loo_counts(M.counts, np.ascontiguousarray(A, dtype=np.int32), j, out)
    return LooTwoHopView(j=j, counts=out)


@nb.njit(cache=True, inline="always")
def _maxdiff(ti, tk, i, k):
    # max_l |ti[l] - tk[l]| over l not in {i, k}, with i < k
    n = ti.shape[0]
    m = 0
    for l in range(0, i):
        d = abs(ti[l] - tk[l])
        if d > m:
            m = d
    for l in range(i + 1, k):
        d = abs(ti[l] - tk[l])
        if d > m:
            m = d
    for l in range(k + 1, n):
        d = abs(ti[l] - tk[l])
        if d > m:
            m = d
    return m


@nb.njit(cache=True)
def pair_maxdiff(T, skip, out):
    """Fill ``out[i, k]`` with the row sup-distance between rows i and k of ``T``.

    Row ``skip`` (or none when ``skip < 0``) is left untouched; its column
    in ``T`` must already be zero so that it contributes nothing.
    """
    n = T.shape[0]
    for i in range(n):
        out[i, i] = 0
        if i == skip:
            continue
        ti = T[i]
        for k in range(i + 1, n):
            if k == skip:
                continue
            m = _maxdiff(ti, T[k], i, k)
            out[i, k] = m
            out[k, i] = m


@nb.njit(cache=True)
def row_maxdiff(T, i, skip, out):
    n = T.shape[0]
    ti = T[i]
    for k in range(n):
        if k == i or k == skip:
            out[k] = -1
        elif k < i:
            out[k] = _maxdiff(T[k], ti, k, i)
        else:
            out[k] = _maxdiff(ti, T[k], i, k)


def loo_distance_counts(view: LooTwoHopView, i: int) -> np.ndarray:
    """Integer LOO distances from ``i`` to every node, scaled by ``n - 1``.

    Entries for ``i`` itself and the deleted node are -1.
    """
    if i == view.j:
        raise ValueError(f"anchor {i} is the deleted node")
    out = np.empty(view.n, dtype=np.int32)
    row_maxdiff(view.counts, i, view.j, out)
    return out


def loo_distance(view: LooTwoHopView, i: int, k: int) -> float:
    """max over l outside {i, k, j} of |M^(-j)_il - M^(-j)_kl|."""
    if i == k:
        raise ValueError("LOO distance needs two distinct nodes")
    if view.j in (i, k):
        raise ValueError(f"node {view.j} is deleted in this view")
    lo, hi = (i, k) if i < k else (k, i)
    return int(_maxdiff(view.counts[lo], view.counts[hi], lo, hi)) / view.divisor


def zlz_distance(M: TwoHop, i: int, k: int) -> float:
    if i == k:
        return 0.0
    lo, hi = (i, k) if i < k else (k, i)
    return int(_maxdiff(M.counts[lo], M.counts[hi], lo, hi)) / M.n


def zlz_distance_counts(M: TwoHop) -> np.ndarray:
    """All pairwise ZLZ distances scaled by ``n`` (exact integers)."""
    out = np.empty((M.n, M.n), dtype=np.int32)
    pair_maxdiff(M.counts, -1, out)
    return out
