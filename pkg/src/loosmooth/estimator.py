"""One-sided LOO and classical (ZLZ) neighborhood smoothers."""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

from .graphon import LatentSample
from .neighborhood import Neighborhood, loo_neighborhoods, zlz_neighborhoods
from .twohop import TwoHop, full_twohop


@dataclass(frozen=True)
class EstimateMatrix:
    """One-sided predictions ``tilde`` and their symmetrization ``hat``.

    Diagonals are stored as 0 and never enter any metric.
    """

    tilde: np.ndarray
    hat: np.ndarray

    @property
    def n(self) -> int:
        return self.tilde.shape[0]


@dataclass(frozen=True)
class ErrorDecomposition:
    U: float  # stochastic fluctuation
    B: float  # neighborhood bias
    delta: float  # tilde - P_ij


def symmetrize(tilde) -> EstimateMatrix:
    tilde = np.array(tilde, dtype=float)
    np.fill_diagonal(tilde, 0.0)
    hat = (tilde + tilde.T) / 2
    return EstimateMatrix(tilde=tilde, hat=hat)


def _members(nbhd) -> np.ndarray:
    members = np.asarray(nbhd.members if isinstance(nbhd, Neighborhood) else nbhd, dtype=np.int64)
    if members.size == 0:
        raise ValueError("empty neighborhood")
    return members


def loo_predict(A, nbhd: Neighborhood, j: int) -> float:
    """Mean of A[k, j] over the LOO neighborhood (which must exclude j)."""
    members = _members(nbhd)
    if isinstance(nbhd, Neighborhood):
        if nbhd.excluded is not None and nbhd.excluded != j:
            raise ValueError(f"neighborhood was built without node {nbhd.excluded}, not {j}")
        if j in members or nbhd.anchor in members:
            raise ValueError("neighborhood contains its anchor or the target column")
    return float(np.asarray(A)[members, j].mean())


def zlz_predict(A, nbhd: Neighborhood, j: int) -> float:
    """Mean of A[k, j] over a ZLZ neighborhood; divides by its realized size."""
    members = _members(nbhd)
    return float(np.asarray(A)[members, j].mean())


def error_decompose(sample: LatentSample, nbhd: Neighborhood, A, i: int, j: int) -> ErrorDecomposition:
    """Split tilde_ij - P_ij into fluctuation U and bias B (needs the true P)."""
    members = _members(nbhd)
    P = sample.P
    A = np.asarray(A)
    U = float(np.mean(A[members, j] - P[members, j]))
    B = float(np.mean(P[members, j]) - P[i, j])
    delta = float(A[members, j].mean() - P[i, j])
    return ErrorDecomposition(U=U, B=B, delta=delta)


@dataclass(frozen=True)
class LooFit:
    """Result of the full leave-one-out smoothing pass."""

    h: int
    nbrs: np.ndarray  # (n, n, h): nbrs[i, j] = members of N_i^(-j)
    estimate: EstimateMatrix

    @property
    def tilde(self) -> np.ndarray:
        return self.estimate.tilde

    @property
    def hat(self) -> np.ndarray:
        return self.estimate.hat

    @property
    def n(self) -> int:
        return self.nbrs.shape[0]

    def neighborhood(self, i: int, j: int) -> Neighborhood:
        if i == j:
            raise ValueError("no neighborhood on the diagonal")
        return Neighborhood(anchor=i, excluded=j, members=self.nbrs[i, j].astype(np.int64), h=self.h)

    def column_average(self, X) -> np.ndarray:
        """``out[i, j]`` = mean of X[k, j] over N_i^(-j); 0 on the diagonal."""
        return neighborhood_average(self.nbrs, X)


@nb.njit(cache=True, parallel=True)
def _neighborhood_average(nbrs, XT, out):
    n, _, h = nbrs.shape
    for i in nb.prange(n):
        for j in range(n):
            if i == j:
                out[i, j] = 0.0
                continue
            s = 0.0
            col = XT[j]
            for t in range(h):
                s += col[nbrs[i, j, t]]
            out[i, j] = s / h


def neighborhood_average(nbrs, X) -> np.ndarray:
    n = nbrs.shape[0]
    XT = np.ascontiguousarray(np.asarray(X, dtype=np.float64).T)
    out = np.empty((n, n))
    _neighborhood_average(nbrs, XT, out)
    return out


def fit_loo(A, h: int, M: TwoHop | None = None) -> LooFit:
    """Leave-one-out smoother for every ordered pair i != j."""
    A = np.asarray(A)
    if M is None:
        M = full_twohop(A)
    nbrs = loo_neighborhoods(A, M, h)
    tilde = neighborhood_average(nbrs, A)
    return LooFit(h=h, nbrs=nbrs, estimate=symmetrize(tilde))


@dataclass(frozen=True)
class ZlzFit:
    h: int
    neighborhoods: list
    estimate: EstimateMatrix


def fit_zlz(A, h: int, M: TwoHop | None = None) -> ZlzFit:
    """Classical smoother: one neighborhood per node from the full graph."""
    A = np.asarray(A, dtype=float)
    if M is None:
        M = full_twohop(A)
    nbhds = zlz_neighborhoods(M, h)
    tilde = np.vstack([A[nbhd.members].mean(axis=0) for nbhd in nbhds])
    return ZlzFit(h=h, neighborhoods=nbhds, estimate=symmetrize(tilde))


def bias_matrix(sample: LatentSample, fit: LooFit) -> np.ndarray:
    """Oracle bias B_ij = mean_k P_kj - P_ij over N_i^(-j); 0 on the diagonal."""
    B = fit.column_average(sample.P) - sample.P
    np.fill_diagonal(B, 0.0)
    return B
