"""Honest leave-one-out cross-validation for the neighborhood size."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

import numpy as np

from .graphon import LatentSample
from .neighborhood import check_bandwidth, loo_row_distance_counts, row_neighborhoods
from .twohop import TwoHop, full_twohop

GRID_SCALES = (0.5, 0.75, 1.0, 1.25, 1.5, 2.0)


@dataclass(frozen=True)
class CvResult:
    row: int
    grid: tuple[int, ...]
    scores: tuple[float, ...]
    selected: int

    def to_dict(self) -> dict:
        return {"row": self.row, "grid": list(self.grid), "scores": list(self.scores),
                "selected": self.selected}


def default_grid(n: int) -> list[int]:
    """floor(c * sqrt(n log n)) for a spread of c, clamped to [2, n - 2] and deduplicated."""
    base = math.sqrt(n * math.log(n))
    return sorted({min(max(math.floor(c * base), 2), n - 2) for c in GRID_SCALES})


def _dedupe(grid, n):
    if len(grid) == 0:
        raise ValueError("empty bandwidth grid")
    return sorted({check_bandwidth(h, n) for h in grid})


def row_predictions(A, i: int, h: int, M: TwoHop | None = None, R: np.ndarray | None = None) -> np.ndarray:
    """P~_ij^(-j)(h) for every j != i; entry i is NaN."""
    A = np.asarray(A)
    if R is None:
        R = loo_row_distance_counts(A, M if M is not None else full_twohop(A), i)
    nb = row_neighborhoods(R, i, h)
    n = A.shape[0]
    cols = np.arange(n)
    out = A[nb, cols[:, None]].mean(axis=1).astype(float)
    out[i] = np.nan
    return out


def cv_scores(A, i: int, grid, M: TwoHop | None = None) -> tuple[list[int], np.ndarray]:
    A = np.asarray(A)
    n = A.shape[0]
    if not 0 <= i < n:
        raise IndexError(f"row {i} out of range")
    grid = _dedupe(grid, n)
    R = loo_row_distance_counts(A, M if M is not None else full_twohop(A), i)
    keep = np.arange(n) != i
    scores = []
    for h in grid:
        pred = row_predictions(A, i, h, R=R)
        scores.append(float(np.mean((A[i, keep] - pred[keep]) ** 2)))
    return grid, np.array(scores)


def cv_score(A, i: int, h: int, M: TwoHop | None = None) -> float:
    """Mean squared error of held-out edges A_ij against their LOO predictors."""
    _, scores = cv_scores(A, i, [h], M)
    return float(scores[0])


def cv_select(A, i: int, grid=None, M: TwoHop | None = None) -> CvResult:
    A = np.asarray(A)
    if grid is None:
        grid = default_grid(A.shape[0])
    grid, scores = cv_scores(A, i, grid, M)
    # grid is ascending, so argmin already prefers the smaller h on ties
    best = int(np.argmin(scores))
    return CvResult(row=i, grid=tuple(grid), scores=tuple(float(s) for s in scores), selected=grid[best])


def select_global_bandwidth(A, rows, grid=None) -> tuple[int, list[CvResult]]:
    """Lower median of per-row CV selections over ``rows``."""
    A = np.asarray(A)
    M = full_twohop(A)
    results = [cv_select(A, int(i), grid, M) for i in rows]
    return int(statistics.median_low([r.selected for r in results])), results


def oracle_prediction_risk(sample: LatentSample, A, i: int, h: int, M: TwoHop | None = None) -> float:
    """R_i(h) = mean over j != i of (P_ij - P~_ij^(-j)(h))^2; needs the true P."""
    A = np.asarray(A)
    h = check_bandwidth(h, A.shape[0])
    pred = row_predictions(A, i, h, M)
    keep = np.arange(A.shape[0]) != i
    return float(np.mean((sample.P[i, keep] - pred[keep]) ** 2))


def bernoulli_noise_floor(sample: LatentSample, i: int) -> float:
    """mean over j != i of P_ij (1 - P_ij), the part of the CV score no h can remove."""
    p = np.delete(sample.P[i], i)
    return float(np.mean(p * (1 - p)))
