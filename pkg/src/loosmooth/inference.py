"""Entrywise confidence intervals for the one-sided LOO predictor.

Two constructions are provided:

* empirical Bernstein (``EB``): finite-sample, centred on ``tilde`` and
  valid for the neighborhood average of P over N_i^(-j);
* normal approximation (``Normal``): plug-in variance from the symmetrized
  estimate plus an additive bias cushion ``c_bias * (log n / n) ** 0.25``.

Both are clipped to [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np
from scipy import stats

from .estimator import LooFit
from .graphon import LatentSample
from .neighborhood import Neighborhood

DEFAULT_ALPHA = 0.05
DEFAULT_C_BIAS = 0.1

INTERVAL_COLUMNS = ("i", "j", "estimate", "method", "lower", "upper", "halfwidth", "alpha")


@dataclass(frozen=True)
class VarianceEstimates:
    s2: float
    v_plugin: float
    v_oracle: float | None = None


@dataclass(frozen=True)
class IntervalReport:
    i: int | None
    j: int | None
    estimate: float
    method: str  # "EB" or "Normal"
    lower: float
    upper: float
    halfwidth: float
    alpha: float
    bias_cushion: float = 0.0

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    def row(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in INTERVAL_COLUMNS}


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _check_h(h):
    if h < 2:
        raise ValueError(f"need h >= 2, got {h}")


def sample_variance(p_tilde, h: int):
    """Unbiased sample variance of h binary observations with mean ``p_tilde``."""
    _check_h(h)
    p = np.asarray(p_tilde, dtype=float)
    out = h / (h - 1) * p * (1.0 - p)
    return float(out) if out.ndim == 0 else out


def eb_halfwidth(s2, h: int, alpha: float = DEFAULT_ALPHA):
    _check_h(h)
    _check_alpha(alpha)
    s2 = np.asarray(s2, dtype=float)
    if np.any(s2 < 0):
        raise ValueError("sample variance must be non-negative")
    log_term = math.log(4.0 / alpha)
    out = np.sqrt(2.0 * s2 * log_term / h) + 7.0 * log_term / (3.0 * (h - 1))
    return float(out) if out.ndim == 0 else out


def clip_interval(center, halfwidth):
    lo = np.clip(np.asarray(center) - halfwidth, 0.0, 1.0)
    hi = np.clip(np.asarray(center) + halfwidth, 0.0, 1.0)
    return lo, hi


def eb_interval(p_tilde: float, h: int, alpha: float = DEFAULT_ALPHA, s2: float | None = None,
                i: int | None = None, j: int | None = None) -> IntervalReport:
    if s2 is None:
        s2 = sample_variance(p_tilde, h)
    w = eb_halfwidth(s2, h, alpha)
    lo, hi = clip_interval(p_tilde, w)
    return IntervalReport(i, j, float(p_tilde), "EB", float(lo), float(hi), float(w), alpha, 0.0)


def normal_quantile(alpha: float) -> float:
    """Two-sided standard normal quantile z_{1 - alpha/2}; exactly 1.96 at alpha = 0.05."""
    _check_alpha(alpha)
    if alpha == 0.05:
        return 1.96
    return float(stats.norm.ppf(1.0 - alpha / 2.0))


def bias_cushion(n: int, c_bias: float = DEFAULT_C_BIAS) -> float:
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return c_bias * (math.log(n) / n) ** 0.25


def normal_halfwidth(v, n: int, alpha: float = DEFAULT_ALPHA, c_bias: float = DEFAULT_C_BIAS):
    v = np.asarray(v, dtype=float)
    if np.any(v < 0):
        raise ValueError("variance must be non-negative")
    out = normal_quantile(alpha) * np.sqrt(v) + bias_cushion(n, c_bias)
    return float(out) if out.ndim == 0 else out


def normal_interval(p_tilde: float, v: float, n: int, alpha: float = DEFAULT_ALPHA,
                    c_bias: float = DEFAULT_C_BIAS, i: int | None = None,
                    j: int | None = None) -> IntervalReport:
    if n < 8:
        raise ValueError(f"need n >= 8, got {n}")
    w = normal_halfwidth(v, n, alpha, c_bias)
    lo, hi = clip_interval(p_tilde, w)
    return IntervalReport(i, j, float(p_tilde), "Normal", float(lo), float(hi), float(w), alpha,
                          bias_cushion(n, c_bias))


def widen(report: IntervalReport, radius: float) -> IntervalReport:
    """Minkowski sum of the interval with [-radius, radius], clipped to [0, 1]."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    w = report.halfwidth + radius
    lo = max(report.lower - radius, 0.0)
    hi = min(report.upper + radius, 1.0)
    return IntervalReport(report.i, report.j, report.estimate, report.method, lo, hi, w,
                          report.alpha, report.bias_cushion + radius)


def _members(nbhd):
    return np.asarray(nbhd.members if isinstance(nbhd, Neighborhood) else nbhd, dtype=np.int64)


def plugin_variance(p_hat, nbhd: Neighborhood, j: int) -> float:
    """(1/h^2) * sum over the neighborhood of hat_kj (1 - hat_kj)."""
    hat = p_hat.hat if hasattr(p_hat, "hat") else np.asarray(p_hat)
    members = _members(nbhd)
    q = hat[members, j]
    return float(np.sum(q * (1.0 - q)) / len(members) ** 2)


def oracle_variance(sample: LatentSample, nbhd: Neighborhood, j: int) -> float:
    members = _members(nbhd)
    p = sample.P[members, j]
    return float(np.sum(p * (1.0 - p)) / len(members) ** 2)


def variance_estimates(fit: LooFit, i: int, j: int, sample: LatentSample | None = None) -> VarianceEstimates:
    nbhd = fit.neighborhood(i, j)
    s2 = sample_variance(fit.tilde[i, j], fit.h)
    v_oracle = oracle_variance(sample, nbhd, j) if sample is not None else None
    return VarianceEstimates(s2=s2, v_plugin=plugin_variance(fit.estimate, nbhd, j), v_oracle=v_oracle)


def coverage(sample: LatentSample | np.ndarray, reports: Iterable[IntervalReport]) -> float:
    """Fraction of ordered pairs i != j whose P_ij lies in its interval."""
    P = sample.P if isinstance(sample, LatentSample) else np.asarray(sample)
    n = P.shape[0]
    seen = np.zeros((n, n), dtype=bool)
    hit = 0
    for r in reports:
        if r.i is None or r.j is None or r.i == r.j:
            raise ValueError("every report needs an off-diagonal (i, j)")
        if seen[r.i, r.j]:
            raise ValueError(f"duplicate report for pair ({r.i}, {r.j})")
        seen[r.i, r.j] = True
        hit += r.contains(P[r.i, r.j])
    np.fill_diagonal(seen, True)
    if not seen.all():
        i, j = np.argwhere(~seen)[0]
        raise ValueError(f"missing report for pair ({i}, {j})")
    return hit / (n * (n - 1))


@dataclass(frozen=True)
class IntervalMatrices:
    """Both interval families for every ordered pair, as n x n arrays."""

    alpha: float
    c_bias: float
    eb_lo: np.ndarray
    eb_hi: np.ndarray
    eb_w: np.ndarray
    n_lo: np.ndarray
    n_hi: np.ndarray
    n_w: np.ndarray
    v_plugin: np.ndarray

    def reports(self, fit: LooFit, method: str = "EB") -> list[IntervalReport]:
        n = fit.n
        if method == "EB":
            lo, hi, w, cushion = self.eb_lo, self.eb_hi, self.eb_w, 0.0
        else:
            lo, hi, w, cushion = self.n_lo, self.n_hi, self.n_w, bias_cushion(n, self.c_bias)
        return [
            IntervalReport(i, j, float(fit.tilde[i, j]), method, float(lo[i, j]), float(hi[i, j]),
                           float(w[i, j]), self.alpha, cushion)
            for i in range(n) for j in range(n) if i != j
        ]


def interval_matrices(fit: LooFit, alpha: float = DEFAULT_ALPHA, c_bias: float = DEFAULT_C_BIAS) -> IntervalMatrices:
    n, h = fit.n, fit.h
    s2 = sample_variance(fit.tilde, h)
    eb_w = eb_halfwidth(s2, h, alpha)
    eb_lo, eb_hi = clip_interval(fit.tilde, eb_w)
    # column average of hat(1-hat) over N_i^(-j), divided once more by h
    v_plugin = fit.column_average(fit.hat * (1.0 - fit.hat)) / h
    n_w = normal_halfwidth(v_plugin, n, alpha, c_bias)
    n_lo, n_hi = clip_interval(fit.tilde, n_w)
    return IntervalMatrices(alpha, c_bias, eb_lo, eb_hi, eb_w, n_lo, n_hi, n_w, v_plugin)


def off_diagonal(n: int) -> np.ndarray:
    return ~np.eye(n, dtype=bool)


def coverage_matrix(target, lo, hi, mask=None) -> float:
    """Coverage of ``target`` by [lo, hi] over off-diagonal entries (and ``mask``)."""
    target = np.asarray(target)
    sel = off_diagonal(target.shape[0])
    if mask is not None:
        sel &= mask
    if not sel.any():
        return float("nan")
    inside = (lo <= target) & (target <= hi)
    return float(inside[sel].mean())


def mean_width(lo, hi) -> float:
    sel = off_diagonal(lo.shape[0])
    return float((hi - lo)[sel].mean())


def standardized_fluctuations(sample: LatentSample, nbhd: Neighborhood, replicates: int,
                              rng: np.random.Generator) -> np.ndarray:
    """Replicates of U_ij / sqrt(V_ij) with the neighborhood frozen.

    Only column j of the adjacency is redrawn, which by construction leaves
    N_i^(-j) unchanged.
    """
    j = nbhd.excluded
    if j is None:
        raise ValueError("need a leave-one-out neighborhood")
    members = _members(nbhd)
    p = sample.P[members, j]
    v = float(np.sum(p * (1 - p))) / len(members) ** 2
    if v <= 0:
        raise ValueError("oracle variance is zero")
    draws = rng.random((replicates, len(members))) < p
    U = (draws - p).mean(axis=1)
    return U / math.sqrt(v)
