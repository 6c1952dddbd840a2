"""End-to-end simulation: sample a graph, smooth it, score the intervals."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .estimator import EstimateMatrix, LooFit, ZlzFit, bias_matrix, fit_loo, fit_zlz
from .graphon import GraphonModel, LatentSample, parse_graphon, sample_adjacency, sample_latent, substream
from .inference import (
    DEFAULT_ALPHA,
    DEFAULT_C_BIAS,
    IntervalMatrices,
    coverage_matrix,
    interval_matrices,
    mean_width,
)
from .neighborhood import check_bandwidth, default_bandwidth, undersmooth_bandwidth
from .tuning import select_global_bandwidth
from .twohop import full_twohop

DEFAULT_SEED = 12345

EDGE_COLUMNS = ("i", "j", "p_true", "p_tilde", "p_hat", "eb_lo", "eb_hi", "n_lo", "n_hi")

METRICS = (
    "mse_loo",
    "mse_classical",
    "coverage_eb",
    "width_eb",
    "coverage_normal",
    "width_normal",
    "coverage_eb_localized",
    "coverage_eb_widened",
    "bias_radius",
    "runtime_seconds",
)


@dataclass
class SimConfig:
    graphon: GraphonModel = field(default_factory=lambda: GraphonModel("smooth"))
    n: int = 500
    h: int | str = "auto"  # integer, "auto", "cv" or "undersmooth"
    alpha: float = DEFAULT_ALPHA
    c_bias: float = DEFAULT_C_BIAS
    seed: int = DEFAULT_SEED
    replicates: int = 1
    metrics_row: int = 0
    good_margin: float = 0.05  # latent distance from kernel discontinuities for the widened coverage
    cv_rows: int = 5

    def __post_init__(self):
        if isinstance(self.graphon, str):
            self.graphon = parse_graphon(self.graphon)
        if isinstance(self.h, str) and self.h not in ("auto", "cv", "undersmooth"):
            try:
                self.h = int(self.h)
            except ValueError:
                raise ValueError(f"h must be an integer, 'auto', 'cv' or 'undersmooth', got {self.h!r}") from None
        self.validate()

    def validate(self) -> None:
        if self.n < 8:
            raise ValueError(f"n must be at least 8, got {self.n}")
        if isinstance(self.h, int):
            check_bandwidth(self.h, self.n)
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.c_bias < 0:
            raise ValueError(f"c_bias must be non-negative, got {self.c_bias}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be at least 1, got {self.replicates}")
        if not 0 <= self.metrics_row < self.n:
            raise ValueError(f"metrics_row {self.metrics_row} out of range for n={self.n}")
        if not 1 <= self.cv_rows <= self.n:
            raise ValueError(f"cv_rows must lie in [1, n], got {self.cv_rows}")

    def static_h(self) -> int | None:
        """The bandwidth when it does not depend on data."""
        if isinstance(self.h, int):
            return self.h
        if self.h == "auto":
            return default_bandwidth(self.n)
        if self.h == "undersmooth":
            return undersmooth_bandwidth(self.n)
        return None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["graphon"] = self.graphon.name
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass
class SimReport:
    graphon: str
    n: int
    h: int
    seed: int
    replicate: int
    mse_loo: float
    mse_classical: float
    coverage_eb: float
    width_eb: float
    coverage_normal: float
    width_normal: float
    coverage_eb_localized: float  # EB scored against the neighborhood average of P
    coverage_eb_widened: float  # EB widened by bias_radius, scored on good pairs
    bias_radius: float
    runtime_seconds: float
    config: dict

    def to_dict(self) -> dict:
        return asdict(self)

    def metrics(self) -> dict:
        return {k: getattr(self, k) for k in METRICS}


@dataclass
class SimRun:
    """Everything produced by one replicate, for per-edge output and diagnostics."""

    sample: LatentSample
    A: np.ndarray
    loo: LooFit
    zlz: ZlzFit
    intervals: IntervalMatrices
    bias: np.ndarray

    def edge_rows(self):
        n = self.A.shape[0]
        P, t, hat, iv = self.sample.P, self.loo.tilde, self.loo.hat, self.intervals
        for i in range(n):
            for j in range(n):
                if i != j:
                    yield (i, j, repr(float(P[i, j])), repr(float(t[i, j])), repr(float(hat[i, j])),
                           repr(float(iv.eb_lo[i, j])), repr(float(iv.eb_hi[i, j])),
                           repr(float(iv.n_lo[i, j])), repr(float(iv.n_hi[i, j])))


def mse_row(estimate, P, i: int) -> float:
    """(1/n) * sum over j != i of (hat_ij - P_ij)^2."""
    hat = estimate.hat if isinstance(estimate, EstimateMatrix) else np.asarray(estimate)
    P = P.P if isinstance(P, LatentSample) else np.asarray(P)
    n = P.shape[0]
    if not 0 <= i < n:
        raise IndexError(f"row {i} out of range for n={n}")
    err = hat[i] - P[i]
    err[i] = 0.0
    return float(np.sum(err**2) / n)


def resolve_bandwidth(cfg: SimConfig, A, replicate: int = 0) -> int:
    h = cfg.static_h()
    if h is not None:
        return h
    rng = substream(cfg.seed, "tuning", replicate)
    rows = np.sort(rng.choice(cfg.n, size=cfg.cv_rows, replace=False))
    h, _ = select_global_bandwidth(A, rows)
    return h


def run_simulation(cfg: SimConfig, replicate: int = 0, keep: bool = False):
    """One replicate of the simulation; returns a SimReport (and the SimRun if ``keep``)."""
    cfg.validate()
    start = time.perf_counter()
    sample = sample_latent(cfg.graphon, cfg.n, substream(cfg.seed, "latent", replicate))
    A = sample_adjacency(sample, substream(cfg.seed, "edges", replicate))
    M = full_twohop(A)
    h = resolve_bandwidth(cfg, A, replicate)

    loo = fit_loo(A, h, M)
    zlz = fit_zlz(A, h, M)
    iv = interval_matrices(loo, cfg.alpha, cfg.c_bias)

    P = sample.P
    bias = bias_matrix(sample, loo)
    local = loo.column_average(P)
    good = sample.good_nodes(cfg.good_margin)
    good_pairs = good[:, None] & good[None, :]
    offdiag = ~np.eye(cfg.n, dtype=bool)
    sel = good_pairs & offdiag
    radius = float(np.abs(bias[sel]).max()) if sel.any() else 0.0
    wid_lo = np.clip(iv.eb_lo - radius, 0, 1)
    wid_hi = np.clip(iv.eb_hi + radius, 0, 1)

    report = SimReport(
        graphon=cfg.graphon.name,
        n=cfg.n,
        h=h,
        seed=cfg.seed,
        replicate=replicate,
        mse_loo=mse_row(loo.estimate, P, cfg.metrics_row),
        mse_classical=mse_row(zlz.estimate, P, cfg.metrics_row),
        coverage_eb=coverage_matrix(P, iv.eb_lo, iv.eb_hi),
        width_eb=mean_width(iv.eb_lo, iv.eb_hi),
        coverage_normal=coverage_matrix(P, iv.n_lo, iv.n_hi),
        width_normal=mean_width(iv.n_lo, iv.n_hi),
        coverage_eb_localized=coverage_matrix(local, iv.eb_lo, iv.eb_hi),
        coverage_eb_widened=coverage_matrix(P, wid_lo, wid_hi, mask=good_pairs),
        bias_radius=radius,
        runtime_seconds=time.perf_counter() - start,
        config=cfg.to_dict(),
    )
    if keep:
        return report, SimRun(sample, A, loo, zlz, iv, bias)
    return report


@dataclass
class ReplicatedReport:
    config: dict
    replicates: int
    mean: dict
    stderr: dict
    reports: list

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "replicates": self.replicates,
            "mean": self.mean,
            "stderr": self.stderr,
            "reports": [r.to_dict() for r in self.reports],
        }


def aggregate(reports: list[SimReport], config: dict) -> ReplicatedReport:
    if not reports:
        raise ValueError("nothing to aggregate")
    reports = sorted(reports, key=lambda r: r.replicate)
    mean, se = {}, {}
    for k in METRICS + ("h",):
        vals = np.array([getattr(r, k) for r in reports], dtype=float)
        mean[k] = float(vals.mean())
        se[k] = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
    return ReplicatedReport(config, len(reports), mean, se, reports)


def run_replicated(cfg: SimConfig, replicates: int | None = None) -> ReplicatedReport:
    """Run replicates 0..R-1 (independent substreams of the master seed) and aggregate."""
    R = cfg.replicates if replicates is None else replicates
    if R < 1:
        raise ValueError("need at least one replicate")
    reports = [run_simulation(cfg, replicate=r) for r in range(R)]
    return aggregate(reports, replace(cfg, replicates=R).to_dict())
