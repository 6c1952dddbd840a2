import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import oracles
from loosmooth import (
    GraphonModel,
    IntervalReport,
    Neighborhood,
    coverage,
    eb_halfwidth,
    eb_interval,
    fit_loo,
    interval_matrices,
    latent_from_positions,
    normal_interval,
    oracle_variance,
    plugin_variance,
    sample_variance,
    standardized_fluctuations,
    widen,
)
from loosmooth.inference import (
    INTERVAL_COLUMNS,
    bias_cushion,
    normal_halfwidth,
    normal_quantile,
    variance_estimates,
)


def _nb(members, anchor=0, excluded=None):
    return Neighborhood(anchor=anchor, excluded=excluded, members=np.array(members), h=len(members))


def test_sample_variance_examples():
    assert sample_variance(0.0, 10) == 0.0
    assert sample_variance(1.0, 10) == 0.0
    assert sample_variance(0.5, 2) == 0.5
    with pytest.raises(ValueError):
        sample_variance(0.5, 1)


def test_sample_variance_exhaustive_small_h():
    for h in range(2, 13):
        for bits in itertools.product((0, 1), repeat=h):
            p = sum(bits) / h
            closed = sample_variance(p, h)
            exact = oracles.pairwise_variance(bits)
            assert abs(closed - float(exact)) <= 1e-12
            # and the exact rational identity behind it
            assert Fraction(h, h - 1) * Fraction(sum(bits), h) * (1 - Fraction(sum(bits), h)) == exact


def test_sample_variance_random_long_vectors():
    rng = np.random.default_rng(8)
    for _ in range(10_000):
        h = int(rng.integers(13, 200))
        x = (rng.random(h) < rng.random()).astype(float)
        # the pairwise double sum, computed in closed form over pairs: sum_{k<l}(x_k - x_l)^2 = h*sum(x^2) - sum(x)^2
        pair = (h * np.sum(x**2) - np.sum(x) ** 2) / (h * (h - 1))
        assert abs(sample_variance(x.mean(), h) - pair) <= 1e-12


def test_eb_halfwidth_examples():
    assert eb_halfwidth(0.0, 100, 0.05) == pytest.approx(7 * math.log(80) / 297, abs=1e-12)
    assert eb_halfwidth(0.0, 100, 0.05) == pytest.approx(0.10328, abs=5e-6)
    oracle = math.sqrt(2 * 0.25 * math.log(80) / 100) + 7 * math.log(80) / 297
    assert eb_halfwidth(0.25, 100, 0.05) == pytest.approx(oracle, abs=1e-12)
    # the hand-rounded reference figure 0.25134 carries a 4e-5 slip in the square-root term
    assert eb_halfwidth(0.25, 100, 0.05) == pytest.approx(0.25134, abs=1e-4)


def test_eb_halfwidth_monotone_in_alpha():
    alphas = np.linspace(0.5, 0.001, 50)
    w = [eb_halfwidth(0.1, 30, a) for a in alphas]
    assert all(b > a for a, b in zip(w, w[1:]))


def test_eb_halfwidth_errors():
    for a in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            eb_halfwidth(0.1, 10, a)
    with pytest.raises(ValueError):
        eb_halfwidth(-0.1, 10)


def test_eb_interval_clipping():
    r = eb_interval(0.0, 100)
    assert r.lower == 0.0 and r.upper == pytest.approx(min(r.halfwidth, 1.0))
    r = eb_interval(0.5, 50, s2=0.0, alpha=0.05)
    w = eb_halfwidth(0.0, 50)
    assert (r.lower, r.upper) == pytest.approx((0.5 - w, 0.5 + w))
    assert r.method == "EB" and r.bias_cushion == 0.0


def test_interval_center_and_width_hand():
    # p=0.5, w=0.2 -> [0.3, 0.7], reached through normal_interval with no cushion
    v = (0.2 / 1.96) ** 2
    r = normal_interval(0.5, v, 500, 0.05, c_bias=0.0)
    assert (r.lower, r.upper) == pytest.approx((0.3, 0.7))


def test_normal_halfwidth_examples():
    assert normal_halfwidth(0.0, 500, 0.05, 0.1) == pytest.approx(0.1 * (math.log(500) / 500) ** 0.25, abs=1e-12)
    assert normal_halfwidth(0.0, 500, 0.05, 0.1) == pytest.approx(0.033386, abs=1e-5)
    assert normal_halfwidth(1 / (4 * 83), 500, 0.05, 0.0) == pytest.approx(0.10757, abs=5e-6)
    r = normal_interval(0.4, 0.001, 500)
    assert r.method == "Normal"
    assert r.bias_cushion == pytest.approx(bias_cushion(500, 0.1))
    with pytest.raises(ValueError):
        normal_interval(0.4, 0.001, 7)


def test_normal_quantile():
    assert normal_quantile(0.05) == 1.96
    assert normal_quantile(0.1) == pytest.approx(1.6448536269514722, abs=1e-8)
    assert normal_quantile(0.01) == pytest.approx(2.5758293035489004, abs=1e-8)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 300), st.data(), st.floats(1e-4, 0.5), st.floats(0, 0.01), st.floats(0, 0.5))
def test_intervals_clipped(h, data, alpha, v, c):
    p = data.draw(st.integers(0, h)) / h
    for r in (eb_interval(p, h, alpha), normal_interval(p, v, 100, alpha, c)):
        assert 0.0 <= r.lower <= r.estimate <= r.upper <= 1.0
        assert r.upper - r.lower <= 2 * r.halfwidth + 1e-15


def test_plugin_variance_examples():
    hat = np.full((5, 5), 0.5)
    assert plugin_variance(hat, _nb([1, 2, 3]), 4) == pytest.approx(1 / 12)
    hat = np.eye(5)
    assert plugin_variance(hat, _nb([1, 2, 3]), 1) == 0.0


def test_oracle_variance_examples():
    s = latent_from_positions(GraphonModel("constant", level=0.5), np.linspace(0, 1, 10))
    assert oracle_variance(s, _nb([1, 2, 3, 4]), 7) == pytest.approx(1 / 16)
    s = latent_from_positions(GraphonModel("constant", level=0.3), np.linspace(0, 1, 90))
    v = oracle_variance(s, _nb(list(range(1, 84))), 88)
    assert v == pytest.approx(0.21 / 83) and v == pytest.approx(0.0025301, abs=5e-8)


def test_oracle_variance_bounds(make_graph):
    # Block(0.7, 0.3) has P in [0.3, 0.7]
    sample, A = make_graph("block", n=40, seed=3)
    fit = fit_loo(A, 8)
    eta = 0.3
    for i, j in [(0, 1), (5, 30), (39, 12)]:
        ve = variance_estimates(fit, i, j, sample)
        assert eta * (1 - eta) / 8 - 1e-15 <= ve.v_oracle <= 1 / 32 + 1e-15
        assert 0 <= ve.v_plugin <= 1 / 32
        assert 0 <= ve.s2 <= 8 / (4 * 7)


def test_plugin_error_bound(make_graph):
    sample, A = make_graph("smooth", n=50, seed=6)
    fit = fit_loo(A, 9)
    for i in range(0, 50, 7):
        for j in range(1, 50, 5):
            if i == j:
                continue
            nb = fit.neighborhood(i, j)
            gap = abs(plugin_variance(fit.estimate, nb, j) - oracle_variance(sample, nb, j))
            lip = np.abs(fit.hat[nb.members, j] - sample.P[nb.members, j]).max() / nb.h
            assert gap <= lip + 1e-15


def test_matrix_intervals_agree_with_scalar(make_graph):
    sample, A = make_graph("rank1", n=30, seed=2)
    fit = fit_loo(A, 6)
    iv = interval_matrices(fit)
    for i, j in [(0, 1), (10, 3), (29, 28)]:
        nb = fit.neighborhood(i, j)
        eb = eb_interval(fit.tilde[i, j], 6)
        nm = normal_interval(fit.tilde[i, j], plugin_variance(fit.estimate, nb, j), 30)
        assert (iv.eb_lo[i, j], iv.eb_hi[i, j]) == pytest.approx((eb.lower, eb.upper))
        assert (iv.n_lo[i, j], iv.n_hi[i, j]) == pytest.approx((nm.lower, nm.upper))
    reps = iv.reports(fit, "Normal")
    assert len(reps) == 30 * 29
    assert list(reps[0].row()) == list(INTERVAL_COLUMNS)


def _reports(n, fn):
    return [fn(i, j) for i in range(n) for j in range(n) if i != j]


def test_coverage_examples():
    P = np.full((4, 4), 0.5)
    full = _reports(4, lambda i, j: IntervalReport(i, j, 0.5, "EB", 0.0, 1.0, 0.5, 0.05))
    assert coverage(P, full) == 1.0
    miss = _reports(4, lambda i, j: IntervalReport(i, j, 0.9, "EB", 0.8, 1.0, 0.1, 0.05))
    assert coverage(P, miss) == 0.0


def test_coverage_hand_case():
    P = np.array([[0, 0.2, 0.4], [0.2, 0, 0.6], [0.4, 0.6, 0]])
    covered = {(0, 1), (1, 0), (0, 2), (2, 1)}

    def make(i, j):
        if (i, j) in covered:
            return IntervalReport(i, j, P[i, j], "EB", P[i, j] - 0.05, P[i, j] + 0.05, 0.05, 0.05)
        return IntervalReport(i, j, 0.95, "EB", 0.9, 1.0, 0.05, 0.05)

    assert coverage(P, _reports(3, make)) == pytest.approx(2 / 3)


def test_coverage_rejects_missing_and_duplicates():
    P = np.full((3, 3), 0.5)
    reps = _reports(3, lambda i, j: IntervalReport(i, j, 0.5, "EB", 0, 1, 0.5, 0.05))
    with pytest.raises(ValueError, match="missing"):
        coverage(P, reps[:-1])
    with pytest.raises(ValueError, match="duplicate"):
        coverage(P, reps + reps[:1])


def test_widen():
    r = eb_interval(0.5, 50, s2=0.0)
    w = widen(r, 0.1)
    assert w.lower == pytest.approx(r.lower - 0.1) and w.upper == pytest.approx(r.upper + 0.1)
    assert widen(eb_interval(0.0, 50), 0.2).lower == 0.0
    with pytest.raises(ValueError):
        widen(r, -0.1)


def _constant_sample(c, n):
    return latent_from_positions(GraphonModel("constant", level=c), np.linspace(0, 1, n))


def _frozen_nb(sample, h, j):
    members = np.array([k for k in range(sample.n) if k != j][1 : h + 1])
    return Neighborhood(anchor=0, excluded=j, members=members, h=h)


def test_standardized_fluctuations_constant():
    n, h = 210, 200
    s = _constant_sample(0.5, n)
    z = standardized_fluctuations(s, _frozen_nb(s, h, n - 1), 10_000, np.random.default_rng(2))
    ks = stats.kstest(z, "norm").statistic
    assert ks <= 0.05
    se = 1 / math.sqrt(len(z))
    assert abs(z.mean()) <= 4 * se
    # var of a sample variance for ~normal data: sd approx sqrt(2/(R-1))
    assert abs(z.var(ddof=1) - 1) <= 4 * math.sqrt(2 / (len(z) - 1))


def test_standardized_fluctuations_needs_loo():
    s = _constant_sample(0.5, 10)
    with pytest.raises(ValueError):
        standardized_fluctuations(s, _nb([1, 2]), 10, np.random.default_rng(0))
    s0 = _constant_sample(0.0, 10)
    with pytest.raises(ValueError):
        standardized_fluctuations(s0, _frozen_nb(s0, 3, 9), 10, np.random.default_rng(0))


def test_ks_shrinks_with_h():
    n = 410
    s = latent_from_positions(GraphonModel("smooth"), np.random.default_rng(4).random(n))
    ks = []
    for h in (50, 100, 200, 400):
        z = standardized_fluctuations(s, _frozen_nb(s, h, n - 1), 10_000, np.random.default_rng(h))
        ks.append(stats.kstest(z, "norm").statistic)
    assert all(b <= a + 0.01 for a, b in zip(ks, ks[1:]))


@pytest.mark.parametrize("graphon,h", [("smooth", 10), ("block", 50), ("spiky", 200)])
def test_eb_covers_local_average(graphon, h):
    n = 260
    s = latent_from_positions(GraphonModel(graphon), np.random.default_rng(h).random(n))
    nb = _frozen_nb(s, h, n - 1)
    p = s.P[nb.members, n - 1]
    draws = np.random.default_rng(0).random((10_000, h)) < p
    tilde = draws.mean(axis=1)
    w = eb_halfwidth(sample_variance(tilde, h), h, 0.05)
    lo, hi = np.clip(tilde - w, 0, 1), np.clip(tilde + w, 0, 1)
    assert np.mean((lo <= p.mean()) & (p.mean() <= hi)) >= 0.95
