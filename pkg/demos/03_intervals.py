"""
Confidence intervals for single edges
=====================================

Two intervals come with every one-sided estimate: an empirical Bernstein
interval, valid in finite samples for the neighborhood average of P, and a
normal interval with a small bias cushion. We score both against the truth.
"""

import numpy as np

import loosmooth as ls

sample = ls.sample_latent(ls.GraphonModel("wiggly"), 200, ls.substream(3, "latent"))
A = ls.sample_adjacency(sample, ls.substream(3, "edges"))
fit = ls.fit_loo(A, ls.default_bandwidth(200))
iv = ls.interval_matrices(fit, alpha=0.05, c_bias=0.1)

# a single pair, through the scalar API
i, j = 10, 42
nb = fit.neighborhood(i, j)
eb = ls.eb_interval(fit.tilde[i, j], fit.h, 0.05)
nm = ls.normal_interval(fit.tilde[i, j], ls.plugin_variance(fit.estimate, nb, j), 200)
print(f"P[{i},{j}] = {sample.P[i, j]:.3f}   tilde = {fit.tilde[i, j]:.3f}")
print(f"  EB     [{eb.lower:.3f}, {eb.upper:.3f}]")
print(f"  Normal [{nm.lower:.3f}, {nm.upper:.3f}]  (bias cushion {nm.bias_cushion:.3f})")

# all ordered pairs at once
P = sample.P
local = fit.column_average(P)  # what the EB interval targets
print("\ncoverage over ordered pairs")
print(f"  EB of P:                  {ls.inference.coverage_matrix(P, iv.eb_lo, iv.eb_hi):.3f}")
print(f"  EB of neighborhood mean:  {ls.inference.coverage_matrix(local, iv.eb_lo, iv.eb_hi):.3f}")
print(f"  Normal of P:              {ls.inference.coverage_matrix(P, iv.n_lo, iv.n_hi):.3f}")
print("mean widths")
print(f"  EB {ls.inference.mean_width(iv.eb_lo, iv.eb_hi):.3f}   Normal {ls.inference.mean_width(iv.n_lo, iv.n_hi):.3f}")

# where the normal interval misses, the neighborhood is biased
bias = np.abs(ls.bias_matrix(sample, fit))
miss = ~((iv.n_lo <= P) & (P <= iv.n_hi))
np.fill_diagonal(miss, False)
off = ~np.eye(200, dtype=bool)
print(f"\nmean |bias| where Normal misses: {bias[miss].mean():.3f}, elsewhere: {bias[off & ~miss].mean():.3f}")
