"""
Choosing the neighborhood size by cross-validation
===================================================

Each held-out edge A_ij is predicted from a neighborhood built without node
j, so the CV score is an honest estimate of prediction risk plus a noise
floor that does not depend on h.
"""

import numpy as np

import loosmooth as ls
from loosmooth.tuning import bernoulli_noise_floor

sample = ls.sample_latent(ls.GraphonModel("block"), 150, ls.substream(4, "latent"))
A = ls.sample_adjacency(sample, ls.substream(4, "edges"))
grid = [4, 8, 16, 32, 64, 100]

res = ls.cv_select(A, 0, grid)
floor = bernoulli_noise_floor(sample, 0)
print(f"{'h':>5} {'CV score':>10} {'risk + floor':>13}")
for h, s in zip(res.grid, res.scores):
    risk = ls.oracle_prediction_risk(sample, A, 0, h)
    print(f"{h:>5} {s:>10.4f} {risk + floor:>13.4f}")
print("selected for row 0:", res.selected)

# a single row is noisy; the harness takes the lower median over a few rows
from loosmooth.tuning import select_global_bandwidth

h, per_row = select_global_bandwidth(A, [0, 30, 60, 90, 120], grid)
print("per-row picks:", [r.selected for r in per_row], "-> global h =", h)
print("default rule would use h =", ls.default_bandwidth(150))
