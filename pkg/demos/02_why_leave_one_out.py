"""
Why leave node j out
====================

The classical smoother picks node i's neighbors using the whole graph, so the
edges it then averages (column j) also helped pick the neighbors. Deleting j
before choosing breaks that link. Here we change every edge of node j and
watch which neighborhoods move.
"""

import numpy as np

import loosmooth as ls

sample = ls.sample_latent(ls.GraphonModel("block"), 80, ls.substream(1, "latent"))
A = ls.sample_adjacency(sample, ls.substream(1, "edges"))
h, j = 20, 5

# rewrite node j's edges at random
rng = np.random.default_rng(0)
B = A.copy()
col = (rng.random(80) < 0.5).astype(np.int8)
col[j] = 0
B[:, j] = col
B[j, :] = col

# leave-one-out: the neighborhood for column j is built with j deleted
MA, MB = ls.full_twohop(A), ls.full_twohop(B)
va, vb = ls.loo_twohop(A, MA, j), ls.loo_twohop(B, MB, j)
moved = sum(
    not np.array_equal(ls.loo_neighborhood(va, i, h).members, ls.loo_neighborhood(vb, i, h).members)
    for i in range(80) if i != j
)
print(f"LOO neighborhoods that changed: {moved} of 79")

# classical: the same edit reshuffles neighborhoods
moved = sum(
    not np.array_equal(ls.zlz_neighborhood(MA, i, h).members, ls.zlz_neighborhood(MB, i, h).members)
    for i in range(80) if i != j
)
print(f"classical neighborhoods that changed: {moved} of 79")

# the deleted-node two-hop matrix is a cheap rank-one correction of the full one
gap = np.abs(MA.M[np.arange(80) != j][:, np.arange(80) != j] - va.reduced()).max()
print(f"\nlargest change in M from deleting node {j}: {gap:.4f}  (never above 2/n = {2 / 80:.4f})")
