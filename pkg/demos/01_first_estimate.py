"""
Estimating edge probabilities from one graph
=============================================

Draw a graph from a smooth graphon, smooth it with leave-one-out
neighborhoods, and compare the estimate with the truth it came from.
"""

import numpy as np

import loosmooth as ls

# latent positions and the probability matrix they induce
model = ls.GraphonModel("smooth")
sample = ls.sample_latent(model, 200, ls.substream(7, "latent"))
A = ls.sample_adjacency(sample, ls.substream(7, "edges"))
print("nodes:", A.shape[0], " edges:", int(A.sum() // 2))

# the default neighborhood size grows like sqrt(n log n)
h = ls.default_bandwidth(200)
print("h =", h)

# one neighborhood per ordered pair (i, j), each chosen with node j deleted
fit = ls.fit_loo(A, h)
print("one-sided estimate is asymmetric:", not np.allclose(fit.tilde, fit.tilde.T))
print("symmetrized estimate is symmetric:", np.array_equal(fit.hat, fit.hat.T))

# the estimation path never saw P, so compare now
off = ~np.eye(200, dtype=bool)
rmse = np.sqrt(np.mean((fit.hat - sample.P)[off] ** 2))
print(f"RMSE of hat over all pairs: {rmse:.4f}")
print(f"row-0 MSE (divisor n):      {ls.mse_row(fit.estimate, sample, 0):.5f}")

# the classical smoother picks one neighborhood per node from the full graph
zlz = ls.fit_zlz(A, h)
print(f"classical row-0 MSE:        {ls.mse_row(zlz.estimate, sample, 0):.5f}")

# look at one entry up close
i, j = 3, 150
nb = fit.neighborhood(i, j)
print(f"\nP[{i},{j}] = {sample.P[i, j]:.3f}, tilde = {fit.tilde[i, j]:.3f}, hat = {fit.hat[i, j]:.3f}")
print("first members of N_i^(-j):", nb.members[:8], "...")
# sin(pi u) is symmetric about 1/2, so u and 1 - u have the same connection profile
print("latent positions of those members:", np.round(sample.xi[nb.members[:8]], 2), " anchor:", round(sample.xi[i], 2))
