"""
The simulation study
====================

Run the full pipeline on each test graphon and print one row per graphon.
At n=500 each row takes about 20 seconds on one core; pass a smaller n on
the command line for a quick look, e.g. ``python3 05_simulation_study.py 150``.
"""

import sys

import loosmooth as ls

n = int(sys.argv[1]) if len(sys.argv) > 1 else 500

print(f"n={n}  h={ls.default_bandwidth(n)}  alpha=0.05  c_bias=0.1")
print(f"{'graphon':<8} {'MSE LOO':>8} {'classical':>9} {'cov EB':>7} {'w EB':>6} {'cov N':>6} {'w N':>6}")
for name in ("smooth", "block", "wiggly", "rank1", "spiky"):
    r = ls.run_simulation(ls.SimConfig(graphon=name, n=n))
    print(f"{name:<8} {r.mse_loo:>8.4f} {r.mse_classical:>9.4f} {r.coverage_eb:>7.3f} "
          f"{r.width_eb:>6.3f} {r.coverage_normal:>6.3f} {r.width_normal:>6.3f}")

# MSE is for row 0 alone, so it moves a lot between replicates
agg = ls.run_replicated(ls.SimConfig(graphon="spiky", n=min(n, 200)), replicates=4)
print(f"\nspiky at n={min(n, 200)}, 4 replicates: MSE {agg.mean['mse_loo']:.4f} +/- {agg.stderr['mse_loo']:.4f}")
