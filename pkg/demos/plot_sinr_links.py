"""
Wireless links with interference weights
========================================

Each link interferes with every other one by a directed weight in [0, 1].
A set of links is feasible when each member receives total weight below 1.
"""

import numpy as np

from onlinemis import alg4_edgeweighted, gen_sinr_conflicts
from onlinemis.sampling import adapter_secretary

g = gen_sinr_conflicts(128, side=12, alpha=3.0, seed=0)
ub = g.ubar_matrix()
print("links:", g.n, "estimated rho:", g.rho, "mean symmetric weight:", round(float(ub.mean()), 4))

feasible, sizes = [], []
for s in range(300):
    real, stream = adapter_secretary(g, np.ones(g.n, dtype=int), seed=s)
    tr = alg4_edgeweighted(g, real, stream, seed=s)
    feasible.append(tr.feasible)
    sizes.append(tr.extra["m4_given_m2"])
print("default q:", tr.q_used)
print("feasible fraction:", np.mean(feasible))
print("expected |M4| per trial:", np.mean(sizes))

# A larger q trades feasibility for size.
for q in (0.05, 0.2, 0.5):
    res = [alg4_edgeweighted(g, *adapter_secretary(g, np.ones(g.n, dtype=int), seed=s), q=q, seed=s) for s in range(200)]
    print(f"q={q}: mean |M4|={np.mean([len(r.m4) for r in res]):.2f} feasible={np.mean([r.feasible for r in res]):.3f}")
