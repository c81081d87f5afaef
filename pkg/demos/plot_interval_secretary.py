"""
Unweighted intervals in random order
====================================

Half of the intervals are shown up front as a sample, the rest arrive one
at a time.  We run the unweighted algorithm and compare its output size
with the offline optimum of the arriving intervals.
"""

import numpy as np

from onlinemis import (
    adapter_secretary,
    alg1_unweighted,
    derive_conflict_graph,
    gen_intervals,
    interval_mwis_exact,
    is_independent,
)

# A fixed set of 100 intervals of length 1 to 4 on a window of width 50.
geo, _ = gen_intervals(100, length=(1, 4), window=50, seed=0)
g = derive_conflict_graph(geo)
print("nodes:", g.n, "edges:", len(g.edges()), "rho:", g.rho)

# One trial: split into sample and input, then run with q = 1/2.
real, stream = adapter_secretary(g, np.ones(g.n, dtype=int), seed=1)
trace = alg1_unweighted(g, real, stream, q=0.5, seed=1)
print("sample greedy |M1| =", len(trace.m1))
print("|M2| =", len(trace.m2), " |M3| =", len(trace.m3), " |M4| =", len(trace.m4))
print("output independent:", is_independent(g, trace.m4))

# Many trials give the ratio of expectations E[OPT] / E[ALG].
alg, opt = [], []
for s in range(500):
    real, stream = adapter_secretary(g, np.ones(g.n, dtype=int), seed=s)
    alg.append(len(alg1_unweighted(g, real, stream, q=0.5, seed=s).m4))
    opt.append(interval_mwis_exact(geo, real.w_input)[0])
print(f"E[OPT]/E[ALG] = {np.mean(opt) / np.mean(alg):.3f}  (guarantee: 4)")
