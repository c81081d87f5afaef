"""
Nodes that arrive and depart
============================

Two nodes conflict only if they share an edge and their lifetimes overlap.
The recursive split picks the sample's median arrival time, and either
solves the nodes alive at that instant or recurses on both sides.
"""

import numpy as np

from onlinemis import SplitParams, derive_conflict_graph, gen_disks, gen_temporal, split_temporal
from onlinemis.online import temporal_conflict_free
from onlinemis.sampling import ArrivalStream, adapter_secretary

geo, _ = gen_disks(60, side=8, seed=0)
g = derive_conflict_graph(geo)
t = gen_temporal(g, horizon=50, duration=(2, 8), seed=0)

real, _ = adapter_secretary(g, np.ones(g.n, dtype=int), seed=4)
order = sorted(real.input_nodes, key=lambda v: t.arrival[v])
stream = ArrivalStream(tuple(order), "by-arrival-time")

# The standard constants make every call a base case at this size, so we
# also show a small delta that lets the recursion run.
for delta in (None, 3.0):
    params = None if delta is None else SplitParams.for_sample(1, len(real.sample_nodes), 4, delta=delta)
    info = {}
    out = split_temporal(t, real, stream, params, seed=4, stats=info)
    print(f"delta={delta}: picked {sorted(out)}  conflict free={temporal_conflict_free(t, out)}  {info}")
