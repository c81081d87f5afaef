"""
Weighted intervals with known weight laws
=========================================

Each interval's weight is drawn from a known law.  The sample is a fresh
simulation of those laws; the algorithm picks a random weight threshold
from the heaviest sample node and works only with nodes above it.
"""

import numpy as np

from onlinemis import RunConfig, alg2_weighted, derive_conflict_graph, gen_intervals, run_experiment
from onlinemis.sampling import WeightDistribution, adapter_prophet

geo, _ = gen_intervals(64, length=(1, 4), window=32, seed=2)
g = derive_conflict_graph(geo)
law = WeightDistribution.uniform(1, 100)

real, stream = adapter_prophet(g, [law] * g.n, "reverse-indexed", seed=3)
trace = alg2_weighted(g, real, stream, seed=3)
print("threshold record:", trace.threshold_record)
print("accepted:", list(trace.m4), "value:", trace.value)

# The harness does the same over many trials and reports the ratio with a CI.
cfg = RunConfig(
    {"kind": "intervals", "n": 64, "length": [1, 4], "window": 32},
    adapter="prophet",
    algorithm="alg2",
    policy="random-permutation",
    weights={"kind": "uniform", "lo": 1, "hi": 100},
    trials=400,
    seed=5,
)
st = run_experiment(cfg)
print(f"ratio {st.ratio:.3f} +- {st.ratio_ci:.3f}, violations {st.violations}")
