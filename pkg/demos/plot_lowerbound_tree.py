"""
Nested intervals: the gap grows with depth
==========================================

A complete d-ary tree of nested intervals, each active with probability
1/(2h).  The online policy may only take a node once none of its
ancestors can still be taken; the offline greedy takes the topmost
active node on each path.
"""

from onlinemis import coverage_recursion, gen_lowerbound_tree, highstakes, lowerbound_experiment

t = gen_lowerbound_tree(2, 3)
out = highstakes(t, seed=0)
print("active:", out.activation.nonzero()[0].tolist(), "accepted:", sorted(out.accepted), "paths:", out.covered_paths)

for row in lowerbound_experiment([(2, h) for h in range(1, 7)], trials=50_000, seed=0):
    print(
        f"h={row['h']}  OPT/ALG={row['ratio']:.3f}  "
        f"coverage {row['path_coverage']:.4f} vs exact {coverage_recursion(row['h'], 1 / (2 * row['h'])):.4f}"
    )
