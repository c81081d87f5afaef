"""Offline baselines used as denominators of competitive-ratio estimates."""
from __future__ import annotations

import bisect
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import InstanceTooLarge, InvalidParameters
from .graph import _EPS, INTERVAL, ConflictGraph, GeometricInstance

if TYPE_CHECKING:
    from .generators import LowerBoundTree


def greedy_mis(g: ConflictGraph, active: Iterable[int]) -> list[int]:
    """Greedy independent set over ``active`` in elimination order.

    For edge-weighted graphs a node is added when the symmetrised weight it
    receives from the current set is below 1, so the result is only
    prefix-feasible (see :func:`onlinemis.graph.decompose_feasible`).
    """
    chosen: list[int] = []
    if g.is_binary:
        blocked = np.zeros(g.n, dtype=bool)
        for v in g.sort_by_order(active):
            if not blocked[v]:
                chosen.append(v)
                blocked |= g.adjacency[v]
        return chosen
    ub = g.ubar_matrix()
    load = np.zeros(g.n)
    for v in g.sort_by_order(active):
        if load[v] < 1.0 - _EPS:
            chosen.append(v)
            load += ub[v]
    return chosen


def interval_mwis_exact(geo: GeometricInstance, w: Sequence[float]) -> tuple[float, frozenset[int]]:
    """Maximum-weight set of pairwise disjoint closed intervals.

    Classic weighted interval scheduling: sort by right endpoint and let the
    predecessor of an interval be the last one ending strictly before it
    starts.
    """
    if geo.kind != INTERVAL:
        raise InvalidParameters("interval_mwis_exact needs an interval instance")
    w = np.asarray(w, dtype=float)
    n = geo.n
    if n == 0:
        return 0.0, frozenset()
    left, right = geo.items[:, 0], geo.items[:, 1]
    idx = np.lexsort((np.arange(n), right))
    ends = right[idx].tolist()
    value = [0.0] * (n + 1)
    take = [False] * (n + 1)
    pred = [0] * (n + 1)
    for j in range(1, n + 1):
        i = idx[j - 1]
        pred[j] = bisect.bisect_left(ends, left[i], 0, j - 1)
        with_i = w[i] + value[pred[j]]
        if with_i > value[j - 1]:
            value[j], take[j] = with_i, True
        else:
            value[j] = value[j - 1]
    chosen = []
    j = n
    while j > 0:
        if take[j]:
            chosen.append(int(idx[j - 1]))
            j = pred[j]
        else:
            j -= 1
    return float(value[n]), frozenset(chosen)


def exact_mwis_small(
    g: ConflictGraph,
    w: Sequence[float],
    max_n: int = 28,
    nodes: Iterable[int] | None = None,
) -> tuple[float, frozenset[int]]:
    """Exact maximum-weight independent set by branch and bound.

    Only nodes with positive weight (restricted to ``nodes`` when given) take
    part in the search, and ``max_n`` caps their number.
    """
    w = np.asarray(w, dtype=float)
    pool = range(g.n) if nodes is None else nodes
    cand = [int(v) for v in pool if w[v] > 0]
    if len(cand) > max_n:
        raise InstanceTooLarge(f"{len(cand)} candidate nodes exceed max_n={max_n}")
    cand.sort(key=lambda v: (-w[v], v))
    k = len(cand)
    gains = w[cand]
    suffix = np.concatenate([np.cumsum(gains[::-1])[::-1], [0.0]]).tolist()
    best_val = 0.0
    best_set: tuple[int, ...] = ()
    chosen: list[int] = []

    if g.is_binary:
        adj = g.adjacency[np.ix_(cand, cand)]
        nbr = [int(sum(1 << j for j in np.flatnonzero(adj[i]))) for i in range(k)]

        def dfs(i: int, cur: float, blocked: int):
            nonlocal best_val, best_set
            if cur > best_val:
                best_val, best_set = cur, tuple(chosen)
            if i == k or cur + suffix[i] <= best_val:
                return
            if not (blocked >> i) & 1:
                chosen.append(i)
                dfs(i + 1, cur + gains[i], blocked | nbr[i])
                chosen.pop()
            dfs(i + 1, cur, blocked)

        dfs(0, 0.0, 0)
    else:
        ww = g.weights[np.ix_(cand, cand)]
        incoming = np.zeros(k)

        def dfs(i: int, cur: float):
            nonlocal best_val, best_set, incoming
            if cur > best_val:
                best_val, best_set = cur, tuple(chosen)
            if i == k or cur + suffix[i] <= best_val:
                return
            if incoming[i] < 1.0 - _EPS and all(incoming[s] + ww[i, s] < 1.0 - _EPS for s in chosen):
                incoming += ww[i]
                chosen.append(i)
                dfs(i + 1, cur + gains[i])
                chosen.pop()
                incoming -= ww[i]
            dfs(i + 1, cur)

        dfs(0, 0.0)
    return float(best_val), frozenset(cand[i] for i in best_set)


def greedy_tree_offline(tree: "LowerBoundTree", activation: Sequence[int]) -> int:
    """Top-down greedy on the nested-interval tree; returns covered leaf paths."""
    activation = np.asarray(activation, dtype=bool)
    covered = np.zeros(tree.size, dtype=bool)  # node has an accepted ancestor-or-self
    value = 0
    for v in range(tree.size):  # nodes are stored level by level
        par = tree.parent[v]
        if par >= 0 and covered[par]:
            covered[v] = True
        elif activation[v]:
            covered[v] = True
            value += int(tree.weight[v])
    return value
