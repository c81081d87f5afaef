"""Nested-interval lower-bound construction.

Nodes of a complete ``d``-ary tree stand for nested intervals; a node of
level ``i`` is active (weight ``d**(h-i)``) with probability ``1/(2h)`` and
nodes arrive in uniformly random order.  HighStakes accepts an active node
only once no ancestor can still be selected.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import Seed, as_rng, named_rng
from .generators import LowerBoundTree, gen_lowerbound_tree
from .oracles import greedy_tree_offline


@dataclass(frozen=True)
class TreeTrialOutcome:
    activation: np.ndarray
    arrival_order: np.ndarray
    accepted: frozenset[int]
    covered_paths: int


def draw_tree_trial(tree: LowerBoundTree, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    activation = rng.random(tree.size) < tree.p
    return activation, rng.permutation(tree.size)


def highstakes_policy(tree: LowerBoundTree, activation, arrival_order) -> frozenset[int]:
    """Run HighStakes on one realized activation/arrival order.

    An ancestor "could still be selected" while it has not arrived and none
    of its descendants has been selected.
    """
    arrived = np.zeros(tree.size, dtype=bool)
    claimed = np.zeros(tree.size, dtype=bool)  # some node in this subtree is selected
    accepted = []
    for v in arrival_order:
        v = int(v)
        arrived[v] = True
        if not activation[v] or claimed[v]:
            continue
        ancestors = tree.ancestors(v)
        if any(not arrived[u] and not claimed[u] for u in ancestors):
            continue
        if any(u in accepted for u in ancestors):
            continue
        accepted.append(v)
        claimed[v] = True
        claimed[ancestors] = True
    return frozenset(accepted)


def highstakes(tree: LowerBoundTree, seed: Seed | np.random.Generator) -> TreeTrialOutcome:
    activation, order = draw_tree_trial(tree, as_rng(seed, "highstakes"))
    accepted = highstakes_policy(tree, activation, order)
    covered = int(sum(tree.weight[v] for v in accepted))
    return TreeTrialOutcome(activation, order, accepted, covered)


def highstakes_batch(tree: LowerBoundTree, activation: np.ndarray, arrival_time: np.ndarray) -> np.ndarray:
    """Vectorised HighStakes over many trials.

    ``activation`` and ``arrival_time`` have shape ``(trials, size)``;
    ``arrival_time[t, v]`` is the position of ``v`` in trial ``t``'s order.
    No node can be selected below an unarrived ancestor, so an active node
    is accepted iff it arrives after all its ancestors and none of them was
    accepted.  Returns a boolean acceptance matrix.
    """
    trials = activation.shape[0]
    accepted = np.zeros((trials, tree.size), dtype=bool)
    latest_ancestor = np.full((trials, tree.size), -1, dtype=np.int64)
    blocked = np.zeros((trials, tree.size), dtype=bool)
    for v in range(tree.size):  # level order: parents first
        par = tree.parent[v]
        if par >= 0:
            latest_ancestor[:, v] = np.maximum(latest_ancestor[:, par], arrival_time[:, par])
            blocked[:, v] = blocked[:, par] | accepted[:, par]
        accepted[:, v] = activation[:, v] & ~blocked[:, v] & (arrival_time[:, v] > latest_ancestor[:, v])
    return accepted


def coverage_recursion(h: int, p: float) -> float:
    """Probability that HighStakes covers a fixed root-leaf path of ``h`` nodes."""
    prob = 0.0
    for k in range(1, h + 1):
        prob = p / k + (1 - p / k) * prob
    return prob


def lowerbound_experiment(d_h_pairs, trials: int, seed: Seed = 0, batch: int = 20_000) -> list[dict]:
    """Monte Carlo ALG (HighStakes) versus the greedy offline solution."""
    rows = []
    for d, h in d_h_pairs:
        tree = gen_lowerbound_tree(d, h)
        root = (seed if isinstance(seed, int) else seed[0], d, h)
        # separate streams keep the draws independent of the batch size
        act_rng, order_rng = named_rng(root, "lowerbound-activation"), named_rng(root, "lowerbound-order")
        path = tree.leftmost_path()
        alg = np.empty(trials)
        opt = np.empty(trials)
        path_hits = 0
        done = 0
        while done < trials:
            m = min(batch, trials - done)
            act = act_rng.random((m, tree.size)) < tree.p
            order_keys = order_rng.random((m, tree.size))
            times = np.argsort(np.argsort(order_keys, axis=1), axis=1)
            acc = highstakes_batch(tree, act, times)
            alg[done : done + m] = acc.astype(np.int64) @ tree.weight
            path_hits += int(acc[:, path].any(axis=1).sum())
            opt[done : done + m] = [greedy_tree_offline(tree, a) for a in act]
            done += m
        p_hat = path_hits / trials
        rows.append(
            {
                "d": d,
                "h": h,
                "n": tree.size,
                "trials": trials,
                "mean_alg": float(alg.mean()),
                "mean_opt": float(opt.mean()),
                "ratio": float(opt.mean() / alg.mean()) if alg.mean() > 0 else float("nan"),
                "path_coverage": p_hat,
                "path_coverage_sigma": float(np.sqrt(max(p_hat * (1 - p_hat), 1e-300) / trials)),
                "analytic_coverage": coverage_recursion(h, tree.p),
                "analytic_uncovered": (1 - tree.p) ** h,
                "opt_uncovered": float(1 - opt.mean() / tree.leaf_count),
            }
        )
    return rows
