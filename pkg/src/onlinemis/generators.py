"""Seeded instance generators.

All generators are pure functions of their parameters and seed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._rng import Seed, as_rng
from .errors import InvalidParameters, SizeOverflow
from .graph import DISK, EDGE_WEIGHTED, INTERVAL, ConflictGraph, GeometricInstance, brute_force_rho
from .sampling import WeightDistribution

MAX_TREE_NODES = 2_000_000


def _check_range(lo: float, hi: float, what: str):
    if not (0 < lo <= hi):
        raise InvalidParameters(f"{what} must satisfy 0 < min <= max")


def gen_intervals(
    n: int,
    length: tuple[float, float] = (1.0, 1.0),
    window: float = 100.0,
    weight_dist: WeightDistribution | None = None,
    seed: Seed = 0,
) -> tuple[GeometricInstance, list[WeightDistribution]]:
    """``n`` intervals with left endpoints uniform on ``[0, window]``."""
    if n < 0 or window <= 0:
        raise InvalidParameters("need n >= 0 and window > 0")
    _check_range(*length, "length")
    rng = as_rng(seed, "intervals")
    left = rng.uniform(0.0, window, n)
    span = rng.uniform(length[0], length[1], n)
    geo = GeometricInstance(INTERVAL, np.column_stack([left, left + span]))
    return geo, [weight_dist or WeightDistribution.point(1)] * n


def gen_disks(
    n: int,
    side: float = 10.0,
    radius: tuple[float, float] = (0.5, 0.5),
    weight_dist: WeightDistribution | None = None,
    seed: Seed = 0,
) -> tuple[GeometricInstance, list[WeightDistribution]]:
    """``n`` disks with centres uniform in ``[0, side]^2``."""
    if n < 0 or side <= 0:
        raise InvalidParameters("need n >= 0 and side > 0")
    _check_range(*radius, "radius")
    rng = as_rng(seed, "disks")
    xy = rng.uniform(0.0, side, (n, 2))
    r = rng.uniform(radius[0], radius[1], n)
    geo = GeometricInstance(DISK, np.column_stack([xy, r]))
    return geo, [weight_dist or WeightDistribution.point(1)] * n


def sinr_weights(
    senders: np.ndarray, receivers: np.ndarray, alpha: float = 3.0, noise_fraction: float = 0.5, power: float = 1.0
) -> np.ndarray:
    """Directed affectance matrix ``W[u, v] = min(1, a_u(v))`` with

        a_u(v) = (P / d(s_u, r_v)^alpha) / (P / d(s_v, r_v)^alpha - N)

    and noise ``N = noise_fraction * min_v P / d(s_v, r_v)^alpha``.
    """
    senders = np.asarray(senders, dtype=float).reshape(-1, 2)
    receivers = np.asarray(receivers, dtype=float).reshape(-1, 2)
    n = len(senders)
    if n == 0:
        return np.zeros((0, 0))
    if not 0 <= noise_fraction < 1:
        raise InvalidParameters("noise fraction must lie in [0, 1)")
    dist = np.sqrt(((senders[:, None, :] - receivers[None, :, :]) ** 2).sum(-1))  # dist[u, v] = d(s_u, r_v)
    own = np.diag(dist).copy()
    if np.any(own <= 0):
        raise InvalidParameters("sender and receiver of a link must differ")
    signal = power / own**alpha
    margin = signal - noise_fraction * signal.min()
    with np.errstate(divide="ignore"):
        received = power / dist**alpha
    w = np.minimum(1.0, received / margin[None, :])
    np.fill_diagonal(w, 0.0)
    return w


def sinr_conflict_graph(
    senders: np.ndarray,
    receivers: np.ndarray,
    alpha: float = 3.0,
    noise_fraction: float = 0.5,
    rho: int = 1,
) -> ConflictGraph:
    """Edge-weighted graph of the given links, ordered by link length."""
    w = sinr_weights(senders, receivers, alpha, noise_fraction)
    n = len(w)
    length = np.linalg.norm(np.asarray(senders, float).reshape(-1, 2) - np.asarray(receivers, float).reshape(-1, 2), axis=1)
    order = np.lexsort((np.arange(n), length)) if n else np.arange(0)
    return ConflictGraph(n, EDGE_WEIGHTED, tuple(order.tolist()), rho, weights=w)


def estimate_rho(g: ConflictGraph, rng: np.random.Generator, samples: int = 4, size: int = 12) -> int:
    """Largest brute-force rho over random induced subgraphs of ``size`` nodes."""
    if g.n <= size:
        return brute_force_rho(g, max_n=size)
    best = 1
    for _ in range(samples):
        nodes = np.sort(rng.choice(g.n, size=size, replace=False))
        best = max(best, brute_force_rho(g.subgraph(nodes.tolist()), max_n=size))
    return best


def gen_sinr_conflicts(
    n: int,
    side: float = 10.0,
    alpha: float = 3.0,
    noise_fraction: float = 0.5,
    seed: Seed = 0,
    base_length: float = 1.0,
    rho_samples: int = 4,
    rho_subsample: int = 12,
) -> ConflictGraph:
    """Random SINR links; receivers sit at distance ``base_length * U[0.5, 2]``
    from their sender in a uniformly random direction."""
    if n < 0 or side <= 0 or alpha < 2 or base_length <= 0:
        raise InvalidParameters("need n >= 0, side > 0, alpha >= 2, base_length > 0")
    if not 0 <= noise_fraction < 1:
        raise InvalidParameters("noise fraction must lie in [0, 1)")
    rng = as_rng(seed, "sinr")
    senders = rng.uniform(0.0, side, (n, 2))
    dist = base_length * rng.uniform(0.5, 2.0, n)
    angle = rng.uniform(0.0, 2 * np.pi, n)
    receivers = senders + np.column_stack([dist * np.cos(angle), dist * np.sin(angle)])
    g = sinr_conflict_graph(senders, receivers, alpha, noise_fraction)
    rho = estimate_rho(g, as_rng(seed, "sinr-rho"), rho_samples, rho_subsample)
    return g.with_rho(rho)


@dataclass(frozen=True, eq=False)
class LowerBoundTree:
    """Complete ``d``-ary tree with ``h`` levels, stored level by level.

    Level ``i`` (root = 1) nodes carry weight ``d**(h - i)``, which is the
    number of leaves below them; every node is active with probability
    ``p = 1 / (2h)``.
    """

    d: int
    h: int
    level: np.ndarray
    parent: np.ndarray
    weight: np.ndarray

    @property
    def p(self) -> float:
        return 1.0 / (2 * self.h)

    @property
    def size(self) -> int:
        return len(self.level)

    @property
    def leaf_count(self) -> int:
        return self.d ** (self.h - 1)

    def children(self, v: int) -> range:
        if self.level[v] == self.h:
            return range(0)
        first = self.d * v + 1
        return range(first, first + self.d)

    def ancestors(self, v: int) -> list[int]:
        out = []
        v = int(self.parent[v])
        while v >= 0:
            out.append(v)
            v = int(self.parent[v])
        return out

    def leftmost_path(self) -> list[int]:
        path, v = [0], 0
        while self.level[v] < self.h:
            v = self.d * v + 1
            path.append(v)
        return path


def gen_lowerbound_tree(d: int, h: int, max_nodes: int = MAX_TREE_NODES) -> LowerBoundTree:
    if d < 2 or h < 1:
        raise InvalidParameters("need d >= 2 and h >= 1")
    size = (d**h - 1) // (d - 1)
    if size > max_nodes:
        raise SizeOverflow(f"tree with {size} nodes exceeds cap {max_nodes}")
    idx = np.arange(size)
    parent = np.where(idx > 0, (idx - 1) // d, -1)
    level = np.empty(size, dtype=np.int64)
    start = 0
    for i in range(1, h + 1):
        count = d ** (i - 1)
        level[start : start + count] = i
        start += count
    weight = np.power(d, h - level).astype(np.int64)
    for a in (level, parent, weight):
        a.setflags(write=False)
    return LowerBoundTree(d, h, level, parent, weight)


def gen_temporal(
    graph: ConflictGraph,
    horizon: float = 100.0,
    duration: tuple[float, float] = (1.0, 10.0),
    seed: Seed = 0,
):
    """Arrival times uniform on ``[0, horizon]`` and uniform durations."""
    from .online import TemporalInstance

    if horizon <= 0:
        raise InvalidParameters("horizon must be positive")
    _check_range(*duration, "duration")
    rng = as_rng(seed, "temporal")
    arrival = rng.uniform(0.0, horizon, graph.n)
    departure = arrival + rng.uniform(duration[0], duration[1], graph.n)
    return TemporalInstance(graph, arrival, departure)


def interval_times(geo: GeometricInstance) -> tuple[np.ndarray, np.ndarray]:
    """Use interval endpoints as arrival/departure times."""
    if geo.kind != INTERVAL:
        raise InvalidParameters("interval instance required")
    return geo.items[:, 0].copy(), geo.items[:, 1].copy()


def weight_vector(dists: Sequence[WeightDistribution], seed: Seed) -> np.ndarray:
    """One adversarial weight draw per node (used by the secretary model)."""
    rng = as_rng(seed, "weights")
    return np.array([d.sample(rng) for d in dists], dtype=np.int64)
