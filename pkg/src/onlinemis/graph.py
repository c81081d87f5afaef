"""Conflict graphs, geometric realizations and independence checks.

Two kinds of conflict graph are supported:

* ``binary``: a symmetric, irreflexive adjacency matrix.
* ``edge-weighted``: a matrix ``W`` with ``W[u, v] = w(u, v)`` in ``[0, 1]``,
  the interference that ``u`` causes at ``v``.  A set ``S`` is independent
  iff every ``v`` in ``S`` receives total weight ``< 1`` from ``S``.

Every graph carries an elimination order (the ``order`` tuple lists the
nodes from first to last) and a declared inductive independence bound
``rho``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InstanceTooLarge, InvalidParameters, PreconditionViolated

BINARY = "binary"
EDGE_WEIGHTED = "edge-weighted"

# slack for float sums compared against the strict "< 1" feasibility bound
_EPS = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ConflictGraph:
    n: int
    kind: str
    order: tuple[int, ...]
    rho: int = 1
    adjacency: np.ndarray | None = None
    weights: np.ndarray | None = None
    rank: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise InvalidParameters("n must be non-negative")
        order = tuple(int(v) for v in self.order)
        if sorted(order) != list(range(n)):
            raise InvalidParameters("order must be a permutation of 0..n-1")
        if int(self.rho) < 1:
            raise InvalidParameters("rho must be >= 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "rho", int(self.rho))

        if self.kind == BINARY:
            adj = np.zeros((n, n), dtype=bool) if self.adjacency is None else np.asarray(self.adjacency, dtype=bool)
            if adj.shape != (n, n):
                raise InvalidParameters("adjacency must be n x n")
            if not np.array_equal(adj, adj.T):
                raise InvalidParameters("adjacency must be symmetric")
            if n and adj.diagonal().any():
                raise InvalidParameters("adjacency must be irreflexive")
            object.__setattr__(self, "adjacency", _frozen(adj))
            object.__setattr__(self, "weights", None)
        elif self.kind == EDGE_WEIGHTED:
            w = np.zeros((n, n)) if self.weights is None else np.asarray(self.weights, dtype=float)
            if w.shape != (n, n):
                raise InvalidParameters("weights must be n x n")
            if n and (w.min() < 0 or w.max() > 1):
                raise InvalidParameters("edge weights must lie in [0, 1]")
            if n and np.any(w.diagonal() != 0):
                raise InvalidParameters("w(v, v) must be 0")
            object.__setattr__(self, "weights", _frozen(w))
            object.__setattr__(self, "adjacency", None)
        else:
            raise InvalidParameters(f"unknown graph kind {self.kind!r}")

        rank = np.empty(n, dtype=np.int64)
        rank[list(order)] = np.arange(n)
        object.__setattr__(self, "rank", _frozen(rank))

    @property
    def is_binary(self) -> bool:
        return self.kind == BINARY

    def precedes(self, u: int, v: int) -> bool:
        return self.rank[u] < self.rank[v]

    def sort_by_order(self, nodes: Iterable[int]) -> list[int]:
        return sorted(nodes, key=lambda v: self.rank[v])

    def neighbors(self, v: int) -> np.ndarray:
        if not self.is_binary:
            raise InvalidParameters("neighbors() is defined for binary graphs only")
        return np.flatnonzero(self.adjacency[v])

    def ubar(self, u: int, v: int) -> float:
        """Symmetrised weight w(u, v) + w(v, u)."""
        if self.is_binary:
            return float(self.adjacency[u, v])
        return float(self.weights[u, v] + self.weights[v, u])

    def ubar_matrix(self) -> np.ndarray:
        if self.is_binary:
            return self.adjacency.astype(float)
        return self.weights + self.weights.T

    def edges(self) -> list[tuple[int, int]]:
        if not self.is_binary:
            raise InvalidParameters("edges() is defined for binary graphs only")
        us, vs = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(us.tolist(), vs.tolist()))

    def subgraph(self, nodes: Sequence[int]) -> "ConflictGraph":
        """Induced subgraph, relabelled 0..k-1 in the given node order; the
        elimination order is inherited."""
        nodes = list(nodes)
        idx = np.asarray(nodes, dtype=np.int64)
        sub_order = sorted(range(len(nodes)), key=lambda i: self.rank[nodes[i]])
        if self.is_binary:
            return ConflictGraph(len(nodes), BINARY, sub_order, self.rho, adjacency=self.adjacency[np.ix_(idx, idx)])
        return ConflictGraph(len(nodes), EDGE_WEIGHTED, sub_order, self.rho, weights=self.weights[np.ix_(idx, idx)])

    def with_rho(self, rho: int) -> "ConflictGraph":
        return ConflictGraph(self.n, self.kind, self.order, rho, adjacency=self.adjacency, weights=self.weights)

    def to_dict(self) -> dict:
        d = {"n": self.n, "kind": self.kind, "order": list(self.order), "rho": self.rho}
        if self.is_binary:
            d["edges"] = [[u, v] for u, v in self.edges()]
        else:
            us, vs = np.nonzero(self.weights)
            d["weighted_edges"] = [[int(u), int(v), float(self.weights[u, v])] for u, v in zip(us, vs)]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ConflictGraph":
        n = int(d["n"])
        if d["kind"] == BINARY:
            return binary_graph(n, d.get("edges", []), d["order"], d.get("rho", 1))
        return edge_weighted_graph(n, d.get("weighted_edges", []), d["order"], d.get("rho", 1))


def binary_graph(n: int, edges: Iterable[Sequence[int]], order: Sequence[int] | None = None, rho: int = 1) -> ConflictGraph:
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        if u == v:
            raise InvalidParameters("self-loops are not allowed")
        adj[u, v] = adj[v, u] = True
    return ConflictGraph(n, BINARY, tuple(range(n)) if order is None else order, rho, adjacency=adj)


def edge_weighted_graph(n: int, weights, order: Sequence[int] | None = None, rho: int = 1) -> ConflictGraph:
    """``weights`` is either an ``n x n`` matrix or an iterable of ``(u, v, w)``."""
    if isinstance(weights, np.ndarray) and weights.ndim == 2:
        w = weights
    else:
        w = np.zeros((n, n))
        for u, v, x in weights:
            w[int(u), int(v)] = x
    return ConflictGraph(n, EDGE_WEIGHTED, tuple(range(n)) if order is None else order, rho, weights=w)


# --------------------------------------------------------------------------
# geometric instances

INTERVAL = "interval"
DISK = "disk"


@dataclass(frozen=True, eq=False)
class GeometricInstance:
    """Intervals as rows ``(left, right)`` or disks as rows ``(x, y, r)``."""

    kind: str
    items: np.ndarray

    def __post_init__(self):
        width = {INTERVAL: 2, DISK: 3}.get(self.kind)
        if width is None:
            raise InvalidParameters(f"unknown geometric kind {self.kind!r}")
        items = np.asarray(self.items, dtype=float).reshape(-1, width)
        if self.kind == INTERVAL and np.any(items[:, 0] > items[:, 1]):
            raise InvalidParameters("interval with left > right")
        if self.kind == DISK and np.any(items[:, 2] <= 0):
            raise InvalidParameters("disk radius must be positive")
        object.__setattr__(self, "items", _frozen(items))

    @property
    def n(self) -> int:
        return len(self.items)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "items": self.items.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "GeometricInstance":
        return cls(d["kind"], np.asarray(d["items"], dtype=float))


def intervals(pairs: Iterable[Sequence[float]]) -> GeometricInstance:
    return GeometricInstance(INTERVAL, np.asarray(list(pairs), dtype=float))


def disks(triples: Iterable[Sequence[float]]) -> GeometricInstance:
    return GeometricInstance(DISK, np.asarray(list(triples), dtype=float))


def derive_conflict_graph(geo: GeometricInstance) -> ConflictGraph:
    """Intersection graph of closed intervals (rho=1, ordered by right
    endpoint) or closed disks (rho=5, ordered by radius)."""
    n = geo.n
    items = geo.items
    if geo.kind == INTERVAL:
        left, right = items[:, 0], items[:, 1]
        adj = np.maximum.outer(left, left) <= np.minimum.outer(right, right)
        key, rho = right, 1
    else:
        xy, r = items[:, :2], items[:, 2]
        dist = np.sqrt(((xy[:, None, :] - xy[None, :, :]) ** 2).sum(-1))
        adj = dist <= r[:, None] + r[None, :]
        key, rho = r, 5
    np.fill_diagonal(adj, False)
    order = np.lexsort((np.arange(n), key)) if n else np.arange(0)
    return ConflictGraph(n, BINARY, tuple(order.tolist()), rho, adjacency=adj)


# --------------------------------------------------------------------------
# independence


def is_independent(g: ConflictGraph, s: Iterable[int]) -> bool:
    idx = np.fromiter(set(int(v) for v in s), dtype=np.int64)
    if idx.size <= 1 and g.is_binary:
        return True
    if g.is_binary:
        return not g.adjacency[np.ix_(idx, idx)].any()
    if idx.size == 0:
        return True
    incoming = g.weights[np.ix_(idx, idx)].sum(axis=0)
    return bool(np.all(incoming < 1.0 - _EPS))


def _max_independent_size(adj: np.ndarray) -> int:
    """Maximum independent set size of a small binary graph (bitmask search)."""
    k = len(adj)
    nbr = [int(sum(1 << j for j in np.flatnonzero(adj[i]))) for i in range(k)]

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if mask == 0:
            return 0
        u = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << u)
        take = 1 + best(rest & ~nbr[u])
        if nbr[u] & rest == 0:
            return take
        return max(take, best(rest))

    return best((1 << k) - 1)


def _max_weighted_later_sum(w: np.ndarray, gains: np.ndarray) -> float:
    """max over feasible S of sum(gains[S]) for directed weights ``w``."""
    k = len(gains)
    idx = np.argsort(-gains, kind="stable")
    gains = gains[idx]
    w = w[np.ix_(idx, idx)]
    suffix = np.concatenate([np.cumsum(gains[::-1])[::-1], [0.0]])
    best = 0.0
    incoming = np.zeros(k)
    chosen: list[int] = []

    def dfs(i: int, cur: float):
        nonlocal best, incoming
        if cur > best:
            best = cur
        if i == k or cur + suffix[i] <= best + 1e-15:
            return
        # u = i can join if it stays feasible and keeps every member feasible
        if incoming[i] < 1.0 - _EPS and all(incoming[s] + w[i, s] < 1.0 - _EPS for s in chosen):
            incoming += w[i]
            chosen.append(i)
            dfs(i + 1, cur + gains[i])
            chosen.pop()
            incoming -= w[i]
        dfs(i + 1, cur)

    dfs(0, 0.0)
    return best


def brute_force_rho(g: ConflictGraph, max_n: int = 20) -> int:
    """Exact inductive independence number of ``g`` for its fixed order,
    reported as ``max(raw, 1)``."""
    if g.n > max_n:
        raise InstanceTooLarge(f"n={g.n} exceeds max_n={max_n}")
    raw = 0.0
    rank = g.rank
    if g.is_binary:
        for v in range(g.n):
            later = np.flatnonzero(g.adjacency[v] & (rank > rank[v]))
            if later.size > raw:
                raw = max(raw, _max_independent_size(g.adjacency[np.ix_(later, later)]))
        return max(int(raw), 1)
    ub = g.ubar_matrix()
    for v in range(g.n):
        later = np.flatnonzero((rank > rank[v]) & (ub[:, v] > 0))
        if later.size == 0 or ub[later, v].sum() <= raw:
            continue
        raw = max(raw, _max_weighted_later_sum(g.weights[np.ix_(later, later)], ub[later, v]))
    return max(int(math.ceil(raw - 1e-9)), 1)


def prefix_sums(g: ConflictGraph, seq: Sequence[int]) -> np.ndarray:
    """For each node of ``seq`` (in elimination order) the symmetrised weight
    it receives from the nodes of ``seq`` before it."""
    seq = g.sort_by_order(seq)
    if not seq:
        return np.zeros(0)
    ub = g.ubar_matrix()[np.ix_(seq, seq)]
    return np.tril(ub, -1).sum(axis=1)


def decompose_feasible(g: ConflictGraph, m1: Sequence[int], check_prefix: bool = True) -> list[list[int]]:
    """First-fit split of a prefix-feasible set into feasible classes.

    Nodes are scanned in elimination order and placed into the first class
    that stays independent; a new class is opened when none fits.
    """
    seq = g.sort_by_order(int(v) for v in m1)
    if check_prefix and np.any(prefix_sums(g, seq) >= 1.0 - _EPS):
        raise PreconditionViolated("m1 is not prefix-feasible")
    w = g.ubar_matrix() if g.is_binary else g.weights
    classes: list[list[int]] = []
    loads: list[dict[int, float]] = []
    for v in seq:
        for members, load in zip(classes, loads):
            into_v = sum(w[u, v] for u in members)
            if into_v < 1.0 - _EPS and all(load[u] + w[v, u] < 1.0 - _EPS for u in members):
                for u in members:
                    load[u] += w[v, u]
                load[v] = into_v
                members.append(v)
                break
        else:
            classes.append([v])
            loads.append({v: 0.0})
    return classes
