"""Online independent-set algorithms for the graph sampling model.

* :func:`alg1_unweighted` -- greedy on the sample guides which arrivals pass
  (M2), a random sparsification keeps each with probability ``q`` (M3) and
  first-come conflict resolution yields the output (M4).
* :func:`alg2_weighted` -- random weight class chosen from the largest
  sample weight, then :func:`alg1_unweighted` on that class.
* :func:`split_temporal` -- nodes with arrival/departure times; recursive
  median split on the sample's arrival times.
* :func:`alg4_edgeweighted` -- edge-weighted conflicts with an extra
  heavy-edge filter.

Every routine takes one seed and derives independent named streams from it
(``coin``, ``threshold``, ``sparsify``, ``split-coin``, ``base-case``).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from ._rng import Seed, child_seed, named_rng
from .errors import InvalidParameters, KindMismatch
from .graph import _EPS, ConflictGraph, is_independent
from .oracles import greedy_mis
from .sampling import ArrivalStream, SamplingRealization


@dataclass
class AlgTrace:
    m1: tuple[int, ...] = ()
    m2: tuple[int, ...] = ()
    m3: tuple[int, ...] = ()
    m4: tuple[int, ...] = ()
    conflict_count: int = 0
    q_used: float = float("nan")
    value: float = 0.0
    threshold_record: dict | None = None
    feasible: bool | None = None
    flags: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        for k in ("m1", "m2", "m3", "m4", "flags"):
            d[k] = list(d[k])
        return d


def default_q(rho: int, c: float) -> float:
    return 1.0 / (2.0 * rho * c)


def _unweighted_core(
    g: ConflictGraph, sample_nodes: Iterable[int], arrivals: Iterable[int], q: float, rng: np.random.Generator
) -> AlgTrace:
    adj, rank = g.adjacency, g.rank
    m1 = greedy_mis(g, sample_nodes)
    m1_arr = np.asarray(m1, dtype=np.int64)
    m1_rank = rank[m1_arr]
    coins = rng.random(g.n)  # one sparsification coin per node
    in_m4 = np.zeros(g.n, dtype=bool)
    m2, m3, m4 = [], [], []
    for v in arrivals:
        if m1_arr.size and np.any(adj[v, m1_arr] & (m1_rank < rank[v])):
            continue
        m2.append(v)
        if coins[v] >= q:
            continue
        m3.append(v)
        if not np.any(adj[v] & in_m4):
            in_m4[v] = True
            m4.append(v)
    conflicts = int(adj[np.ix_(m3, m3)].sum()) // 2 if m3 else 0
    return AlgTrace(tuple(m1), tuple(m2), tuple(m3), tuple(m4), conflicts, q)


def alg1_unweighted(
    g: ConflictGraph,
    realization: SamplingRealization,
    stream: ArrivalStream,
    q: float | None = None,
    seed: Seed = 0,
) -> AlgTrace:
    """Unweighted online independent set; ``q`` defaults to ``1/(2 rho c)``."""
    if not g.is_binary:
        raise KindMismatch("alg1_unweighted needs a binary conflict graph")
    if q is None:
        q = default_q(g.rho, realization.c)
    if not 0 < q <= 1:
        raise InvalidParameters("q must lie in (0, 1]")
    trace = _unweighted_core(g, realization.sample_nodes, stream, q, named_rng(seed, "sparsify"))
    trace.value = float(len(trace.m4))
    return trace


def alg2_weighted(
    g: ConflictGraph,
    realization: SamplingRealization,
    stream: ArrivalStream,
    seed: Seed = 0,
    q: float | None = None,
) -> AlgTrace:
    """Weighted online independent set via a random weight threshold."""
    if not g.is_binary:
        raise KindMismatch("alg2_weighted needs a binary conflict graph")
    c = realization.c
    heads = named_rng(seed, "coin").random(g.n) < 0.5
    w_in = np.where(heads, 0, realization.w_input)
    w_s = np.where(heads, realization.w_sample, 0)
    arrivals = [v for v in stream if w_in[v] > 0]
    sample = np.flatnonzero(w_s > 0)

    if sample.size == 0:
        # no threshold can be derived: take the first arrival with probability 1/2
        trace = AlgTrace(q_used=0.5, flags=("empty-sample-fallback",))
        if arrivals and named_rng(seed, "fallback").random() < 0.5:
            v = arrivals[0]
            trace.m2 = trace.m3 = trace.m4 = (v,)
            trace.value = float(realization.w_input[v])
        return trace

    v_max = int(np.argmax(w_s))  # first index wins ties
    big = int(w_s[v_max])
    top = math.ceil(math.log2((c + 2) * sample.size))
    x = int(named_rng(seed, "threshold").integers(-1, top + 1))
    p = 2.0 ** (-x) * big
    sample_p = [int(v) for v in sample if v != v_max and w_s[v] >= p]
    arrivals_p = [v for v in arrivals if w_in[v] >= p]
    if q is None:
        q = default_q(g.rho, c)
    trace = _unweighted_core(g, sample_p, arrivals_p, q, named_rng(seed, "sparsify"))
    trace.threshold_record = {"v_max": v_max, "B": big, "X": x, "p": p, "X_max": top}
    trace.value = float(sum(realization.w_input[v] for v in trace.m4))
    return trace


# --------------------------------------------------------------------------
# arrivals and departures


@dataclass(frozen=True, eq=False)
class TemporalInstance:
    graph: ConflictGraph
    arrival: np.ndarray
    departure: np.ndarray

    def __post_init__(self):
        a = np.array(self.arrival, dtype=float)
        d = np.array(self.departure, dtype=float)
        if a.shape != (self.graph.n,) or d.shape != (self.graph.n,):
            raise InvalidParameters("need one arrival and departure time per node")
        if np.any(a > d):
            raise InvalidParameters("arrival must not exceed departure")
        a.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "arrival", a)
        object.__setattr__(self, "departure", d)

    def overlaps(self, u: int, v: int) -> bool:
        return max(self.arrival[u], self.arrival[v]) <= min(self.departure[u], self.departure[v])

    def conflicting(self, u: int, v: int) -> bool:
        return bool(self.graph.adjacency[u, v]) and self.overlaps(u, v)

    def window(self, nodes: Iterable[int], a: float, d: float, open_left: bool = False) -> list[int]:
        """Nodes living inside ``[a, d]`` (``(a, d]`` if ``open_left``)."""
        arr, dep = self.arrival, self.departure
        if open_left:
            return [v for v in nodes if arr[v] > a and dep[v] <= d]
        return [v for v in nodes if arr[v] >= a and dep[v] <= d]


def temporal_conflict_free(t: TemporalInstance, nodes: Iterable[int]) -> bool:
    nodes = list(nodes)
    if len(nodes) < 2:
        return True
    idx = np.asarray(nodes)
    a, d = t.arrival[idx], t.departure[idx]
    overlap = np.maximum.outer(a, a) <= np.minimum.outer(d, d)
    clash = t.graph.adjacency[np.ix_(idx, idx)] & overlap
    return not clash.any()


@dataclass(frozen=True)
class SplitParams:
    n_tilde: float
    chi: float
    delta: float
    gamma: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not 0 < self.chi < 1 or self.delta <= 0 or self.alpha <= 0:
            raise InvalidParameters("need 0 < chi < 1, delta > 0, alpha > 0")

    @classmethod
    def for_sample(cls, c: float, sample_size: int, gamma: float, delta: float | None = None) -> "SplitParams":
        """Standard constants; ``delta`` may be overridden to exercise the
        recursion on small instances."""
        n_tilde = (c + 2) * sample_size
        chi = 1.0 - 1.0 / (2.0 * (c + 2))
        if delta is None:
            delta = 24.0 * (c + 1) ** 2 * math.log(max(n_tilde, 2.0)) / chi
        alpha = 2.0 * gamma / (-math.log2(chi))
        return cls(n_tilde, chi, delta, gamma, alpha, 2.0 * math.e * delta)

    def q_at(self, k: float) -> float:
        return min(1.0, 2.0 * self.gamma / (self.alpha * math.log2(k) + self.beta))


Subroutine = Callable[[ConflictGraph, SamplingRealization, ArrivalStream, Seed], Iterable[int]]


def alg1_subroutine(q: float | None = None) -> Subroutine:
    return lambda g, real, stream, seed: alg1_unweighted(g, real, stream, q, seed).m4


def alg2_subroutine(q: float | None = None) -> Subroutine:
    return lambda g, real, stream, seed: alg2_weighted(g, real, stream, seed, q).m4


def split_temporal(
    t: TemporalInstance,
    realization: SamplingRealization,
    stream: ArrivalStream,
    params: SplitParams | None = None,
    subroutine: Subroutine | str = "alg1",
    seed: Seed = 0,
    stats: dict | None = None,
) -> frozenset[int]:
    """Recursive SPLIT over time; the output is conflict-free under
    edge-plus-time-overlap conflicts.

    The left part of a split keeps nodes departing by the median ``x``, the
    middle slab holds nodes with ``arrival <= x < departure`` and the right
    part nodes arriving strictly after ``x``, so the three parts partition
    the window.
    """
    g = t.graph
    if not g.is_binary:
        raise KindMismatch("split_temporal needs a binary conflict graph")
    sample = realization.sample_nodes
    if params is None:
        params = SplitParams.for_sample(realization.c, len(sample), 4 * realization.c**3 * g.rho**2)
    if isinstance(subroutine, str):
        subroutine = {"alg1": alg1_subroutine(), "alg2": alg2_subroutine()}[subroutine]
    coin = named_rng(seed, "split-coin")
    base_rng = named_rng(seed, "base-case")
    arrivals = list(stream)
    arr, dep = t.arrival, t.departure
    stats = {} if stats is None else stats
    stats.update(base_calls=0, slab_calls=0, max_depth=0)
    sub_calls = 0

    def base(nodes: list[int]) -> list[int]:
        stats["base_calls"] += 1
        chosen: list[int] = []
        for v in nodes:
            if base_rng.random() < 1.0 / params.delta and not any(t.conflicting(u, v) for u in chosen):
                chosen.append(v)
        return chosen

    def rec(a: float, open_left: bool, d: float, k: float, depth: int) -> list[int]:
        nonlocal sub_calls
        stats["max_depth"] = max(stats["max_depth"], depth)
        inside = t.window(arrivals, a, d, open_left)
        s_inside = t.window(sample, a, d, open_left)
        if k < params.delta or not s_inside:
            return base(inside)
        times = np.sort(arr[s_inside])
        x = float(times[(len(times) - 1) // 2])  # lower median
        if coin.random() < params.q_at(k):
            stats["slab_calls"] += 1
            slab = np.zeros(g.n, dtype=bool)
            for v in t.window(range(g.n), a, d, open_left):
                slab[v] = arr[v] <= x < dep[v]
            sub_calls += 1
            sub_seed = child_seed(seed, "subroutine", sub_calls)
            return list(subroutine(g, realization.restricted(slab), stream.restricted(slab), sub_seed))
        return rec(a, open_left, x, params.chi * k, depth + 1) + rec(x, True, d, params.chi * k, depth + 1)

    return frozenset(rec(-math.inf, False, math.inf, params.n_tilde, 0))


# --------------------------------------------------------------------------
# edge-weighted conflicts


def tau(m: float, c: float, rho: int) -> float:
    """High-probability bound on the symmetrised weight inside M2."""
    return (3 * (1 + c) ** 3 + c) / c * (2 * rho * math.ceil(math.log2(m)) + 1)


def alg4_edgeweighted(
    g: ConflictGraph,
    realization: SamplingRealization,
    stream: ArrivalStream,
    q: float | None = None,
    seed: Seed = 0,
) -> AlgTrace:
    """Online independent set on an edge-weighted conflict graph.

    ``q`` defaults to ``1 / ((4e log n~) tau(n~))`` with ``n~ = (c+2)|V^S|``.
    The output is feasible only with high probability; ``trace.feasible``
    records the outcome.
    """
    if g.is_binary:
        raise KindMismatch("alg4_edgeweighted needs an edge-weighted conflict graph")
    c = realization.c
    sample = realization.sample_nodes
    n_tilde = (c + 2) * len(sample)
    flags: tuple[str, ...] = ()
    if n_tilde <= 1:
        flags = ("degenerate-n-tilde",)
        log_nt = 1.0
        if q is None:
            q = 1.0
    else:
        log_nt = math.log2(n_tilde)
        if q is None:
            q = 1.0 / ((4 * math.e * log_nt) * tau(n_tilde, c, g.rho))
    if not 0 < q <= 1:
        raise InvalidParameters("q must lie in (0, 1]")
    heavy = 1.0 / (4 * math.e * log_nt)

    ub = g.ubar_matrix()
    rank = g.rank
    m1 = greedy_mis(g, sample)
    m1_arr = np.asarray(m1, dtype=np.int64)
    coins = named_rng(seed, "sparsify").random(g.n)
    in_m3 = np.zeros(g.n, dtype=bool)
    m2, m3, m4 = [], [], []
    for v in stream:
        if m1_arr.size:
            earlier = m1_arr[rank[m1_arr] < rank[v]]
            if ub[earlier, v].sum() >= 1.0 - _EPS:
                continue
        m2.append(v)
        if coins[v] >= q:
            continue
        blocked = bool(np.any(ub[in_m3, v] >= heavy))
        in_m3[v] = True
        m3.append(v)
        if not blocked:
            m4.append(v)

    m2_load = float(ub[np.ix_(m2, m2)].sum(axis=0).max()) if m2 else 0.0
    # E[|M4| given M2]: the sparsification coins are independent of M2, so v
    # survives with probability q (1-q)^(number of earlier heavy M2 neighbours)
    if m2:
        earlier_heavy = np.tril(ub[np.ix_(m2, m2)] >= heavy, -1).sum(axis=1)
        m4_given_m2 = float(np.sum(q * (1.0 - q) ** earlier_heavy))
    else:
        m4_given_m2 = 0.0
    heavy_pairs = 0
    if m3:
        sub = ub[np.ix_(m3, m3)]
        heavy_pairs = int(np.triu(sub >= heavy, 1).sum())
    return AlgTrace(
        tuple(m1),
        tuple(m2),
        tuple(m3),
        tuple(m4),
        conflict_count=heavy_pairs,
        q_used=q,
        value=float(len(m4)),
        feasible=is_independent(g, m4),
        flags=flags,
        extra={"n_tilde": n_tilde, "heavy_threshold": heavy, "tau_n_tilde": tau(max(n_tilde, 2), c, g.rho), "m2_max_load": m2_load, "m4_given_m2": m4_given_m2},
    )
