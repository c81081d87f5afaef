"""The graph sampling model and the adapters that simulate it.

Each node ``v`` gets a pair of non-negative integer weights
``(w_input[v], w_sample[v])``.  Nodes with positive sample weight form the
sample graph handed to the algorithm up front; nodes with positive input
weight arrive online.  Pairs may be correlated within a node but are drawn
independently across nodes, and the two marginal laws must be within a
factor ``c`` of each other on every positive value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._rng import Seed, as_rng
from .errors import DriftBoundViolated, InvalidParameters, SimilarityViolated

PROB_TOL = 1e-9

AS_INDEXED = "as-indexed"
RANDOM_PERMUTATION = "random-permutation"
BY_ARRIVAL_TIME = "by-arrival-time"
REVERSE_INDEXED = "reverse-indexed"
POLICIES = (AS_INDEXED, RANDOM_PERMUTATION, BY_ARRIVAL_TIME, REVERSE_INDEXED)

INDEPENDENT = "independent"
COUPLED_THINNING = "coupled-thinning"


@dataclass(frozen=True)
class WeightDistribution:
    support: tuple[int, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self):
        support = tuple(int(b) for b in self.support)
        probs = tuple(float(p) for p in self.probabilities)
        if len(support) != len(probs) or not support:
            raise InvalidParameters("support and probabilities must be non-empty and of equal length")
        if len(set(support)) != len(support):
            raise InvalidParameters("support values must be distinct")
        if min(support) < 0:
            raise InvalidParameters("weights must be non-negative")
        if min(probs) < 0 or abs(sum(probs) - 1.0) > PROB_TOL:
            raise InvalidParameters("probabilities must be non-negative and sum to 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def point(cls, value: int) -> "WeightDistribution":
        return cls((value,), (1.0,))

    @classmethod
    def uniform(cls, lo: int, hi: int) -> "WeightDistribution":
        values = tuple(range(lo, hi + 1))
        return cls(values, (1.0 / len(values),) * len(values))

    @classmethod
    def bernoulli(cls, value: int, p: float) -> "WeightDistribution":
        if value == 0 or p in (0.0, 1.0):
            return cls.point(value if p == 1.0 else 0)
        return cls((0, value), (1.0 - p, p))

    def prob(self, b: int) -> float:
        try:
            return self.probabilities[self.support.index(int(b))]
        except ValueError:
            return 0.0

    def mean(self) -> float:
        return float(np.dot(self.support, self.probabilities))

    def thinned(self, keep: float) -> "WeightDistribution":
        """Law of ``X * Bernoulli(keep)``."""
        mass = {b: p * keep for b, p in zip(self.support, self.probabilities) if b > 0}
        mass[0] = 1.0 - sum(mass.values())
        items = sorted(mass.items())
        return WeightDistribution(tuple(b for b, _ in items), tuple(p for _, p in items))

    def sample(self, rng: np.random.Generator, size=None):
        idx = rng.choice(len(self.support), size=size, p=self.probabilities)
        return np.asarray(self.support, dtype=np.int64)[idx]

    def to_json(self) -> list[dict]:
        return [{"value": b, "prob": p} for b, p in zip(self.support, self.probabilities)]

    @classmethod
    def from_json(cls, items: Sequence[dict]) -> "WeightDistribution":
        return cls(tuple(d["value"] for d in items), tuple(d["prob"] for d in items))


def check_similarity(d_input: WeightDistribution, d_sample: WeightDistribution, c: float) -> bool:
    """True iff both laws are within factor ``c`` on every value ``b > 0``."""
    if c < 1:
        raise InvalidParameters("c must be >= 1")
    values = {b for b in d_input.support + d_sample.support if b > 0}
    for b in values:
        pi, ps = d_input.prob(b), d_sample.prob(b)
        if pi > c * ps + PROB_TOL or ps > c * pi + PROB_TOL:
            return False
    return True


@dataclass(frozen=True, eq=False)
class SamplingRealization:
    w_input: np.ndarray
    w_sample: np.ndarray
    c: float = 1.0

    def __post_init__(self):
        wi = np.array(self.w_input, dtype=np.int64)
        ws = np.array(self.w_sample, dtype=np.int64)
        if wi.shape != ws.shape or wi.ndim != 1:
            raise InvalidParameters("weight vectors must be 1-d and of equal length")
        if (wi < 0).any() or (ws < 0).any():
            raise InvalidParameters("weights must be non-negative")
        if self.c < 1:
            raise InvalidParameters("c must be >= 1")
        wi.setflags(write=False)
        ws.setflags(write=False)
        object.__setattr__(self, "w_input", wi)
        object.__setattr__(self, "w_sample", ws)

    @property
    def n(self) -> int:
        return len(self.w_input)

    @property
    def input_nodes(self) -> list[int]:
        return np.flatnonzero(self.w_input > 0).tolist()

    @property
    def sample_nodes(self) -> list[int]:
        return np.flatnonzero(self.w_sample > 0).tolist()

    def restricted(self, keep_input, keep_sample=None) -> "SamplingRealization":
        """Copy with weights zeroed outside the given boolean masks."""
        keep_sample = keep_input if keep_sample is None else keep_sample
        return SamplingRealization(
            np.where(keep_input, self.w_input, 0), np.where(keep_sample, self.w_sample, 0), self.c
        )


@dataclass(frozen=True)
class ArrivalStream:
    nodes: tuple[int, ...]
    policy: str = AS_INDEXED

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def restricted(self, keep) -> "ArrivalStream":
        return ArrivalStream(tuple(v for v in self.nodes if keep[v]), self.policy)

    def is_permutation_of(self, nodes) -> bool:
        return sorted(self.nodes) == sorted(nodes)


def make_stream(
    realization: SamplingRealization,
    policy: str = AS_INDEXED,
    rng: np.random.Generator | None = None,
    arrival_times: Sequence[float] | None = None,
) -> ArrivalStream:
    """Arrival order of the input nodes under an ordering policy."""
    nodes = realization.input_nodes
    if policy == AS_INDEXED:
        seq = nodes
    elif policy == REVERSE_INDEXED:
        seq = nodes[::-1]
    elif policy == RANDOM_PERMUTATION:
        if rng is None:
            raise InvalidParameters("random-permutation policy needs an rng")
        seq = [nodes[i] for i in rng.permutation(len(nodes))]
    elif policy == BY_ARRIVAL_TIME:
        if arrival_times is None:
            raise InvalidParameters("by-arrival-time policy needs arrival times")
        seq = sorted(nodes, key=lambda v: (arrival_times[v], v))
    else:
        raise InvalidParameters(f"unknown arrival policy {policy!r}")
    return ArrivalStream(tuple(int(v) for v in seq), policy)


@dataclass(frozen=True)
class NodeLaw:
    """Joint law of one node's weight pair.

    With ``coupled-thinning`` the sample weight equals the input weight with
    probability ``1/c`` and is 0 otherwise; ``sample`` is then ignored.
    """

    input: WeightDistribution
    sample: WeightDistribution | None = None
    coupling: str = INDEPENDENT

    def sample_law(self, c: float) -> WeightDistribution:
        if self.coupling == COUPLED_THINNING:
            return self.input.thinned(1.0 / c)
        return self.input if self.sample is None else self.sample


def realize(laws: Sequence[NodeLaw], c: float, seed: Seed | np.random.Generator) -> SamplingRealization:
    """One joint draw of all weight pairs, independent across nodes."""
    if c < 1:
        raise InvalidParameters("c must be >= 1")
    for i, law in enumerate(laws):
        if law.coupling not in (INDEPENDENT, COUPLED_THINNING):
            raise InvalidParameters(f"unknown coupling {law.coupling!r}")
        if not check_similarity(law.input, law.sample_law(c), c):
            raise SimilarityViolated(f"node {i}: laws are not {c}-similar")
    rng = as_rng(seed, "realize")
    n = len(laws)
    wi = np.zeros(n, dtype=np.int64)
    ws = np.zeros(n, dtype=np.int64)
    for i, law in enumerate(laws):
        wi[i] = law.input.sample(rng)
        if law.coupling == COUPLED_THINNING:
            ws[i] = wi[i] if rng.random() < 1.0 / c else 0
        else:
            ws[i] = law.sample_law(c).sample(rng)
    return SamplingRealization(wi, ws, c)


def _node_count(graph_or_n) -> int:
    return graph_or_n if isinstance(graph_or_n, (int, np.integer)) else graph_or_n.n


def adapter_secretary(graph, w: Sequence[int], seed: Seed | np.random.Generator):
    """Secretary model: random order, the first Binomial(n, 1/2) nodes are
    observed only as the sample."""
    rng = as_rng(seed, "secretary")
    w = np.asarray(w, dtype=np.int64)
    n = _node_count(graph)
    if len(w) != n:
        raise InvalidParameters("weight vector length must equal n")
    perm = rng.permutation(n)
    k = int(rng.binomial(n, 0.5))
    wi = np.zeros(n, dtype=np.int64)
    ws = np.zeros(n, dtype=np.int64)
    ws[perm[:k]] = w[perm[:k]]
    wi[perm[k:]] = w[perm[k:]]
    real = SamplingRealization(wi, ws, 1.0)
    stream = ArrivalStream(tuple(int(v) for v in perm[k:] if w[v] > 0), RANDOM_PERMUTATION)
    return real, stream


def adapter_prophet(
    graph,
    laws: Sequence[WeightDistribution],
    policy: str,
    seed: Seed | np.random.Generator,
    arrival_times: Sequence[float] | None = None,
):
    """Prophet-inequality model: the sample is a fresh simulation of the
    known per-node laws."""
    rng = as_rng(seed, "prophet")
    n = _node_count(graph)
    if len(laws) != n:
        raise InvalidParameters("need one distribution per node")
    wi = np.array([d.sample(rng) for d in laws], dtype=np.int64)
    ws = np.array([d.sample(rng) for d in laws], dtype=np.int64)
    real = SamplingRealization(wi, ws, 1.0)
    return real, make_stream(real, policy, rng, arrival_times)


def adapter_period(
    graph,
    w: Sequence[int],
    p_prev: Sequence[float],
    p_cur: Sequence[float],
    c: float,
    seed: Seed | np.random.Generator,
    policy: str = AS_INDEXED,
    arrival_times: Sequence[float] | None = None,
):
    """Period model: last period's active nodes serve as the sample."""
    n = _node_count(graph)
    w = np.asarray(w, dtype=np.int64)
    p_prev = np.asarray(p_prev, dtype=float)
    p_cur = np.asarray(p_cur, dtype=float)
    if not (len(w) == len(p_prev) == len(p_cur) == n):
        raise InvalidParameters("w, p_prev and p_cur must have length n")
    if c < 1:
        raise InvalidParameters("c must be >= 1")
    for p in (p_prev, p_cur):
        if np.any(p < 0) or np.any(p > 1):
            raise DriftBoundViolated("activation probabilities must lie in [0, 1]")
    if np.any(p_cur < p_prev / c - PROB_TOL) or np.any(p_cur > p_prev * c + PROB_TOL):
        raise DriftBoundViolated(f"p_cur must lie within [p_prev/{c}, p_prev*{c}]")
    rng = as_rng(seed, "period")
    was_active = rng.random(n) < p_prev
    is_active = rng.random(n) < p_cur
    real = SamplingRealization(w * is_active, w * was_active, c)
    return real, make_stream(real, policy, rng, arrival_times)
