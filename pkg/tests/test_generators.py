import json

import numpy as np
import pytest

from onlinemis.errors import InvalidParameters, SizeOverflow
from onlinemis.generators import (
    gen_disks,
    gen_intervals,
    gen_lowerbound_tree,
    gen_sinr_conflicts,
    gen_temporal,
    sinr_conflict_graph,
    sinr_weights,
)
from onlinemis.graph import binary_graph, derive_conflict_graph, is_independent
from onlinemis.sampling import WeightDistribution


class TestIntervals:
    def test_empty(self):
        geo, laws = gen_intervals(0)
        assert len(geo.items) == 0 and laws == []

    def test_deterministic(self):
        a, _ = gen_intervals(3, seed=7)
        b, _ = gen_intervals(3, seed=7)
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())

    def test_weight_dist_assigned(self):
        d = WeightDistribution.uniform(1, 3)
        _, laws = gen_intervals(4, weight_dist=d)
        assert laws == [d] * 4

    def test_bad_parameters(self):
        with pytest.raises(InvalidParameters):
            gen_intervals(3, length=(2, 1))
        with pytest.raises(InvalidParameters):
            gen_intervals(3, window=0)

    def test_mean_degree(self):
        # a unit interval meets another iff their left ends differ by at most 1
        degs = []
        for seed in range(50):
            g = derive_conflict_graph(gen_intervals(1000, (1, 1), 100, seed=seed)[0])
            degs.append(g.adjacency.sum() / g.n)
        assert abs(np.mean(degs) - 20) <= 0.2 * 20


class TestDisks:
    def test_empty_and_deterministic(self):
        assert len(gen_disks(0)[0].items) == 0
        assert np.array_equal(gen_disks(5, seed=3)[0].items, gen_disks(5, seed=3)[0].items)

    def test_mean_degree(self):
        n, side, r = 50, 10, 0.5
        degs = [derive_conflict_graph(gen_disks(n, side, (r, r), seed=s)[0]).adjacency.sum() / n for s in range(100)]
        target = n * np.pi * (2 * r) ** 2 / side**2
        assert abs(np.mean(degs) - target) <= 0.25 * target


class TestSinr:
    def test_single_link(self):
        g = gen_sinr_conflicts(1, seed=0)
        assert g.n == 1 and np.all(g.weights == 0)
        assert is_independent(g, [0])

    def test_colocated_links_block(self):
        s = np.array([[0.0, 0.0], [0.0, 0.0]])
        r = np.array([[1.0, 0.0], [1.0, 0.0]])
        w = sinr_weights(s, r, 3.0, 0.5)
        assert w[0, 1] == w[1, 0] == 1.0
        assert not is_independent(sinr_conflict_graph(s, r), [0, 1])

    def test_affectance_formula(self):
        s = np.array([[0.0, 0.0], [5.0, 0.0]])
        r = np.array([[1.0, 0.0], [5.0, 2.0]])
        w = sinr_weights(s, r, alpha=2.0, noise_fraction=0.5)
        sig = np.array([1.0, 1 / 4])
        noise = 0.5 * sig.min()
        d01 = np.hypot(5, 2)
        assert w[0, 1] == pytest.approx((1 / d01**2) / (sig[1] - noise))
        assert w[1, 0] == pytest.approx((1 / 16) / (sig[0] - noise))

    def test_singletons_feasible_and_order(self):
        g = gen_sinr_conflicts(64, alpha=3, seed=1)
        assert all(is_independent(g, [v]) for v in range(g.n))
        assert np.all(np.diag(g.weights) == 0) and g.weights.max() <= 1
        assert g.rho >= 1

    def test_bad_parameters(self):
        with pytest.raises(InvalidParameters):
            gen_sinr_conflicts(4, alpha=1.5)
        with pytest.raises(InvalidParameters):
            gen_sinr_conflicts(4, noise_fraction=1.0)

    def test_deterministic(self):
        a, b = gen_sinr_conflicts(20, seed=9), gen_sinr_conflicts(20, seed=9)
        assert np.array_equal(a.weights, b.weights) and a.order == b.order and a.rho == b.rho


class TestLowerBoundTree:
    @pytest.mark.parametrize("d,h,size,root,p", [(2, 1, 1, 1, 1 / 2), (2, 3, 7, 4, 1 / 6), (3, 2, 4, 3, 1 / 4)])
    def test_small(self, d, h, size, root, p):
        t = gen_lowerbound_tree(d, h)
        assert t.size == size and t.weight[0] == root and t.p == pytest.approx(p)
        assert t.leaf_count == root

    @pytest.mark.parametrize("d,h", [(2, 5), (3, 4), (5, 3)])
    def test_structure(self, d, h):
        t = gen_lowerbound_tree(d, h)
        leaves = [v for v in range(t.size) if t.level[v] == h]
        assert len(leaves) == t.leaf_count == t.weight[0]
        for v in range(t.size):
            kids = list(t.children(v))
            if t.level[v] < h:
                assert len(kids) == d and t.weight[v] == sum(t.weight[k] for k in kids)
                assert all(t.parent[k] == v for k in kids)
        assert all(len(t.ancestors(v)) == h - 1 for v in leaves)
        assert len(t.leftmost_path()) == h

    def test_overflow(self):
        with pytest.raises(SizeOverflow):
            gen_lowerbound_tree(10, 8, max_nodes=1000)

    def test_bad(self):
        with pytest.raises(InvalidParameters):
            gen_lowerbound_tree(1, 3)


def test_temporal_generator():
    g = binary_graph(10, [])
    t = gen_temporal(g, horizon=50, duration=(1, 2), seed=4)
    assert np.all(t.departure - t.arrival >= 1) and np.all(t.departure - t.arrival <= 2)
    assert np.array_equal(t.arrival, gen_temporal(g, 50, (1, 2), seed=4).arrival)
