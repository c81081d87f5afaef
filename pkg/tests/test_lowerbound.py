import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onlinemis.generators import gen_lowerbound_tree
from onlinemis.lowerbound import coverage_recursion, highstakes, highstakes_batch, highstakes_policy, lowerbound_experiment


def on_common_path(tree, u, v):
    return u in tree.ancestors(v) or v in tree.ancestors(u)


class TestHighStakes:
    def test_all_inactive(self):
        t = gen_lowerbound_tree(2, 3)
        assert highstakes_policy(t, np.zeros(t.size, bool), np.arange(t.size)) == frozenset()

    def test_single_node(self):
        t = gen_lowerbound_tree(2, 1)
        assert highstakes_policy(t, np.array([True]), [0]) == {0}

    def test_leaf_after_exhausted_root(self):
        t = gen_lowerbound_tree(2, 2)
        assert highstakes_policy(t, np.array([False, True, False]), [0, 1, 2]) == {1}

    def test_leaf_waits_for_unarrived_root(self):
        t = gen_lowerbound_tree(2, 2)
        assert highstakes_policy(t, np.array([False, True, False]), [1, 0, 2]) == frozenset()

    def test_root_dominates_when_active(self):
        t = gen_lowerbound_tree(2, 2)
        # leaves wait for the root, which then takes every path
        assert highstakes_policy(t, np.array([True, True, True]), [1, 2, 0]) == {0}
        # root first: active takes everything, inactive frees both leaves
        assert highstakes_policy(t, np.array([True, True, True]), [0, 1, 2]) == {0}
        assert highstakes_policy(t, np.array([False, True, True]), [0, 1, 2]) == {1, 2}

    @settings(max_examples=200, deadline=None)
    @given(st.integers(2, 3), st.integers(1, 4), st.integers(0, 2**31 - 1))
    def test_batch_matches_sequential(self, d, h, seed):
        t = gen_lowerbound_tree(d, h)
        rng = np.random.default_rng(seed)
        act = rng.random(t.size) < 0.5
        order = rng.permutation(t.size)
        times = np.empty(t.size, np.int64)
        times[order] = np.arange(t.size)
        seq = highstakes_policy(t, act, order)
        batch = highstakes_batch(t, act[None, :], times[None, :])[0]
        assert set(np.flatnonzero(batch)) == seq

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_accepted_not_nested(self, seed):
        t = gen_lowerbound_tree(3, 4)
        out = highstakes(t, seed)
        acc = sorted(out.accepted)
        assert not any(on_common_path(t, u, v) for i, u in enumerate(acc) for v in acc[i + 1 :])
        assert out.covered_paths == sum(t.weight[v] for v in acc)
        assert all(out.activation[v] for v in acc)


class TestRecursion:
    def test_values(self):
        p = 0.3
        assert coverage_recursion(0, p) == 0
        assert coverage_recursion(1, p) == pytest.approx(p)
        assert coverage_recursion(2, p) == pytest.approx(p / 2 + (1 - p / 2) * p)

    def test_bounded_by_harmonic_sum(self):
        for h in range(1, 30):
            p = 1 / (2 * h)
            assert coverage_recursion(h, p) <= sum(p / j for j in range(1, h + 1)) + 1e-12


class TestExperiment:
    def test_h1_alg_equals_opt(self):
        row = lowerbound_experiment([(2, 1)], trials=2000, seed=0)[0]
        assert row["mean_alg"] == row["mean_opt"] and row["ratio"] == 1.0

    def test_deterministic(self):
        a = lowerbound_experiment([(2, 3)], trials=500, seed=5)
        b = lowerbound_experiment([(2, 3)], trials=500, seed=5, batch=77)
        assert a == b

    def test_coverage_and_uncovered(self):
        for row in lowerbound_experiment([(3, 2), (3, 3)], trials=20_000, seed=1):
            assert abs(row["path_coverage"] - row["analytic_coverage"]) < 4 * row["path_coverage_sigma"]
            sigma = np.sqrt(row["analytic_uncovered"] * (1 - row["analytic_uncovered"]) / row["trials"])
            assert abs(row["opt_uncovered"] - row["analytic_uncovered"]) < 5 * sigma
