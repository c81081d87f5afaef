import csv
import io
import json
import math

import numpy as np
import pytest

from onlinemis.errors import ConfigInvalid, OracleTooSlow
from onlinemis.harness import (
    CSV_COLUMNS,
    RunConfig,
    TrialStats,
    aggregate,
    check_hard_invariants,
    check_conflict_bound,
    export,
    load_json,
    lowerbound_stats,
    ratio_of_means,
    run_experiment,
    run_trial,
    run_trials,
    to_csv,
)
from onlinemis.lowerbound import lowerbound_experiment


def small(**kw):
    base = dict(generator={"kind": "intervals", "n": 30, "length": [1, 3], "window": 20}, trials=40, seed=3)
    base.update(kw)
    return RunConfig(**base)


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            {"adapter": "oracle"},
            {"algorithm": "alg9"},
            {"oracle": "magic"},
            {"trials": 0},
            {"c": 0.5},
            {"algorithm": "alg4"},
            {"generator": {"kind": "disks", "n": 5}, "oracle": "interval-dp"},
            {"generator": {"kind": "blobs", "n": 5}},
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ConfigInvalid):
            small(**kw).validate()

    def test_oracle_too_slow(self):
        with pytest.raises(OracleTooSlow):
            small(generator={"kind": "disks", "n": 500}, oracle="brute-force").validate()

    def test_json_round_trip(self):
        cfg = small(weights={"kind": "uniform", "lo": 1, "hi": 4}, tag="x")
        assert RunConfig.from_json(json.loads(json.dumps(cfg.to_json()))) == cfg

    def test_unknown_field(self):
        with pytest.raises(ConfigInvalid):
            RunConfig.from_json({"trails": 3})


class TestTrials:
    def test_trial_deterministic(self):
        cfg = small()
        assert run_trial(cfg, 7) == run_trial(cfg, 7)

    def test_empty_instance(self):
        st = run_experiment(small(generator={"kind": "intervals", "n": 0}, trials=1))
        assert st.mean["alg"] == 0 and st.mean["opt_input"] == 0
        assert math.isnan(st.ratio) and st.ratio_flag == "undefined"

    @pytest.mark.parametrize(
        "kw",
        [
            {},
            {"adapter": "prophet", "policy": "random-permutation", "weights": {"kind": "bernoulli", "p": 0.4}},
            {"adapter": "period", "c": 2.0, "period": {"p_prev": 0.4, "p_cur": 0.3}},
            {"adapter": "raw-sampling", "c": 2.0, "coupling": "coupled-thinning", "weights": {"kind": "uniform", "lo": 1, "hi": 5}},
            {"algorithm": "alg2", "weights": {"kind": "uniform", "lo": 1, "hi": 50}},
            {"algorithm": "split", "oracle": "brute-force", "split_delta": 3.0},
            {"algorithm": "split", "oracle": "greedy-bound", "policy": "by-arrival-time"},
            {"generator": {"kind": "disks", "n": 16, "side": 4}, "oracle": "brute-force"},
            {"generator": {"kind": "sinr", "n": 12, "side": 4}, "algorithm": "alg4", "oracle": "brute-force", "q": 0.5},
        ],
    )
    def test_configurations_run_clean(self, kw):
        st = run_experiment(small(**kw))
        assert st.trials == 40
        assert sum(st.violations.values()) == 0

    def test_greedy_bound_flag(self):
        st = run_experiment(small(generator={"kind": "disks", "n": 40}, oracle="greedy-bound"))
        assert st.ratio_flag == "upper-bound"

    def test_temporal_opt_dominates_static(self):
        # temporal conflicts need an edge and a time overlap, so they are a subset
        gen = {"kind": "intervals", "n": 20, "length": [2, 4], "window": 5}
        for i in range(10):
            temporal = run_trial(small(algorithm="split", oracle="brute-force", generator=gen), i)
            static = run_trial(small(oracle="brute-force", generator=gen), i)
            assert temporal["opt_input"] >= static["opt_input"]

    def test_resample_instance(self):
        from onlinemis.harness import _instance_for

        cfg = small(resample_instance=True)
        a, b = _instance_for(cfg, (3, 0)), _instance_for(cfg, (3, 1))
        assert not np.array_equal(a.geo.items, b.geo.items)
        cfg = small()
        assert _instance_for(cfg, (3, 0)) is _instance_for(cfg, (3, 1))


class TestStatistics:
    def test_ratio_of_means_not_mean_of_ratios(self):
        num, den = np.array([1.0, 3.0]), np.array([1.0, 1.0 / 3])
        r, _ = ratio_of_means(num, den)
        assert r == pytest.approx(3.0)

    def test_delta_ci_covers(self):
        rng = np.random.default_rng(0)
        hits = 0
        for _ in range(300):
            den = rng.exponential(2.0, 400)
            num = 3 * den + rng.normal(0, 1, 400)
            r, ci = ratio_of_means(num, den)
            hits += abs(r - 3) <= ci
        assert hits / 300 > 0.9

    def test_no_ci_below_200(self):
        st = run_experiment(small(trials=50))
        assert math.isnan(st.ci["alg"]) and math.isnan(st.ratio_ci)

    def test_conflict_bound_check(self):
        recs = [{"conflicts": 0, "m3": 2}, {"conflicts": 2, "m3": 2}]
        assert check_conflict_bound(recs, q=0.5).passed
        assert not check_conflict_bound(recs * 200, q=0.1).passed


class TestDeterminism:
    def test_workers(self):
        cfg = small(trials=60)
        a = to_csv([run_experiment(cfg)])
        cfg.workers = 2
        b = to_csv([run_experiment(cfg)])
        assert a == b

    def test_hard_invariants_small(self):
        res = check_hard_invariants(100, seed=1)
        assert res.passed and res.measured == 0


class TestExport:
    def test_header_only(self, tmp_path):
        p = tmp_path / "x.csv"
        export([], "csv", p)
        assert p.read_text().strip().split(",") == CSV_COLUMNS

    def test_constant_columns(self):
        stats = [run_experiment(small()), run_experiment(small(algorithm="alg2", weights={"kind": "uniform", "lo": 1, "hi": 9}))]
        stats += lowerbound_stats(lowerbound_experiment([(2, 2)], 100), 0)
        rows = list(csv.reader(io.StringIO(to_csv(stats))))
        assert {len(r) for r in rows} == {len(CSV_COLUMNS)}
        assert rows[-1][0] == "lowerbound"

    def test_append_writes_header_once(self, tmp_path):
        p = tmp_path / "x.csv"
        st = run_experiment(small(trials=5))
        export([st], "csv", p, append=True, tag="a")
        export([st], "csv", p, append=True, tag="b")
        rows = list(csv.reader(open(p)))
        assert len(rows) == 3 and [r[0] for r in rows[1:]] == ["a", "b"]

    def test_json_round_trip(self, tmp_path):
        p = tmp_path / "x.json"
        st = run_experiment(small(trials=5))
        export([st], "json", p)
        back = load_json(p)
        assert to_csv(back) == to_csv([st])
        assert json.dumps(back[0].to_json(), sort_keys=True) == json.dumps(json.loads(json.dumps(st.to_json())), sort_keys=True)

    def test_bad_format(self, tmp_path):
        with pytest.raises(ValueError):
            export([], "xml", tmp_path / "x")
