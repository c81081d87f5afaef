"""Monte Carlo experiment driver.

A :class:`RunConfig` names a generator, an input model (adapter), an
algorithm and an offline oracle.  :func:`run_experiment` runs independent
trials, each seeded by ``(root_seed, trial_index)``, and folds them in index
order, so the result does not depend on the number of worker processes.

The competitive ratio is estimated as ``mean(OPT) / mean(ALG)``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any

import numpy as np

from ._rng import child_seed, named_rng
from .errors import ConfigInvalid, OracleTooSlow
from .generators import gen_disks, gen_intervals, gen_sinr_conflicts, gen_temporal, weight_vector
from .graph import INTERVAL, ConflictGraph, GeometricInstance, binary_graph, derive_conflict_graph, is_independent
from .online import (
    SplitParams,
    TemporalInstance,
    alg1_unweighted,
    alg2_weighted,
    alg4_edgeweighted,
    split_temporal,
    tau,
    temporal_conflict_free,
)
from .oracles import exact_mwis_small, greedy_mis, interval_mwis_exact
from .sampling import (
    AS_INDEXED,
    BY_ARRIVAL_TIME,
    COUPLED_THINNING,
    INDEPENDENT,
    POLICIES,
    NodeLaw,
    WeightDistribution,
    adapter_period,
    adapter_prophet,
    adapter_secretary,
    make_stream,
    realize,
)

ADAPTERS = ("secretary", "prophet", "period", "raw-sampling")
ALGORITHMS = ("alg1", "alg2", "split", "alg4")
ORACLES = ("interval-dp", "brute-force", "greedy-bound", "none")
METRICS = ("alg", "opt_input", "opt_sample", "m1", "m2", "m3", "m4", "m4_given_m2", "conflicts", "feasible", "m2_overload")
MIN_TRIALS_FOR_CI = 200
Z95 = 1.959963984540054


@dataclass
class RunConfig:
    generator: dict = field(default_factory=lambda: {"kind": "intervals", "n": 50})
    adapter: str = "secretary"
    algorithm: str = "alg1"
    c: float = 1.0
    rho: int | None = None
    q: float | None = None
    policy: str = AS_INDEXED
    trials: int = 200
    seed: int = 0
    oracle: str = "interval-dp"
    weights: dict = field(default_factory=lambda: {"kind": "unit"})
    coupling: str = INDEPENDENT
    period: dict = field(default_factory=lambda: {"p_prev": 0.5, "p_cur": 0.5})
    temporal: dict = field(default_factory=lambda: {"horizon": 100.0, "duration": [1.0, 10.0]})
    split_delta: float | None = None
    resample_instance: bool = False
    oracle_max_n: int = 28
    workers: int = 1
    tag: str = ""

    def validate(self) -> "RunConfig":
        kind = self.generator.get("kind")
        if kind not in ("intervals", "disks", "sinr"):
            raise ConfigInvalid(f"unknown generator kind {kind!r}")
        if self.adapter not in ADAPTERS:
            raise ConfigInvalid(f"unknown adapter {self.adapter!r}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigInvalid(f"unknown algorithm {self.algorithm!r}")
        if self.oracle not in ORACLES:
            raise ConfigInvalid(f"unknown oracle {self.oracle!r}")
        if self.policy not in POLICIES:
            raise ConfigInvalid(f"unknown arrival policy {self.policy!r}")
        if self.coupling not in (INDEPENDENT, COUPLED_THINNING):
            raise ConfigInvalid(f"unknown coupling {self.coupling!r}")
        if self.trials < 1 or self.c < 1 or self.workers < 1:
            raise ConfigInvalid("need trials >= 1, c >= 1, workers >= 1")
        if (self.algorithm == "alg4") != (kind == "sinr"):
            raise ConfigInvalid("alg4 runs exactly on sinr (edge-weighted) instances")
        if self.oracle == "interval-dp" and (kind != "intervals" or self.algorithm == "split"):
            raise ConfigInvalid("interval-dp oracle needs an interval generator and a non-temporal algorithm")
        if self.oracle == "greedy-bound" and self.weights.get("kind") != "unit":
            raise ConfigInvalid("greedy-bound oracle is only meaningful for unit weights")
        if self.oracle == "brute-force" and int(self.generator.get("n", 0)) > 2 * self.oracle_max_n:
            raise OracleTooSlow(f"n={self.generator.get('n')} is beyond the brute-force oracle cap")
        return self

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigInvalid(f"unknown config fields {sorted(extra)}")
        return cls(**d)


# --------------------------------------------------------------------------
# per-trial machinery


def weight_laws(spec: dict, n: int) -> list[WeightDistribution]:
    kind = spec.get("kind", "unit")
    if kind == "unit":
        law = WeightDistribution.point(1)
    elif kind == "uniform":
        law = WeightDistribution.uniform(int(spec["lo"]), int(spec["hi"]))
    elif kind == "bernoulli":
        law = WeightDistribution.bernoulli(int(spec.get("value", 1)), float(spec["p"]))
    elif kind == "dist":
        law = WeightDistribution.from_json(spec["items"])
    else:
        raise ConfigInvalid(f"unknown weight spec {kind!r}")
    return [law] * n


@dataclass(frozen=True, eq=False)
class Instance:
    graph: ConflictGraph
    geo: GeometricInstance | None
    temporal: TemporalInstance | None
    laws: list
    adversarial_w: np.ndarray


def build_instance(cfg: RunConfig, seed) -> Instance:
    gen = dict(cfg.generator)
    kind = gen.pop("kind")
    n = int(gen.pop("n"))
    laws = weight_laws(cfg.weights, n)
    geo = None
    if kind == "intervals":
        geo, _ = gen_intervals(n, tuple(gen.get("length", (1.0, 1.0))), gen.get("window", 100.0), seed=seed)
        g = derive_conflict_graph(geo)
    elif kind == "disks":
        geo, _ = gen_disks(n, gen.get("side", 10.0), tuple(gen.get("radius", (0.5, 0.5))), seed=seed)
        g = derive_conflict_graph(geo)
    else:
        g = gen_sinr_conflicts(
            n,
            gen.get("side", 10.0),
            gen.get("alpha", 3.0),
            gen.get("noise_fraction", 0.5),
            seed=seed,
            base_length=gen.get("base_length", 1.0),
            rho_samples=gen.get("rho_samples", 4),
            rho_subsample=gen.get("rho_subsample", 12),
        )
    if cfg.rho is not None:
        g = g.with_rho(cfg.rho)
    temporal = None
    if cfg.algorithm == "split" or cfg.policy == BY_ARRIVAL_TIME:
        tp = cfg.temporal
        temporal = gen_temporal(g, tp.get("horizon", 100.0), tuple(tp.get("duration", (1.0, 10.0))), seed=seed)
    return Instance(g, geo, temporal, laws, weight_vector(laws, seed))


_INSTANCE_CACHE: dict[str, Instance] = {}


def _instance_for(cfg: RunConfig, trial_seed) -> Instance:
    if cfg.resample_instance:
        return build_instance(cfg, child_seed(trial_seed, "instance"))
    key = json.dumps(cfg.to_json(), sort_keys=True)
    inst = _INSTANCE_CACHE.get(key)
    if inst is None:
        if len(_INSTANCE_CACHE) > 32:
            _INSTANCE_CACHE.clear()
        inst = _INSTANCE_CACHE[key] = build_instance(cfg, child_seed((cfg.seed,), "instance"))
    return inst


def _realize(cfg: RunConfig, inst: Instance, seed):
    g = inst.graph
    arrival = None if inst.temporal is None else inst.temporal.arrival
    rng = named_rng(seed, "adapter")
    if cfg.adapter == "secretary":
        return adapter_secretary(g, inst.adversarial_w, rng)
    if cfg.adapter == "prophet":
        return adapter_prophet(g, inst.laws, cfg.policy, rng, arrival)
    if cfg.adapter == "period":
        p_prev = np.broadcast_to(np.asarray(cfg.period["p_prev"], dtype=float), (g.n,))
        p_cur = np.broadcast_to(np.asarray(cfg.period["p_cur"], dtype=float), (g.n,))
        return adapter_period(g, inst.adversarial_w, p_prev, p_cur, cfg.c, rng, cfg.policy, arrival)
    laws = [NodeLaw(law, None, cfg.coupling) for law in inst.laws]
    real = realize(laws, cfg.c, rng)
    return real, make_stream(real, cfg.policy, named_rng(seed, "stream"), arrival)


def _opt(cfg: RunConfig, inst: Instance, w: np.ndarray) -> tuple[float, bool]:
    """Offline optimum for weights ``w``; second item flags an upper bound."""
    if cfg.oracle == "none":
        return float("nan"), False
    nodes = np.flatnonzero(w > 0)
    if cfg.oracle == "interval-dp":
        sub = GeometricInstance(INTERVAL, inst.geo.items[nodes])
        return interval_mwis_exact(sub, w[nodes])[0], False
    g = inst.graph
    if cfg.algorithm == "split":
        t = inst.temporal
        a, d = t.arrival, t.departure
        overlap = np.maximum.outer(a, a) <= np.minimum.outer(d, d)
        adj = g.adjacency & overlap
        np.fill_diagonal(adj, False)
        g = binary_graph(g.n, zip(*np.nonzero(np.triu(adj, 1))), g.order, g.rho)
    if cfg.oracle == "greedy-bound":
        return float(g.rho * len(greedy_mis(g, nodes))), True
    if len(nodes) > cfg.oracle_max_n:
        raise OracleTooSlow(f"{len(nodes)} nodes exceed the brute-force cap {cfg.oracle_max_n}")
    return exact_mwis_small(g, w, cfg.oracle_max_n, nodes)[0], False


def run_trial(cfg: RunConfig, index: int) -> dict:
    """One independent trial; returns a flat record."""
    seed = (cfg.seed, index)
    inst = _instance_for(cfg, seed)
    g = inst.graph
    real, stream = _realize(cfg, inst, seed)
    alg_seed = child_seed(seed, "alg")
    v_in, v_s = set(real.input_nodes), set(real.sample_nodes)
    viol: dict[str, bool] = {}
    rec: dict[str, Any] = {"feasible": np.nan, "m2_overload": np.nan, "m4_given_m2": np.nan, "q": np.nan}

    if cfg.algorithm == "split":
        stats: dict = {}
        params = None
        if cfg.split_delta is not None:
            params = SplitParams.for_sample(real.c, len(v_s), 4 * real.c**3 * g.rho**2, delta=cfg.split_delta)
        out = split_temporal(inst.temporal, real, stream, params, "alg1" if cfg.weights.get("kind") == "unit" else "alg2", alg_seed, stats)
        viol["temporal_conflict"] = not temporal_conflict_free(inst.temporal, out)
        viol["output_outside_input"] = not out <= v_in
        rec.update(alg=float(sum(real.w_input[v] for v in out)), m1=np.nan, m2=np.nan, m3=np.nan, m4=float(len(out)), conflicts=np.nan)
    else:
        if cfg.algorithm == "alg1":
            tr = alg1_unweighted(g, real, stream, cfg.q, alg_seed)
        elif cfg.algorithm == "alg2":
            tr = alg2_weighted(g, real, stream, alg_seed, cfg.q)
        else:
            tr = alg4_edgeweighted(g, real, stream, cfg.q, alg_seed)
        m1, m2, m3, m4 = map(set, (tr.m1, tr.m2, tr.m3, tr.m4))
        viol["nesting"] = not (m4 <= m3 <= m2 <= v_in and m1 <= v_s)
        if g.is_binary:
            viol["m4_not_independent"] = not is_independent(g, m4)
        if cfg.algorithm == "alg1":
            viol["m1_not_greedy"] = list(tr.m1) != greedy_mis(g, real.sample_nodes)
            adj, rank = g.adjacency, g.rank
            passed = [v for v in stream if not any(adj[u, v] and rank[u] < rank[v] for u in tr.m1)]
            viol["m2_prefix_rule"] = passed != list(tr.m2)
        if cfg.algorithm == "alg2" and tr.threshold_record is not None:
            p = tr.threshold_record["p"]
            viol["below_threshold"] = any(real.w_input[v] < p for v in tr.m4)
        if cfg.algorithm == "alg4":
            rec["feasible"] = float(tr.feasible)
            rec["m2_overload"] = float(tr.extra["m2_max_load"] > tau(max(g.n, 2), real.c, g.rho))
            rec["m4_given_m2"] = tr.extra["m4_given_m2"]
        rec.update(alg=tr.value, m1=len(m1), m2=len(m2), m3=len(m3), m4=len(m4), conflicts=tr.conflict_count, q=tr.q_used)

    opt_in, ub_in = _opt(cfg, inst, np.asarray(real.w_input))
    opt_s, ub_s = _opt(cfg, inst, np.asarray(real.w_sample))
    rec.update(opt_input=opt_in, opt_sample=opt_s, opt_upper_bound=ub_in or ub_s, violations=viol)
    return rec


def _run_chunk(args) -> list[dict]:
    cfg_json, lo, hi = args
    cfg = RunConfig.from_json(cfg_json)
    return [run_trial(cfg, i) for i in range(lo, hi)]


# --------------------------------------------------------------------------
# aggregation


@dataclass
class TrialStats:
    config: dict
    trials: int
    mean: dict
    var: dict
    ci: dict
    violations: dict
    ratio: float
    ratio_ci: float
    ratio_flag: str = ""
    mean_trial_ratio: float = float("nan")
    tag: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "TrialStats":
        return cls(**d)


def ci_half_width(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    x = x[~np.isnan(x)]
    if len(x) < MIN_TRIALS_FOR_CI:
        return float("nan")
    return float(Z95 * x.std(ddof=1) / math.sqrt(len(x)))


def ratio_of_means(num: np.ndarray, den: np.ndarray) -> tuple[float, float]:
    """``mean(num)/mean(den)`` and its delta-method 95% half-width."""
    mn, md = float(np.mean(num)), float(np.mean(den))
    if md == 0 or math.isnan(md) or math.isnan(mn):
        return float("nan"), float("nan")
    r = mn / md
    if len(num) < MIN_TRIALS_FOR_CI:
        return r, float("nan")
    cov = np.cov(num, den, ddof=1)
    var = (cov[0, 0] - 2 * r * cov[0, 1] + r * r * cov[1, 1]) / (md * md * len(num))
    return r, float(Z95 * math.sqrt(max(var, 0.0)))


def aggregate(cfg: RunConfig, records: list[dict]) -> TrialStats:
    cols = {m: np.array([r[m] for r in records], dtype=float) for m in METRICS}
    mean, var, ci = {}, {}, {}
    for m, x in cols.items():
        finite = x[~np.isnan(x)]
        mean[m] = float(finite.mean()) if finite.size else float("nan")
        var[m] = float(finite.var(ddof=1)) if finite.size > 1 else float("nan")
        ci[m] = ci_half_width(x)
    names = sorted({k for r in records for k in r["violations"]})
    violations = {k: int(sum(bool(r["violations"].get(k, False)) for r in records)) for k in names}
    ratio, ratio_ci = ratio_of_means(cols["opt_input"], cols["alg"])
    flag = ""
    if math.isnan(ratio):
        flag = "undefined"
    elif any(r["opt_upper_bound"] for r in records):
        flag = "upper-bound"
    with np.errstate(divide="ignore", invalid="ignore"):
        per = cols["opt_input"] / cols["alg"]
    per = per[np.isfinite(per)]
    q = np.array([r["q"] for r in records], dtype=float)
    extra = {"mean_q": float(np.nanmean(q)) if np.isfinite(q).any() else float("nan")}
    return TrialStats(
        cfg.to_json(),
        len(records),
        mean,
        var,
        ci,
        violations,
        ratio,
        ratio_ci,
        flag,
        float(per.mean()) if per.size else float("nan"),
        cfg.tag,
        extra,
    )


def run_trials(cfg: RunConfig) -> list[dict]:
    """Raw per-trial records in trial-index order."""
    cfg.validate()
    if cfg.workers == 1:
        return [run_trial(cfg, i) for i in range(cfg.trials)]
    bounds = np.linspace(0, cfg.trials, cfg.workers * 4 + 1).astype(int)
    chunks = [(cfg.to_json(), int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return [rec for part in pool.map(_run_chunk, chunks) for rec in part]


def run_experiment(cfg: RunConfig) -> TrialStats:
    return aggregate(cfg, run_trials(cfg))


# --------------------------------------------------------------------------
# invariant suite


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    bound: float
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: measured={self.measured:.6g} bound={self.bound:.6g} {self.detail}".rstrip()


def _paired_lower(x: np.ndarray) -> tuple[float, float]:
    """Mean of ``x`` and its CI half-width (0 below the CI threshold)."""
    ci = ci_half_width(x)
    return float(np.mean(x)), 0.0 if math.isnan(ci) else ci


def check_hard_invariants(trials: int = 10_000, seed: int = 0, workers: int = 1) -> CheckResult:
    """Zero violations of deterministic invariants over mixed trials."""
    share = max(trials // 5, 1)
    cfgs = [
        RunConfig({"kind": "intervals", "n": 100, "length": [1, 4], "window": 50}, "secretary", "alg1", trials=share, seed=seed, oracle="none"),
        RunConfig({"kind": "disks", "n": 80, "side": 10, "radius": [0.3, 0.8]}, "prophet", "alg1", policy="random-permutation", trials=share, seed=seed, oracle="none", weights={"kind": "bernoulli", "p": 0.5}),
        RunConfig({"kind": "intervals", "n": 80, "length": [1, 6], "window": 60}, "secretary", "alg2", trials=share, seed=seed, oracle="none", weights={"kind": "uniform", "lo": 1, "hi": 100}),
        RunConfig({"kind": "disks", "n": 60, "side": 8}, "secretary", "split", trials=share, seed=seed, oracle="none", policy="by-arrival-time"),
        RunConfig({"kind": "intervals", "n": 60, "length": [1, 5], "window": 40}, "secretary", "split", trials=trials - 4 * share, seed=seed, oracle="none", split_delta=4.0),
    ]
    total, bad, parts = 0, 0, []
    for cfg in cfgs:
        cfg.workers = workers
        st = run_experiment(cfg)
        v = sum(st.violations.values())
        total += st.trials
        bad += v
        parts.append(f"{cfg.algorithm}/{cfg.generator['kind']}:{v}")
    return CheckResult("hard-invariants", bad == 0 and total >= trials, bad, 0, f"trials={total} " + " ".join(parts))


def unweighted_ratio_config(trials: int = 2000, seed: int = 1) -> RunConfig:
    return RunConfig({"kind": "intervals", "n": 100, "length": [1, 4], "window": 50}, "secretary", "alg1", c=1.0, q=0.5, trials=trials, seed=seed, oracle="interval-dp")


def check_unweighted_ratio(records: list[dict], c: float = 1.0, rho: int = 1) -> CheckResult:
    opt = np.array([r["opt_input"] for r in records], float)
    alg = np.array([r["alg"] for r in records], float)
    ratio, ci = ratio_of_means(opt, alg)
    bound = 4 * c**3 * rho**2
    ci = 0.0 if math.isnan(ci) else ci
    return CheckResult("unweighted-ratio", ratio <= bound + ci, ratio, bound, f"ci={ci:.4g}")


def check_m2_envelope(records: list[dict], c: float = 1.0) -> list[CheckResult]:
    m1 = np.array([r["m1"] for r in records], float)
    m2 = np.array([r["m2"] for r in records], float)
    lo, lo_ci = _paired_lower(m2 - m1 / c)
    hi, hi_ci = _paired_lower(c * m1 - m2)
    return [
        CheckResult("m2-envelope-lower", lo >= -lo_ci, m2.mean(), m1.mean() / c, f"ci={lo_ci:.4g}"),
        CheckResult("m2-envelope-upper", hi >= -hi_ci, m2.mean(), c * m1.mean(), f"ci={hi_ci:.4g}"),
    ]


def check_conflict_bound(records: list[dict], q: float, rho: int = 1, c: float = 1.0) -> CheckResult:
    conf = np.array([r["conflicts"] for r in records], float)
    m3 = np.array([r["m3"] for r in records], float)
    slack, ci = _paired_lower(q * rho * c * m3 - conf)
    return CheckResult("conflict-bound", slack >= -ci, conf.mean(), q * rho * c * m3.mean(), f"ci={ci:.4g}")


def sample_opt_config(trials: int = 2000, seed: int = 2) -> RunConfig:
    return RunConfig(
        {"kind": "intervals", "n": 60, "length": [1, 4], "window": 40},
        "raw-sampling",
        "alg1",
        c=2.0,
        trials=trials,
        seed=seed,
        oracle="interval-dp",
        weights={"kind": "uniform", "lo": 1, "hi": 10},
        coupling=COUPLED_THINNING,
    )


def check_sample_opt(records: list[dict], c: float = 2.0) -> CheckResult:
    s = np.array([r["opt_sample"] for r in records], float)
    i = np.array([r["opt_input"] for r in records], float)
    slack, ci = _paired_lower(s - i / c)
    return CheckResult("sample-opt", slack >= -ci, s.mean(), i.mean() / c, f"ci={ci:.4g}")


def sinr_config(trials: int = 5000, seed: int = 3, n: int = 128) -> RunConfig:
    return RunConfig({"kind": "sinr", "n": n, "side": 12.0, "alpha": 3.0, "noise_fraction": 0.5}, "secretary", "alg4", c=1.0, trials=trials, seed=seed, oracle="none")


def check_edge_weighted_feasibility(records: list[dict], n: int) -> CheckResult:
    f = np.array([r["feasible"] for r in records], float)
    rate, ci = _paired_lower(f)
    bound = 1 - 3 / n
    return CheckResult("edge-weighted-feasibility", rate >= bound - ci, rate, bound, f"ci={ci:.4g}")


def check_m2_load(records: list[dict], n: int) -> CheckResult:
    e = np.array([r["m2_overload"] for r in records], float)
    rate, ci = _paired_lower(e)
    return CheckResult("m2-load", rate <= 1 / n + ci, rate, 1 / n, f"ci={ci:.4g}")


def edge_weighted_size_config(trials: int = 3000, seed: int = 4, n: int = 24) -> RunConfig:
    return RunConfig(
        {"kind": "sinr", "n": n, "side": 5.0, "alpha": 3.0, "noise_fraction": 0.5, "rho_subsample": n, "rho_samples": 1},
        "secretary",
        "alg4",
        c=1.0,
        trials=trials,
        seed=seed,
        oracle="brute-force",
    )


def check_edge_weighted_size(records: list[dict], rho: int) -> CheckResult:
    """E|M4| is estimated by the per-trial conditional mean E[|M4| given M2];
    at the default q the raw count is almost always 0 and its normal CI is
    meaningless."""
    m4 = np.array([r["m4_given_m2"] for r in records], float)
    q = np.array([r["q"] for r in records], float)
    opt_s = np.array([r["opt_sample"] for r in records], float)
    target = q / (4 * rho) * opt_s
    slack, ci = _paired_lower(m4 - target)
    raw = np.mean([r["m4"] for r in records])
    return CheckResult("edge-weighted-size", slack >= -ci, m4.mean(), target.mean(), f"ci={ci:.4g} raw_mean_m4={raw:.4g}")


def invariant_suite(cfg: dict | None = None) -> list[CheckResult]:
    """Run every registered empirical check.

    ``cfg`` may override ``trials_scale`` (fraction of the default trial
    counts), ``seed`` and ``workers``.
    """
    cfg = cfg or {}
    scale = float(cfg.get("trials_scale", 1.0))
    seed = int(cfg.get("seed", 0))
    workers = int(cfg.get("workers", 1))

    def sized(n: int) -> int:
        return max(int(n * scale), 1)

    out = [check_hard_invariants(sized(10_000), seed, workers)]

    t1 = unweighted_ratio_config(sized(2000), seed + 1)
    t1.workers = workers
    rec = run_trials(t1)
    out.append(check_unweighted_ratio(rec))
    out.extend(check_m2_envelope(rec))
    out.append(check_conflict_bound(rec, q=0.5))

    l2 = sample_opt_config(sized(2000), seed + 2)
    l2.workers = workers
    out.append(check_sample_opt(run_trials(l2)))

    s5 = sinr_config(sized(5000), seed + 3)
    s5.workers = workers
    rec = run_trials(s5)
    out.append(check_edge_weighted_feasibility(rec, 128))
    out.append(check_m2_load(rec, 128))

    t6 = edge_weighted_size_config(sized(3000), seed + 4)
    t6.workers = workers
    rho = _instance_for(t6, (t6.seed, 0)).graph.rho
    out.append(check_edge_weighted_size(run_trials(t6), rho))
    return out


# --------------------------------------------------------------------------
# export

LOWERBOUND_FIELDS = ("d", "h", "path_coverage", "analytic_coverage", "analytic_uncovered", "opt_uncovered")
CSV_COLUMNS = (
    ["tag", "generator", "n", "adapter", "algorithm", "c", "rho", "q", "policy", "oracle", "trials", "seed"]
    + [f"{s}_{m}" for m in METRICS for s in ("mean", "var", "ci")]
    + ["ratio", "ratio_ci", "ratio_flag", "mean_trial_ratio", "violations"]
    + list(LOWERBOUND_FIELDS)
)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "" if math.isnan(x) else repr(x)
    return str(x)


def stats_row(st: TrialStats) -> dict:
    cfg = st.config
    gen = cfg.get("generator", {})
    row = {k: "" for k in CSV_COLUMNS}
    row.update(
        tag=st.tag,
        generator=gen.get("kind", ""),
        n=gen.get("n", ""),
        adapter=cfg.get("adapter", ""),
        algorithm=cfg.get("algorithm", ""),
        c=cfg.get("c", ""),
        rho=cfg.get("rho"),
        q=cfg.get("q"),
        policy=cfg.get("policy", ""),
        oracle=cfg.get("oracle", ""),
        trials=st.trials,
        seed=cfg.get("seed", ""),
        ratio=st.ratio,
        ratio_ci=st.ratio_ci,
        ratio_flag=st.ratio_flag,
        mean_trial_ratio=st.mean_trial_ratio,
        violations=sum(st.violations.values()),
    )
    for m in METRICS:
        row[f"mean_{m}"] = st.mean.get(m)
        row[f"var_{m}"] = st.var.get(m)
        row[f"ci_{m}"] = st.ci.get(m)
    for k in LOWERBOUND_FIELDS:
        if k in st.extra:
            row[k] = st.extra[k]
    return {k: _fmt(v) for k, v in row.items()}


def lowerbound_stats(rows: list[dict], seed: int = 0) -> list[TrialStats]:
    """Wrap :func:`lowerbound_experiment` rows so they share the CSV schema."""
    out = []
    for r in rows:
        cfg = {"generator": {"kind": "lowerbound-tree", "n": r["n"]}, "algorithm": "highstakes", "oracle": "greedy-tree", "seed": seed}
        out.append(
            TrialStats(
                cfg,
                r["trials"],
                {"alg": r["mean_alg"], "opt_input": r["mean_opt"]},
                {},
                {},
                {},
                r["ratio"],
                float("nan"),
                tag="lowerbound",
                extra={k: r[k] for k in LOWERBOUND_FIELDS},
            )
        )
    return out


def to_csv(stats: list[TrialStats], header: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    if header:
        writer.writeheader()
    for st in stats:
        writer.writerow(stats_row(st))
    return buf.getvalue()


def export(stats: list[TrialStats], fmt: str, path: str | os.PathLike, append: bool = False, tag: str | None = None) -> None:
    """Write stats as CSV (header once, optional append) or JSON."""
    if tag is not None:
        for st in stats:
            st.tag = tag
    if fmt == "csv":
        exists = os.path.exists(path) and os.path.getsize(path) > 0
        with open(path, "a" if append else "w", newline="") as fh:
            fh.write(to_csv(stats, header=not (append and exists)))
    elif fmt == "json":
        data = [st.to_json() for st in stats]
        if append and os.path.exists(path):
            with open(path) as fh:
                data = json.load(fh) + data
        with open(path, "w") as fh:
            json.dump(data, fh, indent=1, allow_nan=True)
    else:
        raise ValueError(f"unknown export format {fmt!r}")


def load_json(path: str | os.PathLike) -> list[TrialStats]:
    with open(path) as fh:
        return [TrialStats.from_json(d) for d in json.load(fh)]
