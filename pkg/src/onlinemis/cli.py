"""Command line entry point: ``onlinemis {gen,run,invariants,lowerbound,report}``."""
from __future__ import annotations

import argparse
import json
import sys

from .errors import OnlineMISError
from .generators import gen_disks, gen_intervals, gen_lowerbound_tree, gen_sinr_conflicts
from .graph import derive_conflict_graph
from .harness import (
    RunConfig,
    export,
    invariant_suite,
    load_json,
    lowerbound_stats,
    run_experiment,
    to_csv,
)
from .lowerbound import lowerbound_experiment


def _pair(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(",")
    return float(lo), float(hi or lo)


def _cmd_gen(args) -> dict:
    if args.kind == "intervals":
        geo, _ = gen_intervals(args.n, _pair(args.length), args.window, seed=args.seed)
        return {"geometry": geo.to_dict(), "graph": derive_conflict_graph(geo).to_dict()}
    if args.kind == "disks":
        geo, _ = gen_disks(args.n, args.side, _pair(args.radius), seed=args.seed)
        return {"geometry": geo.to_dict(), "graph": derive_conflict_graph(geo).to_dict()}
    if args.kind == "sinr":
        return {"graph": gen_sinr_conflicts(args.n, args.side, args.alpha, args.noise, seed=args.seed).to_dict()}
    t = gen_lowerbound_tree(args.d, args.h)
    return {"tree": {"d": t.d, "h": t.h, "parent": t.parent.tolist(), "weight": t.weight.tolist(), "p": t.p}}


def _config_from_args(args) -> RunConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.from_json(json.load(fh))
    else:
        gen = {"kind": args.generator, "n": args.n}
        if args.generator_args:
            gen.update(json.loads(args.generator_args))
        cfg = RunConfig(
            generator=gen,
            adapter=args.adapter,
            algorithm=args.algorithm,
            c=args.c,
            rho=args.rho,
            q=args.q,
            policy=args.policy,
            trials=args.trials,
            seed=args.seed,
            oracle=args.oracle,
            weights=json.loads(args.weights),
            coupling=args.coupling,
            split_delta=args.split_delta,
            tag=args.tag,
        )
    if args.workers is not None:
        cfg.workers = args.workers
    return cfg.validate()


def _write(stats, args) -> None:
    if args.out:
        export(stats, args.format, args.out, append=args.append)
    elif args.format == "csv":
        sys.stdout.write(to_csv(stats))
    else:
        json.dump([s.to_json() for s in stats], sys.stdout, indent=1)
        sys.stdout.write("\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="onlinemis", description="Online independent sets in the graph sampling model.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit an instance as JSON")
    g.add_argument("kind", choices=["intervals", "disks", "sinr", "tree"])
    g.add_argument("--n", type=int, default=20)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--length", default="1,1", help="min,max interval length")
    g.add_argument("--window", type=float, default=100.0)
    g.add_argument("--side", type=float, default=10.0)
    g.add_argument("--radius", default="0.5,0.5", help="min,max disk radius")
    g.add_argument("--alpha", type=float, default=3.0)
    g.add_argument("--noise", type=float, default=0.5)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--h", type=int, default=3)
    g.add_argument("--out")

    def output_opts(p):
        p.add_argument("--out", help="write to this file instead of stdout")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--append", action="store_true")

    r = sub.add_parser("run", help="run one experiment")
    r.add_argument("--config", help="JSON file mirroring RunConfig")
    r.add_argument("--generator", default="intervals", choices=["intervals", "disks", "sinr"])
    r.add_argument("--n", type=int, default=50)
    r.add_argument("--generator-args", help='extra generator fields as JSON, e.g. \'{"window": 40}\'')
    r.add_argument("--adapter", default="secretary")
    r.add_argument("--algorithm", default="alg1")
    r.add_argument("--c", type=float, default=1.0)
    r.add_argument("--rho", type=int)
    r.add_argument("--q", type=float)
    r.add_argument("--policy", default="as-indexed")
    r.add_argument("--trials", type=int, default=200)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--oracle", default="interval-dp")
    r.add_argument("--weights", default='{"kind": "unit"}')
    r.add_argument("--coupling", default="independent")
    r.add_argument("--split-delta", type=float)
    r.add_argument("--tag", default="")
    r.add_argument("--workers", type=int)
    output_opts(r)

    i = sub.add_parser("invariants", help="run the empirical invariant suite")
    i.add_argument("--scale", type=float, default=1.0, help="fraction of the default trial counts")
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--workers", type=int, default=1)

    lb = sub.add_parser("lowerbound", help="HighStakes versus offline greedy on nested-interval trees")
    lb.add_argument("--pairs", default="2:2,2:3,2:4", help="comma separated d:h pairs")
    lb.add_argument("--trials", type=int, default=100_000)
    lb.add_argument("--seed", type=int, default=0)
    output_opts(lb)

    rep = sub.add_parser("report", help="convert saved JSON stats to CSV")
    rep.add_argument("inputs", nargs="+")
    output_opts(rep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            text = json.dumps(_cmd_gen(args))
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text + "\n")
            else:
                print(text)
        elif args.command == "run":
            _write([run_experiment(_config_from_args(args))], args)
        elif args.command == "invariants":
            results = invariant_suite({"trials_scale": args.scale, "seed": args.seed, "workers": args.workers})
            for res in results:
                print(res.line())
            return 0 if all(r.passed for r in results) else 1
        elif args.command == "lowerbound":
            pairs = [tuple(int(x) for x in p.split(":")) for p in args.pairs.split(",")]
            _write(lowerbound_stats(lowerbound_experiment(pairs, args.trials, args.seed), args.seed), args)
        else:
            stats = [st for path in args.inputs for st in load_json(path)]
            _write(stats, args)
    except (OnlineMISError, OSError, json.JSONDecodeError) as exc:
        print(f"onlinemis: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
