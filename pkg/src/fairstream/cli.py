"""Command line entry point.

    fairstream run --alg greedy,mp-fsm,sp-fsm --gen ba:20000 --groups zipf:10:2 \
        --k 50,100 --policy pr --order natural --reference --out runs.csv
    fairstream gen --model ba --n 20000 --groups zipf:10:2 --seed 1 --out data/syn

``--data DIR`` reads ``edges.txt`` + ``groups.txt`` (coverage) or
``features.txt`` [+ ``groups.txt``] (recommendation). Exit status: 0 on
success, 2 when every grid cell was infeasible, 1 on errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import data_io
from .bench import ALGORITHMS, Dataset, ExperimentConfig, emit_csv, run_experiment
from .errors import FairStreamError
from .oracles import CoverageOracle, RecommendationOracle

log = logging.getLogger("fairstream")


def _int_list(text):
    return [int(t) for t in text.split(",") if t.strip()]


def _parse_groups(text):
    kind, *rest = text.split(":")
    if kind != "zipf" or len(rest) != 2:
        raise argparse.ArgumentTypeError("expected zipf:<l>:<s>")
    return int(rest[0]), float(rest[1])


def _seed(args):
    env = os.environ.get("FAIRSTREAM_SEED")
    return int(env) if env not in (None, "") else args.seed


def load_dataset(args, seed) -> Dataset:
    if args.data:
        root = Path(args.data)
        groups = root / "groups.txt"
        if (root / "edges.txt").exists():
            inst = data_io.load_coverage_instance(root / "edges.txt", groups)
            return Dataset(root.name, CoverageOracle(inst.ground), inst.groups)
        if (root / "features.txt").exists():
            inst = data_io.load_rec_instance(root / "features.txt", groups if groups.exists() else None, args.lam)
            return Dataset(root.name, RecommendationOracle(inst.ground), inst.groups)
        raise FairStreamError(f"{root} holds neither edges.txt nor features.txt")
    model, _, n = args.gen.partition(":")
    if model != "ba" or not n:
        raise FairStreamError("--gen expects ba:<n>")
    l, s = args.groups
    inst = data_io.synthetic_instance(int(n), l, s, seed)
    return Dataset(f"ba-{n}-zipf{l}-{s:g}-seed{seed}", CoverageOracle(inst.ground), inst.groups)


def cmd_run(args) -> int:
    seed = _seed(args)
    algs = args.alg.split(",")
    for a in algs:
        if a not in ALGORITHMS:
            raise FairStreamError(f"unknown algorithm {a!r}")
    ds = load_dataset(args, seed)
    cfg = ExperimentConfig(
        dataset=ds, algorithms=algs, ks=args.k, policies=[args.policy], orders=[args.order],
        epsilon=args.epsilon, alpha=args.alpha, beta=args.beta, buffer=args.buffer,
        reference=args.reference, subsample=args.subsample, seed=seed,
    )
    records = run_experiment(cfg, progress=lambda r: log.info(
        "%s k=%d %s %s: %s utility=%s calls=%s", r.algorithm, r.k, r.policy, r.order,
        r.status, r.utility, r.oracle_calls))
    emit_csv(records, args.out)
    if records and all(r.status == "infeasible" for r in records):
        return 2
    return 0


def cmd_gen(args) -> int:
    if args.model != "ba":
        raise FairStreamError(f"unknown model {args.model!r}")
    seed = _seed(args)
    l, s = args.groups
    inst = data_io.synthetic_instance(args.n, l, s, seed)
    data_io.save_coverage_instance(inst, args.out)
    log.info("wrote %d nodes, %d undirected edges to %s", inst.n, inst.ground.m // 2, args.out)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="fairstream")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an experiment grid and write CSV")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="directory with edges.txt/features.txt and groups.txt")
    src.add_argument("--gen", help="synthetic instance, ba:<n>")
    r.add_argument("--groups", type=_parse_groups, default=(10, 2.0), help="zipf:<l>:<s> (with --gen)")
    r.add_argument("--alg", default="greedy,mp-fsm,sp-fsm")
    r.add_argument("--k", type=_int_list, required=True)
    r.add_argument("--policy", default="pr", help="pr | er | explicit:<k1,k2,...>")
    r.add_argument("--order", default="natural", help="natural | shuffle:<seed> | adversarial")
    r.add_argument("--epsilon", type=float, default=0.2)
    r.add_argument("--alpha", type=float, default=0.5)
    r.add_argument("--beta", type=float, default=0.5)
    r.add_argument("--buffer", default="inf", help="inf | 2k | <int>")
    r.add_argument("--subsample", type=float, default=1.0, help="exchange baseline only")
    r.add_argument("--lam", type=float, default=0.75, help="recommendation mixing weight")
    r.add_argument("--reference", action="store_true", help="add unconstrained greedy rows")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_run)

    g = sub.add_parser("gen", help="generate a synthetic coverage instance")
    g.add_argument("--model", default="ba")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--groups", type=_parse_groups, default=(10, 2.0))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (FairStreamError, OSError, ValueError) as exc:
        print(f"fairstream: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
