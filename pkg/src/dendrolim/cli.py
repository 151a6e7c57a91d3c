"""Command-line entry point ``dendrolim``.

Exit status is 0 on success, 2 on invalid input and 3 when a numerical
construction fails (for example a matrix that no tree realizes).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, convergence, dendron, discretize, families, io, real_tree, reconstruct, tree_core
from .errors import NumericalError, ValidationError
from .sampling import DEFAULT_CAP


def _sample(args):
    obj = io.load_structure(args.input)
    kw = dict(shards=args.threads, threads=args.threads)
    if isinstance(obj, tree_core.FiniteTree):
        m = tree_core.tau_sample(obj, args.r, args.num_samples, args.seed, **kw)
    elif isinstance(obj, real_tree.MeasuredRealTree):
        m = real_tree.tau_sample(obj, args.r, args.num_samples, args.seed, **kw)
    else:
        m = dendron.tau_sample(obj, args.r, args.num_samples, args.seed, **kw)
    m.to_csv(args.out)


def _exact(args):
    obj = io.load_structure(args.input)
    if isinstance(obj, tree_core.FiniteTree):
        m = tree_core.tau_exact(obj, args.r, args.cap)
    elif isinstance(obj, real_tree.MeasuredRealTree):
        m = real_tree.tau_exact(obj, args.r, args.cap)
    else:
        m = dendron.tau_exact_atomic(obj, args.r, args.cap)
    m.to_csv(args.out)


def _compare(args):
    a, b = io.read_measure(args.a), io.read_measure(args.b)
    io.write_json(convergence.compare_report(a, b), args.out)


def _reconstruct(args):
    io.write_json(reconstruct.build_a_tree(io.read_matrix(args.matrix)).to_json(), args.out)


def _core(args):
    m = io.load_measured_tree(args.input)
    io.write_json(real_tree.associated_dendron(m).dendron.to_json(), args.out)


def _discretize(args):
    m = io.load_measured_tree(args.input)
    result = discretize.realize(m, args.n)
    io.write_json(result.tree.to_json(), args.out)
    report = args.report or str(Path(args.out).with_suffix("")) + ".report.json"
    io.write_json(result.report(), report)


def _example(args):
    if args.limit:
        obj = families.limit_of(args.name, args.depth)
    else:
        if args.n is None:
            raise ValidationError("--n is required unless --limit is given")
        obj = families.GENERATORS[args.name](args.n)
    io.write_json(obj.to_json(), args.out)


def _tdx(args):
    d = dendron.check_dendron(io.load_dendron(args.dendron))
    x = dendron.sample_n(d, args.n, np.random.default_rng(args.seed))
    io.write_json(reconstruct.t_d_x(d, x).to_json(), args.out)
    if args.sample_out:
        io.write_json(io.nsample_to_json(x), args.sample_out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dendrolim", description="Sampling measures of trees and dendrons.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="Monte-Carlo sampling measure of a tree or dendron")
    s.add_argument("--input", required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--num-samples", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--threads", type=int, default=1, help="shard count and worker threads")
    s.add_argument("--out", required=True)
    s.set_defaults(func=_sample)

    s = sub.add_parser("exact", help="exact sampling measure by enumeration")
    s.add_argument("--input", required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_exact)

    s = sub.add_parser("compare", help="energy distance between two measure CSVs")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_compare)

    s = sub.add_parser("reconstruct", help="tree realizing a distance matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_reconstruct)

    s = sub.add_parser("core", help="associated dendron of a measured real tree")
    s.add_argument("--input", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_core)

    s = sub.add_parser("discretize", help="graph tree at scale n for a measured real tree")
    s.add_argument("--input", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--report", help="report path (default: <out>.report.json)")
    s.set_defaults(func=_discretize)

    s = sub.add_parser("example", help="example family member or limit dendron")
    s.add_argument("name", choices=sorted(families.GENERATORS))
    s.add_argument("--n", type=int)
    s.add_argument("--depth", type=int, default=4, help="truncation depth for infinite limits")
    s.add_argument("--limit", action="store_true")
    s.add_argument("--out", required=True)
    s.set_defaults(func=_example)

    s = sub.add_parser("tdx", help="sample n marked points and build their sample tree")
    s.add_argument("--dendron", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--sample-out", help="also write the n-sample as JSON")
    s.set_defaults(func=_tdx)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except NumericalError as exc:
        print(f"dendrolim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, OSError) as exc:
        print(f"dendrolim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
