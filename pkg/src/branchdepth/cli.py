"""Command-line front end.

Exit status: 0 on success, 1 when a checked property fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from .decomposition import Trace, decompose, validate
from .encodings import binary_encode, graph_interpret, rank3_encode
from .errors import AlgorithmError, BranchDepthError, GuardExceeded
from .exact import branch_depth_exact
from .fileformats import (
    decomposition_dot,
    format_decomposition,
    format_forest,
    format_graph,
    format_matroid,
    parse_graph,
    parse_matroid,
)
from .forest import forest_of, roundtrip_check
from .logic import convergence_report, parse, stone_pairing_exact, stone_pairing_mc
from .matroid import (
    CIRCUIT_ENUMERATION_LIMIT,
    LinearMatroid,
    enumerate_circuit_masks,
    fundamental_circuit_mask,
    greedy_base_mask,
    popcount,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class _InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _InputError(f"cannot write {path}: {exc.strerror}") from None


def _report(args, pairs):
    if getattr(args, "json", False):
        print(json.dumps({k: v if isinstance(v, (int, float)) else str(v) for k, v in pairs}))
        return
    for k, v in pairs:
        print(f"{k}: {v}")


def largest_circuit(M) -> tuple[int, bool]:
    """Length of the longest circuit, exactly when the ground set is small.

    Larger inputs report the longest fundamental circuit of a greedy base,
    a lower bound; the flag says which one was returned.
    """
    if M.n <= CIRCUIT_ENUMERATION_LIMIT:
        return max((popcount(c) for c in enumerate_circuit_masks(M)), default=0), True
    B = greedy_base_mask(M)
    best = 0
    for e in range(M.n):
        if not B >> e & 1:
            best = max(best, popcount(fundamental_circuit_mask(M, B, e)))
    return best, False


def cmd_decompose(args) -> int:
    M = parse_matroid(_read(args.input))
    trace = Trace()
    D = decompose(M, trace)
    ell, exact = largest_circuit(M)
    verdict = validate(M, D, mode=args.validate, samples=args.samples, seed=args.seed)
    # without circuits the bound degenerates; a positive rank still needs depth 1
    bound = max(ell * ell, 1) if M.rank() else 0
    _report(args, [
        ("elements", M.n),
        ("rank", M.rank()),
        ("depth", D.depth),
        ("largest_circuit", ell if exact else f">= {ell}"),
        ("bound_l2", bound),
        ("calls", trace.calls),
        ("validation", f"{args.validate} {verdict}"),
    ])
    if args.output:
        _write(args.output, format_decomposition(D))
    if args.dot:
        _write(args.dot, decomposition_dot(D, M))
    return EXIT_OK if verdict.passed else EXIT_VIOLATION


def cmd_branch_depth(args) -> int:
    M = parse_matroid(_read(args.input))
    r = M.rank()
    if r == 0:
        _report(args, [("branch_depth", 0)])
        return EXIT_OK
    if args.exact:
        try:
            bd = branch_depth_exact(M, args.max)
        except GuardExceeded as exc:
            if not args.fallback:
                raise
            print(f"note: {exc}; reporting bounds")
        else:
            _report(args, [("branch_depth", bd if bd is not None else f"> {args.max}")])
            return EXIT_OK
    ell, exact = largest_circuit(M)
    lower = max(1, math.ceil(math.log2(ell))) if ell else 1
    upper = decompose(M).depth
    _report(args, [("lower_bound", lower), ("upper_bound", upper),
             ("largest_circuit", ell if exact else f">= {ell}")])
    return EXIT_OK


def cmd_forest(args) -> int:
    M = parse_matroid(_read(args.input))
    if not isinstance(M, LinearMatroid):
        raise _InputError(
            f"forest needs a linear matroid (vectors over GF(q)); got kind {M.kind!r}")
    D = decompose(M)
    F = forest_of(M, D)
    _write(args.output, format_forest(F))
    if args.roundtrip:
        v = roundtrip_check(M, D, F)
        print(f"roundtrip: {v}", file=sys.stderr if args.output in (None, "-") else sys.stdout)
        return EXIT_OK if v.passed else EXIT_VIOLATION
    return EXIT_OK


def cmd_encode(args) -> int:
    G = parse_graph(_read(args.input))
    M = rank3_encode(G, args.k) if args.mode == "rank3" else binary_encode(G, args.k)
    _write(args.output, format_matroid(M))
    return EXIT_OK


def cmd_interpret(args) -> int:
    M = parse_matroid(_read(args.input))
    _write(args.output, format_graph(graph_interpret(M, strict=args.strict)))
    return EXIT_OK


def cmd_stone(args) -> int:
    phi = parse(args.formula)
    matroids = [parse_matroid(_read(p)) for p in args.inputs]
    if len(matroids) > 1:
        table = convergence_report(matroids, [phi], names=args.inputs,
                                   samples=args.mc, seed=args.seed)
        print(table.render())
        return EXIT_OK
    M = matroids[0]
    if args.mc is not None:
        v = stone_pairing_mc(M, phi, args.mc, args.seed)
        _report(args, [("formula", phi), ("estimate", f"{v.value:.6f}"), ("stderr", f"{v.stderr:.6f}"),
                 ("samples", v.samples), ("seed", v.seed)])
    else:
        v = stone_pairing_exact(M, phi)
        _report(args, [("formula", phi), ("exact", v.value), ("decimal", f"{float(v.value):.6f}")])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="branchdepth",
                                 description="Depth-decompositions and encodings of finite matroids.")
    ap.add_argument("--json", action="store_true", help="print reports as one JSON object")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="build and validate a depth-decomposition")
    p.add_argument("input")
    p.add_argument("--validate", choices=["exhaustive", "independent", "sampled"], default="independent")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dot", metavar="OUT", help="write the tree in DOT format")
    p.add_argument("-o", "--output", help="write the decomposition text")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("branch-depth", help="exact branch-depth or bounds")
    p.add_argument("input")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--max", type=int, default=None, metavar="D")
    p.add_argument("--fallback", action="store_true", help="report bounds when the exact search is too large")
    p.set_defaults(func=cmd_branch_depth)

    p = sub.add_parser("forest", help="colored-forest representation of a linear matroid")
    p.add_argument("input")
    p.add_argument("--roundtrip", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_forest)

    p = sub.add_parser("encode", help="encode a graph as a matroid")
    p.add_argument("input")
    p.add_argument("--mode", choices=["rank3", "binary"], default="rank3")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("interpret", help="read a graph back from an encoded matroid")
    p.add_argument("input")
    p.add_argument("--strict", action="store_true", help="recheck the edge relation on every representative")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_interpret)

    p = sub.add_parser("stone", help="Stone pairing of a formula with one or more matroids")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--formula", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="enumerate all tuples (default)")
    mode.add_argument("--mc", type=int, metavar="N", help="Monte Carlo with N samples")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_stone)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except AlgorithmError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (_InputError, BranchDepthError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
