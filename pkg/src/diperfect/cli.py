"""Command-line entry point.

Exit codes: 0 success or verdict true, 1 verdict false (witness on stdout),
2 usage or precondition error, 3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .alis import decompose, layer_structure
from .builder import DEFAULT_ORACLE_THRESHOLD, build
from .detectors import (
    find_anti_directed_odd_cycle,
    find_blocking_odd_cycle,
    find_clique_cut,
    find_non_oriented_odd_cycle,
)
from .errors import InvariantBreach, PreconditionError
from .formats import dumps, format_partition, parse_partition, parse_vertex_list, read_digraph
from .partitions import is_diperfect_property, satisfies_property, validate
from .sweep import MODES, SweepConfig, sweep

OK, FALSE, USAGE, BREACH = 0, 1, 2, 3


def _shard(text: str):
    try:
        i, k = text.split("/")
        return int(i), int(k)
    except ValueError:
        raise argparse.ArgumentTypeError("shard must look like i/k") from None


def cmd_check(args) -> int:
    d = read_digraph(args.file)
    if args.diperfect:
        res = is_diperfect_property(d, args.mode)
        if res.holds:
            print(f"{args.mode}-diperfect: yes")
            return OK
        print(dumps({"diperfect": False, "subset": sorted(res.failing_subset),
                     "stable": sorted(res.failing_stable_set)}))
        return FALSE
    res = satisfies_property(d, args.mode)
    if res.holds:
        print(f"{args.mode}-property: yes")
        return OK
    print(dumps({"property": False, "stable": sorted(res.failing_stable_set)}))
    return FALSE


_DETECTORS = {
    "blocking": find_blocking_odd_cycle,
    "anti": find_anti_directed_odd_cycle,
    "nonoriented": find_non_oriented_odd_cycle,
}


def cmd_detect(args) -> int:
    d = read_digraph(args.file)
    kinds = [args.structure] if args.structure else ["blocking", "anti", "nonoriented", "cliquecut"]
    found = {}
    for kind in kinds:
        if kind == "cliquecut":
            cut = find_clique_cut(d)
            found[kind] = None if cut is None else sorted(cut)
        else:
            w = _DETECTORS[kind](d)
            found[kind] = None if w is None else w.to_json()
    print(dumps(found))
    if args.structure:
        return OK if found[args.structure] is not None else FALSE
    return OK


def cmd_decompose(args) -> int:
    d = read_digraph(args.file)
    dec = decompose(d)
    print(dumps({"decomposition": dec.to_json(), "layers": layer_structure(d, dec).to_json()}))
    return OK


def cmd_build(args) -> int:
    d = read_digraph(args.file)
    trace = build(d, parse_vertex_list(args.stable), args.mode, args.oracle_threshold)
    sys.stdout.write(format_partition(trace.result))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(trace.to_json(), fh, indent=1, sort_keys=True)
    return OK


def cmd_verify(args) -> int:
    d = read_digraph(args.digraph)
    with open(args.partition, encoding="ascii") as fh:
        paths = parse_partition(fh.read())
    s = parse_vertex_list(args.stable) if args.stable is not None else None
    mode = args.mode or ("plain" if s is None else "alpha")
    res = validate(d, paths, s, mode)
    print("valid" if res else f"invalid: {res.reason}")
    return OK if res else FALSE


def cmd_sweep(args) -> int:
    cfg = SweepConfig(args.n_max, args.mode, args.shard, args.canonical, args.out, args.n_min,
                      args.oracle_threshold, not args.no_halt)
    summary = sweep(cfg, args.workers)
    print(summary.line())
    for rec in summary.counterexamples:
        print(dumps(rec))
    return OK if not summary.counterexamples else FALSE


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diperfect", description="Path partitions orthogonal to stable sets.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="alpha- or BE-property of a digraph")
    c.add_argument("file")
    c.add_argument("--mode", choices=["alpha", "be"], default="alpha")
    c.add_argument("--diperfect", action="store_true", help="check every induced subdigraph")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("detect", help="forbidden induced structures")
    c.add_argument("file")
    c.add_argument("--structure", choices=["blocking", "anti", "cliquecut", "nonoriented"])
    c.set_defaults(func=cmd_detect)

    c = sub.add_parser("decompose", help="decomposition of a non-diperfect ALIS digraph")
    c.add_argument("file")
    c.set_defaults(func=cmd_decompose)

    c = sub.add_parser("build", help="construct a partition for an ALIS or ALOS digraph")
    c.add_argument("file")
    c.add_argument("--stable", required=True, help="maximum stable set, e.g. 0,2,5")
    c.add_argument("--mode", choices=["alpha", "be"], required=True)
    c.add_argument("--trace", help="write the build trace as JSON")
    c.add_argument("--oracle-threshold", type=int, default=DEFAULT_ORACLE_THRESHOLD)
    c.set_defaults(func=cmd_build)

    c = sub.add_parser("verify", help="validate a path partition")
    c.add_argument("digraph")
    c.add_argument("partition")
    c.add_argument("--stable")
    c.add_argument("--mode", choices=["plain", "alpha", "be"])
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("sweep", help="exhaustive sweeps")
    c.add_argument("--mode", choices=MODES, required=True)
    c.add_argument("--n-max", type=int, required=True)
    c.add_argument("--n-min", type=int)
    c.add_argument("--shard", type=_shard, default=(0, 1))
    c.add_argument("--out")
    c.add_argument("--canonical", action="store_true",
                   help="isomorphism classes (ALIS modes: grown by vertex extension)")
    c.add_argument("--workers", type=int, help="worker processes (default: $DIPERFECT_WORKERS or 1)")
    c.add_argument("--oracle-threshold", type=int, default=DEFAULT_ORACLE_THRESHOLD)
    c.add_argument("--no-halt", action="store_true", help="keep going after a counterexample")
    c.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InvariantBreach as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return BREACH
    except (PreconditionError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
