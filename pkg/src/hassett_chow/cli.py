"""Command-line front end.

Exit codes: 0 success, 1 failed checks, 2 usage or parse errors, 3 size guard.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .errors import HassettError
from .oracles import point_count_polynomial
from .presentation import chow_groups, presentation_to_json, verify_presentation
from .relations import all_relations
from .strata import enumerate_strata, poset_to_dot, table_to_json
from .trees import tree_to_dot
from .verify import run_verify
from .weights import (
    WeightDatum,
    chamber_intervals,
    chamber_signature,
    family_point_valid,
    find_walls,
    format_rational,
    parse_family,
    parse_weights,
    same_chamber,
    to_rational,
)

EXIT_OK, EXIT_CHECKS, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
DEFAULT_MAX_N = 9


class GuardError(Exception):
    pass


class UsageError(Exception):
    pass


def _guard(A: WeightDatum, max_n: Optional[int]) -> None:
    limit = max_n
    if limit is None:
        limit = int(os.environ.get("HASSETT_CHOW_MAX_N", DEFAULT_MAX_N))
    if A.n > limit:
        raise GuardError(f"n = {A.n} exceeds the size guard {limit} (use --max-n)")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _compute_report(A: WeightDatum, jobs: int):
    T = enumerate_strata(A)
    P = chow_groups(A, T, jobs=jobs)
    checks = verify_presentation(P, T)
    report = presentation_to_json(P, checks)
    report["strata_counts"] = {str(d): len(ts) for d, ts in sorted(T.by_dim.items())}
    report["point_count"] = str(point_count_polynomial(T))
    return T, P, report


def cmd_compute(args) -> int:
    A = parse_weights(args.weights)
    _guard(A, args.max_n)
    T, P, report = _compute_report(A, args.jobs)
    ok = all(report["checks"].values())
    if args.format == "json":
        _emit(_json(report), args.out)
    elif args.format == "dot":
        _emit(poset_to_dot(T), args.out)
    else:
        lines = [
            f"weights: {A}",
            f"strata per dimension: {report['strata_counts']}",
            f"relations per dimension: {report['relation_counts']}",
            f"betti: {tuple(report['betti'])}",
            f"torsion: {report['torsion'] or 'none'}",
            f"poincare: {report['poincare']}",
            f"point count: {report['point_count']}",
        ]
        lines += [f"check {k}: {'pass' if v else 'FAIL'}" for k, v in report["checks"].items()]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_CHECKS


def cmd_strata(args) -> int:
    A = parse_weights(args.weights)
    _guard(A, args.max_n)
    T = enumerate_strata(A)
    if args.dim is not None and args.dim not in T.by_dim:
        raise UsageError(f"dimension {args.dim} out of range 0..{T.top_dimension}")
    if args.format == "dot":
        _emit(poset_to_dot(T, args.dim), args.out)
    elif args.format == "json":
        _emit(_json(table_to_json(T, args.dim)), args.out)
    else:
        dims = sorted(T.by_dim) if args.dim is None else [args.dim]
        lines = [f"weights: {A}"]
        for d in dims:
            lines.append(f"dimension {d}: {len(T.by_dim[d])} strata")
            for i, g in enumerate(T.by_dim[d]):
                splits = " ".join("{" + ",".join(map(str, s)) + "}" for s in g.key.splits) or "-"
                merged = [
                    "[" + ",".join(map(str, b)) + "]"
                    for p in g.r_structure.values() for b in p if len(b) > 1
                ]
                lines.append(f"  #{i} splits {splits}" + (f"  merged {' '.join(merged)}" if merged else ""))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_relations(args) -> int:
    from .relations import relation_to_json

    A = parse_weights(args.weights)
    _guard(A, args.max_n)
    T = enumerate_strata(A)
    dims = range(T.top_dimension) if args.dim is None else [args.dim]
    out = {str(d): [relation_to_json(T, r) for r in all_relations(T, d)] for d in dims}
    _emit(_json(out), args.out)
    return EXIT_OK


def cmd_tree(args) -> int:
    A = parse_weights(args.weights)
    _guard(A, args.max_n)
    T = enumerate_strata(A)
    try:
        g = T.by_dim[args.dim][args.index]
    except (KeyError, IndexError):
        raise UsageError(f"no stratum #{args.index} in dimension {args.dim}") from None
    _emit(tree_to_dot(g), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    A, B = parse_weights(args.weights), parse_weights(args.other)
    if A.n != B.n:
        raise UsageError(f"point counts differ: {A.n} vs {B.n}")
    _guard(A, args.max_n)
    same = same_chamber(A, B)
    _, _, ra = _compute_report(A, args.jobs)
    _, _, rb = _compute_report(B, args.jobs)
    strip = ("weights",)
    identical = {k: v for k, v in ra.items() if k not in strip} == {
        k: v for k, v in rb.items() if k not in strip
    }
    report = {
        "same_chamber": same,
        "identical_presentations": identical,
        "a": {"weights": ra["weights"], "signature": ra["signature"], "betti": ra["betti"]},
        "b": {"weights": rb["weights"], "signature": rb["signature"], "betti": rb["betti"]},
    }
    if args.format == "json":
        _emit(_json(report), args.out)
    else:
        lines = [f"same chamber: {'yes' if same else 'no'}"]
        if same:
            lines.append(f"identical presentations: {'yes' if identical else 'NO'}")
        for tag, r in (("A", ra), ("B", rb)):
            lines.append(f"{tag} {','.join(r['weights'])}: signature {r['signature']} betti {tuple(r['betti'])}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_CHECKS if same and not identical else EXIT_OK


def _parse_range(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError("--range expects LO,HI")
    return to_rational(parts[0]), to_rational(parts[1])


def cmd_sweep(args) -> int:
    lo, hi = _parse_range(args.range)
    F = parse_family(args.family, lo, hi)
    if F.n > (args.max_n or int(os.environ.get("HASSETT_CHOW_MAX_N", DEFAULT_MAX_N))):
        raise GuardError(f"n = {F.n} exceeds the size guard")
    walls = find_walls(F)
    chambers = []
    for a, b in chamber_intervals(F):
        eps = (a + b) / 2
        entry = {"interval": [format_rational(a), format_rational(b)], "sample": format_rational(eps)}
        if not family_point_valid(F, eps):
            entry["valid"] = False
            sig = None
        else:
            A = F.at(eps)
            T = enumerate_strata(A)
            P = chow_groups(A, T, jobs=args.jobs)
            sig = chamber_signature(A)
            entry.update(
                valid=True,
                signature=sig.as_sorted(),
                strata_counts={str(d): len(ts) for d, ts in sorted(T.by_dim.items())},
                betti=P.betti,
            )
        if chambers and chambers[-1][0] == sig:
            # no actual change across this cut: widen the previous chamber
            chambers[-1][1]["interval"][1] = entry["interval"][1]
        else:
            chambers.append((sig, entry))
    report = {
        "family": args.family,
        "range": [format_rational(lo), format_rational(hi)],
        "walls": [format_rational(w) for w in walls],
        "chambers": [e for _, e in chambers],
    }
    if args.format == "json":
        _emit(_json(report), args.out)
    else:
        lines = [f"walls: {', '.join(report['walls']) or 'none'}"]
        for e in report["chambers"]:
            span = f"({e['interval'][0]}, {e['interval'][1]})"
            if not e["valid"]:
                lines.append(f"{span}: not a valid weight datum")
            else:
                lines.append(f"{span}: betti {tuple(e['betti'])} strata {e['strata_counts']}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify(args.max_n or 5, args.trials, args.seed)
    out = report.to_json()
    if args.format == "json":
        _emit(_json(out), args.out)
    else:
        lines = [
            f"seed {report.seed}, max n {report.max_n}: {len(report.cases)} cases, "
            f"{len(report.failures)} failing"
        ]
        if not report.passed:
            lines.append("counterexample: " + json.dumps(out["counterexample"]))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_CHECKS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hassett-chow", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="text", formats=("json", "text", "dot")):
        sp.add_argument("--format", choices=formats, default=fmt_default)
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.add_argument("--max-n", type=int, default=None, dest="max_n")
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("compute", help="Betti numbers, torsion and checks for one datum")
    sp.add_argument("--weights", required=True)
    common(sp)
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("strata", help="list strata in canonical order")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--dim", type=int)
    common(sp, "json")
    sp.set_defaults(func=cmd_strata)

    sp = sub.add_parser("relations", help="dump principal relations as JSON")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--dim", type=int)
    common(sp, "json", ("json",))
    sp.set_defaults(func=cmd_relations)

    sp = sub.add_parser("tree", help="DOT drawing of one stratum")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--index", type=int, required=True)
    common(sp, "dot", ("dot",))
    sp.set_defaults(func=cmd_tree)

    sp = sub.add_parser("compare", help="compare two weight data of the same size")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--other", "--weights-b", required=True, dest="other")
    common(sp, "text", ("json", "text"))
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("sweep", help="walls and chambers along an affine family")
    sp.add_argument("--family", required=True)
    sp.add_argument("--range", default="0,1")
    common(sp, "text", ("json", "text"))
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="randomized invariant suite")
    sp.add_argument("--trials", type=int, default=25)
    sp.add_argument("--seed", type=int, default=0)
    common(sp, "text", ("json", "text"))
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (HassettError, UsageError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
