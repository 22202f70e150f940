"""Command-line front end.

Subcommands: classify, table1, order, stargraph, weighttest, picture.
Budget exhaustion is reported in the output and exits 0 (scientific
openness is not a tool failure); parse errors exit 2; table mismatches
and fatal verification inconsistencies exit 1.  The environment variable
ASPH_COSET_CAP overrides the default coset cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import coset
from .classify import (
    EXTENDED_FIXTURE,
    TABLE1_FIXTURES,
    LengthFourInstance,
    classify,
    cyclic_group,
    fixture_order,
    instance_from_presentation,
    verify_verdict,
)
from .coset import enumerate_cosets, lift, order_via_cyclic_subgroup
from .pictures import (
    cancel_dipole,
    curvature,
    find_dipole,
    picture_from_json,
    standard_angles,
    validate_picture,
)
from .stargraph import build_star_graph, to_dot
from .weights import WeightFunction, check_weight_function, search_weight_function
from .words import ParseError, TriState, parse_presentation, word_str


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by all subcommands."""

    subcommand: str
    cap: int
    fmt: str
    bound: int = 6
    denominator_bound: int = 3

    @staticmethod
    def from_args(args) -> "RunConfig":
        cap = getattr(args, "cap", coset.DEFAULT_CAP)
        fmt = getattr(args, "format", "text")
        bound = getattr(args, "bound", 6)
        dbound = getattr(args, "denominator_bound", 3)
        if cap < 1 or bound < 1 or dbound < 1:
            raise SystemExit("caps and bounds must be positive")
        if fmt not in ("text", "json"):
            raise SystemExit(f"unknown output format {fmt!r}")
        return RunConfig(args.command, cap, fmt, bound, dbound)


def default_cap() -> int:
    env = os.environ.get("ASPH_COSET_CAP")
    if env:
        return int(env)
    return coset.DEFAULT_CAP


def _load_presentation(args):
    if getattr(args, "cyclic", None) is not None:
        if args.l is None or args.k is None or args.g is None or args.h is None:
            raise SystemExit("--cyclic requires --l, --k, --g and --h")
        inst = LengthFourInstance(
            cyclic_group(args.cyclic), (("h", args.g),), (("h", args.h),),
            args.l, args.k)
        return inst.presentation()
    if not args.presentation:
        raise SystemExit("need a presentation file or --cyclic shorthand")
    try:
        text = open(args.presentation).read()
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        raise SystemExit(2)
    try:
        return parse_presentation(text)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        raise SystemExit(2)


def _tri(t: TriState) -> str:
    return t.value


def cmd_classify(args) -> int:
    pres = _load_presentation(args)
    cap = args.cap
    try:
        inst = instance_from_presentation(pres, cap)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    verdict = classify(inst, cap)
    out = {
        "instance": inst.describe(),
        "dr": _tri(verdict.dr),
        "aspherical": _tri(verdict.aspherical),
        "rule": verdict.justification,
        "detail": verdict.detail,
        "conjectural": verdict.conjectural,
        "cases": list(verdict.case_hits),
        "blockers": list(verdict.blockers),
    }
    if verdict.expected_core_order:
        out["defined_group_order"] = verdict.expected_core_order
    rc = 0
    if args.verify:
        report = verify_verdict(inst, verdict, cap)
        out["verify"] = [{"check": c.name, "status": c.status,
                          "detail": c.detail} for c in report.checks]
        if not report.ok:
            rc = 1
    if args.format == "json":
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(verdict.summary())
        print(f"  instance: {out['instance']}")
        print(f"  detail: {verdict.detail}")
        if verdict.case_hits:
            print(f"  cases holding: {', '.join(verdict.case_hits)}")
        if verdict.blockers:
            print(f"  blocked on: {'; '.join(verdict.blockers)}")
        if args.verify:
            for line in report.lines():
                print("  " + line)
    return rc


def cmd_table1(args) -> int:
    fixtures = list(TABLE1_FIXTURES)
    if args.extended:
        fixtures.append(EXTENDED_FIXTURE)
    if args.only:
        fixtures = [f for f in fixtures if f.case == args.only]
    rc = 0
    rows = []
    for fix in fixtures:
        inst = fix.instance()
        got = fixture_order(fix, args.cap)
        order_ok = got.is_finite and got.value == fix.expected_order
        verdict = classify(inst, args.cap)
        verdict_ok = verdict.aspherical == TriState.NO
        if not (order_ok and verdict_ok):
            rc = 1
        rows.append((fix, got, order_ok, verdict, verdict_ok))
    if args.format == "json":
        print(json.dumps([{
            "fixture": f.name, "case": f.case,
            "expected": f.expected_order, "computed": str(got),
            "order_ok": order_ok, "verdict": v.summary(), "verdict_ok": vok,
        } for f, got, order_ok, v, vok in rows], indent=2, sort_keys=True))
    else:
        for f, got, order_ok, v, vok in rows:
            mark = "ok " if (order_ok and vok) else "FAIL"
            print(f"[{mark}] {f.name:22s} expected {f.expected_order:>9} "
                  f"computed {str(got):>18}  {v.summary()}")
        print("all checks passed" if rc == 0 else "MISMATCH", file=sys.stderr)
    return rc


def cmd_order(args) -> int:
    pres = _load_presentation(args)
    lifted = lift(pres)
    subgroup = []
    if args.subgroup:
        for chunk in args.subgroup.split(","):
            from .pictures import _parse_corner_word
            subgroup.append(_parse_corner_word(chunk))
    t = enumerate_cosets(lifted, subgroup, args.cap, strategy=args.strategy)
    if t.complete:
        print(f"Finite({t.n})" if not subgroup else f"Index({t.n})")
    else:
        print(f"ExceedsBudget({args.cap})")
    return 0


def cmd_stargraph(args) -> int:
    pres = _load_presentation(args)
    graph = build_star_graph(pres)
    if args.format == "json":
        data = [{
            "id": e.eid,
            "source": f"{e.source[0]}{'' if e.source[1] == 1 else '^-1'}",
            "target": f"{e.target[0]}{'' if e.target[1] == 1 else '^-1'}",
            "label": word_str(e.label),
            "pair": graph.pair_id(e.eid),
            "origin": list(e.origin),
        } for e in graph.edges]
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(to_dot(graph), end="")
    return 0


def cmd_weighttest(args) -> int:
    pres = _load_presentation(args)
    graph = build_star_graph(pres)
    ctx = coset.context_for(pres.coeff, args.cap)
    if args.weights == "search":
        res = search_weight_function(graph, ctx, args.denominator_bound,
                                     args.bound, mode=args.mode)
        if res.found is None:
            print("no passing weight function found"
                  + (" (search capped)" if res.capped else ""))
            return 0
        theta = res.found
        print("found weight function: "
              + ", ".join(f"{pid}: {w}" for pid, w in sorted(theta.weights.items())))
    else:
        try:
            theta = WeightFunction.from_text(graph, open(args.weights).read())
        except (OSError, ValueError) as err:
            print(f"error: {err}", file=sys.stderr)
            return 2
    report = check_weight_function(graph, theta, ctx, mode=args.mode,
                                   bound=args.bound)
    if args.format == "json":
        print(json.dumps({
            "condition_I": [{"relator": r.relator, "sum": str(r.total),
                             "ok": r.ok} for r in report.condition_I],
            "condition_II": {
                "status": report.condition_II.status,
                "min_weight": None if report.condition_II.min_weight is None
                else str(report.condition_II.min_weight),
                "witness": list(report.condition_II.witness)
                if report.condition_II.witness else None,
                "bound": report.condition_II.bound,
                "note": report.condition_II.note,
            },
            "nonnegative_cycles": report.nonneg_cycles,
            "passes": report.passes(),
        }, indent=2, sort_keys=True))
    else:
        for line in report.lines():
            print(line)
        print("weight function passes" if report.passes()
              else "weight function does not certify reducibility")
    return 0


def cmd_picture(args) -> int:
    try:
        text = open(args.picture).read()
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    pic, pres = picture_from_json(text)
    if args.presentation:
        pres = parse_presentation(open(args.presentation).read())
    if pres is None:
        print("error: picture file carries no presentation; pass --presentation",
              file=sys.stderr)
        return 2
    ctx = coset.context_for(pres.coeff, args.cap)
    report = validate_picture(pic, pres, ctx)
    out_lines = report.lines()
    if args.reduce:
        steps = 0
        cur = pic
        while True:
            d = find_dipole(cur, pres, ctx)
            if d is None:
                break
            cur = cancel_dipole(cur, d)
            steps += 1
            out_lines.append(
                f"cancelled dipole at arc {d.arc} (region {d.region}); "
                f"{len(cur.discs)} discs remain")
        if steps == 0:
            out_lines.append("reduced: no dipole found")
        else:
            out_lines.append(f"reduced after {steps} cancellations")
    if args.curvature:
        ang = standard_angles(pic)
        per, total = curvature(pic, ang)
        for ri, c in sorted(per.items()):
            out_lines.append(f"curvature of region {ri}: {c} pi")
        out_lines.append(f"total curvature: {total} pi")
    for line in out_lines:
        print(line)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="relasph",
        description="asphericity and diagrammatic reducibility of "
                    "one-relator relative presentations")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, presentation_arg=True):
        if presentation_arg:
            p.add_argument("presentation", nargs="?",
                           help="presentation file (grammar: group <gens | "
                                "relators>; x-gens; rel word [; rel word]*)")
            p.add_argument("--cyclic", type=int, metavar="N",
                           help="shorthand coefficient group Z_N")
            p.add_argument("--l", type=int)
            p.add_argument("--k", type=int)
            p.add_argument("--g", type=int, metavar="A",
                           help="g = h^A in the cyclic shorthand")
            p.add_argument("--h", type=int, metavar="B")
        p.add_argument("--cap", type=int, default=default_cap(),
                       help="coset enumeration budget")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("classify", help="classify a length-four instance")
    add_common(p)
    p.add_argument("--verify", action="store_true",
                   help="cross-check the verdict by coset enumeration")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("table1", help="run the resolved-order fixture battery")
    p.add_argument("--extended", action="store_true",
                   help="include the order-24530688 case (minutes)")
    p.add_argument("--only", metavar="CASE",
                   help="restrict to one case column, e.g. K5")
    p.add_argument("--cap", type=int, default=default_cap())
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_table1)

    p = sub.add_parser("order", help="order of the defined group")
    add_common(p)
    p.add_argument("--subgroup", help="comma-separated subgroup generator words")
    p.add_argument("--strategy", choices=("hlt", "felsch"), default="hlt")
    p.set_defaults(fn=cmd_order)

    p = sub.add_parser("stargraph", help="star graph of a presentation")
    add_common(p)
    p.add_argument("--dot", action="store_true",
                   help="DOT output (default for text format)")
    p.set_defaults(fn=cmd_stargraph)

    p = sub.add_parser("weighttest", help="check or search weight functions")
    add_common(p)
    p.add_argument("weights",
                   help="weights file (lines: pair_id p/q) or 'search'")
    p.add_argument("--mode", choices=("weak", "full"), default="weak")
    p.add_argument("--bound", type=int, default=6,
                   help="cycle-length bound for non-exact condition II")
    p.add_argument("--denominator-bound", type=int, default=3)
    p.set_defaults(fn=cmd_weighttest)

    p = sub.add_parser("picture", help="validate / reduce a picture")
    p.add_argument("picture", help="picture JSON file")
    p.add_argument("--presentation", help="presentation file override")
    p.add_argument("--reduce", action="store_true",
                   help="cancel dipoles until reduced")
    p.add_argument("--curvature", action="store_true",
                   help="standard-angle curvature per region")
    p.add_argument("--cap", type=int, default=default_cap())
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_picture)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    RunConfig.from_args(args)  # validates caps, bounds, format
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
