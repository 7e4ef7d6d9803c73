"""Command-line front end.

Exit codes: 0 success, 1 gallery check failure, 2 input error,
3 numerical-structure error.
"""
from __future__ import annotations

import argparse
import sys

from . import gallery
from .analysis import analyze
from .channel import complement
from .opspace import InvalidInput, StructureError, TolerancePolicy
from .serialize import (algebra_from_dict, channel_from_dict, channel_to_dict, dumps, load_json,
                        projection_from_json)

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_STRUCTURE = 0, 1, 2, 3


def _tolerance(args) -> TolerancePolicy:
    base = TolerancePolicy()
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.tol_rank is not None:
        changes["rank_rel"] = args.tol_rank
    if args.tol_eq is not None:
        changes["equality_abs"] = args.tol_eq
    return base.replace(**changes)


def _load_channel(ref: str, tol):
    if ref.startswith("gallery:"):
        case = gallery.get_case(ref.split(":", 1)[1])
        return case.channel(), case
    return channel_from_dict(load_json(ref), tol), None


def _load_algebra(ref: str | None, case, tol):
    if ref is None:
        return None
    if case is not None and ref in case.algebras:
        return case.algebra(ref)
    return algebra_from_dict(load_json(ref), tol)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(report: dict) -> str:
    ch = report["channel"]
    rows = [("channel", ch["label"]), ("dims in/out", f"{ch['dim_in']} -> {ch['dim_out']}"),
            ("choi rank", ch["choi_rank"]), ("unital", ch["unital"]),
            ("kernel dim", ch["kernel_dim"]), ("complement output dim", ch["complement"]["dim_out"]),
            ("multiplicative domain dim", ch["multiplicative_domain"]["dim"])]
    if "algebra" in report:
        a = report["algebra"]
        rows += [("algebra", f"{a['label']} (dim {a['dim']})"),
                 ("correctable", a["correctable"]["kind"] == "correctable"),
                 ("private for complement", a["private_for_complement"]["kind"] == "private"),
                 ("private", a["private"]["kind"] == "private")]
    if "private_algebra" in report:
        b = report["private_algebra"]
        rows.append((f"privatized {b['label']}", b["privatized_to_state"]))
    width = max(len(r[0]) for r in rows)
    lines = [f"{k:<{width}}  {v}" for k, v in rows]
    lines.append("")
    lines.append(f"{'inequality':<36} {'lhs':>8} {'rhs':>8}  holds  saturated  applicable")
    for a in report["audits"]:
        lines.append(f"{a['name']:<36} {a['lhs']:>8} {a['rhs']:>8}  {a['holds']!s:<5}  "
                     f"{a['saturated']!s:<9}  {a['applicable']}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    tol = _tolerance(args)
    channel, case = _load_channel(args.channel, tol)
    A = _load_algebra(args.algebra, case, tol)
    B = _load_algebra(args.privatize, case, tol)
    Q = projection_from_json(load_json(args.q)) if args.q else None
    if Q is not None and A is None:
        raise InvalidInput("--q needs an algebra")
    report = analyze(channel, A, Q, B, tol)
    if args.json:
        _emit(dumps(report), args.json)
    sys.stdout.write(_table(report))
    return EXIT_OK


def cmd_gallery(args) -> int:
    tol = _tolerance(args)
    if not args.check:
        for case in gallery.CASES.values():
            print(f"{case.id:<24} {case.description}  [algebras: {', '.join(case.algebras)}]")
        return EXIT_OK
    reports = {}
    for case in gallery.CASES.values():
        try:
            problems = gallery.check_case(case, tol)
        except (InvalidInput, StructureError) as exc:
            problems = [f"{case.id}: {type(exc).__name__}: {exc}"]
        if problems:
            print(f"FAIL {problems[0]}")
            return EXIT_CHECK
        print(f"ok   {case.id}")
        if args.json:
            reports[case.id] = case.report(tol)
    if args.json:
        _emit(dumps(reports), args.json)
    return EXIT_OK


def cmd_complement(args) -> int:
    tol = _tolerance(args)
    channel, _ = _load_channel(args.channel, tol)
    _emit(dumps(channel_to_dict(complement(channel, tol))), args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=lambda s: int(s, 0), help="seed for generic elements")
    common.add_argument("--tol-rank", type=float, help="relative rank cutoff")
    common.add_argument("--tol-eq", type=float, help="absolute equality tolerance")
    common.add_argument("--json", metavar="PATH", help="write the JSON output here")

    parser = argparse.ArgumentParser(prog="qcomplement", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="analyse a channel")
    p.add_argument("channel", help="channel JSON file or gallery:ID")
    p.add_argument("--algebra", help="algebra JSON file, or an algebra name of the gallery case")
    p.add_argument("--privatize", help="algebra to test for privatization to a state")
    p.add_argument("--q", help="projection JSON (defaults to the unit of the algebra)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gallery", parents=[common], help="list or verify the built-in cases")
    p.add_argument("--check", action="store_true", help="re-run every case's expectations")
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("complement", parents=[common], help="print the complementary channel")
    p.add_argument("channel", help="channel JSON file or gallery:ID")
    p.set_defaults(func=cmd_complement)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StructureError as exc:
        print(f"structure error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE


if __name__ == "__main__":
    sys.exit(main())
