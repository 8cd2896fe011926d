"""Command-line entry point: ``qdoctrine <command> DOC ...``.

Exit status is 0 when every requested check passes, 1 when one fails and
2 on unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys

import yaml

from .completion import q_check_auc_transfer, quotient_completion
from .doctrine import (
    check_auc,
    check_elementary,
    check_existential,
    check_implicational,
    check_primary,
    check_universal,
    has_comprehensions,
    has_comprehensive_equalizers,
)
from .io import ParseError, ValidationError, emit, parse_doctrine
from .report import BudgetExhausted, DoctrineError, MalformedInput, StructureReport
from .twocat import check_quotients, verify_universal_property

LADDER = [
    ("primary", check_primary),
    ("elementary", check_elementary),
    ("existential", check_existential),
    ("implicational", check_implicational),
    ("universal", check_universal),
    ("comprehensions", lambda P: has_comprehensions(P, "strict", require_full=True)),
    ("comprehensive equalizers", lambda P: has_comprehensive_equalizers(P, "strict")),
    ("quotients", check_quotients),
]


def _guarded(name, fn, *args) -> StructureReport:
    try:
        return fn(*args)
    except BudgetExhausted as exc:
        return StructureReport.fail(name, {"error": "budget exhausted", "message": str(exc),
                                           "coverage": exc.coverage})
    except DoctrineError as exc:
        return StructureReport.fail(name, {"error": type(exc).__name__, "message": str(exc)})


def structure_profile(P) -> list[StructureReport]:
    """Every rung of the ladder, even after a failure."""
    return [_guarded(name, fn, P) for name, fn in LADDER]


def _object(token: str):
    value = yaml.safe_load(token)

    def tup(v):
        return tuple(tup(x) for x in v) if isinstance(v, list) else v

    return tup(value)


def _print(reports, args, extra=None):
    passed = all(reports)
    if args.format == "machine":
        doc = {"command": args.command, "input": args.doc, "window": args.window,
               "budget": getattr(args, "budget", None), "passed": passed,
               "results": [r.to_dict() for r in reports]}
        if extra:
            doc.update(extra)
        print(json.dumps(doc, indent=2, sort_keys=True, default=str))
    else:
        for r in reports:
            print(r.line())
        print("all checks passed" if passed else "some checks failed")
    return 0 if passed else 1


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="qdoctrine", description=__doc__.splitlines()[0])
    parser.add_argument("--window", type=int, default=None,
                        help="FinSet bound for builtins; carrier bound for the completion")
    parser.add_argument("--budget", type=int, default=10 ** 4,
                        help="candidate object maps for verify-universal")
    parser.add_argument("--format", choices=["human", "machine"], default="human")
    parser.add_argument("--strict-products", action="store_true",
                        help="reject bases lacking a chosen product for some window pair")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", help="run the structure ladder")
    p.add_argument("doc")
    p = sub.add_parser("complete", help="emit the quotient completion as a document")
    p.add_argument("doc")
    p.add_argument("-o", "--output")
    p = sub.add_parser("verify-universal", help="check the completion's universal property against TARGET")
    p.add_argument("doc")
    p.add_argument("target")
    p = sub.add_parser("auc", help="unique choice from A to B, in the doctrine and its completion")
    p.add_argument("doc")
    p.add_argument("a")
    p.add_argument("b")
    p = sub.add_parser("report", help="machine-readable structure profile")
    p.add_argument("doc")
    args = parser.parse_args(argv)

    try:
        P = parse_doctrine(args.doc, args.window, args.strict_products)
        if args.command in ("check", "report"):
            if args.command == "report":
                args.format = "machine"
            return _print(structure_profile(P), args)
        if args.command == "complete":
            carriers = None
            if args.window is not None and not args.doc.startswith("builtin-"):
                carriers = [a for a in P.base.objects() if P.base.object_size(a) <= args.window]
            Q = quotient_completion(P, carriers)
            text = emit(Q)
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
                print(f"wrote {len(Q.base.objects())} objects to {args.output}")
            else:
                sys.stdout.write(text)
            return 0
        if args.command == "verify-universal":
            X = parse_doctrine(args.target, None, args.strict_products)
            rep = _guarded("universal property", verify_universal_property, P, X, args.budget)
            return _print([rep], args)
        if args.command == "auc":
            a, b = _object(args.a), _object(args.b)
            reports = [_guarded("AUC", check_auc, P, a, b),
                       _guarded("AUC transfer", q_check_auc_transfer, P, a, b)]
            return _print(reports, args)
    except (ParseError, ValidationError, MalformedInput) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    parser.error(f"unknown command {args.command}")
    return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
