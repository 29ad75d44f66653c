"""Command-line front end: check, evaluate and query ``.comet`` programs, run the law suite.

Exit codes: 0 success, 1 parse error (or unreadable input), 2 type or
elaboration error, 3 a query needs a closed term, 4 conditioning on zero
mass, 5 a law failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence, TextIO

from .inference import NotATensor, ZeroMass
from .laws import GenConfig, run_law_suite
from .program import NotClosed, Program, QueryOutcome, load_program
from .rationals import format_decimal, format_ratio
from .semantics import Dist
from .surface.elaborate import ElaborationError
from .surface.lexer import ParseError
from .typecheck import SideConditionFailed, TypeCheckError, ZeroDomain

EXIT_OK, EXIT_PARSE, EXIT_TYPE, EXIT_NOT_CLOSED, EXIT_ZERO, EXIT_LAWS = 0, 1, 2, 3, 4, 5


# ---------------------------------------------------------------- rendering


def rational(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator, "decimal": format_decimal(q)}


def dist_rows(d: Dist) -> list[dict]:
    return [{"value": str(v), "weight": rational(w)} for v, w in d.items()]


def outcome_dict(program: str, o: QueryOutcome) -> dict:
    out: dict = {"program": program, "query": o.text}
    if o.kind == "eval":
        out["distribution"] = dist_rows(o.dist)
        return out
    out["validity"] = rational(o.validity)
    out["weights"] = dist_rows(o.weights)
    if o.result is not None:
        r = o.result
        out["witness"] = r.witness
        out["posterior"] = dist_rows(r.posterior)
        if r.marginal is not None:
            out["marginal"] = {"side": r.marginal_side, "distribution": dist_rows(r.marginal)}
    return out


def outcome_text(o: QueryOutcome) -> list[str]:
    lines = [f"query {o.text}"]
    if o.kind == "eval":
        return lines + [f"  {row}" for row in o.dist.render()]
    lines.append(f"  validity: {format_ratio(o.validity)} ({format_decimal(o.validity)})")
    if o.result is None:
        lines.append("  weights:")
        return lines + [f"    {row}" for row in o.weights.render()]
    r = o.result
    lines.append(f"  witness: n = {r.witness}")
    lines.append("  weights:")
    lines += [f"    {row}" for row in r.weights.render()]
    lines.append("  posterior:")
    lines += [f"    {row}" for row in r.posterior.render()]
    if r.marginal is not None:
        lines.append(f"  marginal {r.marginal_side}:")
        lines += [f"    {row}" for row in r.marginal.render()]
    return lines


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# ---------------------------------------------------------------- commands


class Failure(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.message = message


def _classify(e: BaseException) -> Failure | None:
    match e:
        case Failure():
            return e
        case ParseError():
            return Failure(EXIT_PARSE, "ParseError", str(e))
        case OSError():
            return Failure(EXIT_PARSE, "ReadError", str(e))
        case ZeroDomain() | ZeroMass():
            return Failure(EXIT_ZERO, type(e).__name__, str(e))
        case SideConditionFailed() | TypeCheckError() | ElaborationError() | NotATensor():
            return Failure(EXIT_TYPE, type(e).__name__, str(e))
        case NotClosed():
            return Failure(EXIT_NOT_CLOSED, "NotClosed", str(e))
        case ArithmeticError():
            return Failure(EXIT_ZERO, type(e).__name__, str(e))
    return None


def _load(path: str) -> Program:
    return load_program(Path(path))


def cmd_check(args, out: TextIO) -> int:
    prog = _load(args.file)
    if args.format == "structured":
        out.write(dump({"program": prog.name, "status": "ok", "definitions": list(prog.definitions),
                        "warnings": prog.warnings}) + "\n")
    return EXIT_OK


def cmd_eval(args, out: TextIO) -> int:
    prog = _load(args.file)
    o = QueryOutcome("eval", f"eval {args.defn}", dist=prog.evaluate(args.defn))
    _emit(args, out, prog, [o])
    return EXIT_OK


def cmd_infer(args, out: TextIO) -> int:
    prog = _load(args.file)
    res = prog.infer(args.state, args.pred, args.marginal)
    text = f"infer {args.state} given {args.pred}" + (f" marginal {args.marginal}" if args.marginal else "")
    o = QueryOutcome("infer", text, dist=res.answer, result=res, validity=res.validity, weights=res.weights)
    _emit(args, out, prog, [o])
    return EXIT_OK


def cmd_run(args, out: TextIO) -> int:
    prog = _load(args.file)
    _emit(args, out, prog, prog.run_queries())
    return EXIT_OK


def _emit(args, out: TextIO, prog: Program, outcomes: list[QueryOutcome]) -> None:
    if args.format == "structured":
        objs = [outcome_dict(prog.name, o) for o in outcomes]
        out.write(dump(objs[0] if args.command != "run" else objs) + "\n")
        return
    if args.command in ("eval",):
        for row in outcomes[0].dist.render():
            out.write(row + "\n")
        return
    for o in outcomes:
        for line in outcome_text(o):
            out.write(line + "\n")


def cmd_laws(args, out: TextIO) -> int:
    try:
        cfg = GenConfig(seed=args.seed, instances=args.instances)
        report = run_law_suite(cfg, args.law or None, jobs=args.jobs)
    except (KeyError, ValueError) as e:
        # bad selection or bounds are usage errors, reported like argparse does
        raise Failure(2, "UsageError", str(e).strip("'\"")) from e
    out.write(report.to_json() + "\n" if args.format == "structured" else report.to_text())
    return EXIT_OK if report.ok else EXIT_LAWS


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS,
                     help="output format (default: text)")

    p = argparse.ArgumentParser(prog="comet", description="Exact probabilistic programs with a typed core.")
    p.add_argument("--format", choices=("text", "structured"), default="text", help="output format")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[fmt], help="parse and type-check a program")
    c.add_argument("file")
    c.set_defaults(run=cmd_check)

    e = sub.add_parser("eval", parents=[fmt], help="evaluate a closed definition or term")
    e.add_argument("file")
    e.add_argument("--def", dest="defn", required=True, metavar="NAME")
    e.set_defaults(run=cmd_eval)

    i = sub.add_parser("infer", parents=[fmt], help="condition a state on a predicate")
    i.add_argument("file")
    i.add_argument("--state", required=True, metavar="NAME")
    i.add_argument("--pred", required=True, metavar="NAME")
    i.add_argument("--marginal", type=int, choices=(1, 2))
    i.set_defaults(run=cmd_infer)

    r = sub.add_parser("run", parents=[fmt], help="run the queries in a program, in order")
    r.add_argument("file")
    r.set_defaults(run=cmd_run)

    lw = sub.add_parser("laws", parents=[fmt], help="check the algebraic law suite")
    lw.add_argument("--seed", type=int, default=0)
    lw.add_argument("--instances", type=int, default=GenConfig().instances)
    lw.add_argument("--law", action="append", metavar="NAME", help="law name or group prefix (repeatable)")
    lw.add_argument("--jobs", type=int, default=1, help="worker processes")
    lw.set_defaults(run=cmd_laws)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except Exception as e:  # noqa: BLE001 - mapped to exit codes below
        f = _classify(e)
        if f is None:
            raise
        if args.format == "structured":
            out.write(dump({"error": {"kind": f.kind, "message": f.message}}) + "\n")
        err.write(f"{f.kind}: {f.message}\n")
        return f.code


__all__ = ["build_parser", "main"]
