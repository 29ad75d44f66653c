"""Whole ``.comet`` programs: declarations, definitions and queries."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import inference
from .inference import InferenceResult, Predicate
from .semantics import Dist, evaluate
from .surface import ast as S
from .surface.elaborate import ElaborationError, Macro, Scope, elaborate, elaborate_pred
from .surface.parser import parse, parse_pred, parse_term
from .syntax import Const, Context, Term, Type, free_vars
from .typecheck import CheckResult, check_term


class NotClosed(Exception):
    """A state or evaluated definition depends on free variables."""


@dataclass
class Definition:
    name: str
    params: tuple[tuple[str, Type], ...]
    ty: Type
    body: Term
    check: CheckResult

    @property
    def closed(self) -> bool:
        return not self.params

    @property
    def context(self) -> Context:
        return Context(self.params)


@dataclass
class QueryOutcome:
    kind: str
    text: str
    dist: Dist | None = None
    result: InferenceResult | None = None
    validity: Fraction | None = None
    weights: Dist | None = None


@dataclass
class Program:
    name: str = "<program>"
    scope: Scope = field(default_factory=Scope)
    definitions: dict[str, Definition] = field(default_factory=dict)
    queries: list[S.QueryDecl] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def enums(self) -> dict[str, Const]:
        return self.scope.enums

    # building ---------------------------------------------------------------

    def add(self, item) -> None:
        match item:
            case S.TypeDecl(name=name, constructors=cs):
                self.scope.declare_enum(name, cs, item.span)
            case S.Def():
                self._define(item)
            case S.QueryDecl():
                self.queries.append(item)

    def _define(self, d: S.Def) -> None:
        if d.name in self.definitions or d.name in self.scope.ctors:
            raise ElaborationError(f"{d.name} is defined twice", d.span)
        params = tuple((p.name, self.scope.resolve_type(p.ty, d.span)) for p in d.params)
        names = [n for n, _ in params]
        if len(set(names)) != len(names):
            raise ElaborationError(f"repeated parameter in {d.name}", d.span)
        ty = self.scope.resolve_type(d.ty, d.span)
        body = elaborate(d.body, self.scope.with_locals(names, dict(params)))
        res = check_term(Context(params), body, ty)
        self.warnings.extend(f"{d.name}: {w}" for w in res.warnings)
        self.definitions[d.name] = Definition(d.name, params, ty, body, res)
        self.scope.macros[d.name] = Macro(tuple(names), body, tuple(t for _, t in params), ty)

    # elaboration helpers ----------------------------------------------------

    def term(self, source: str | S.Node) -> Term:
        node = parse_term(source) if isinstance(source, str) else source
        return elaborate(node, self.scope)

    def predicate(self, source: str | S.Pred) -> Predicate:
        node = parse_pred(source) if isinstance(source, str) else source
        return elaborate_pred(node, self.scope)

    def closed_term(self, source: str | S.Node) -> Term:
        t = self.term(source)
        fv = free_vars(t)
        if fv:
            raise NotClosed(f"{_describe(source)} depends on free variables {sorted(fv)}")
        return t

    # queries ----------------------------------------------------------------

    def evaluate(self, name_or_term: str | S.Node) -> Dist:
        if isinstance(name_or_term, str) and name_or_term in self.definitions:
            d = self.definitions[name_or_term]
            if not d.closed:
                raise NotClosed(f"{d.name} takes parameters and has no distribution of its own")
            return evaluate(Context(()), d.body, ty=d.ty)
        t = self.closed_term(name_or_term)
        res = check_term(Context(()), t)
        return evaluate(Context(()), t, ty=res.ty)

    def infer(self, state: str | S.Node, pred: str | S.Pred, side: int | None = None) -> InferenceResult:
        st = self.closed_term(state)
        return inference.infer(st, self.predicate(pred), side)

    def validity(self, state: str | S.Node, pred: str | S.Pred) -> tuple[Fraction, Dist]:
        st = self.closed_term(state)
        pr = self.predicate(pred)
        ty = check_term(Context(()), st).ty
        pr.check(ty)
        prior = evaluate(Context(()), st, ty=ty)
        weights = inference.assert_state(prior, pr)
        return weights.mass, weights

    def run_query(self, q: S.QueryDecl) -> QueryOutcome:
        text = f"{q.kind} {q.text}".strip()
        if q.kind == "eval":
            target = q.term.name if isinstance(q.term, S.SVar) else q.term
            return QueryOutcome("eval", text, dist=self.evaluate(target))
        if q.kind == "infer":
            res = self.infer(q.term, q.pred, q.marginal)
            return QueryOutcome("infer", text, dist=res.answer, result=res, validity=res.validity,
                                weights=res.weights)
        mass, weights = self.validity(q.term, q.pred)
        return QueryOutcome("validity", text, validity=mass, weights=weights)

    def run_queries(self) -> list[QueryOutcome]:
        return [self.run_query(q) for q in self.queries]


def _describe(source) -> str:
    if isinstance(source, str):
        return repr(source)
    if isinstance(source, S.SVar):
        return source.name
    return "the term"


def load_program(source: str | Path, name: str | None = None) -> Program:
    """Parse, elaborate and type-check a program given as a path or as source text."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                    and source.endswith(".comet")):
        path = Path(source)
        text = path.read_text(encoding="utf-8")
        name = name or path.stem
    else:
        text = source
    prog = Program(name or "<program>")
    for item in parse(text).items:
        prog.add(item)
    return prog


__all__ = ["Definition", "NotClosed", "Program", "QueryOutcome", "load_program"]
