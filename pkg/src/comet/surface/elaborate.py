"""Expansion of surface syntax into core terms.

Definitions are macros: a use of ``def f(x : A) : B = t`` becomes
``(t[x := (r : A)] : B)``.  Local ``let f(x) = s in t`` is the same
expansion without annotations, and ``let x = s in t`` is substitution.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .. import derived
from ..inference import Predicate
from ..semantics import TRUE, EvaluationError, denote, environments
from ..syntax import (
    Ann, Case, Const, Context, Ctor, EnumCase, Inl, Inlr, Inr, Instr, LetPair, Lft, Magic,
    Norm, OneOverN, Ovee, Prob, Star, Sum, Tensor, Term, TensorPair, Type, Var, free_vars,
    fresh_name, substitute, substitute_many,
)
from . import ast as S


class ElaborationError(Exception):
    def __init__(self, message: str, span=None):
        where = f"{span}: " if span is not None else ""
        super().__init__(f"{where}{message}")
        self.message = message
        self.span = span


@dataclass(frozen=True)
class Macro:
    """A named term with parameters; ``types`` is empty for local macros."""

    params: tuple[str, ...]
    body: Term
    types: tuple[Type, ...] = ()
    result: Type | None = None

    def expand(self, args: tuple[Term, ...]) -> Term:
        if self.types:
            args = tuple(Ann(a, ty) for a, ty in zip(args, self.types))
        out = substitute_many(self.body, dict(zip(self.params, args)))
        return Ann(out, self.result) if self.result is not None else out


@dataclass
class Scope:
    enums: dict[str, Const] = field(default_factory=dict)
    ctors: dict[str, Const] = field(default_factory=dict)
    macros: dict[str, Macro] = field(default_factory=dict)
    locals: frozenset[str] = frozenset()
    types: dict[str, Type] = field(default_factory=dict)

    def with_locals(self, names, types: dict[str, Type] | None = None) -> "Scope":
        names = [n for n in names if n]
        new_types = {k: v for k, v in self.types.items() if k not in names}
        new_types.update(types or {})
        # a local shadows macros of the same name
        macros = {k: v for k, v in self.macros.items() if k not in names}
        return replace(self, locals=self.locals | frozenset(names), types=new_types, macros=macros)

    def with_macro(self, name: str, macro: Macro) -> "Scope":
        return replace(
            self, macros={**self.macros, name: macro}, locals=self.locals - {name},
        )

    def declare_enum(self, name: str, constructors: tuple[str, ...], span=None) -> Const:
        if name in self.enums:
            raise ElaborationError(f"type {name} declared twice", span)
        enum = Const(name, tuple(constructors))
        for c in constructors:
            if c in self.ctors:
                raise ElaborationError(f"constructor {c} declared twice", span)
            self.ctors[c] = enum
        self.enums[name] = enum
        return enum

    def resolve_type(self, ty: Type | None, span=None) -> Type | None:
        match ty:
            case None:
                return None
            case Const(name=name):
                if name not in self.enums:
                    raise ElaborationError(f"unknown type {name}", span)
                return self.enums[name]
            case Sum(left, right):
                return Sum(self.resolve_type(left, span), self.resolve_type(right, span))
            case Tensor(left, right):
                return Tensor(self.resolve_type(left, span), self.resolve_type(right, span))
        return ty


def elaborate(node: S.Node, scope: Scope | None = None) -> Term:
    """Expand a surface term into a core term."""
    return _Elab(scope or Scope()).term(node)


def elaborate_pred(pred: S.Pred, scope: Scope | None = None) -> Predicate:
    """Expand a surface predicate into ``var |- body``."""
    return _Elab(scope or Scope()).pred(pred)


def scalar_literal(value: Fraction, text: str = "") -> Term:
    """``1/n`` written as a fraction is the primitive coin; other literals are kept."""
    if "/" in text and value.numerator == 1 and value.denominator >= 2:
        return OneOverN(value.denominator)
    if not text and value.numerator == 1 and value.denominator >= 2:
        return OneOverN(value.denominator)
    return Prob(value)


class _Elab:
    def __init__(self, scope: Scope):
        self.scope = scope

    def under(self, scope: Scope) -> "_Elab":
        return _Elab(scope)

    def ty(self, ty: Type | None, node: S.Node) -> Type | None:
        return self.scope.resolve_type(ty, node.span)

    def term(self, node: S.Node) -> Term:
        t = self._term(node)
        if node.span is not None and t.span is None:
            try:
                object.__setattr__(t, "span", node.span)
            except AttributeError:
                pass
        return t

    def _term(self, node: S.Node) -> Term:
        sc = self.scope
        e = self.term
        match node:
            case S.SVar(name=name):
                if name in sc.locals:
                    return Var(name)
                if name in sc.macros:
                    m = sc.macros[name]
                    if m.params:
                        raise ElaborationError(
                            f"{name} takes {len(m.params)} argument(s)", node.span
                        )
                    return m.expand(())
                if name in sc.ctors:
                    return Ctor(sc.ctors[name], name)
                return Var(name)
            case S.SCall(name=name, args=args):
                if name not in sc.macros:
                    raise ElaborationError(f"{name} is not a defined function", node.span)
                m = sc.macros[name]
                if len(args) != len(m.params):
                    raise ElaborationError(
                        f"{name} takes {len(m.params)} argument(s), given {len(args)}", node.span
                    )
                return m.expand(tuple(e(a) for a in args))
            case S.SStar():
                return Star()
            case S.SScalar(value=v, text=text):
                return scalar_literal(v, text)
            case S.STop():
                return derived.top()
            case S.SBot():
                return derived.bot()
            case S.SPair(left=a, right=b):
                return TensorPair(e(a), e(b))
            case S.SLetPair(x=x, y=y, bound=s, body=b):
                return LetPair(x, y, e(s), self.under(sc.with_locals([x, y])).term(b))
            case S.SLet(name=x, bound=s, body=b):
                return substitute(self.under(sc.with_locals([x])).term(b), x, e(s))
            case S.SLetFun(name=f, params=ps, fun_body=fb, body=b):
                body = self.under(sc.with_locals(ps)).term(fb)
                return self.under(sc.with_macro(f, Macro(ps, body))).term(b)
            case S.SMagic(term=a, ty=ty):
                return Magic(e(a), self.ty(ty, node))
            case S.SInl(term=a, ty=ty):
                return Inl(e(a), self.ty(ty, node))
            case S.SInr(term=a, ty=ty):
                return Inr(e(a), self.ty(ty, node))
            case S.SCase(scrutinee=r, x=x, left=a, y=y, right=b):
                return Case(
                    e(r), x, self.under(sc.with_locals([x])).term(a),
                    y, self.under(sc.with_locals([y])).term(b),
                )
            case S.SEnumCase(scrutinee=r, arms=arms):
                names = [c for c, _ in arms]
                if len(set(names)) != len(names):
                    raise ElaborationError("repeated constructor in case", node.span)
                for c in names:
                    if c not in sc.ctors:
                        raise ElaborationError(f"unknown constructor {c}", node.span)
                return EnumCase(e(r), tuple((c, e(b)) for c, b in arms))
            case S.SInlr(left=a, right=b):
                return Inlr(e(a), e(b))
            case S.SLft(term=a):
                return Lft(e(a))
            case S.SInstr(pred=p, arg=a):
                pr = self.pred(p)
                return Instr(pr.var, pr.body, e(a))
            case S.SAssert(pred=p, arg=a):
                pr = self.pred(p)
                return derived.assert_(pr.var, pr.body, e(a))
            case S.SNorm(term=a):
                return Norm(e(a))
            case S.SOvee(left=a, right=b):
                return Ovee(e(a), e(b))
            case S.SOrtho(term=a):
                return derived.ortho(e(a))
            case S.SAnd(left=a, right=b):
                return derived.andthen(e(a), e(b))
            case S.SReturn(term=a):
                return derived.ret(e(a))
            case S.SFail(ty=ty):
                return derived.fail(self.ty(ty, node))
            case S.SDo(x=x, bound=s, body=b):
                return derived.do(x, e(s), self.under(sc.with_locals([x])).term(b))
            case S.SBind(bound=s, fn=f):
                bound = e(s)
                if isinstance(f, S.PKeyword):
                    x = fresh_name("x", free_vars(bound))
                    wrap = {"inl": Inl, "inr": Inr, "return": derived.ret}[f.name]
                    return derived.do(x, bound, wrap(Var(x)))
                fn = self.function(f)
                return derived.do(fn.var, bound, fn.body)
            case S.SDom(term=a):
                return derived.dom(e(a))
            case S.SKer(term=a):
                return derived.ker(e(a))
            case S.SInlTest(term=a):
                return derived.inl_test(e(a))
            case S.SInrTest(term=a):
                return derived.inr_test(e(a))
            case S.SMeasure(arms=arms):
                preds = [e(p) for p, _ in arms]
                bodies = [e(b) for _, b in arms]
                self._check_ntest(preds, node)
                return derived.measure(list(zip(preds, bodies)))
            case S.SIf(test=p, then=a, orelse=b):
                return derived.cond(e(p), e(a), e(b))
            case S.SCondition(state=s, pred=p):
                pr = self.pred(p)
                return Norm(derived.assert_(pr.var, pr.body, e(s)))
            case S.SFst(term=a):
                return derived.fst(e(a))
            case S.SSnd(term=a):
                return derived.snd(e(a))
            case S.SInj(n=n, i=i, term=a):
                return derived.inj(i, n, e(a))
            case S.SNum(n=n, i=i):
                return derived.numeral(i, n)
            case S.SNabla(n=n, term=a):
                return derived.nabla(e(a), n)
            case S.SIdx(n=n, term=a):
                return derived.index(e(a), n)
            case S.SProj(n=n, indices=ix, term=a):
                return derived.proj(e(a), n, ix)
            case S.STest(n=n, i=i, term=a):
                return derived.in_test(i, e(a), n)
            case S.SAnn(term=a, ty=ty):
                return Ann(e(a), self.ty(ty, node))
        raise ElaborationError(f"cannot elaborate {type(node).__name__}", node.span)

    def _check_ntest(self, preds: list[Term], node: S.Node) -> None:
        """Reject measure arms whose predicates do not sum to top, when decidable here."""
        names = set().union(*(free_vars(p) for p in preds))
        if not names <= set(self.scope.types):
            return  # left to the checker's side condition on lft
        ctx = Context(tuple((n, self.scope.types[n]) for n in sorted(names)))
        for env in environments(ctx):
            try:
                total = sum((denote(p, env).get(TRUE, Fraction(0)) for p in preds), Fraction(0))
            except EvaluationError:
                return  # ill-typed arms; the checker reports them
            if total != 1:
                shown = ", ".join(f"{k} = {v}" for k, v in env.items())
                raise ElaborationError(
                    f"measure predicates sum to {total}, not top, at {shown}", node.span
                )

    # predicates and functions ------------------------------------------------

    def function(self, f: S.Pred) -> Predicate:
        """A one-argument function ``var |- body`` (predicates included)."""
        return self.pred(f)

    def pred(self, p: S.Pred) -> Predicate:
        sc = self.scope
        match p:
            case S.PLam(params=params, body=body):
                inner = self.under(sc.with_locals(params)).term(body)
                return _bind_params(params, inner, ())
            case S.PName(name=name):
                if name in sc.locals:
                    raise ElaborationError(f"{name} is a variable, not a predicate", p.span)
                if name in sc.macros:
                    m = sc.macros[name]
                    if not m.params:
                        return Predicate.constant(m.expand(()))
                    body = m.body if m.result is None else Ann(m.body, m.result)
                    return _bind_params(m.params, body, m.types)
                raise ElaborationError(f"unknown predicate {name}", p.span)
            case S.PCompose(outer=outer, inner=inner):
                f = self.pred(inner)
                g = self.pred(outer)
                return Predicate(f.var, substitute(g.body, g.var, f.body), f.domain)
            case S.PConst(term=t):
                return Predicate.constant(self.term(t))
            case S.PKeyword(name=name):
                raise ElaborationError(f"{name} is not a predicate", p.span)
        raise ElaborationError(f"cannot elaborate predicate {p!r}", getattr(p, "span", None))


def _bind_params(params: tuple[str, ...], body: Term, types: tuple[Type, ...]) -> Predicate:
    domain = None
    if types:
        domain = types[-1]
        for ty in reversed(types[:-1]):
            domain = Tensor(ty, domain)
    if len(params) == 1:
        return Predicate(params[0], body, domain)
    subj = derived.Subject(params, frozenset(free_vars(body)))
    return Predicate(subj.binder, subj.unpack(body), domain)


__all__ = ["ElaborationError", "Macro", "Scope", "elaborate", "elaborate_pred", "scalar_literal"]
