"""Pretty-printing of core terms (and surface nodes) as parseable source.

Precedence levels mirror the parser: 0 binding forms, 1 ``(+)``,
2 ``(x)``, 3 prefix operators, 4 atoms.  Binder names starting with an
underscore are vacuous and print as ``_``.
"""
from __future__ import annotations

from fractions import Fraction

from ..rationals import format_ratio
from ..syntax import (
    UNIT, Ann, Case, Ctor, EnumCase, Inl, Inlr, Inr, Instr, LetPair, Lft, Magic, Norm,
    OneOverN, Ovee, Prob, Star, Term, TensorPair, Type, Var, format_type,
)
from . import ast as S

BIND, OVEE, TENSOR, PREFIX, ATOM = range(5)


def print_type(ty: Type) -> str:
    return format_type(ty)


def _binder(name: str) -> str:
    return "_" if name.startswith("_") else name


def format_scalar(q: Fraction) -> str:
    """Exact decimal when the denominator divides a power of ten, else ``p/q``."""
    q = Fraction(q)
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if q.denominator == 1:
        return str(q.numerator)
    if d != 1:
        return format_ratio(q)
    places = 0
    while (q * 10**places).denominator != 1:
        places += 1
    digits = str(q.numerator * 10**places // q.denominator).rjust(places + 1, "0")
    return f"{digits[:-places]}.{digits[-places:]}"


def print_term(t: Term | S.Node) -> str:
    """Source text for a core term or a surface node."""
    if isinstance(t, S.Node):
        return _surface(t, BIND)
    return _core(t, BIND)


def _wrap(text: str, level: int, ctx: int) -> str:
    return f"({text})" if level < ctx else text


def _core(t: Term, ctx: int) -> str:
    match t:
        case Var(name=name):
            return name
        case Star():
            return "*"
        case OneOverN(n=n):
            return f"1/{n}"
        case Prob(value=q):
            return format_scalar(q)
        case Ctor(name=name):
            return name
        case Ann(term=a, ty=ty):
            return f"({_core(a, BIND)} : {format_type(ty)})"
        case Inl(term=Star(), right=r) if r == UNIT:
            return "top"
        case Inr(term=Star(), left=lt) if lt == UNIT:
            return "bot"
        case Inl(term=a, right=r):
            ann = f"[{format_type(r)}]" if r is not None else ""
            return _wrap(f"inl{ann} {_core(a, PREFIX)}", PREFIX, ctx)
        case Inr(term=a, left=lt):
            ann = f"[{format_type(lt)}]" if lt is not None else ""
            return _wrap(f"inr{ann} {_core(a, PREFIX)}", PREFIX, ctx)
        case Magic(term=a, ty=ty):
            ann = f"[{format_type(ty)}]" if ty is not None else ""
            return _wrap(f"magic{ann} {_core(a, PREFIX)}", PREFIX, ctx)
        case Lft(term=a):
            return _wrap(f"lft {_core(a, PREFIX)}", PREFIX, ctx)
        case Norm(term=a):
            return _wrap(f"norm {_core(a, PREFIX)}", PREFIX, ctx)
        case Inlr(left=a, right=b):
            return f"inlr({_core(a, BIND)}, {_core(b, BIND)})"
        case Instr(var=x, test=p, arg=a):
            return f"instr[\\{_binder(x)} -> {_core(p, BIND)}]({_core(a, BIND)})"
        case TensorPair(left=a, right=b):
            return _wrap(f"{_core(a, PREFIX)} (x) {_core(b, TENSOR)}", TENSOR, ctx)
        case Ovee(left=a, right=b):
            return _wrap(f"{_core(a, TENSOR)} (+) {_core(b, OVEE)}", OVEE, ctx)
        case LetPair(x=x, y=y, bound=s, body=b):
            text = f"let {_binder(x)} (x) {_binder(y)} = {_core(s, BIND)} in {_core(b, BIND)}"
            return _wrap(text, BIND, ctx)
        case Case(scrutinee=r, x=x, left=a, y=y, right=b):
            text = (
                f"case {_core(r, BIND)} of inl {_binder(x)} -> {_core(a, OVEE)}"
                f" | inr {_binder(y)} -> {_core(b, BIND)}"
            )
            return _wrap(text, BIND, ctx)
        case EnumCase(scrutinee=r, arms=arms):
            parts = [
                f"{c} -> {_core(b, OVEE if k < len(arms) - 1 else BIND)}"
                for k, (c, b) in enumerate(arms)
            ]
            return _wrap(f"case {_core(r, BIND)} of " + " | ".join(parts), BIND, ctx)
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------- surface


def _pred(p: S.Pred) -> str:
    match p:
        case S.PLam(params=params, body=body):
            if len(params) == 1:
                head = _binder(params[0])
            else:
                head = "(" + " (x) ".join(_binder(x) for x in params) + ")"
            return f"\\{head} -> {_surface(body, BIND)}"
        case S.PName(name=name):
            return name
        case S.PCompose(outer=o, inner=i):
            inner = _pred(i)
            if isinstance(i, S.PLam):
                inner = f"({inner})"
            outer = _pred(o)
            if isinstance(o, (S.PLam, S.PCompose)):
                outer = f"({outer})"
            return f"{outer} . {inner}"
        case S.PKeyword(name=name):
            return name
        case S.PConst(term=t):
            return _surface(t, ATOM)
    raise TypeError(f"not a predicate: {p!r}")


def _pred_arg(p: S.Pred) -> str:
    text = _pred(p)
    return f"({text})" if isinstance(p, S.PLam) else text


def _opt(ty: Type | None) -> str:
    return f"[{format_type(ty)}]" if ty is not None else ""


def _surface(t: S.Node, ctx: int) -> str:
    s = _surface
    match t:
        case S.SVar(name=name):
            return name
        case S.SStar():
            return "*"
        case S.SScalar(value=v, text=text):
            return text or format_scalar(v)
        case S.STop():
            return "top"
        case S.SBot():
            return "bot"
        case S.SFail(ty=ty):
            return f"fail{_opt(ty)}"
        case S.SNum(n=n, i=i):
            return f"num[{n}; {i}]"
        case S.SCall(name=name, args=args):
            return f"{name}(" + ", ".join(s(a, BIND) for a in args) + ")"
        case S.SAnn(term=a, ty=ty):
            return f"({s(a, BIND)} : {format_type(ty)})"
        case S.SInlr(left=a, right=b):
            return f"inlr({s(a, BIND)}, {s(b, BIND)})"
        case S.SInstr(pred=p, arg=a):
            return f"instr[{_pred(p)}]({s(a, BIND)})"
        case S.SAssert(pred=p, arg=a):
            return f"assert[{_pred(p)}]({s(a, BIND)})"
        case S.SInl(term=a, ty=ty) | S.SInr(term=a, ty=ty) | S.SMagic(term=a, ty=ty):
            kw = {S.SInl: "inl", S.SInr: "inr", S.SMagic: "magic"}[type(t)]
            return _wrap(f"{kw}{_opt(ty)} {s(a, PREFIX)}", PREFIX, ctx)
        case S.SLft() | S.SNorm() | S.SReturn() | S.SDom() | S.SKer() | S.SInlTest() \
                | S.SInrTest() | S.SFst() | S.SSnd():
            kw = {
                S.SLft: "lft", S.SNorm: "norm", S.SReturn: "return", S.SDom: "dom",
                S.SKer: "ker", S.SInlTest: "inl?", S.SInrTest: "inr?", S.SFst: "fst",
                S.SSnd: "snd",
            }[type(t)]
            return _wrap(f"{kw} {s(t.term, PREFIX)}", PREFIX, ctx)
        case S.SInj(n=n, i=i, term=a):
            return _wrap(f"inj[{n}; {i}] {s(a, PREFIX)}", PREFIX, ctx)
        case S.STest(n=n, i=i, term=a):
            return _wrap(f"test[{n}; {i}] {s(a, PREFIX)}", PREFIX, ctx)
        case S.SNabla(n=n, term=a):
            return _wrap(f"nabla[{n}] {s(a, PREFIX)}", PREFIX, ctx)
        case S.SIdx(n=n, term=a):
            return _wrap(f"idx[{n}] {s(a, PREFIX)}", PREFIX, ctx)
        case S.SProj(n=n, indices=ix, term=a):
            return _wrap(f"proj[{n}; {', '.join(map(str, ix))}] {s(a, PREFIX)}", PREFIX, ctx)
        case S.SOrtho(term=a):
            return f"{s(a, PREFIX)}^"
        case S.SPair(left=a, right=b):
            return _wrap(f"{s(a, PREFIX)} (x) {s(b, TENSOR)}", TENSOR, ctx)
        case S.SAnd(left=a, right=b):
            # '&' sits between '(+)' and '(x)'; print it with full parentheses
            return f"({s(a, TENSOR)} & {s(b, TENSOR)})"
        case S.SOvee(left=a, right=b):
            return _wrap(f"{s(a, TENSOR)} (+) {s(b, OVEE)}", OVEE, ctx)
        case S.SBind(bound=a, fn=f):
            return f"({s(a, OVEE)} >>= {_pred_arg(f)})"
        case S.SCondition(state=a, pred=p):
            return f"({s(a, OVEE)} | {_pred_arg(p)})"
        case S.SLetPair(x=x, y=y, bound=b, body=body):
            text = f"let {_binder(x)} (x) {_binder(y)} = {s(b, BIND)} in {s(body, BIND)}"
            return _wrap(text, BIND, ctx)
        case S.SLet(name=x, bound=b, body=body):
            return _wrap(f"let {x} = {s(b, BIND)} in {s(body, BIND)}", BIND, ctx)
        case S.SLetFun(name=f, params=ps, fun_body=fb, body=body):
            text = f"let {f}({', '.join(ps)}) = {s(fb, BIND)} in {s(body, BIND)}"
            return _wrap(text, BIND, ctx)
        case S.SDo(x=x, bound=b, body=body):
            return _wrap(f"do {_binder(x)} <- {s(b, BIND)}; {s(body, BIND)}", BIND, ctx)
        case S.SCase(scrutinee=r, x=x, left=a, y=y, right=b):
            text = (
                f"case {s(r, BIND)} of inl {_binder(x)} -> {s(a, OVEE)}"
                f" | inr {_binder(y)} -> {s(b, BIND)}"
            )
            return _wrap(text, BIND, ctx)
        case S.SEnumCase(scrutinee=r, arms=arms):
            parts = [
                f"{c} -> {s(b, OVEE if k < len(arms) - 1 else BIND)}"
                for k, (c, b) in enumerate(arms)
            ]
            return _wrap(f"case {s(r, BIND)} of " + " | ".join(parts), BIND, ctx)
        case S.SMeasure(arms=arms):
            parts = [
                f"{s(p, OVEE)} -> {s(b, OVEE if k < len(arms) - 1 else BIND)}"
                for k, (p, b) in enumerate(arms)
            ]
            return _wrap("measure " + " | ".join(parts), BIND, ctx)
        case S.SIf(test=p, then=a, orelse=b):
            return _wrap(f"if {s(p, BIND)} then {s(a, BIND)} else {s(b, BIND)}", BIND, ctx)
    raise TypeError(f"not a surface term: {t!r}")


def print_program(prog: S.SourceProgram) -> str:
    lines = []
    for item in prog.items:
        match item:
            case S.TypeDecl(name=name, constructors=cs):
                lines.append(f"type {name} = " + " | ".join(cs))
            case S.Def(name=name, params=ps, ty=ty, body=body):
                head = name
                if ps:
                    head += "(" + ", ".join(f"{p.name} : {format_type(p.ty)}" for p in ps) + ")"
                lines.append(f"def {head} : {format_type(ty)} = {_surface(body, BIND)}")
            case S.QueryDecl(kind=kind, term=term, pred=p, marginal=m):
                text = f"query {kind} {_surface(term, OVEE)}"
                if p is not None:
                    text += f" given {_pred(p)}"
                if m is not None:
                    text += f" marginal {m}"
                lines.append(text)
    return "\n".join(lines) + ("\n" if lines else "")


__all__ = ["format_scalar", "print_program", "print_term", "print_type"]
