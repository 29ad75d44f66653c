"""Claims about generated terms and their semantic verdicts.

A claim is a small logical formula over judgements (``s = t``, ``s <= t``,
``t`` is defined) that is decided with the exhaustive semantic oracle.
Partial equalities use definedness transfer: either both sides are defined
and equal, or neither side is defined.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

from ..semantics import Dist, EvaluationError, denote, environments
from ..syntax import Context, Term, Type, free_vars
from ..typecheck import SideConditionFailed, TypeCheckError, check_term


class Verdict(NamedTuple):
    ok: bool
    kind: str = "ok"
    detail: str = ""
    env: str = ""


OK = Verdict(True)
VACUOUS = Verdict(True, "vacuous")


def _typing(ctx: Context, t: Term, ty: Type | None) -> Verdict:
    try:
        check_term(ctx, t, ty)
    except SideConditionFailed as e:
        return Verdict(False, "undefined", f"{t}: {e}")
    except TypeCheckError as e:
        return Verdict(False, "ill-typed", f"{t}: {e}")
    return OK


def show_env(env: dict) -> str:
    if not env:
        return "{}"
    return "{" + ", ".join(f"{k} = {v}" for k, v in sorted(env.items())) + "}"


def _show_dist(d: dict) -> str:
    return str(Dist(d))


def _tables(ctx: Context, *terms: Term):
    names: frozenset[str] = frozenset()
    for t in terms:
        names |= free_vars(t)
    envs = environments(ctx.restrict(names))
    return envs, [[denote(t, env) for env in envs] for t in terms]


def _inl_leq(a: dict, b: dict) -> bool:
    return all(w <= b.get(v, Fraction(0)) for v, w in a.items() if v.tag == "inl")


class Claim:
    def verdict(self) -> Verdict:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass
class Equal(Claim):
    ctx: Context
    lhs: Term
    rhs: Term
    ty: Type | None = None
    partial: bool = False

    def verdict(self) -> Verdict:
        dl, dr = _typing(self.ctx, self.lhs, self.ty), _typing(self.ctx, self.rhs, self.ty)
        for d in (dl, dr):
            if d.kind == "ill-typed":
                return d
        if self.partial:
            if dl.ok != dr.ok:
                which = "left" if dl.ok else "right"
                return Verdict(False, "definedness", f"only the {which} side is defined: "
                               + (dr.detail or dl.detail))
            if not dl.ok:
                return VACUOUS
        else:
            for d in (dl, dr):
                if not d.ok:
                    return d
        envs, (tl, tr) = _tables(self.ctx, self.lhs, self.rhs)
        for env, a, b in zip(envs, tl, tr):
            if a != b:
                return Verdict(False, "unequal", f"{_show_dist(a)} vs {_show_dist(b)}", show_env(env))
        return OK


@dataclass
class Differ(Claim):
    """Both sides are defined and denote different distributions somewhere."""

    ctx: Context
    lhs: Term
    rhs: Term
    ty: Type | None = None

    def verdict(self) -> Verdict:
        for t in (self.lhs, self.rhs):
            d = _typing(self.ctx, t, self.ty)
            if not d.ok:
                return d
        _, (tl, tr) = _tables(self.ctx, self.lhs, self.rhs)
        if tl == tr:
            return Verdict(False, "equal", f"{self.lhs} and {self.rhs} agree everywhere")
        return OK


@dataclass
class Leq(Claim):
    ctx: Context
    lhs: Term
    rhs: Term
    ty: Type | None = None

    def verdict(self) -> Verdict:
        for t in (self.lhs, self.rhs):
            d = _typing(self.ctx, t, self.ty)
            if not d.ok:
                return d
        envs, (tl, tr) = _tables(self.ctx, self.lhs, self.rhs)
        for env, a, b in zip(envs, tl, tr):
            if not _inl_leq(a, b):
                return Verdict(False, "not-below", f"{_show_dist(a)} exceeds {_show_dist(b)}",
                               show_env(env))
        return OK


@dataclass
class Defined(Claim):
    ctx: Context
    term: Term
    ty: Type | None = None

    def verdict(self) -> Verdict:
        return _typing(self.ctx, self.term, self.ty)


@dataclass
class Undefined(Claim):
    ctx: Context
    term: Term
    ty: Type | None = None

    def verdict(self) -> Verdict:
        d = _typing(self.ctx, self.term, self.ty)
        if d.kind == "ill-typed":
            return d
        if d.ok:
            return Verdict(False, "defined", f"{self.term} is defined")
        return OK


@dataclass
class Fact(Claim):
    """A plain boolean fact computed outside the type theory."""

    holds: bool
    text: str = ""

    def verdict(self) -> Verdict:
        return OK if self.holds else Verdict(False, "fact", self.text)


@dataclass
class All(Claim):
    claims: tuple[Claim, ...]

    def __init__(self, *claims: Claim):
        self.claims = claims

    def verdict(self) -> Verdict:
        vacuous = False
        for c in self.claims:
            v = c.verdict()
            if not v.ok:
                return v
            vacuous = vacuous or v.kind == "vacuous"
        return VACUOUS if vacuous else OK


@dataclass
class Implies(Claim):
    hyp: Claim
    concl: Claim

    def verdict(self) -> Verdict:
        h = self.hyp.verdict()
        if h.kind == "ill-typed":
            return h
        if not h.ok:
            return VACUOUS
        return self.concl.verdict()


@dataclass
class Iff(Claim):
    left: Claim
    right: Claim

    def verdict(self) -> Verdict:
        a, b = self.left.verdict(), self.right.verdict()
        for v in (a, b):
            if v.kind == "ill-typed":
                return v
        if a.ok != b.ok:
            bad = b if a.ok else a
            return Verdict(False, "iff", bad.detail or "sides disagree", bad.env)
        return OK


@dataclass
class Check(Claim):
    """An arbitrary check returning a verdict."""

    fn: Callable[[], Verdict]

    def verdict(self) -> Verdict:
        return self.fn()


def decide(claim: Claim) -> Verdict:
    """Evaluate a claim, turning unexpected evaluation errors into verdicts."""
    try:
        return claim.verdict()
    except (EvaluationError, ArithmeticError) as e:
        return Verdict(False, "error", f"{type(e).__name__}: {e}")


__all__ = [
    "All", "Check", "Claim", "show_env", "Defined", "Differ", "Equal", "Fact", "Iff", "Implies", "Leq", "OK",
    "Undefined", "VACUOUS", "Verdict", "decide",
]
