"""The law suite: named algebraic laws checked on generated instances.

Each law samples an :class:`Instance` (a context plus named parts) and
turns it into a :class:`~comet.laws.claims.Claim`.  Builders from
:mod:`comet.derived` are looked up through the module at claim time, so
replacing a builder (say ``derived.andthen``) changes every law that uses
it.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

from .. import derived
from ..syntax import (
    BOOL, UNIT, Case, Context, Inl, Inlr, Inr, Instr, LetPair, Lft, Norm, OneOverN, Ovee, Prob,
    Star, Sum, Tensor, Term, TensorPair, Type, Var, bold, copower, free_vars, fresh_name,
    subterms, substitute, substitute_many, term_size,
)
from ..typecheck import well_typed
from .claims import (
    All, Check, Claim, Defined, Differ, Equal, Fact, Iff, Implies, Leq, Undefined, Verdict,
    decide, show_env,
)
from .gen import Gen, GenConfig, _lit
from ..semantics import Dist, denote, environments

W = derived.WILD


# ---------------------------------------------------------------- instances


@dataclass(frozen=True)
class Part:
    """A generated subterm with the context and type it was generated at."""

    term: Term
    ty: Type
    ctx: Context


@dataclass
class Instance:
    ctx: Context
    parts: dict[str, Part]
    build: Callable[..., Claim]

    def claim(self) -> Claim:
        return self.build(**{k: p.term for k, p in self.parts.items()})

    @property
    def size(self) -> int:
        return sum(term_size(p.term) for p in self.parts.values())

    def with_part(self, name: str, term: Term) -> "Instance":
        parts = dict(self.parts)
        parts[name] = replace(parts[name], term=term)
        return Instance(self.ctx, parts, self.build)


@dataclass(frozen=True)
class Law:
    name: str
    statement: str
    sample: Callable[[Gen], Instance]


LAWS: dict[str, Law] = {}


def law(name: str, statement: str):
    def register(fn: Callable[[Gen], Instance]) -> Callable[[Gen], Instance]:
        if name in LAWS:
            raise ValueError(f"law {name} registered twice")
        LAWS[name] = Law(name, statement, fn)
        return fn
    return register


def inst(ctx: Context, build: Callable[..., Claim], **parts: tuple[Term, Type] | tuple[Term, Type, Context]) -> Instance:
    out = {}
    for k, p in parts.items():
        term, ty, *rest = p
        out[k] = Part(term, ty, rest[0] if rest else ctx)
    return Instance(ctx, out, build)


# ---------------------------------------------------------------- helpers


def P(a: Type) -> Type:
    """The partial type ``a + 1``."""
    return Sum(a, UNIT)


def weighted(q: Term, s: Term, a: Type | None = None) -> Term:
    """``do _ <- q; s``."""
    return Case(q, W, s, W, derived.fail(a))


def proj1(t: Term, a: Type | None = None, b: Type | None = None) -> Term:
    return Case(t, "v", derived.ret(Var("v")), W, derived.fail(a))


def proj2(t: Term, a: Type | None = None, b: Type | None = None) -> Term:
    return Case(t, W, derived.fail(b), "v", derived.ret(Var("v")))


def codiag(t: Term) -> Term:
    return Case(t, "v", Var("v"), "w", Var("w"))


def ctx_union(*ctxs: Context) -> Context:
    entries: list = []
    for c in ctxs:
        entries.extend(c.entries)
    return Context(tuple(entries))


def one(name: str, ty: Type) -> Context:
    return Context(((name, ty),))


def disjoint_pair(g: Gen, avail: dict, a: Type) -> tuple[Term, Term]:
    """Two substates, scaled to be summable most of the time."""
    s, t = g.term(P(a), avail), g.term(P(a), avail)
    if g.chance(0.7):
        q1, q2, _ = g.ratios(3)
        s, t = weighted(_lit(q1), s, a), weighted(_lit(q2), t, a)
    return s, t


def disjoint_preds(g: Gen, avail: dict) -> tuple[Term, Term]:
    p, q = g.term(BOOL, avail), g.term(BOOL, avail)
    r = g.rng.random()
    if r < 0.4:
        q1, q2, _ = g.ratios(3)
        return weighted(_lit(q1), p), weighted(_lit(q2), q)
    if r < 0.6:
        return p, derived.andthen(derived.ortho(p), q)
    return p, q


def below(g: Gen, t: Term, avail: dict, a: Type) -> Term:
    """A substate below ``t``."""
    r = g.rng.random()
    if r < 0.15:
        return derived.fail(a)
    if r < 0.25:
        return t
    if r < 0.6:
        return weighted(g.scalar(), t, a)
    x = g.fresh("k")
    return derived.do(x, t, derived.assert_(x, g.term(BOOL, {x: a}), Var(x), a), a)


def zero_state(g: Gen, avail: dict, a: Type) -> Term:
    """A substate that is often equal to fail."""
    r = g.rng.random()
    if r < 0.3:
        return derived.fail(a)
    if r < 0.5:
        return weighted(derived.bot(), g.term(P(a), avail), a)
    if r < 0.6:
        x = g.fresh("k")
        return derived.assert_(x, derived.bot(), g.term(a, avail), a)
    return g.term(P(a), avail)


def numeral_biased(g: Gen, n: int, avail: dict) -> Term:
    r = g.rng.random()
    i = g.rng.randint(1, n)
    if r < 0.3:
        return derived.numeral(i, n)
    if r < 0.5:
        return derived.cond(g.term(BOOL, avail), derived.numeral(i, n), derived.numeral(i, n))
    return g.term(bold(n), avail)


def scalar_term(q: Fraction, g: Gen) -> Term:
    """A closed scalar denoting ``q`` in one of several syntactic forms."""
    q = Fraction(q)
    r = g.rng.random()
    if r < 0.4 or q in (0, 1):
        return _lit(q)
    if r < 0.7:
        k = g.rng.randint(1, max(1, 20 // q.denominator))
        return derived.ratio(q.numerator * k, q.denominator * k)
    return Prob(q)


def subject_ctx(g: Gen, name: str = "x", max_size: int | None = None) -> Context:
    return one(name, g.type(max_size))


# ================================================================ partial sums


@law("ovee.zero", "t (+) fail = t and fail (+) t = t")
def _ovee_zero(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    return inst(ctx, lambda t: All(Equal(ctx, Ovee(t, derived.fail(a)), t, P(a)),
                                   Equal(ctx, Ovee(derived.fail(a), t), t, P(a))),
                t=(g.term(P(a), dict(ctx)), P(a)))


@law("ovee.commutative", "s (+) t is defined iff t (+) s is, and then they are equal")
def _ovee_comm(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    s, t = disjoint_pair(g, dict(ctx), a)
    return inst(ctx, lambda s, t: Equal(ctx, Ovee(s, t), Ovee(t, s), P(a), partial=True),
                s=(s, P(a)), t=(t, P(a)))


@law("ovee.associative", "(r (+) s) (+) t is defined iff r (+) (s (+) t) is, and then they are equal")
def _ovee_assoc(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    avail = dict(ctx)
    parts = [g.term(P(a), avail) for _ in range(3)]
    if g.chance(0.7):
        qs = g.ratios(4)[:3] if g.chance(0.6) else [g.ratio() for _ in range(3)]
        parts = [weighted(_lit(q), p, a) for q, p in zip(qs, parts)]
    r, s, t = parts
    return inst(ctx, lambda r, s, t: Equal(ctx, Ovee(Ovee(r, s), t), Ovee(r, Ovee(s, t)), P(a), partial=True),
                r=(r, P(a)), s=(s, P(a)), t=(t, P(a)))


@law("ovee.bound", "(b >>= proj1) (+) (b >>= proj2) = do x <- b; return nabla(x)")
def _ovee_bound(g: Gen) -> Instance:
    ctx, a = g.context(), g.type(2)
    bt = P(Sum(a, a))

    def build(b):
        lhs = Ovee(derived.do("z", b, proj1(Var("z"), a), a), derived.do("z", b, proj2(Var("z"), a, a), a))
        rhs = derived.do("z", b, derived.ret(codiag(Var("z"))), a)
        return Equal(ctx, lhs, rhs, P(a))
    return inst(ctx, build, b=(g.term(bt, dict(ctx)), bt))


@law("ovee.bound_predicates", "for b : 3, proj1(b) (+) proj2(b) = proj12(b)")
def _ovee_bound_preds(g: Gen) -> Instance:
    ctx = g.context()

    def build(b):
        tests = [derived.in_test(i, b, 3) for i in (1, 2)]
        lhs = Ovee(derived.in_test(1, b, 3), derived.in_test(2, b, 3))
        rhs = derived.ncase(b, 3, [(W, derived.top()), (W, derived.top()), (W, derived.bot())])
        return All(Equal(ctx, lhs, rhs, BOOL), *(Defined(ctx, t, BOOL) for t in tests))
    return inst(ctx, build, b=(g.term(bold(3), dict(ctx)), bold(3)))


@law("ovee.scalar_split", "(do _ <- q; s) (+) (do _ <- q^; s) = s")
def _ovee_split(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()

    def build(q, s):
        return Equal(ctx, Ovee(weighted(q, s, a), weighted(derived.ortho(q), s, a)), s, P(a))
    return inst(ctx, build, q=(g.scalar(), BOOL, Context(())), s=(g.term(P(a), dict(ctx)), P(a)))


@law("ovee.difference", "r (+) t = s implies r <= s")
def _ovee_difference(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    r, t = disjoint_pair(g, dict(ctx), a)
    s = Ovee(t, r) if g.chance(0.6) else g.term(P(a), dict(ctx))
    return inst(ctx, lambda r, s, t: Implies(Equal(ctx, Ovee(r, t), s, P(a)), Leq(ctx, r, s, P(a))),
                r=(r, P(a)), s=(s, P(a)), t=(t, P(a)))


@law("ovee.cancellation", "s (+) t = t implies s = fail")
def _ovee_cancel(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    avail = dict(ctx)
    s, t = zero_state(g, avail, a), g.term(P(a), avail)
    return inst(ctx, lambda s, t: Implies(Equal(ctx, Ovee(s, t), t, P(a)), Equal(ctx, s, derived.fail(a), P(a))),
                s=(s, P(a)), t=(t, P(a)))


@law("ovee.positivity", "s (+) t = fail implies s = fail and t = fail")
def _ovee_pos(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    avail = dict(ctx)
    s, t = zero_state(g, avail, a), zero_state(g, avail, a)
    f = derived.fail(a)
    return inst(ctx, lambda s, t: Implies(Equal(ctx, Ovee(s, t), f, P(a)),
                                          All(Equal(ctx, s, f, P(a)), Equal(ctx, t, f, P(a)))),
                s=(s, P(a)), t=(t, P(a)))


@law("ovee.case", "case r of inl x -> s (+) t | inr y -> s' (+) t' = (case r of .. s | .. s') (+) (case r of .. t | .. t')")
def _ovee_case(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    delta = g.context(1, names=("d1",))
    ab, c = g.sum_type(), g.type(3)
    ctx = ctx_union(gam, delta)
    cx, cy = delta.bind("a", ab.left), delta.bind("b", ab.right)
    s, t = disjoint_pair(g, dict(cx), c)
    s2, t2 = disjoint_pair(g, dict(cy), c)

    def build(r, s, t, s2, t2):
        hyp = All(Defined(cx, Ovee(s, t), P(c)), Defined(cy, Ovee(s2, t2), P(c)))
        lhs = Case(r, "a", Ovee(s, t), "b", Ovee(s2, t2))
        rhs = Ovee(Case(r, "a", s, "b", s2), Case(r, "a", t, "b", t2))
        return Implies(hyp, Equal(ctx, lhs, rhs, P(c)))
    return inst(ctx, build, r=(g.term(ab, dict(gam)), ab, gam), s=(s, P(c), cx), t=(t, P(c), cx),
                s2=(s2, P(c), cy), t2=(t2, P(c), cy))


@law("ovee.do", "do x <- r; (s (+) t) = (do x <- r; s) (+) (do x <- r; t)")
def _ovee_do(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    delta = g.context(1, names=("d1",))
    a, b = g.type(3), g.type(3)
    ctx = ctx_union(gam, delta)
    cx = delta.bind("a", a)
    s, t = disjoint_pair(g, dict(cx), b)

    def build(r, s, t):
        lhs = derived.do("a", r, Ovee(s, t), b)
        rhs = Ovee(derived.do("a", r, s, b), derived.do("a", r, t, b))
        return Implies(Defined(cx, Ovee(s, t), P(b)), Equal(ctx, lhs, rhs, P(b)))
    return inst(ctx, build, r=(g.term(P(a), dict(gam)), P(a), gam), s=(s, P(b), cx), t=(t, P(b), cx))


@law("ovee.dom", "dom(s (+) t) = dom s (+) dom t")
def _ovee_dom(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    s, t = disjoint_pair(g, dict(ctx), a)
    return inst(ctx, lambda s, t: Equal(ctx, derived.dom(Ovee(s, t)),
                                        Ovee(derived.dom(s), derived.dom(t)), BOOL, partial=True),
                s=(s, P(a)), t=(t, P(a)))


@law("ovee.projection_sum", "proj_{i1..ik}(t) = proj_{i1}(t) (+) ... (+) proj_{ik}(t)")
def _proj_sum(g: Gen) -> Instance:
    ctx = g.context()
    n = g.rng.randint(2, 3)
    a = g.type(4 // n)
    ix = sorted(g.rng.sample(range(1, n + 1), g.rng.randint(2, n)))
    ty = copower(n, a)

    def build(t):
        lhs = derived.proj(t, n, ix, a)
        rhs = derived.ovee_all([derived.proj(t, n, [i], a) for i in ix])
        return Equal(ctx, lhs, rhs, P(a))
    return inst(ctx, build, t=(g.term(ty, dict(ctx)), ty))


# ================================================================ ordering


@law("leq.summand", "if s (+) t is defined then s <= s (+) t and t <= s (+) t")
def _leq_summand(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    s, t = disjoint_pair(g, dict(ctx), a)
    return inst(ctx, lambda s, t: Implies(Defined(ctx, Ovee(s, t), P(a)),
                                          All(Leq(ctx, s, Ovee(s, t), P(a)), Leq(ctx, t, Ovee(s, t), P(a)))),
                s=(s, P(a)), t=(t, P(a)))


@law("leq.reflexive", "t <= t")
def _leq_refl(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    return inst(ctx, lambda t: Leq(ctx, t, t, P(a)), t=(g.term(P(a), dict(ctx)), P(a)))


@law("leq.least", "fail <= t")
def _leq_least(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    return inst(ctx, lambda t: Leq(ctx, derived.fail(a), t, P(a)), t=(g.term(P(a), dict(ctx)), P(a)))


@law("leq.transitive", "r <= s and s <= t imply r <= t")
def _leq_trans(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    avail = dict(ctx)
    t = g.term(P(a), avail)
    s = below(g, t, avail, a)
    r = below(g, s, avail, a)
    return inst(ctx, lambda r, s, t: Implies(All(Leq(ctx, r, s, P(a)), Leq(ctx, s, t, P(a))), Leq(ctx, r, t, P(a))),
                r=(r, P(a)), s=(s, P(a)), t=(t, P(a)))


@law("leq.monotone", "r <= s and s (+) t defined imply r (+) t <= s (+) t")
def _leq_mono(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    avail = dict(ctx)
    s, t = disjoint_pair(g, avail, a)
    r = below(g, s, avail, a)

    def build(r, s, t):
        hyp = All(Leq(ctx, r, s, P(a)), Defined(ctx, Ovee(s, t), P(a)))
        return Implies(hyp, All(Defined(ctx, Ovee(r, t), P(a)), Leq(ctx, Ovee(r, t), Ovee(s, t), P(a))))
    return inst(ctx, build, r=(r, P(a)), s=(s, P(a)), t=(t, P(a)))


@law("leq.antisymmetric", "s <= t and t <= s imply s = t")
def _leq_antisym(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    avail = dict(ctx)
    s = g.term(P(a), avail)
    r = g.rng.random()
    if r < 0.3:
        t = Ovee(s, derived.fail(a))
    elif r < 0.6:
        t = derived.do("k", s, derived.ret(Var("k")), a)
    else:
        t = g.term(P(a), avail)
    return inst(ctx, lambda s, t: Implies(All(Leq(ctx, s, t, P(a)), Leq(ctx, t, s, P(a))), Equal(ctx, s, t, P(a))),
                s=(s, P(a)), t=(t, P(a)))


# ================================================================ effect algebra


@law("effect.orthosupplement", "p (+) p^ = top")
def _eff_ortho(g: Gen) -> Instance:
    ctx = g.context()
    return inst(ctx, lambda p: Equal(ctx, Ovee(p, derived.ortho(p)), derived.top(), BOOL),
                p=(g.term(BOOL, dict(ctx)), BOOL))


@law("effect.unique_complement", "p (+) q = top implies q = p^")
def _eff_unique(g: Gen) -> Instance:
    ctx = g.context()
    avail = dict(ctx)
    if g.chance(0.6):
        p, q = g.ntest(2, avail)
    else:
        p, q = g.term(BOOL, avail), g.term(BOOL, avail)
    return inst(ctx, lambda p, q: Implies(Equal(ctx, Ovee(p, q), derived.top(), BOOL),
                                          Equal(ctx, q, derived.ortho(p), BOOL)),
                p=(p, BOOL), q=(q, BOOL))


@law("effect.zero_one", "p (+) top defined implies p = bot")
def _eff_zero_one(g: Gen) -> Instance:
    ctx = g.context()
    return inst(ctx, lambda p: Implies(Defined(ctx, Ovee(p, derived.top()), BOOL),
                                       Equal(ctx, p, derived.bot(), BOOL)),
                p=(g.zero_biased_predicate(dict(ctx)), BOOL))


@law("effect.orthogonality", "p (+) q is defined iff p <= q^")
def _eff_orth(g: Gen) -> Instance:
    ctx = g.context()
    p, q = disjoint_preds(g, dict(ctx))
    return inst(ctx, lambda p, q: Iff(Defined(ctx, Ovee(p, q), BOOL), Leq(ctx, p, derived.ortho(q), BOOL)),
                p=(p, BOOL), q=(q, BOOL))


@law("effect.cancellation", "p (+) q = p (+) r implies q = r")
def _eff_cancel(g: Gen) -> Instance:
    ctx = g.context()
    avail = dict(ctx)
    p, q = disjoint_preds(g, avail)
    x = g.rng.random()
    if x < 0.3:
        r = Ovee(q, derived.bot())
    elif x < 0.5:
        r = derived.andthen(q, derived.top())
    else:
        r = g.term(BOOL, avail)
    return inst(ctx, lambda p, q, r: Implies(Equal(ctx, Ovee(p, q), Ovee(p, r), BOOL), Equal(ctx, q, r, BOOL)),
                p=(p, BOOL), q=(q, BOOL), r=(r, BOOL))


@law("effect.positivity", "p (+) q = bot implies p = bot and q = bot")
def _eff_pos(g: Gen) -> Instance:
    ctx = g.context()
    avail = dict(ctx)
    bot = derived.bot()
    return inst(ctx, lambda p, q: Implies(Equal(ctx, Ovee(p, q), bot, BOOL),
                                          All(Equal(ctx, p, bot, BOOL), Equal(ctx, q, bot, BOOL))),
                p=(g.zero_biased_predicate(avail), BOOL), q=(g.zero_biased_predicate(avail), BOOL))


@law("effect.top_greatest", "p <= top")
def _eff_top(g: Gen) -> Instance:
    ctx = g.context()
    return inst(ctx, lambda p: Leq(ctx, p, derived.top(), BOOL), p=(g.term(BOOL, dict(ctx)), BOOL))


@law("effect.antitone", "p <= q implies q^ <= p^")
def _eff_antitone(g: Gen) -> Instance:
    ctx = g.context()
    avail = dict(ctx)
    q = g.term(BOOL, avail)
    x = g.rng.random()
    if x < 0.35:
        p = derived.andthen(q, g.term(BOOL, avail))
    elif x < 0.5:
        p = derived.andthen(g.term(BOOL, avail), q)
    elif x < 0.6:
        p = derived.bot()
    else:
        p = g.term(BOOL, avail)
    return inst(ctx, lambda p, q: Implies(Leq(ctx, p, q, BOOL), Leq(ctx, derived.ortho(q), derived.ortho(p), BOOL)),
                p=(p, BOOL), q=(q, BOOL))


@law("effect.involution", "p^^ = p")
def _eff_invol(g: Gen) -> Instance:
    ctx = g.context()
    return inst(ctx, lambda p: Equal(ctx, derived.ortho(derived.ortho(p)), p, BOOL),
                p=(g.term(BOOL, dict(ctx)), BOOL))


# ================================================================ do notation


def _monad_parts(g: Gen):
    gam = g.context(1, names=("g1",))
    delta = g.context(1, names=("d1",))
    theta = g.context(1, names=("h1",))
    a, b, c = g.type(3), g.type(3), g.type(3)
    return gam, delta, theta, a, b, c


@law("do.return", "do x <- return r; s = s[x := r]")
def _do_return(g: Gen) -> Instance:
    gam, delta, _, a, b, _ = _monad_parts(g)
    ctx = ctx_union(gam, delta)
    cx = delta.bind("a", a)
    return inst(ctx, lambda r, s: Equal(ctx, derived.do("a", derived.ret(r), s, b), substitute(s, "a", r), P(b)),
                r=(g.term(a, dict(gam)), a, gam), s=(g.term(P(b), dict(cx)), P(b), cx))


@law("do.fail", "do x <- fail; s = fail")
def _do_fail(g: Gen) -> Instance:
    _, delta, _, a, b, _ = _monad_parts(g)
    cx = delta.bind("a", a)
    return inst(delta, lambda s: Equal(delta, derived.do("a", derived.fail(a), s, b), derived.fail(b), P(b)),
                s=(g.term(P(b), dict(cx)), P(b), cx))


@law("do.right_unit", "do x <- r; return x = r")
def _do_unit(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    return inst(ctx, lambda r: Equal(ctx, derived.do("k", r, derived.ret(Var("k")), a), r, P(a)),
                r=(g.term(P(a), dict(ctx)), P(a)))


@law("do.fail_body", "do _ <- r; fail = fail")
def _do_fail_body(g: Gen) -> Instance:
    ctx, a, b = g.context(), g.type(), g.type()
    return inst(ctx, lambda r: Equal(ctx, derived.do(W, r, derived.fail(b), b), derived.fail(b), P(b)),
                r=(g.term(P(a), dict(ctx)), P(a)))


@law("do.associative", "do x <- r; (do y <- s; t) = do y <- (do x <- r; s); t")
def _do_assoc(g: Gen) -> Instance:
    gam, delta, theta, a, b, c = _monad_parts(g)
    ctx = ctx_union(gam, delta, theta)
    cs, ct = delta.bind("a", a), theta.bind("b", b)

    def build(r, s, t):
        lhs = derived.do("a", r, derived.do("b", s, t, c), c)
        rhs = derived.do("b", derived.do("a", r, s, b), t, c)
        return Equal(ctx, lhs, rhs, P(c))
    return inst(ctx, build, r=(g.term(P(a), dict(gam)), P(a), gam), s=(g.term(P(b), dict(cs)), P(b), cs),
                t=(g.term(P(c), dict(ct)), P(c), ct))


# ================================================================ kernels


@law("kernel.dom", "dom t = do _ <- t; top")
def _ker_dom(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    return inst(ctx, lambda t: Equal(ctx, derived.dom(t), derived.do(W, t, derived.top(), UNIT), BOOL),
                t=(g.term(P(a), dict(ctx)), P(a)))


@law("kernel.dom_bot", "dom t = bot iff t = fail")
def _ker_bot(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    return inst(ctx, lambda t: Iff(Equal(ctx, derived.dom(t), derived.bot(), BOOL),
                                   Equal(ctx, t, derived.fail(a), P(a))),
                t=(zero_state(g, dict(ctx), a), P(a)))


@law("kernel.dom_do", "dom(do x <- s; t) = do x <- s; dom t")
def _ker_do(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    delta = g.context(1, names=("d1",))
    a, b = g.type(3), g.type(3)
    ctx = ctx_union(gam, delta)
    cx = delta.bind("a", a)
    return inst(ctx, lambda s, t: Equal(ctx, derived.dom(derived.do("a", s, t, b)),
                                        derived.do("a", s, derived.dom(t), UNIT), BOOL),
                s=(g.term(P(a), dict(gam)), P(a), gam), t=(g.term(P(b), dict(cx)), P(b), cx))


@law("kernel.ker_ortho", "ker t = (dom t)^")
def _ker_ortho(g: Gen) -> Instance:
    ctx, a = g.context(), g.type()
    return inst(ctx, lambda t: Equal(ctx, derived.ker(t), derived.ortho(derived.dom(t)), BOOL),
                t=(g.term(P(a), dict(ctx)), P(a)))


@law("finite.point", "for t : n, proj_i(t) = top implies t = i")
def _fin_point(g: Gen) -> Instance:
    ctx = g.context()
    n = g.rng.randint(2, 4)
    i = g.rng.randint(1, n)
    return inst(ctx, lambda t: Implies(Equal(ctx, derived.in_test(i, t, n), derived.top(), BOOL),
                                       Equal(ctx, t, derived.numeral(i, n), bold(n))),
                t=(numeral_biased(g, n, dict(ctx)), bold(n)))


# ================================================================ assert


def _pred_and_arg(g: Gen):
    gam = g.context()
    a = g.type()
    px = one("x", a)
    return gam, a, px, g.term(BOOL, dict(px)), g.term(a, dict(gam))


@law("assert.typed", "assert_p(t) : A + 1")
def _assert_typed(g: Gen) -> Instance:
    gam, a, px, p, t = _pred_and_arg(g)
    return inst(gam, lambda p, t: Defined(gam, derived.assert_("x", p, t, a), P(a)),
                p=(p, BOOL, px), t=(t, a))


@law("assert.below_return", "assert_p(t) <= return t")
def _assert_below(g: Gen) -> Instance:
    gam, a, px, p, t = _pred_and_arg(g)
    return inst(gam, lambda p, t: Leq(gam, derived.assert_("x", p, t, a), derived.ret(t), P(a)),
                p=(p, BOOL, px), t=(t, a))


@law("assert.dom", "dom assert_p(t) = p[x := t]")
def _assert_dom(g: Gen) -> Instance:
    gam, a, px, p, t = _pred_and_arg(g)
    return inst(gam, lambda p, t: Equal(gam, derived.dom(derived.assert_("x", p, t, a)), substitute(p, "x", t), BOOL),
                p=(p, BOOL, px), t=(t, a))


@law("assert.bijection", "x : A |- t <= return x implies t = assert_{dom t}(x)")
def _assert_bij(g: Gen) -> Instance:
    a = g.type()
    ctx = one("x", a)
    r = g.rng.random()
    if r < 0.35:
        t = derived.assert_("x", g.term(BOOL, {"x": a}), Var("x"), a)
    elif r < 0.55:
        t = weighted(g.scalar(), derived.ret(Var("x")), a)
    elif r < 0.7 and isinstance(a, Sum):
        ql, qr = g.term(BOOL, {"x": a.left}), g.term(BOOL, {"x": a.right})
        t = _assert_plus(Var("x"), a, ql, qr)
    else:
        t = g.term(P(a), {"x": a})
    return inst(ctx, lambda t: Implies(Leq(ctx, t, derived.ret(Var("x")), P(a)),
                                       Equal(ctx, t, derived.assert_("x", derived.dom(t), Var("x"), a), P(a))),
                t=(t, P(a)))


def _assert_plus(t: Term, a: Sum, pl: Term, pr: Term) -> Term:
    """Case split of an assert on a sum: pl, pr are predicates in ``x``."""
    left = derived.do("w", derived.assert_("x", pl, Var("y"), a.left), derived.ret(Inl(Var("w"), a.right)), a)
    right = derived.do("w", derived.assert_("x", pr, Var("z"), a.right), derived.ret(Inr(Var("w"), a.left)), a)
    return Case(t, "y", left, "z", right)


@law("assert.scalar", "assert_{\\_ s}(*) = instr_{\\_ s}(*) = s")
def _assert_scalar(g: Gen) -> Instance:
    empty = Context(())
    return inst(empty, lambda s: All(Equal(empty, derived.assert_(W, s, Star(), UNIT), s, BOOL),
                                     Equal(empty, Instr("u", s, Star()), s, BOOL)),
                s=(g.term(BOOL, {}), BOOL))


def _sum_pred_parts(g: Gen):
    gam = g.context(names=("g1", "g2"))
    ab = g.sum_type()
    px = one("x", ab)
    return gam, ab, px, g.term(BOOL, {"x": ab}), g.term(ab, dict(gam))


@law("instr.sum", "instr_p(t) on A + B splits into instruments on A and on B")
def _instr_sum(g: Gen) -> Instance:
    gam, ab, px, p, t = _sum_pred_parts(g)
    a, b = ab.left, ab.right

    def build(p, t):
        pl = substitute(p, "x", Inl(Var("x"), b))
        pr = substitute(p, "x", Inr(Var("x"), a))
        left = Case(Instr("x", pl, Var("y")), "v", Inl(Inl(Var("v"), b), ab), "w", Inr(Inl(Var("w"), b), ab))
        right = Case(Instr("x", pr, Var("z")), "v", Inl(Inr(Var("v"), a), ab), "w", Inr(Inr(Var("w"), a), ab))
        return Equal(gam, Instr("x", p, t), Case(t, "y", left, "z", right), Sum(ab, ab))
    return inst(gam, build, p=(p, BOOL, px), t=(t, ab))


@law("assert.sum", "assert_p(t) on A + B splits into asserts on A and on B")
def _assert_sum(g: Gen) -> Instance:
    gam, ab, px, p, t = _sum_pred_parts(g)
    a, b = ab.left, ab.right

    def build(p, t):
        pl = substitute(p, "x", Inl(Var("x"), b))
        pr = substitute(p, "x", Inr(Var("x"), a))
        return Equal(gam, derived.assert_("x", p, t, ab), _assert_plus(t, ab, pl, pr), P(ab))
    return inst(gam, build, p=(p, BOOL, px), t=(t, ab))


@law("instr.numeral", "instr_{\\x t}(s) = case s of i -> case t[x := i] of j -> in_j(i)")
def _instr_num(g: Gen) -> Instance:
    gam = g.context(names=("g1", "g2"))
    m, n = g.rng.randint(2, 3), g.rng.randint(2, 3)
    px = one("x", bold(m))

    def build(t, s):
        arms = [(W, derived.ncase(substitute(t, "x", derived.numeral(i, m)), n,
                                  [(W, derived.inj(j, n, derived.numeral(i, m), bold(m))) for j in range(1, n + 1)]))
                for i in range(1, m + 1)]
        return Equal(gam, Instr("x", t, s), derived.ncase(s, m, arms), copower(n, bold(m)))
    return inst(gam, build, t=(g.term(bold(n), {"x": bold(m)}), bold(n), px),
                s=(g.term(bold(m), dict(gam)), bold(m)))


@law("assert.numeral", "assert_p(t) = case t of i -> if p[x := i] then return i else fail")
def _assert_num(g: Gen) -> Instance:
    gam = g.context(names=("g1", "g2"))
    n = g.rng.randint(2, 4)
    px = one("x", bold(n))

    def build(p, t):
        arms = [(W, derived.cond(substitute(p, "x", derived.numeral(i, n)),
                                 derived.ret(derived.numeral(i, n)), derived.fail(bold(n))))
                for i in range(1, n + 1)]
        return Equal(gam, derived.assert_("x", p, t, bold(n)), derived.ncase(t, n, arms), P(bold(n)))
    return inst(gam, build, p=(g.term(BOOL, {"x": bold(n)}), BOOL, px), t=(g.term(bold(n), dict(gam)), bold(n)))


# ================================================================ sequential product


@law("and.instr", "instr_{p & q}(x) = case instr_p(x) of inl x -> instr_q(x) | inr y -> inr y")
def _and_instr(g: Gen) -> Instance:
    a = g.type()
    ctx = one("x", a)

    def build(p, q):
        lhs = Instr("x", derived.andthen(p, q), Var("x"))
        rhs = Case(Instr("x", p, Var("x")), "x", Instr("x", q, Var("x")), "y", Inr(Var("y"), a))
        return Equal(ctx, lhs, rhs, Sum(a, a))
    return inst(ctx, build, p=(g.term(BOOL, dict(ctx)), BOOL), q=(g.term(BOOL, dict(ctx)), BOOL))


@law("and.assert", "assert_{p & q}(x) = do x <- assert_p(x); assert_q(x)")
def _and_assert(g: Gen) -> Instance:
    a = g.type()
    ctx = one("x", a)

    def build(p, q):
        lhs = derived.assert_("x", derived.andthen(p, q), Var("x"), a)
        rhs = derived.do("x", derived.assert_("x", p, Var("x"), a), derived.assert_("x", q, Var("x"), a), a)
        return Equal(ctx, lhs, rhs, P(a))
    return inst(ctx, build, p=(g.term(BOOL, dict(ctx)), BOOL), q=(g.term(BOOL, dict(ctx)), BOOL))


def _preds(g: Gen, k: int):
    ctx = g.context()
    return ctx, [g.term(BOOL, dict(ctx)) for _ in range(k)]


@law("and.commutative", "p & q = q & p")
def _and_comm(g: Gen) -> Instance:
    ctx, (p, q) = _preds(g, 2)
    return inst(ctx, lambda p, q: Equal(ctx, derived.andthen(p, q), derived.andthen(q, p), BOOL),
                p=(p, BOOL), q=(q, BOOL))


@law("and.distributive", "(p (+) q) & r = p & r (+) q & r and r & (p (+) q) = r & p (+) r & q")
def _and_dist(g: Gen) -> Instance:
    ctx = g.context()
    avail = dict(ctx)
    p, q = disjoint_preds(g, avail)
    r = g.term(BOOL, avail)
    A = derived

    def build(p, q, r):
        return Implies(Defined(ctx, Ovee(p, q), BOOL), All(
            Equal(ctx, A.andthen(Ovee(p, q), r), Ovee(A.andthen(p, r), A.andthen(q, r)), BOOL),
            Equal(ctx, A.andthen(r, Ovee(p, q)), Ovee(A.andthen(r, p), A.andthen(r, q)), BOOL)))
    return inst(ctx, build, p=(p, BOOL), q=(q, BOOL), r=(r, BOOL))


@law("and.bot", "p & bot = bot & p = bot")
def _and_bot(g: Gen) -> Instance:
    ctx, (p,) = _preds(g, 1)
    bot = derived.bot()
    return inst(ctx, lambda p: All(Equal(ctx, derived.andthen(p, bot), bot, BOOL),
                                   Equal(ctx, derived.andthen(bot, p), bot, BOOL)), p=(p, BOOL))


@law("and.top", "p & top = top & p = p")
def _and_top(g: Gen) -> Instance:
    ctx, (p,) = _preds(g, 1)
    top = derived.top()
    return inst(ctx, lambda p: All(Equal(ctx, derived.andthen(p, top), p, BOOL),
                                   Equal(ctx, derived.andthen(top, p), p, BOOL)), p=(p, BOOL))


@law("and.associative", "p & (q & r) = (p & q) & r")
def _and_assoc(g: Gen) -> Instance:
    ctx, (p, q, r) = _preds(g, 3)
    A = derived
    return inst(ctx, lambda p, q, r: Equal(ctx, A.andthen(p, A.andthen(q, r)), A.andthen(A.andthen(p, q), r), BOOL),
                p=(p, BOOL), q=(q, BOOL), r=(r, BOOL))


@law("and.closed_right", "if q does not mention the subject, p & q = case p of inl _ -> q | inr _ -> bot")
def _and_closed(g: Gen) -> Instance:
    ctx = g.context()
    return inst(ctx, lambda p, q: Equal(ctx, derived.andthen(p, q), Case(p, W, q, W, derived.bot()), BOOL),
                p=(g.term(BOOL, dict(ctx)), BOOL), q=(g.term(BOOL, {}), BOOL, Context(())))


@law("and.cond_split", "if p then q else r = p & q (+) p^ & r")
def _and_cond(g: Gen) -> Instance:
    ctx, (p, q, r) = _preds(g, 3)
    A = derived
    return inst(ctx, lambda p, q, r: Equal(ctx, A.cond(p, q, r), Ovee(A.andthen(p, q), A.andthen(A.ortho(p), r)), BOOL),
                p=(p, BOOL), q=(q, BOOL), r=(r, BOOL))


@law("and.not_complemented", "q & q^ = q(1 - q), which differs from bot for 0 < q < 1 (1/2 & 1/2^ = 1/4)")
def _and_half(g: Gen) -> Instance:
    empty = Context(())
    if g.chance(0.3):
        q = Fraction(1, 2)
    else:
        d = g.rng.randint(2, g.cfg.max_denominator) if g.cfg.max_denominator >= 2 else 2
        q = Fraction(g.rng.randint(1, d - 1), d)

    def build(s):
        prod = derived.andthen(s, derived.ortho(s))
        return All(Equal(empty, prod, Prob(q * (1 - q)), BOOL), Differ(empty, prod, derived.bot(), BOOL))
    return inst(empty, build, s=(scalar_term(q, g), BOOL))


# ================================================================ n-tests


def _ntest_parts(g: Gen, n: int | None = None):
    a = g.type()
    ctx = one("x", a)
    n = n or g.rng.randint(1, 4)
    return ctx, a, n, g.ntest(n, dict(ctx))


def _ntest_inst(ctx: Context, ps: list[Term], build: Callable[[list[Term]], Claim], **extra) -> Instance:
    parts = {f"p{i}": (p, BOOL) for i, p in enumerate(ps, 1)}
    parts.update(extra)
    n = len(ps)
    return inst(ctx, lambda **kw: build([kw[f"p{i}"] for i in range(1, n + 1)],
                                        **{k: v for k, v in kw.items() if not k.startswith("p") or k[1:] == ""}),
                **parts)


@law("ntest.projections", "proj_i(ntest(p)) = p_i")
def _ntest_proj(g: Gen) -> Instance:
    ctx, _, n, ps = _ntest_parts(g)

    def build(ps):
        t = derived.ntest(ps)
        return All(*(Equal(ctx, derived.in_test(i, t, n), p, BOOL) for i, p in enumerate(ps, 1)))
    return _ntest_inst(ctx, ps, build)


@law("ntest.unique", "the n-valued map of an n-test is unique: two constructions agree")
def _ntest_unique(g: Gen) -> Instance:
    ctx, _, n, ps = _ntest_parts(g)
    return _ntest_inst(ctx, ps, lambda ps: Equal(ctx, derived.ntest(ps), derived.ntest_inductive(ps), bold(n)))


@law("instr.ntest", "in_test_i(instr_p(x)) = p_i and nabla(instr_p(x)) = x")
def _instrn(g: Gen) -> Instance:
    ctx, a, n, ps = _ntest_parts(g)

    def build(ps):
        t = Instr("x", derived.ntest(ps), Var("x"))
        tests = [Equal(ctx, derived.in_test(i, t, n), p, BOOL) for i, p in enumerate(ps, 1)]
        return All(*tests, Equal(ctx, derived.nabla(t, n), Var("x"), a))
    return _ntest_inst(ctx, ps, build)


@law("instr.component", "instr_{p_i}(x) = case instr_p(x) of in_j x -> inl x if i = j else inr x")
def _assertpi_instr(g: Gen) -> Instance:
    ctx, a, n, ps = _ntest_parts(g)
    i = g.rng.randint(1, n)

    def build(ps):
        arms = [("x", Inl(Var("x"), a) if j == i else Inr(Var("x"), a)) for j in range(1, n + 1)]
        rhs = derived.ncase(Instr("x", derived.ntest(ps), Var("x")), n, arms)
        return Equal(ctx, Instr("x", ps[i - 1], Var("x")), rhs, Sum(a, a))
    return _ntest_inst(ctx, ps, build)


@law("assert.component", "assert_{p_i}(x) = case instr_p(x) of in_j x -> return x if i = j else fail")
def _assertpi_assert(g: Gen) -> Instance:
    ctx, a, n, ps = _ntest_parts(g)
    i = g.rng.randint(1, n)

    def build(ps):
        arms = [("x", derived.ret(Var("x")) if j == i else derived.fail(a)) for j in range(1, n + 1)]
        rhs = derived.ncase(Instr("x", derived.ntest(ps), Var("x")), n, arms)
        return Equal(ctx, derived.assert_("x", ps[i - 1], Var("x"), a), rhs, P(a))
    return _ntest_inst(ctx, ps, build)


@law("ntest.two", "a 2-test (p, q) has q = p^ and instr_(p,q)(t) = instr_p(t)")
def _twotest(g: Gen) -> Instance:
    ctx, a, _, ps = _ntest_parts(g, 2)
    gam = g.context(names=("g1", "g2"))
    t = g.term(a, dict(gam))

    def build(p1, p2, t):
        return All(Equal(ctx, p2, derived.ortho(p1), BOOL),
                   Equal(gam, Instr("x", derived.ntest([p1, p2]), t), Instr("x", p1, t), Sum(a, a)))
    return inst(gam, build, p1=(ps[0], BOOL, ctx), p2=(ps[1], BOOL, ctx), t=(t, a))


# ================================================================ measure


def _measure_ctx(g: Gen):
    a = g.type()
    extra = g.context(g.rng.randint(0, 1), names=("g1",))
    ctx = ctx_union(one("x", a), extra)
    return ctx, a, extra


@law("measure.top", "measure top -> t = t")
def _measure_top(g: Gen) -> Instance:
    ctx, a, _ = _measure_ctx(g)
    b = g.type(3)
    return inst(ctx, lambda t: Equal(ctx, derived.measure([(derived.top(), t)]), t, b),
                t=(g.term(b, dict(ctx)), b))


@law("measure.bot", "a final bot arm can be dropped from a measure")
def _measure_bot(g: Gen) -> Instance:
    ctx, a, extra = _measure_ctx(g)
    b = g.type(3)
    n = g.rng.randint(1, 3)
    ps = g.ntest(n, {"x": a})
    ts = [g.term(b, dict(ctx)) for _ in range(n + 1)]

    def build(**kw):
        ps_ = [kw[f"p{i}"] for i in range(n)]
        ts_ = [kw[f"t{i}"] for i in range(n + 1)]
        lhs = derived.measure(list(zip(ps_ + [derived.bot()], ts_)))
        rhs = derived.measure(list(zip(ps_, ts_[:n])))
        return Equal(ctx, lhs, rhs, b)
    parts = {f"p{i}": (p, BOOL, one("x", a)) for i, p in enumerate(ps)}
    parts.update({f"t{i}": (t, b) for i, t in enumerate(ts)})
    return inst(ctx, build, **parts)


@law("measure.nest", "measure_i p_i -> (measure_j q_ij -> t_ij) = measure_ij p_i & q_ij -> t_ij")
def _measure_nest(g: Gen) -> Instance:
    ctx, a, _ = _measure_ctx(g)
    b = g.type(2)
    n, m = g.rng.randint(1, 2), g.rng.randint(1, 2)
    ps = g.ntest(n, {"x": a}, 1)
    qs = [g.ntest(m, {"x": a}, 1) for _ in range(n)]
    ts = [[g.term(b, dict(ctx), 1) for _ in range(m)] for _ in range(n)]

    def build(**kw):
        P_ = [kw[f"p{i}"] for i in range(n)]
        Q_ = [[kw[f"q{i}{j}"] for j in range(m)] for i in range(n)]
        T_ = [[kw[f"t{i}{j}"] for j in range(m)] for i in range(n)]
        lhs = derived.measure([(P_[i], derived.measure(list(zip(Q_[i], T_[i])))) for i in range(n)])
        rhs = derived.measure([(derived.andthen(P_[i], Q_[i][j]), T_[i][j]) for i in range(n) for j in range(m)])
        return Equal(ctx, lhs, rhs, b)
    parts = {f"p{i}": (p, BOOL, one("x", a)) for i, p in enumerate(ps)}
    parts.update({f"q{i}{j}": (q, BOOL, one("x", a)) for i in range(n) for j, q in enumerate(qs[i])})
    parts.update({f"t{i}{j}": (t, b) for i in range(n) for j, t in enumerate(ts[i])})
    return inst(ctx, build, **parts)


@law("measure.permute", "measure arms may be permuted")
def _measure_perm(g: Gen) -> Instance:
    ctx, a, _ = _measure_ctx(g)
    b = g.type(3)
    n = g.rng.randint(2, 3)
    ps = g.ntest(n, {"x": a})
    ts = [g.term(b, dict(ctx)) for _ in range(n)]
    perm = list(range(n))
    g.rng.shuffle(perm)

    def build(**kw):
        arms = [(kw[f"p{i}"], kw[f"t{i}"]) for i in range(n)]
        return Equal(ctx, derived.measure(arms), derived.measure([arms[k] for k in perm]), b)
    parts = {f"p{i}": (p, BOOL, one("x", a)) for i, p in enumerate(ps)}
    parts.update({f"t{i}": (t, b) for i, t in enumerate(ts)})
    return inst(ctx, build, **parts)


@law("measure.merge", "two arms with the same body merge into one arm on p_n (+) p_n+1")
def _measure_merge(g: Gen) -> Instance:
    ctx, a, _ = _measure_ctx(g)
    b = g.type(3)
    n = g.rng.randint(2, 3)
    ps = g.ntest(n, {"x": a})
    ts = [g.term(b, dict(ctx)) for _ in range(n - 1)]

    def build(**kw):
        P_ = [kw[f"p{i}"] for i in range(n)]
        T_ = [kw[f"t{i}"] for i in range(n - 1)]
        lhs = derived.measure(list(zip(P_, T_ + [T_[-1]])))
        rhs = derived.measure(list(zip(P_[:-2] + [Ovee(P_[-2], P_[-1])], T_)))
        return Equal(ctx, lhs, rhs, b)
    parts = {f"p{i}": (p, BOOL, one("x", a)) for i, p in enumerate(ps)}
    parts.update({f"t{i}": (t, b) for i, t in enumerate(ts)})
    return inst(ctx, build, **parts)


@law("measure.predicates", "measure p_i -> q_i = (+)_i p_i & q_i")
def _measure_preds(g: Gen) -> Instance:
    a = g.type()
    ctx = one("x", a)
    n = g.rng.randint(1, 3)
    ps = g.ntest(n, dict(ctx))
    qs = [g.term(BOOL, dict(ctx)) for _ in range(n)]

    def build(**kw):
        P_ = [kw[f"p{i}"] for i in range(n)]
        Q_ = [kw[f"q{i}"] for i in range(n)]
        rhs = derived.ovee_all([derived.andthen(p, q) for p, q in zip(P_, Q_)])
        return Equal(ctx, derived.measure(list(zip(P_, Q_))), rhs, BOOL)
    parts = {f"p{i}": (p, BOOL) for i, p in enumerate(ps)}
    parts.update({f"q{i}": (q, BOOL) for i, q in enumerate(qs)})
    return inst(ctx, build, **parts)


@law("measure.cond_case", "if p then q else r = case p of inl _ -> q | inr _ -> r when q, r ignore x")
def _measure_cond(g: Gen) -> Instance:
    a, b = g.type(), g.type(3)
    gam = g.context(1, names=("g1",))
    ctx = ctx_union(one("x", a), gam)
    return inst(ctx, lambda p, q, r: Equal(ctx, derived.cond(p, q, r), Case(p, W, q, W, r), b),
                p=(g.term(BOOL, {"x": a}), BOOL, one("x", a)), q=(g.term(b, dict(gam)), b, gam),
                r=(g.term(b, dict(gam)), b, gam))


@law("measure.cond_top_bot", "if p then top else bot = p")
def _measure_cond_tb(g: Gen) -> Instance:
    a = g.type()
    ctx = one("x", a)
    return inst(ctx, lambda p: Equal(ctx, derived.cond(p, derived.top(), derived.bot()), p, BOOL),
                p=(g.term(BOOL, dict(ctx)), BOOL))


# ================================================================ scalars


def _two_rationals(g: Gen) -> tuple[Fraction, Fraction]:
    return g.ratio(), g.ratio()


@law("rational.leq", "q <= r as numbers implies q <= r as scalars")
def _rat_leq(g: Gen) -> Instance:
    q, r = sorted(_two_rationals(g))
    empty = Context(())
    return inst(empty, lambda s, t: Leq(empty, s, t, BOOL), s=(scalar_term(q, g), BOOL), t=(scalar_term(r, g), BOOL))


@law("rational.sum", "q (+) r is defined iff q + r <= 1, and then equals q + r")
def _rat_sum(g: Gen) -> Instance:
    q, r = _two_rationals(g)
    empty = Context(())

    def build(s, t):
        fits = q + r <= 1
        total = _lit(min(q + r, Fraction(1)))
        return All(Iff(Defined(empty, Ovee(s, t), BOOL), Fact(fits, f"{q} + {r} > 1")),
                   Implies(Defined(empty, Ovee(s, t), BOOL), Equal(empty, Ovee(s, t), total, BOOL)))
    return inst(empty, build, s=(scalar_term(q, g), BOOL), t=(scalar_term(r, g), BOOL))


@law("rational.product", "q & r = qr")
def _rat_prod(g: Gen) -> Instance:
    q, r = _two_rationals(g)
    empty = Context(())
    return inst(empty, lambda s, t: Equal(empty, derived.andthen(s, t), _lit(q * r), BOOL),
                s=(scalar_term(q, g), BOOL), t=(scalar_term(r, g), BOOL))


@law("rational.fraction", "p/q = m/n as numbers implies p . (1/q) = m . (1/n)")
def _rat_frac(g: Gen) -> Instance:
    q = g.rng.randint(2, max(2, g.cfg.max_denominator // 2))
    p = g.rng.randint(0, q)
    k = g.rng.randint(1, max(1, g.cfg.max_denominator // q))
    empty = Context(())
    return inst(empty, lambda: Equal(empty, derived.ratio(p, q), derived.ratio(p * k, q * k), BOOL))


@law("rule.coin_sum", "n . (1/n) = top")
def _rule_coin(g: Gen) -> Instance:
    n = g.rng.randint(2, max(2, g.cfg.max_denominator))
    empty = Context(())
    return inst(empty, lambda: Equal(empty, derived.times(n, OneOverN(n)), derived.top(), BOOL))


@law("rule.divide", "n . t = top implies t = 1/n")
def _rule_divide(g: Gen) -> Instance:
    n = g.rng.randint(2, max(2, g.cfg.max_denominator // 2))
    empty = Context(())
    t = scalar_term(Fraction(1, n), g) if g.chance(0.6) else g.term(BOOL, {})
    return inst(empty, lambda t: Implies(Equal(empty, derived.times(n, t), derived.top(), BOOL),
                                         Equal(empty, t, OneOverN(n), BOOL)),
                t=(t, BOOL))


# ================================================================ normalisation


def _nonzero_substate(g: Gen, a: Type) -> Term:
    t = g.term(P(a), {})
    mass = sum((w for v, w in denote(t, {}).items() if v.tag == "inl"), Fraction(0))
    if mass == 0:
        t = weighted(g.scalar(positive=True), derived.ret(g.term(a, {})), a)
    return t


@law("rule.beta_norm", "do _ <- t; return norm t = t")
def _rule_beta_norm(g: Gen) -> Instance:
    a = g.type()
    empty = Context(())
    return inst(empty, lambda t: Equal(empty, derived.do(W, t, derived.ret(Norm(t)), a), t, P(a)),
                t=(_nonzero_substate(g, a), P(a)))


@law("rule.eta_norm", "t = do _ <- t; return rho with t nonzero implies rho = norm t")
def _rule_eta_norm(g: Gen) -> Instance:
    a = g.type()
    empty = Context(())
    rho = g.term(a, {})
    q = g.scalar(positive=True)
    t = weighted(q, derived.ret(rho), a) if g.chance(0.7) else _nonzero_substate(g, a)

    def build(t, rho):
        hyp = Equal(empty, t, derived.do(W, t, derived.ret(rho), a), P(a))
        return Implies(hyp, Equal(empty, Norm(t), rho, a))
    return inst(empty, build, t=(t, P(a)), rho=(rho, a))


@law("norm.measure", "norm(measure p_i & q -> return s_i | q^ -> fail) = measure p_i -> s_i")
def _norm_measure(g: Gen) -> Instance:
    a = g.type()
    empty = Context(())
    n = g.rng.randint(1, 3)
    ps = g.ntest(n, {})
    q = g.scalar(positive=True)
    ss = [g.term(a, {}) for _ in range(n)]

    def build(q, **kw):
        P_ = [kw[f"p{i}"] for i in range(n)]
        S_ = [kw[f"s{i}"] for i in range(n)]
        arms = [(derived.andthen(p, q), derived.ret(s)) for p, s in zip(P_, S_)]
        t = derived.measure(arms + [(derived.ortho(q), derived.fail(a))])
        return Implies(Defined(empty, t, P(a)), Equal(empty, Norm(t), derived.measure(list(zip(P_, S_))), a))
    parts = {f"p{i}": (p, BOOL) for i, p in enumerate(ps)}
    parts.update({f"s{i}": (s, a) for i, s in enumerate(ss)})
    return inst(empty, build, q=(q, BOOL), **parts)


@law("norm.rational_measure", "norm(measure a_i -> return s_i | b -> fail) = measure a_i/(sum a) -> s_i")
def _norm_rat(g: Gen) -> Instance:
    a = g.type()
    empty = Context(())
    n = g.rng.randint(1, 3)
    while True:
        ws = g.ratios(n + 1)
        if ws[-1] != 1:
            break
    alphas, beta = ws[:n], ws[-1]
    total = sum(alphas, Fraction(0))
    ss = [g.term(a, {}) for _ in range(n)]

    def build(**kw):
        S_ = [kw[f"s{i}"] for i in range(n)]
        t = derived.measure([(_lit(al), derived.ret(s)) for al, s in zip(alphas, S_)] + [(_lit(beta), derived.fail(a))])
        rhs = derived.measure([(_lit(al / total), s) for al, s in zip(alphas, S_)])
        return Equal(empty, Norm(t), rhs, a)
    return inst(empty, build, **{f"s{i}": (s, a) for i, s in enumerate(ss)})


# ================================================================ computation rules


@law("rule.beta_tensor", "let x (x) y = r (x) s in t = t[x := r, y := s]")
def _rule_beta_tensor(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    delta = g.context(1, names=("d1",))
    a, b, c = g.type(2), g.type(2), g.type(3)
    ctx = ctx_union(gam, delta)
    ct = Context((("a", a), ("b", b)))
    return inst(ctx, lambda r, s, t: Equal(ctx, LetPair("a", "b", TensorPair(r, s), t),
                                           substitute_many(t, {"a": r, "b": s}), c),
                r=(g.term(a, dict(gam)), a, gam), s=(g.term(b, dict(delta)), b, delta), t=(g.term(c, dict(ct)), c, ct))


@law("rule.beta_inl", "case inl r of inl x -> s | inr y -> t = s[x := r]")
def _rule_beta_inl(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    a, b, c = g.type(3), g.type(3), g.type(3)
    cx, cy = one("a", a), one("b", b)
    return inst(gam, lambda r, s, t: Equal(gam, Case(Inl(r, b), "a", s, "b", t), substitute(s, "a", r), c),
                r=(g.term(a, dict(gam)), a), s=(g.term(c, dict(cx)), c, cx), t=(g.term(c, dict(cy)), c, cy))


@law("rule.beta_inr", "case inr r of inl x -> s | inr y -> t = t[y := r]")
def _rule_beta_inr(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    a, b, c = g.type(3), g.type(3), g.type(3)
    cx, cy = one("a", a), one("b", b)
    return inst(gam, lambda r, s, t: Equal(gam, Case(Inr(r, a), "a", s, "b", t), substitute(t, "b", r), c),
                r=(g.term(b, dict(gam)), b), s=(g.term(c, dict(cx)), c, cx), t=(g.term(c, dict(cy)), c, cy))


def _inlr_parts(g: Gen):
    ctx = g.context()
    a, b = g.type(2), g.type(2)
    avail = dict(ctx)
    used, rest = g.split(avail)
    p = g.term(BOOL, used)
    s = Case(p, W, derived.ret(g.term(a, rest)), W, derived.fail(a))
    t = Case(p, W, derived.fail(b), W, derived.ret(g.term(b, rest)))
    return ctx, a, b, s, t


@law("rule.beta_inlr", "proj1(inlr(s, t)) = s and proj2(inlr(s, t)) = t")
def _rule_beta_inlr(g: Gen) -> Instance:
    ctx, a, b, s, t = _inlr_parts(g)
    return inst(ctx, lambda s, t: Implies(Defined(ctx, Inlr(s, t), Sum(a, b)),
                                          All(Equal(ctx, proj1(Inlr(s, t), a), s, P(a)),
                                              Equal(ctx, proj2(Inlr(s, t), a, b), t, P(b)))),
                s=(s, P(a)), t=(t, P(b)))


@law("rule.eta_inlr", "inlr(proj1 t, proj2 t) = t")
def _rule_eta_inlr(g: Gen) -> Instance:
    ctx = g.context()
    ab = g.sum_type()
    return inst(ctx, lambda t: Equal(ctx, Inlr(proj1(t, ab.left), proj2(t, ab.left, ab.right)), t, ab),
                t=(g.term(ab, dict(ctx)), ab))


@law("rule.beta_left", "inl(lft t) = t when inl?(t) = top")
def _rule_beta_left(g: Gen) -> Instance:
    ctx = g.context()
    a, b = g.type(2), g.type(2)
    avail = dict(ctx)
    if g.chance(0.6):
        used, rest = g.split(avail)
        t = Case(g.term(BOOL, used), W, Inl(g.term(a, rest), b), W, Inl(g.term(a, rest), b))
    else:
        t = g.term(Sum(a, b), avail)
    return inst(ctx, lambda t: Implies(Equal(ctx, derived.inl_test(t), derived.top(), BOOL),
                                       Equal(ctx, Inl(Lft(t), b), t, Sum(a, b))),
                t=(t, Sum(a, b)))


@law("rule.eta_left", "lft(inl t) = t")
def _rule_eta_left(g: Gen) -> Instance:
    ctx = g.context()
    a, b = g.type(3), g.type(2)
    return inst(ctx, lambda t: Equal(ctx, Lft(Inl(t, b)), t, a), t=(g.term(a, dict(ctx)), a))


def _instr_parts(g: Gen):
    gam = g.context(names=("g1", "g2"))
    n = g.rng.randint(2, 3)
    a = g.type(4 // n if n > 2 else 3)
    px = one("x", a)
    return gam, n, a, px, g.term(bold(n), {"x": a}), g.term(a, dict(gam))


@law("rule.instr_test", "index(instr_{\\x p}(t)) = p[x := t]")
def _rule_instr_test(g: Gen) -> Instance:
    gam, n, a, px, p, t = _instr_parts(g)
    return inst(gam, lambda p, t: Equal(gam, derived.index(Instr("x", p, t), n), substitute(p, "x", t), bold(n)),
                p=(p, bold(n), px), t=(t, a))


@law("rule.nabla_instr", "nabla(instr_{\\x p}(t)) = t")
def _rule_nabla_instr(g: Gen) -> Instance:
    gam, n, a, px, p, t = _instr_parts(g)
    return inst(gam, lambda p, t: Equal(gam, derived.nabla(Instr("x", p, t), n), t, a),
                p=(p, bold(n), px), t=(t, a))


@law("rule.eta_instr", "nabla(t) = x implies instr_{\\x index(t)}(s) = t[x := s]")
def _rule_eta_instr(g: Gen) -> Instance:
    gam = g.context(names=("g1", "g2"))
    n = g.rng.randint(2, 3)
    a = g.type(3)
    cx = one("x", a)
    if g.chance(0.5):
        t = Instr("x", g.term(bold(n), {"x": a}), Var("x"))
    else:
        q = g.term(bold(n), {})
        t = derived.ncase(q, n, [(W, derived.inj(i, n, Var("x"), a)) for i in range(1, n + 1)])
    if g.chance(0.2):
        t = g.term(copower(n, a), {"x": a})
    s = g.term(a, dict(gam))
    return inst(gam, lambda t, s: Implies(Equal(cx, derived.nabla(t, n), Var("x"), a),
                                          Equal(gam, Instr("x", derived.index(t, n), s), substitute(t, "x", s), copower(n, a))),
                t=(t, copower(n, a), cx), s=(s, a))


@law("rule.eta_unit", "t : 1 implies t = *")
def _rule_eta_unit(g: Gen) -> Instance:
    ctx = g.context()
    return inst(ctx, lambda t: Equal(ctx, t, Star(), UNIT), t=(g.term(UNIT, dict(ctx)), UNIT))


@law("rule.eta_tensor", "let x (x) y = t in x (x) y = t")
def _rule_eta_tensor(g: Gen) -> Instance:
    ctx, tt = g.context(), g.tensor_type()
    return inst(ctx, lambda t: Equal(ctx, LetPair("a", "b", t, TensorPair(Var("a"), Var("b"))), t, tt),
                t=(g.term(tt, dict(ctx)), tt))


@law("rule.eta_sum", "case t of inl x -> inl x | inr y -> inr y = t")
def _rule_eta_sum(g: Gen) -> Instance:
    ctx, ab = g.context(), g.sum_type()
    return inst(ctx, lambda t: Equal(ctx, Case(t, "a", Inl(Var("a"), ab.right), "b", Inr(Var("b"), ab.left)), t, ab),
                t=(g.term(ab, dict(ctx)), ab))


# ================================================================ commuting conversions


@law("conv.let_let", "let x (x) y = (let u (x) v = r in s) in t = let u (x) v = r in let x (x) y = s in t")
def _conv_letlet(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    r_ty, s_ty = Tensor(g.type(2), g.type(2)), Tensor(g.type(2), g.type(2))
    c = g.type(3)
    cs = Context((("u", r_ty.left), ("v", r_ty.right)))
    ct = Context((("a", s_ty.left), ("b", s_ty.right)))

    def build(r, s, t):
        lhs = LetPair("a", "b", LetPair("u", "v", r, s), t)
        rhs = LetPair("u", "v", r, LetPair("a", "b", s, t))
        return Equal(gam, lhs, rhs, c)
    return inst(gam, build, r=(g.term(r_ty, dict(gam)), r_ty), s=(g.term(s_ty, dict(cs)), s_ty, cs),
                t=(g.term(c, dict(ct)), c, ct))


@law("conv.let_pair", "(let x (x) y = r in s) (x) t = let x (x) y = r in s (x) t")
def _conv_letpair(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    delta = g.context(1, names=("d1",))
    ctx = ctx_union(gam, delta)
    r_ty = Tensor(g.type(2), g.type(2))
    b, c = g.type(2), g.type(2)
    cs = Context((("u", r_ty.left), ("v", r_ty.right)))

    def build(r, s, t):
        return Equal(ctx, TensorPair(LetPair("u", "v", r, s), t), LetPair("u", "v", r, TensorPair(s, t)), Tensor(b, c))
    return inst(ctx, build, r=(g.term(r_ty, dict(gam)), r_ty), s=(g.term(b, dict(cs)), b, cs),
                t=(g.term(c, dict(delta)), c, delta))


@law("conv.case_case", "case (case r of ..) of .. = case r of inl x -> case s of .. | inr y -> case s' of ..")
def _conv_casecase(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    r_ty, s_ty = g.sum_type(), g.sum_type()
    c = g.type(3)
    cx, cy = one("a", r_ty.left), one("b", r_ty.right)
    cu, cv = one("u", s_ty.left), one("v", s_ty.right)

    def build(r, s, s2, t, t2):
        lhs = Case(Case(r, "a", s, "b", s2), "u", t, "v", t2)
        rhs = Case(r, "a", Case(s, "u", t, "v", t2), "b", Case(s2, "u", t, "v", t2))
        return Equal(gam, lhs, rhs, c)
    return inst(gam, build, r=(g.term(r_ty, dict(gam)), r_ty), s=(g.term(s_ty, dict(cx)), s_ty, cx),
                s2=(g.term(s_ty, dict(cy)), s_ty, cy), t=(g.term(c, dict(cu)), c, cu), t2=(g.term(c, dict(cv)), c, cv))


@law("conv.case_pair", "(case r of inl x -> s | inr y -> s') (x) t = case r of inl x -> s (x) t | inr y -> s' (x) t")
def _conv_casepair(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    delta = g.context(1, names=("d1",))
    ctx = ctx_union(gam, delta)
    r_ty = g.sum_type()
    b, c = g.type(2), g.type(2)
    cx, cy = one("a", r_ty.left), one("b", r_ty.right)

    def build(r, s, s2, t):
        lhs = TensorPair(Case(r, "a", s, "b", s2), t)
        rhs = Case(r, "a", TensorPair(s, t), "b", TensorPair(s2, t))
        return Equal(ctx, lhs, rhs, Tensor(b, c))
    return inst(ctx, build, r=(g.term(r_ty, dict(gam)), r_ty), s=(g.term(b, dict(cx)), b, cx),
                s2=(g.term(b, dict(cy)), b, cy), t=(g.term(c, dict(delta)), c, delta))


@law("conv.let_case", "let x (x) y = (case r of ..) in t = case r of inl u -> let x (x) y = s in t | ..")
def _conv_letcase(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    r_ty = g.sum_type()
    s_ty = Tensor(g.type(2), g.type(2))
    c = g.type(3)
    cx, cy = one("u", r_ty.left), one("v", r_ty.right)
    ct = Context((("a", s_ty.left), ("b", s_ty.right)))

    def build(r, s, s2, t):
        lhs = LetPair("a", "b", Case(r, "u", s, "v", s2), t)
        rhs = Case(r, "u", LetPair("a", "b", s, t), "v", LetPair("a", "b", s2, t))
        return Equal(gam, lhs, rhs, c)
    return inst(gam, build, r=(g.term(r_ty, dict(gam)), r_ty), s=(g.term(s_ty, dict(cx)), s_ty, cx),
                s2=(g.term(s_ty, dict(cy)), s_ty, cy), t=(g.term(c, dict(ct)), c, ct))


@law("conv.instr_commute", "do x <- assert_p(x); assert_q(x) = do x <- assert_q(x); assert_p(x)")
def _conv_comm(g: Gen) -> Instance:
    a = g.type()
    ctx = one("x", a)

    def build(p, q):
        A = derived
        lhs = A.do("x", A.assert_("x", p, Var("x"), a), A.assert_("x", q, Var("x"), a), a)
        rhs = A.do("x", A.assert_("x", q, Var("x"), a), A.assert_("x", p, Var("x"), a), a)
        return Equal(ctx, lhs, rhs, P(a))
    return inst(ctx, build, p=(g.term(BOOL, dict(ctx)), BOOL), q=(g.term(BOOL, dict(ctx)), BOOL))


# ================================================================ substitution


def _sub_parts(g: Gen):
    gam = g.context(1, names=("g1",))
    delta = g.context(1, names=("d1",))
    theta = g.context(1, names=("h1",))
    return gam, delta, theta


@law("subst.let", "t[z := let x (x) y = r in s] = let x (x) y = r in t[z := s]")
def _subst_let(g: Gen) -> Instance:
    gam, delta, theta = _sub_parts(g)
    ctx = ctx_union(gam, delta, theta)
    r_ty = Tensor(g.type(2), g.type(2))
    c, d = g.type(3), g.type(3)
    cs = delta.bind("a", r_ty.left).bind("b", r_ty.right)
    ct = theta.bind("z", c)

    def build(r, s, t):
        lhs = substitute(t, "z", LetPair("a", "b", r, s))
        rhs = LetPair("a", "b", r, substitute(t, "z", s))
        return Equal(ctx, lhs, rhs, d)
    return inst(ctx, build, r=(g.term(r_ty, dict(gam)), r_ty, gam), s=(g.term(c, dict(cs)), c, cs),
                t=(g.term(d, dict(ct)), d, ct))


@law("subst.case", "t[z := case r of inl x -> s | inr y -> s'] = case r of inl x -> t[z := s] | inr y -> t[z := s']")
def _subst_case(g: Gen) -> Instance:
    gam, delta, theta = _sub_parts(g)
    ctx = ctx_union(gam, delta, theta)
    r_ty = g.sum_type()
    c, d = g.type(3), g.type(3)
    cx, cy = delta.bind("a", r_ty.left), delta.bind("b", r_ty.right)
    ct = theta.bind("z", c)

    def build(r, s, s2, t):
        lhs = substitute(t, "z", Case(r, "a", s, "b", s2))
        rhs = Case(r, "a", substitute(t, "z", s), "b", substitute(t, "z", s2))
        return Equal(ctx, lhs, rhs, d)
    return inst(ctx, build, r=(g.term(r_ty, dict(gam)), r_ty, gam), s=(g.term(c, dict(cx)), c, cx),
                s2=(g.term(c, dict(cy)), c, cy), t=(g.term(d, dict(ct)), d, ct))


@law("subst.vacuous", "let _ (x) _ = s in t = t and case s of inl _ -> t | inr _ -> t = t")
def _subst_vac(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    delta = g.context(1, names=("d1",))
    ctx = ctx_union(gam, delta)
    tt, st = g.tensor_type(), g.sum_type()
    c = g.type(3)

    def build(s1, s2, t):
        return All(Equal(ctx, LetPair(W, W + "2", s1, t), t, c), Equal(ctx, Case(s2, W, t, W, t), t, c))
    return inst(ctx, build, s1=(g.term(tt, dict(gam)), tt, gam), s2=(g.term(st, dict(gam)), st, gam),
                t=(g.term(c, dict(delta)), c, delta))


def substitution_claim(gam: Context, delta: Context, x: str, a: Type, s: Term, t: Term) -> Claim:
    """``P(t[x := s] = b) = sum_a P(s = a) P(t(a) = b)`` at every environment."""
    ctx = ctx_union(gam, delta)

    def run() -> Verdict:
        lhs = substitute(t, x, s)
        for env in environments(ctx.restrict(free_vars(lhs) | free_vars(s) | (free_vars(t) - {x}))):
            genv = {k: v for k, v in env.items() if k in gam}
            denv = {k: v for k, v in env.items() if k in delta}
            direct = denote(lhs, env)
            mixed: dict = {}
            for va, wa in denote(s, genv).items():
                for vb, wb in denote(t, {**denv, x: va}).items():
                    mixed[vb] = mixed.get(vb, Fraction(0)) + wa * wb
            if direct != {k: w for k, w in mixed.items() if w}:
                return Verdict(False, "unequal", f"{Dist(direct)} vs {Dist(mixed)}", show_env(env))
        return Verdict(True)
    return Check(run)


@law("subst.semantic", "P(t[x := s] = b) = sum_a P(s = a) P(t[x := a] = b)")
def _subst_sem(g: Gen) -> Instance:
    gam = g.context(names=("g1", "g2"))
    delta = g.context(1, names=("d1",))
    a, b = g.type(), g.type()
    cx = delta.bind("x", a)
    ctx = ctx_union(gam, delta)
    return inst(ctx, lambda s, t: substitution_claim(gam, delta, "x", a, s, t),
                s=(g.term(a, dict(gam)), a, gam), t=(g.term(b, dict(cx)), b, cx))


@law("meta.functionality", "r = s implies t[x := r] = t[x := s]")
def _meta_func(g: Gen) -> Instance:
    gam = g.context(1, names=("g1",))
    delta = g.context(1, names=("d1",))
    a, b = g.type(3), g.type(3)
    ctx = ctx_union(gam, delta)
    cx = delta.bind("x", a)
    r = g.term(a, dict(gam))
    k = g.rng.random()
    if k < 0.4 and isinstance(a, Sum):
        s = Case(r, "u", Inl(Var("u"), a.right), "v", Inr(Var("v"), a.left))
    elif k < 0.6:
        s = Lft(Inl(r, UNIT))
    else:
        s = g.term(a, dict(gam))
    return inst(ctx, lambda r, s, t: Implies(Equal(gam, r, s, a), Equal(ctx, substitute(t, "x", r), substitute(t, "x", s), b)),
                r=(r, a, gam), s=(s, a, gam), t=(g.term(b, dict(cx)), b, cx))


# ================================================================ running


@dataclass
class Counterexample:
    ctx: str
    terms: dict[str, str]
    env: str
    detail: str
    kind: str
    size: int

    def as_dict(self) -> dict:
        return {"context": self.ctx, "terms": dict(sorted(self.terms.items())), "env": self.env,
                "detail": self.detail, "kind": self.kind, "size": self.size}


@dataclass
class LawResult:
    name: str
    statement: str
    instances: int = 0
    failures: int = 0
    vacuous: int = 0
    counterexample: Counterexample | None = None

    def as_dict(self) -> dict:
        return {
            "statement": self.statement,
            "instances": self.instances,
            "failures": self.failures,
            "vacuous": self.vacuous,
            "counterexample": self.counterexample.as_dict() if self.counterexample else None,
        }


def _candidates(part: Part) -> list[Term]:
    """Smaller terms of the same type and context, smallest first."""
    names = set(part.ctx.names)
    seen, out = set(), []
    for s in subterms(part.term):
        if s is part.term or s in seen or not free_vars(s) <= names:
            continue
        seen.add(s)
        if term_size(s) < term_size(part.term):
            out.append(s)
    for s in _simple_terms(part.ty):
        if s not in seen and term_size(s) < term_size(part.term):
            out.append(s)
    out.sort(key=term_size)
    return [s for s in out if well_typed(part.ctx, s, part.ty)]


def _simple_terms(ty: Type) -> list[Term]:
    out: list[Term] = []
    if ty == UNIT:
        out.append(Star())
    if ty == BOOL:
        out += [derived.top(), derived.bot(), OneOverN(2)]
    if isinstance(ty, Sum) and ty.right == UNIT:
        out.append(derived.fail(ty.left))
    return out


def shrink(instance: Instance, verdict: Verdict, budget: int = 400) -> tuple[Instance, Verdict]:
    """Greedy shrinking: replace parts by smaller candidates while the failure kind persists."""
    best, best_v = instance, verdict
    improved = True
    while improved and budget > 0:
        improved = False
        for name, part in best.parts.items():
            for cand in _candidates(part):
                budget -= 1
                trial = best.with_part(name, cand)
                v = decide(trial.claim())
                if not v.ok and v.kind == best_v.kind:
                    best, best_v, improved = trial, v, True
                    break
                if budget <= 0:
                    break
            if improved or budget <= 0:
                break
    return best, best_v


def _counterexample(instance: Instance, verdict: Verdict) -> Counterexample:
    small, v = shrink(instance, verdict)
    used: frozenset[str] = frozenset()
    terms = {}
    for k, p in small.parts.items():
        fv = free_vars(p.term)
        used |= fv
        shown = p.ctx.restrict(fv)
        terms[k] = f"{shown} |- {p.term} : {p.ty}" if len(shown) else f"|- {p.term} : {p.ty}"
    return Counterexample(str(small.ctx.restrict(used)), terms, v.env, v.detail, v.kind, small.size)


def check_law(lw: Law, cfg: GenConfig) -> LawResult:
    g = Gen.for_law(cfg, lw.name)
    res = LawResult(lw.name, lw.statement)
    for _ in range(cfg.instances):
        g._counter = 0
        instance = lw.sample(g)
        v = decide(instance.claim())
        res.instances += 1
        if v.kind == "vacuous":
            res.vacuous += 1
        if not v.ok:
            res.failures += 1
            if res.counterexample is None:
                res.counterexample = _counterexample(instance, v)
    return res


def select(names: list[str] | None = None) -> list[Law]:
    if not names:
        return list(LAWS.values())
    out = []
    for n in names:
        matched = [lw for k, lw in LAWS.items() if k == n or k.startswith(n + ".")]
        if not matched:
            raise KeyError(f"no law named {n}")
        out.extend(matched)
    return out


__all__ = [
    "Counterexample", "Instance", "LAWS", "Law", "LawResult", "Part", "check_law", "select", "shrink",
    "substitution_claim",
]
