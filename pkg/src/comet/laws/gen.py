"""Random generation of well-typed terms, predicates and n-tests.

Terms are built type-directed.  Each context variable is used at most
once along any execution path: multiplicative forms (pairs, let, case
scrutinee against branches) split the available variables, additive
forms (case branches, partial sums, partial pairing) share them.  Partial
forms get their side conditions by construction: partial sums are built
from disjointly scaled summands, ``lft`` from terms that are always
``inl``, and ``inlr`` from complementary guards on one predicate.
"""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .. import derived
from ..semantics import TRUE, denote, enumerate_values
from ..syntax import (
    BOOL, UNIT, Ann, Case, Const, Context, Ctor, EnumCase, Inl, Inlr, Inr, Instr, LetPair, Lft,
    Norm, OneOverN, One, Ovee, Prob, Star, Sum, Tensor, Term, TensorPair, Type, Var, bold,
    copower_count,
)

COIN = Const("Coin", ("heads", "tails"))
COLOR = Const("Color", ("red", "green", "blue"))


@dataclass(frozen=True)
class GenConfig:
    """Bounds for generation; ``instances`` is the number of cases per law."""

    seed: int = 0
    max_type_size: int = 4
    max_context: int = 2
    max_denominator: int = 20
    instances: int = 500
    depth: int = 2

    def __post_init__(self) -> None:
        for name in ("max_type_size", "max_context", "max_denominator", "depth"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.instances < 0:
            raise ValueError("instances must be non-negative")


@functools.lru_cache(maxsize=256)
def type_size(ty: Type) -> int:
    return len(enumerate_values(ty))


def _universe(limit: int) -> list[Type]:
    """Types with at most ``limit`` values and at most two connectives."""
    atoms: list[Type] = [UNIT, COIN, COLOR]
    level1 = list(atoms)
    for a in atoms:
        for b in atoms:
            level1 += [Sum(a, b), Tensor(a, b)]
    level2 = list(level1)
    for a in level1:
        for b in atoms:
            level2 += [Sum(a, b), Sum(b, a), Tensor(a, b), Tensor(b, a)]
    out: list[Type] = []
    for ty in level2:
        if ty not in out and type_size(ty) <= limit:
            out.append(ty)
    return out


_UNIVERSE_CACHE: dict[int, list[Type]] = {}


def universe(limit: int) -> list[Type]:
    if limit not in _UNIVERSE_CACHE:
        _UNIVERSE_CACHE[limit] = _universe(limit)
    return _UNIVERSE_CACHE[limit]


@functools.lru_cache(maxsize=None)
def _pools(universe_limit: int, limit: int, min_size: int) -> tuple[tuple[Type, ...], tuple[Type, ...]]:
    pool = tuple(t for t in universe(universe_limit) if min_size <= type_size(t) <= limit) or (UNIT,)
    common = tuple(t for t in (BOOL, UNIT, bold(3), Tensor(BOOL, BOOL)) if t in pool)
    return pool, common


@dataclass
class Gen:
    """A seeded generator; one instance per law keeps laws independent."""

    cfg: GenConfig
    rng: random.Random = field(default_factory=random.Random)
    _counter: int = 0

    @classmethod
    def for_law(cls, cfg: GenConfig, name: str) -> "Gen":
        return cls(cfg, random.Random(f"{cfg.seed}:{name}"))

    # basic choices ----------------------------------------------------------

    def chance(self, p: float) -> bool:
        return self.rng.random() < p

    def choice(self, seq: Sequence):
        return seq[self.rng.randrange(len(seq))]

    def fresh(self, base: str = "v") -> str:
        self._counter += 1
        return f"{base}{self._counter}"

    def ratio(self) -> Fraction:
        d = self.rng.randint(1, self.cfg.max_denominator)
        return Fraction(self.rng.randint(0, d), d)

    def ratios(self, n: int) -> list[Fraction]:
        """``n`` non-negative rationals summing to 1 with a common small denominator."""
        d = self.rng.randint(1, self.cfg.max_denominator)
        cuts = sorted(self.rng.randint(0, d) for _ in range(n - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
        return [Fraction(p, d) for p in parts]

    def scalar(self, positive: bool = False) -> Term:
        r = self.rng.random()
        if r < 0.2:
            return OneOverN(self.rng.randint(2, max(2, self.cfg.max_denominator)))
        if r < 0.3 and not positive:
            return derived.top() if self.chance(0.5) else derived.bot()
        q = self.ratio()
        while positive and q == 0:
            q = self.ratio()
        return derived.scalar(q) if q not in (0, 1) else Prob(q)

    # types and contexts -----------------------------------------------------

    def type(self, max_size: int | None = None, min_size: int = 1) -> Type:
        limit = min(max_size or self.cfg.max_type_size, self.cfg.max_type_size)
        pool, common = _pools(self.cfg.max_type_size, limit, min_size)
        # bias towards the common small types
        if self.chance(0.35) and common:
            return self.choice(common)
        return self.choice(pool)

    def sum_type(self) -> Sum:
        while True:
            ty = self.type(min_size=2)
            if isinstance(ty, Sum):
                return ty

    def tensor_type(self) -> Tensor:
        while True:
            ty = self.type()
            if isinstance(ty, Tensor):
                return ty
            if self.chance(0.3):
                return Tensor(BOOL, BOOL) if self.chance(0.5) else Tensor(UNIT, BOOL)

    def context(self, size: int | None = None, names: Sequence[str] = ("x", "y")) -> Context:
        n = self.rng.randint(0, self.cfg.max_context) if size is None else size
        n = min(n, len(names))
        return Context(tuple((names[i], self.type()) for i in range(n)))

    # splitting variables ----------------------------------------------------

    def split(self, avail: dict[str, Type]) -> tuple[dict[str, Type], dict[str, Type]]:
        left: dict[str, Type] = {}
        right: dict[str, Type] = {}
        for k, v in avail.items():
            (left if self.chance(0.5) else right)[k] = v
        return left, right

    # terms ------------------------------------------------------------------

    def term(self, ty: Type, avail: dict[str, Type] | None = None, depth: int | None = None) -> Term:
        avail = dict(avail or {})
        depth = self.cfg.depth if depth is None else depth
        if depth <= 0 or self.chance(0.25):
            return self.leaf(ty, avail)
        forms = self._forms(ty, avail)
        name, weight_total = None, sum(w for _, w in forms)
        pick = self.rng.random() * weight_total
        for name, w in forms:
            pick -= w
            if pick <= 0:
                break
        return getattr(self, f"_form_{name}")(ty, avail, depth - 1)

    def _forms(self, ty: Type, avail: dict[str, Type]) -> list[tuple[str, float]]:
        forms: list[tuple[str, float]] = [("case", 1.0), ("let", 0.6), ("cond", 1.0), ("lft", 0.3),
                                          ("norm", 0.3), ("ann", 0.1)]
        if any(isinstance(t, Const) for t in avail.values()):
            forms.append(("enumcase", 0.5))
        match ty:
            case Tensor():
                forms.append(("pair", 2.0))
            case Sum(left=a, right=b):
                forms += [("inj", 1.5), ("inlr", 0.5)]
                if copower_count(ty, a) not in (None, 1):
                    forms.append(("instr", 0.7))
                if b == UNIT:
                    forms += [("partial", 3.0)]
                if ty == BOOL:
                    forms += [("predicate", 3.0)]
        return forms

    def leaf(self, ty: Type, avail: dict[str, Type]) -> Term:
        matching = [k for k, t in avail.items() if t == ty]
        if matching and self.chance(0.6):
            return Var(self.choice(matching))
        match ty:
            case One():
                return Star()
            case Const(constructors=cs):
                return Ctor(ty, self.choice(cs))
            case Sum(left=a, right=b):
                if ty == BOOL and self.chance(0.7):
                    return self.scalar()
                if b == UNIT and self.chance(0.2):
                    return derived.fail(a)
                if self.chance(0.5):
                    return Inl(self.leaf(a, avail), b)
                return Inr(self.leaf(b, avail), a)
            case Tensor(left=a, right=b):
                la, ra = self.split(avail)
                return TensorPair(self.leaf(a, la), self.leaf(b, ra))
        raise ValueError(f"cannot generate a value of {ty}")

    # general forms

    def _form_case(self, ty: Type, avail: dict[str, Type], depth: int) -> Term:
        sums = [k for k, t in avail.items() if isinstance(t, Sum)]
        x, y = self.fresh("a"), self.fresh("b")
        if sums and self.chance(0.6):
            v = self.choice(sums)
            st = avail[v]
            rest = {k: t for k, t in avail.items() if k != v}
            scrut: Term = Var(v)
        else:
            st = self.sum_type()
            used, rest = self.split(avail)
            scrut = self.term(st, used, depth)
        left = self.term(ty, {**rest, x: st.left}, depth)
        right = self.term(ty, {**rest, y: st.right}, depth)
        return Case(scrut, x, left, y, right)

    def _form_let(self, ty: Type, avail: dict[str, Type], depth: int) -> Term:
        tensors = [k for k, t in avail.items() if isinstance(t, Tensor)]
        x, y = self.fresh("a"), self.fresh("b")
        if tensors and self.chance(0.7):
            v = self.choice(tensors)
            tt = avail[v]
            rest = {k: t for k, t in avail.items() if k != v}
            bound: Term = Var(v)
        else:
            tt = self.tensor_type()
            used, rest = self.split(avail)
            bound = self.term(tt, used, depth)
        body = self.term(ty, {**rest, x: tt.left, y: tt.right}, depth)
        return LetPair(x, y, bound, body)

    def _form_enumcase(self, ty: Type, avail: dict[str, Type], depth: int) -> Term:
        enums = [k for k, t in avail.items() if isinstance(t, Const)]
        v = self.choice(enums)
        rest = {k: t for k, t in avail.items() if k != v}
        arms = [(c, self.term(ty, rest, depth)) for c in avail[v].constructors]
        self.rng.shuffle(arms)
        return EnumCase(Var(v), tuple(arms))

    def _form_cond(self, ty: Type, avail: dict[str, Type], depth: int) -> Term:
        used, _ = self.split(avail)
        p = self.term(BOOL, used, depth)
        s = self.term(ty, avail, depth)
        t = self.term(ty, avail, depth)
        return derived.cond(p, s, t)

    def _form_lft(self, ty: Type, avail: dict[str, Type], depth: int) -> Term:
        other = self.type(2)
        used, rest = self.split(avail)
        p = self.term(BOOL, used, depth)
        s = Inl(self.term(ty, rest, depth), other)
        t = Inl(self.term(ty, rest, depth), other)
        return Lft(Case(p, derived.WILD, s, derived.WILD, t))

    def _form_norm(self, ty: Type, avail: dict[str, Type], depth: int) -> Term:
        return self.closed_norm(ty, depth)

    def closed_norm(self, ty: Type, depth: int) -> Term:
        s = self.term(Sum(ty, UNIT), {}, depth)
        mass = sum((w for v, w in denote(s, {}).items() if v.tag == "inl"), Fraction(0))
        if mass == 0:
            s = Ovee(self.scale(self.scalar(positive=True), derived.ret(self.term(ty, {}, depth))),
                     self.scale(Prob(Fraction(0)), s))
        return Norm(s)

    def _form_ann(self, ty: Type, avail: dict[str, Type], depth: int) -> Term:
        return Ann(self.term(ty, avail, depth), ty)

    # type-specific forms

    def _form_pair(self, ty: Tensor, avail: dict[str, Type], depth: int) -> Term:
        la, ra = self.split(avail)
        return TensorPair(self.term(ty.left, la, depth), self.term(ty.right, ra, depth))

    def _form_inj(self, ty: Sum, avail: dict[str, Type], depth: int) -> Term:
        if self.chance(0.5):
            return Inl(self.term(ty.left, avail, depth), ty.right)
        return Inr(self.term(ty.right, avail, depth), ty.left)

    def _form_inlr(self, ty: Sum, avail: dict[str, Type], depth: int) -> Term:
        used, rest = self.split(avail)
        p = self.term(BOOL, used, depth)
        a = self.term(ty.left, rest, depth)
        b = self.term(ty.right, rest, depth)
        w = derived.WILD
        s = Case(p, w, derived.ret(a), w, derived.fail(ty.left))
        t = Case(p, w, derived.fail(ty.right), w, derived.ret(b))
        return Inlr(s, t)

    def _form_instr(self, ty: Sum, avail: dict[str, Type], depth: int) -> Term:
        base = ty.left
        n = copower_count(ty, base)
        x = self.fresh("i")
        test = self.term(bold(n), {x: base}, depth)
        arg = self.term(base, avail, depth)
        return Instr(x, test, arg)

    def _form_partial(self, ty: Sum, avail: dict[str, Type], depth: int) -> Term:
        return self.partial(ty.left, avail, depth)

    def _form_predicate(self, ty: Type, avail: dict[str, Type], depth: int) -> Term:
        return self.predicate_form(avail, depth)

    # partial maps -------------------------------------------------------------

    def scale(self, q: Term, s: Term, ty: Type | None = None) -> Term:
        """``do _ <- q; s``: the substate ``s`` weighted by the scalar ``q``."""
        return Case(q, derived.WILD, s, derived.WILD, derived.fail(ty))

    def partial(self, a: Type, avail: dict[str, Type], depth: int) -> Term:
        """A term of type ``a + 1``."""
        r = self.rng.random()
        if r < 0.15:
            return derived.fail(a)
        if r < 0.35:
            return derived.ret(self.term(a, avail, depth))
        if r < 0.55:
            # do x <- s; t
            b = self.type(2)
            x = self.fresh("d")
            used, rest = self.split(avail)
            s = self.partial(b, used, depth - 1) if depth > 0 else derived.fail(b)
            t = self.partial(a, {**rest, x: b}, depth - 1) if depth > 0 else derived.fail(a)
            return derived.do(x, s, t, a)
        if r < 0.75:
            # assert on a generated value
            x = self.fresh("p")
            p = self.term(BOOL, {x: a}, max(depth - 1, 0))
            return derived.assert_(x, p, self.term(a, avail, max(depth - 1, 0)), a)
        # disjoint partial sum
        q1, q2 = self.ratios(3)[:2]
        s = self.term(Sum(a, UNIT), avail, max(depth - 1, 0))
        t = self.term(Sum(a, UNIT), avail, max(depth - 1, 0))
        return Ovee(self.scale(derived.scalar(q1) if q1 not in (0, 1) else Prob(q1), s, a),
                    self.scale(derived.scalar(q2) if q2 not in (0, 1) else Prob(q2), t, a))

    # predicates -------------------------------------------------------------

    def predicate_form(self, avail: dict[str, Type], depth: int) -> Term:
        r = self.rng.random()
        sub = max(depth - 1, 0)
        if r < 0.2:
            return derived.ortho(self.term(BOOL, avail, sub))
        if r < 0.4:
            return derived.andthen(self.term(BOOL, avail, sub), self.term(BOOL, avail, sub))
        if r < 0.55:
            q1, q2 = self.ratios(3)[:2]
            return Ovee(self.scale(_lit(q1), self.term(BOOL, avail, sub)),
                        self.scale(_lit(q2), self.term(BOOL, avail, sub)))
        if r < 0.7:
            a = self.type(3)
            return derived.dom(self.partial(a, avail, sub))
        if r < 0.8:
            a = self.type(3)
            return derived.ker(self.partial(a, avail, sub))
        if r < 0.9:
            st = self.sum_type()
            return derived.inl_test(self.term(st, avail, sub))
        sums = [k for k, t in avail.items() if t == BOOL]
        if sums:
            return Var(self.choice(sums))
        return self.scalar()

    def predicate(self, ty: Type, var: str = "x", depth: int | None = None) -> Term:
        """``var : ty |- p : 2``."""
        return self.term(BOOL, {var: ty}, self.cfg.depth if depth is None else depth)

    def zero_biased_predicate(self, avail: dict[str, Type], depth: int | None = None) -> Term:
        """A predicate that is often equal to bot, for laws with rare hypotheses."""
        depth = self.cfg.depth if depth is None else depth
        r = self.rng.random()
        if r < 0.25:
            return derived.bot()
        if r < 0.4:
            return Prob(Fraction(0))
        if r < 0.55:
            return derived.andthen(self.term(BOOL, avail, depth - 1), derived.bot())
        if r < 0.65:
            return derived.dom(derived.fail(self.type(2)))
        return self.term(BOOL, avail, depth)

    def ntest(self, n: int, avail: dict[str, Type], depth: int | None = None) -> list[Term]:
        """Predicates ``p_1 .. p_n`` summing to top at every environment."""
        depth = self.cfg.depth if depth is None else depth
        r = self.rng.random()
        if r < 0.15 and n >= 1:
            return [derived.top() if i == 0 else derived.bot() for i in range(n)] if n > 1 else [derived.top()]
        if r < 0.35:
            return [_lit(q) for q in self.ratios(n)]
        if r < 0.5 and n == 2:
            p = self.term(BOOL, avail, depth)
            return [p, derived.ortho(p)]
        phi = self.term(BOOL, avail, depth)
        alphas, betas = self.ratios(n), self.ratios(n)
        w = derived.WILD
        return [Case(phi, w, _lit(a), w, _lit(b)) for a, b in zip(alphas, betas)]


def _lit(q: Fraction) -> Term:
    q = Fraction(q)
    if q == 1:
        return derived.top()
    if q == 0:
        return derived.bot()
    return derived.scalar(q)


def inl_mass(t: Term, env: dict) -> Fraction:
    return sum((w for v, w in denote(t, env).items() if v.tag == "inl"), Fraction(0))


def top_mass(t: Term, env: dict) -> Fraction:
    return denote(t, env).get(TRUE, Fraction(0))


# module-level entry points ------------------------------------------------


def gen_type(cfg: GenConfig, rng: random.Random | None = None, max_size: int | None = None) -> Type:
    return Gen(cfg, rng or random.Random(cfg.seed)).type(max_size)


def gen_term(cfg: GenConfig, ctx: Context, ty: Type, rng: random.Random | None = None,
             depth: int | None = None) -> Term:
    return Gen(cfg, rng or random.Random(cfg.seed)).term(ty, dict(ctx), depth)


def gen_predicate(cfg: GenConfig, ty: Type, rng: random.Random | None = None, var: str = "x") -> Term:
    """``var : ty |- p : 2``; with ``depth = 1`` a constant scalar."""
    g = Gen(cfg, rng or random.Random(cfg.seed))
    if cfg.depth <= 1:
        return g.scalar()
    return g.predicate(ty, var)


__all__ = [
    "COIN", "COLOR", "Gen", "GenConfig", "gen_predicate", "gen_term", "gen_type", "inl_mass",
    "top_mass", "type_size", "universe",
]
