"""Derived constructions expanded into core terms.

Every builder returns a core :class:`~comet.syntax.Term`.  Injections are
annotated when the missing summand is known and left as holes otherwise;
the bidirectional checker fills holes from the expected type.

The law suite reaches these through the module (``derived.andthen``), so a
monkeypatched builder is picked up everywhere.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .syntax import (
    UNIT, Case, Inl, Inlr, Inr, Instr, LetPair, Lft, Norm, OneOverN, Ovee, Prob, Star,
    Term, TensorPair, Type, Var, bold, copower, free_vars, fresh_name, substitute,
)

WILD = "_"  # vacuous binder; never a legal surface variable, so never referenced


# ---------------------------------------------------------------- truth values


def top() -> Term:
    return Inl(Star(), UNIT)


def bot() -> Term:
    return Inr(Star(), UNIT)


def scalar(q: Fraction | int) -> Term:
    """Literal scalar; ``1/n`` becomes the primitive coin."""
    q = Fraction(q)
    if q.numerator == 1 and q.denominator >= 2:
        return OneOverN(q.denominator)
    return Prob(q)


def ortho(p: Term) -> Term:
    return Case(p, WILD, bot(), WILD, top())


# ---------------------------------------------------------------- partial maps


def ret(t: Term, ty: Type | None = None) -> Term:
    """``return t = inl t`` into ``A + 1``."""
    return Inl(t, UNIT)


def fail(ty: Type | None = None) -> Term:
    """``fail = inr *`` at ``ty + 1`` (a hole when ``ty`` is unknown)."""
    return Inr(Star(), ty)


def do(x: str, s: Term, t: Term, ty: Type | None = None) -> Term:
    """``do x <- s; t``; ``ty`` is the type ``B`` with ``t : B + 1`` if known."""
    return Case(s, x, t, WILD, fail(ty))


def bind(s: Term, f, var: str = "x") -> Term:
    """``s >>= f`` for a term-building function ``f``."""
    x = fresh_name(var, free_vars(s))
    return do(x, s, f(Var(x)))


def scale(s: Term, t: Term) -> Term:
    """Scalar multiplication ``do _ <- s; t`` of a substate."""
    return do(WILD, s, t)


def inl_test(t: Term) -> Term:
    return Case(t, WILD, top(), WILD, bot())


def inr_test(t: Term) -> Term:
    return Case(t, WILD, bot(), WILD, top())


def dom(t: Term) -> Term:
    return inl_test(t)


def ker(t: Term) -> Term:
    return inr_test(t)


def swap(t: Term) -> Term:
    return Case(t, "x", Inr(Var("x")), "y", Inl(Var("y")))


def rgt(t: Term) -> Term:
    return Lft(swap(t))


# ---------------------------------------------------------------- tensors


def fst(t: Term) -> Term:
    return LetPair("x", WILD + "2", t, Var("x"))


def snd(t: Term) -> Term:
    return LetPair(WILD + "1", "y", t, Var("y"))


def let(x: str, s: Term, t: Term) -> Term:
    """Local definition ``let x = s in t``: plain substitution."""
    return substitute(t, x, s)


# ---------------------------------------------------------------- copowers


def inj(i: int, n: int, t: Term, ty: Type | None = None) -> Term:
    """``in_i^n(t)`` into the right-nested ``n . A`` (annotated when ``ty = A`` is known)."""
    if not 1 <= i <= n:
        raise ValueError(f"injection index {i} outside 1..{n}")
    if i == n:
        out = t
    else:
        out = Inl(t, copower(n - i, ty) if ty is not None else None)
    for k in range(i - 1, 0, -1):
        out = Inr(out, ty)
    return out


def numeral(i: int, n: int) -> Term:
    return inj(i, n, Star(), UNIT)


def ncase(t: Term, n: int, arms: Sequence[tuple[str, Term]]) -> Term:
    """``case_{i=1}^n t of in_i(x_i) -> t_i`` as nested binary cases."""
    if len(arms) != n or n < 1:
        raise ValueError(f"{n}-fold case needs {n} arms, got {len(arms)}")
    if n == 1:
        # bind through a pair with * so that t is still checked and evaluated
        x, body = arms[0]
        other = WILD if x != WILD else WILD + "0"
        return LetPair(x, other, TensorPair(t, Star()), body)
    x, body = arms[0]
    avoid = set().union(*(free_vars(b) for _, b in arms[1:]))
    rest = fresh_name("r", avoid)
    return Case(t, x, body, rest, ncase(Var(rest), n - 1, arms[1:]))


def nabla(t: Term, n: int) -> Term:
    return ncase(t, n, [("x", Var("x"))] * n)


def index(t: Term, n: int) -> Term:
    return ncase(t, n, [(WILD, numeral(i, n)) for i in range(1, n + 1)])


def proj(t: Term, n: int, indices: Sequence[int], ty: Type | None = None) -> Term:
    """Partial projection onto the copies listed in ``indices``."""
    keep = set(indices)
    return ncase(t, n, [
        ("x", ret(Var("x"))) if i in keep else (WILD, fail(ty)) for i in range(1, n + 1)
    ])


def in_test(i: int, t: Term, n: int) -> Term:
    """Predicate on ``n . A`` testing for the ``i``-th copy."""
    return ncase(t, n, [(WILD, top() if j == i else bot()) for j in range(1, n + 1)])


def times(n: int, t: Term) -> Term:
    """``n . t``, the n-fold partial sum (``0 . t = fail``)."""
    if n == 0:
        return fail()
    out = t
    for _ in range(n - 1):
        out = Ovee(t, out)
    return out


def ovee_all(terms: Sequence[Term]) -> Term:
    """Right-nested ``t1 (+) (t2 (+) ...)``."""
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Ovee(t, out)
    return out


def ratio(m: int, n: int) -> Term:
    """``m/n`` as the m-fold partial sum of ``1/n``."""
    if n < 2:
        return top() if m == n else bot()
    return times(m, OneOverN(n))


# ---------------------------------------------------------------- subjects


class Subject:
    """The variables a family of predicates is measured on.

    With no variables the subject is ``*``; with one it is that variable;
    with several it is their tensor, bound as ``binder`` and unpacked with
    nested let-pairs around each use.
    """

    def __init__(self, names: Sequence[str], avoid: frozenset[str] = frozenset()):
        self.names = tuple(names)
        if not self.names:
            self.binder = fresh_name("u", avoid)
        elif len(self.names) == 1:
            self.binder = self.names[0]
        else:
            self.binder = fresh_name("z", avoid | set(self.names))

    @classmethod
    def of(cls, *terms: Term, extra: Sequence[Term] = ()) -> "Subject":
        names: set[str] = set()
        for t in terms:
            names |= free_vars(t)
        avoid: set[str] = set(names)
        for t in extra:
            avoid |= free_vars(t)
        return cls(sorted(names), frozenset(avoid))

    def term(self) -> Term:
        if not self.names:
            return Star()
        out: Term = Var(self.names[-1])
        for n in reversed(self.names[:-1]):
            out = TensorPair(Var(n), out)
        return out

    def unpack(self, body: Term) -> Term:
        if len(self.names) < 2:
            return body
        return self._unpack(Var(self.binder), self.names, body)

    def _unpack(self, source: Term, names: Sequence[str], body: Term) -> Term:
        if len(names) == 2:
            return LetPair(names[0], names[1], source, body)
        rest = fresh_name("w", set(self.names) | free_vars(body) | {self.binder})
        return LetPair(names[0], rest, source, self._unpack(Var(rest), names[1:], body))


# ---------------------------------------------------------------- instruments


def instr(x: str, p: Term, t: Term) -> Term:
    return Instr(x, p, t)


def assert_(x: str, p: Term, t: Term, ty: Type | None = None) -> Term:
    """``case instr_{\\x p}(t) of inl x -> return x | inr _ -> fail``."""
    if x.startswith(WILD):
        # the result refers to the bound variable, so it needs a real name
        x = fresh_name("u", free_vars(p))
    return Case(Instr(x, p, t), x, ret(Var(x)), WILD, fail(ty))


def assert_on(p: Term, t: Term | None = None) -> Term:
    """Assert ``p`` on its own free variables (or on ``t`` for a one-variable ``p``)."""
    subj = Subject.of(p)
    arg = subj.term() if t is None else t
    return assert_(subj.binder, subj.unpack(p), arg)


def andthen(p: Term, q: Term) -> Term:
    """Sequential product ``p & q = do x <- assert_p(x); q`` over the shared subject."""
    subj = Subject.of(p, q)
    x = subj.binder
    return do(x, assert_(x, subj.unpack(p), subj.term()), subj.unpack(q), UNIT)


def condition(t: Term, x: str, p: Term) -> Term:
    """``t | p = norm(assert_{\\x p}(t))``."""
    return Norm(assert_(x, p, t))


def ntest(preds: Sequence[Term]) -> Term:
    """The n-valued test of an n-test ``(p_1, ..., p_n)``.

    ``lft(q_1 (+) ... (+) q_n)`` with ``q_i = case p_i of inl _ -> return i
    | inr _ -> fail``; well typed exactly when the predicates sum to top.
    """
    n = len(preds)
    qs = [Case(p, WILD, ret(numeral(i, n)), WILD, fail(bold(n))) for i, p in enumerate(preds, 1)]
    return Lft(ovee_all(qs))


def ntest_inductive(preds: Sequence[Term]) -> Term:
    """The n-valued test built by induction on n with partial pairing.

    For ``n >= 3`` the last two predicates are merged, the (n-1)-valued
    test of the merged family is split again with ``inlr`` against the
    bound ``q_{n-1} (+) q_n``, and the result is re-indexed into ``n``.
    """
    n = len(preds)
    if n == 1:
        return Star()
    if n == 2:
        return preds[0]
    merged = list(preds[:-2]) + [Ovee(preds[-2], preds[-1])]
    inner = ntest_inductive(merged)
    m = n - 2
    rest = ncase(inner, n - 1, [(WILD, ret(numeral(i, m))) for i in range(1, m + 1)]
                 + [(WILD, fail(bold(m)))])
    bound = Ovee(
        Case(preds[-2], WILD, ret(numeral(1, 2)), WILD, fail(bold(2))),
        Case(preds[-1], WILD, ret(numeral(2, 2)), WILD, fail(bold(2))),
    )
    embed = ncase(Var("i"), m, [(WILD, numeral(i, n)) for i in range(1, m + 1)])
    last = Case(Var("j"), WILD, numeral(n - 1, n), WILD, numeral(n, n))
    return Case(Inlr(rest, bound), "i", embed, "j", last)


def measure(arms: Sequence[tuple[Term, Term]]) -> Term:
    """``measure p_1 -> t_1 | ... | p_n -> t_n`` through the n-test instrument."""
    preds = [p for p, _ in arms]
    bodies = [t for _, t in arms]
    subj = Subject.of(*preds, extra=bodies)
    n = len(arms)
    z = subj.binder
    test = subj.unpack(ntest(preds))
    scrutinee = Instr(z, test, subj.term())
    return ncase(scrutinee, n, [(z, subj.unpack(t)) for t in bodies])


def cond(p: Term, s: Term, t: Term) -> Term:
    """``if p then s else t``: case over the 2-valued instrument of ``p``."""
    subj = Subject.of(p, extra=(s, t))
    z = subj.binder
    scrutinee = Instr(z, subj.unpack(p), subj.term())
    return Case(scrutinee, z, subj.unpack(s), z, subj.unpack(t))


def case_cond(p: Term, s: Term, t: Term) -> Term:
    """``case p of inl _ -> s | inr _ -> t`` (agrees with :func:`cond` when
    ``s`` and ``t`` ignore the tested variables)."""
    return Case(p, WILD, s, WILD, t)


# ---------------------------------------------------------------- pairing


def inlr(s: Term, t: Term) -> Term:
    return Inlr(s, t)


def lft(t: Term) -> Term:
    return Lft(t)


def marginal(t: Term, side: int) -> Term:
    if side == 1:
        return fst(t)
    if side == 2:
        return snd(t)
    raise ValueError("marginal side must be 1 or 2")
