"""Discrete semantics: types denote finite sets, terms denote distributions.

A term ``x1 : A1, ..., xn : An |- t : B`` is interpreted, for each
environment of values, as a finite-support distribution over the values of
``B`` with exact rational weights.
"""
from __future__ import annotations

import functools
import itertools
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

from .rationals import format_decimal, format_ratio
from .syntax import (
    Ann, Case, Const, Context, Ctor, EnumCase, Inl, Inlr, Inr, Instr, LetPair, Lft,
    Magic, Norm, One, OneOverN, Ovee, Prob, Star, Sum, Tensor, Term, TensorPair, Type,
    Var, Zero, free_vars,
)


# ---------------------------------------------------------------- values


class StarV(NamedTuple):
    tag: str = "*"

    def __str__(self) -> str:
        return "*"


class InlV(NamedTuple):
    value: "Value"
    tag: str = "inl"

    def __str__(self) -> str:
        return f"inl {_atomic(self.value)}"


class InrV(NamedTuple):
    value: "Value"
    tag: str = "inr"

    def __str__(self) -> str:
        return f"inr {_atomic(self.value)}"


class PairV(NamedTuple):
    left: "Value"
    right: "Value"
    tag: str = "pair"

    def __str__(self) -> str:
        right = self.right
        text = str(right) if not isinstance(right, PairV) else f"({right})"
        left = self.left
        ltext = str(left) if not isinstance(left, PairV) else f"({left})"
        return f"{ltext} (x) {text}"


class EnumV(NamedTuple):
    enum: str
    constructor: str
    index: int
    tag: str = "enum"

    def __str__(self) -> str:
        return self.constructor


Value = Union[StarV, InlV, InrV, PairV, EnumV]

STAR = StarV()
TRUE = InlV(STAR)
FALSE = InrV(STAR)


def _atomic(v: Value) -> str:
    if isinstance(v, (StarV, EnumV)):
        return str(v)
    return f"({v})"


def value_key(v: Value) -> tuple:
    """Canonical order: left before right, lexicographic pairs, enum order."""
    if isinstance(v, StarV):
        return ()
    if isinstance(v, InlV):
        return (0, value_key(v.value))
    if isinstance(v, InrV):
        return (1, value_key(v.value))
    if isinstance(v, PairV):
        return (value_key(v.left), value_key(v.right))
    return (v.index,)


def numeral_value(i: int, n: int) -> Value:
    """The value of ``i : n`` (1-based) in the right-nested type ``n``."""
    return injection_value(i, n, STAR)


def injection_value(i: int, n: int, v: Value) -> Value:
    """``in_i^n(v)`` in the right-nested copower ``n . A``."""
    if not 1 <= i <= n:
        raise ValueError(f"index {i} outside 1..{n}")
    out = v if i == n else InlV(v)
    for _ in range(i - 1):
        out = InrV(out)
    return out


def numeral_index(v: Value) -> int:
    """1-based index of a value of a type ``n`` (inverse of ``numeral_value``)."""
    i = 1
    while isinstance(v, InrV):
        v = v.value
        i += 1
    return i


def _retag(test_value: Value, payload: Value) -> Value:
    # in_i^n(a) is the numeral i : n with its unit leaf replaced by a
    if isinstance(test_value, StarV):
        return payload
    if isinstance(test_value, InlV):
        return InlV(_retag(test_value.value, payload))
    if isinstance(test_value, InrV):
        return InrV(_retag(test_value.value, payload))
    raise ValueError(f"not a numeral: {test_value}")


class UnknownEnum(LookupError):
    pass


def enumerate_values(ty: Type) -> list[Value]:
    """All values of ``ty`` in canonical order."""
    return list(_values(ty))


@functools.lru_cache(maxsize=1024)
def _values(ty: Type) -> tuple[Value, ...]:
    return tuple(_enumerate(ty))


def _enumerate(ty: Type) -> list[Value]:
    match ty:
        case Zero():
            return []
        case One():
            return [STAR]
        case Sum(left, right):
            return [InlV(v) for v in enumerate_values(left)] + [
                InrV(v) for v in enumerate_values(right)
            ]
        case Tensor(left, right):
            rs = enumerate_values(right)
            return [PairV(a, b) for a in enumerate_values(left) for b in rs]
        case Const(name=name, constructors=ctors):
            if ctors is None:
                raise UnknownEnum(f"type {name} was never declared")
            return [EnumV(name, c, i) for i, c in enumerate(ctors)]
    raise TypeError(f"not a type: {ty!r}")


def value_has_type(v: Value, ty: Type) -> bool:
    match ty:
        case One():
            return isinstance(v, StarV)
        case Sum(left, right):
            if isinstance(v, InlV):
                return value_has_type(v.value, left)
            return isinstance(v, InrV) and value_has_type(v.value, right)
        case Tensor(left, right):
            return (isinstance(v, PairV) and value_has_type(v.left, left)
                    and value_has_type(v.right, right))
        case Const(name=name, constructors=ctors):
            return (isinstance(v, EnumV) and v.enum == name and ctors is not None
                    and 0 <= v.index < len(ctors) and ctors[v.index] == v.constructor)
    return False


# ---------------------------------------------------------------- distributions


Weights = dict  # Value -> Fraction, support only


class Dist:
    """A finite-support map from values to exact positive weights.

    Total mass is 1 for terms the checker accepts.  Equality is exact and
    ignores the carrier annotation.
    """

    __slots__ = ("carrier", "weights")

    def __init__(self, weights: Mapping[Value, Fraction], carrier: Type | None = None):
        self.weights: dict[Value, Fraction] = {v: Fraction(w) for v, w in weights.items() if w}
        self.carrier = carrier

    @classmethod
    def dirac(cls, v: Value, carrier: Type | None = None) -> "Dist":
        return cls({v: Fraction(1)}, carrier)

    @classmethod
    def uniform(cls, values: Iterable[Value], carrier: Type | None = None) -> "Dist":
        vs = list(values)
        return cls({v: Fraction(1, len(vs)) for v in vs}, carrier)

    def __getitem__(self, v: Value) -> Fraction:
        return self.weights.get(v, Fraction(0))

    def __iter__(self) -> Iterator[Value]:
        return iter(self.support())

    def __len__(self) -> int:
        return len(self.weights)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dist):
            return self.weights == other.weights
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.weights.items()))

    def support(self) -> list[Value]:
        return sorted(self.weights, key=value_key)

    def items(self) -> list[tuple[Value, Fraction]]:
        return [(v, self.weights[v]) for v in self.support()]

    @property
    def mass(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def map(self, f) -> "Dist":
        out: dict[Value, Fraction] = defaultdict(Fraction)
        for v, w in self.weights.items():
            out[f(v)] += w
        return Dist(out)

    def __repr__(self) -> str:
        body = ", ".join(f"{v}: {format_ratio(w)}" for v, w in self.items())
        return f"Dist({{{body}}})"

    def render(self) -> list[str]:
        return [f"{v} : {format_ratio(w)} ({format_decimal(w)})" for v, w in self.items()]


# ---------------------------------------------------------------- evaluation


class EvaluationError(ArithmeticError):
    """A term outside the checker's guarantees reached an undefined clause."""


Env = Mapping[str, Value]


def denote(t: Term, env: Env) -> dict[Value, Fraction]:
    """``P(t(env) = -)`` as a weight dictionary (support only)."""
    match t:
        case Var(name=name):
            try:
                return {env[name]: Fraction(1)}
            except KeyError:
                raise EvaluationError(f"unbound variable {name}") from None
        case Star():
            return {STAR: Fraction(1)}
        case Prob(value=q):
            return _coin(q)
        case OneOverN(n=n):
            return _coin(Fraction(1, n))
        case Ann(term=inner):
            return denote(inner, env)
        case TensorPair(left=a, right=b):
            da, db = denote(a, env), denote(b, env)
            return {PairV(va, vb): wa * wb for va, wa in da.items() for vb, wb in db.items()}
        case Inl(term=a):
            return {InlV(v): w for v, w in denote(a, env).items()}
        case Inr(term=a):
            return {InrV(v): w for v, w in denote(a, env).items()}
        case Magic():
            return {}
        case LetPair(x=x, y=y, bound=s, body=b):
            out: dict[Value, Fraction] = defaultdict(Fraction)
            for pv, w in denote(s, env).items():
                inner = {**env, x: pv.left, y: pv.right}
                for v, w2 in denote(b, inner).items():
                    out[v] += w * w2
            return _prune(out)
        case Case(scrutinee=r, x=x, left=a, y=y, right=b):
            out = defaultdict(Fraction)
            for v, w in denote(r, env).items():
                if isinstance(v, InlV):
                    branch = denote(a, {**env, x: v.value})
                else:
                    branch = denote(b, {**env, y: v.value})
                for u, w2 in branch.items():
                    out[u] += w * w2
            return _prune(out)
        case EnumCase(scrutinee=r, arms=arms):
            table = dict(arms)
            out = defaultdict(Fraction)
            for v, w in denote(r, env).items():
                for u, w2 in denote(table[v.constructor], env).items():
                    out[u] += w * w2
            return _prune(out)
        case Ctor(enum=enum, name=name):
            ctors = enum.constructors or ()
            return {EnumV(enum.name, name, ctors.index(name)): Fraction(1)}
        case Inlr(left=s, right=u):
            out = {}
            for v, w in denote(s, env).items():
                if isinstance(v, InlV):
                    out[InlV(v.value)] = w
            for v, w in denote(u, env).items():
                if isinstance(v, InlV):
                    out[InrV(v.value)] = w
            return out
        case Lft(term=a):
            return {v.value: w for v, w in denote(a, env).items() if isinstance(v, InlV)}
        case Instr(var=x, test=p, arg=s):
            out = defaultdict(Fraction)
            for a, w in denote(s, env).items():
                for i, w2 in denote(p, {x: a}).items():
                    out[_retag(i, a)] += w * w2
            return _prune(out)
        case Norm(term=a):
            sub = denote(a, env)
            mass = sum((w for v, w in sub.items() if isinstance(v, InlV)), Fraction(0))
            if mass == 0:
                raise EvaluationError("normalising a substate of zero mass")
            return {v.value: w / mass for v, w in sub.items() if isinstance(v, InlV)}
        case Ovee(left=s, right=u):
            ds, du = denote(s, env), denote(u, env)
            out = defaultdict(Fraction)
            for d in (ds, du):
                for v, w in d.items():
                    if isinstance(v, InlV):
                        out[v] += w
            undefined = ds.get(FALSE_UNIT, Fraction(0)) + du.get(FALSE_UNIT, Fraction(0)) - 1
            if undefined < 0:
                raise EvaluationError("partial sum of overlapping substates")
            out[FALSE_UNIT] += undefined
            return _prune(out)
    raise TypeError(f"not a term: {t!r}")


FALSE_UNIT = InrV(STAR)  # the divergence point *_2 of A + 1


def _coin(q: Fraction) -> dict[Value, Fraction]:
    return _prune({TRUE: q, FALSE: 1 - q})


def _prune(weights: Mapping[Value, Fraction]) -> dict[Value, Fraction]:
    return {v: w for v, w in weights.items() if w}


def evaluate(ctx: Context, t: Term, env: Env | None = None, ty: Type | None = None) -> Dist:
    """``P(t(env) = -)`` for ``ctx |- t``; ``env`` must cover the free variables."""
    env = dict(env or {})
    for name in free_vars(t):
        declared = ctx.lookup(name)
        if name not in env:
            raise EvaluationError(f"environment misses {name}")
        if declared is not None and not value_has_type(env[name], declared):
            raise EvaluationError(f"{name} = {env[name]} is not a value of {declared}")
    if ty is None:
        from .typecheck import infer_type

        ty = infer_type(ctx, t)
    return Dist(denote(t, env), ty)


# short alias; ``evaluate`` avoids shadowing the builtin at import sites
eval = evaluate  # noqa: A001


def environments(ctx: Context) -> list[dict[str, Value]]:
    """Cartesian enumeration of the context's values, canonical order."""
    names = ctx.names
    domains = [enumerate_values(ty) for _, ty in ctx]
    return [dict(zip(names, combo)) for combo in itertools.product(*domains)]


def env_key(env: Env, ctx: Context) -> tuple[tuple[str, Value], ...]:
    return tuple((n, env[n]) for n in ctx.names)


def eval_all(ctx: Context, t: Term, ty: Type | None = None) -> dict[tuple, Dist]:
    """One distribution per environment of ``ctx``, keyed by ``((name, value), ...)``."""
    if ty is None:
        from .typecheck import infer_type

        ty = infer_type(ctx, t)
    return {env_key(env, ctx): Dist(denote(t, env), ty) for env in environments(ctx)}


def table(ctx: Context, t: Term) -> list[dict[Value, Fraction]]:
    """Denotations at every environment of ``ctx`` (no typing, no carrier)."""
    return [denote(t, env) for env in environments(ctx)]
