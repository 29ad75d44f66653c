"""Core types and terms, substitution, alpha-equivalence and contexts."""
from __future__ import annotations

import dataclasses
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, Mapping


# ---------------------------------------------------------------- types


@dataclass(frozen=True, slots=True)
class Type:
    def __str__(self) -> str:
        return format_type(self)


@dataclass(frozen=True, slots=True)
class Zero(Type):
    pass


@dataclass(frozen=True, slots=True)
class One(Type):
    pass


@dataclass(frozen=True, slots=True)
class Sum(Type):
    left: Type
    right: Type


@dataclass(frozen=True, slots=True)
class Tensor(Type):
    left: Type
    right: Type


@dataclass(frozen=True, slots=True)
class Const(Type):
    """A declared finite enumeration.

    ``constructors`` is ``None`` for a name that was never declared; such a
    type cannot be enumerated.
    """

    name: str
    constructors: tuple[str, ...] | None = None


ZERO = Zero()
UNIT = One()
BOOL = Sum(UNIT, UNIT)


def copower(n: int, ty: Type) -> Type:
    """``n . A = A + (A + ... + A)``, right-nested; ``0 . A = 0``, ``1 . A = A``."""
    if n < 0:
        raise ValueError("negative copower")
    if n == 0:
        return ZERO
    result = ty
    for _ in range(n - 1):
        result = Sum(ty, result)
    return result


def bold(n: int) -> Type:
    """The n-element type ``n . 1``."""
    return copower(n, UNIT)


def copower_count(ty: Type, base: Type) -> int | None:
    """Largest n with ``ty == n . base`` read right-nested, or None."""
    if ty == base:
        return 1
    n = 1
    while isinstance(ty, Sum) and ty.left == base:
        ty = ty.right
        n += 1
        if ty == base:
            return n
    return None


def count_ones(ty: Type) -> int | None:
    """n when ``ty`` is structurally the type ``n`` (a right-nested sum of 1s)."""
    return copower_count(ty, UNIT)


def format_type(ty: Type, prec: int = 0) -> str:
    match ty:
        case Zero():
            return "0"
        case One():
            return "1"
        case Const(name=name):
            return name
        case Sum(left, right):
            n = count_ones(ty)
            if n is not None:
                return str(n)
            text = f"{format_type(left, 1)} + {format_type(right, 0)}"
            return f"({text})" if prec > 0 else text
        case Tensor(left, right):
            text = f"{format_type(left, 2)} (x) {format_type(right, 1)}"
            return f"({text})" if prec > 1 else text
    raise TypeError(f"not a type: {ty!r}")


# ---------------------------------------------------------------- terms


@dataclass(frozen=True, slots=True)
class Span:
    line: int
    column: int
    end_line: int = 0
    end_column: int = 0
    note: str = ""

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True, slots=True)
class Term:
    span: Span | None = field(default=None, compare=False, repr=False, kw_only=True)

    def __str__(self) -> str:
        from .surface.printer import print_term

        return print_term(self)


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Star(Term):
    pass


@dataclass(frozen=True, slots=True)
class TensorPair(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class LetPair(Term):
    """``let x (x) y = bound in body``."""

    x: str
    y: str
    bound: Term
    body: Term


@dataclass(frozen=True, slots=True)
class Magic(Term):
    term: Term
    ty: Type | None = None


@dataclass(frozen=True, slots=True)
class Inl(Term):
    term: Term
    right: Type | None = None


@dataclass(frozen=True, slots=True)
class Inr(Term):
    term: Term
    left: Type | None = None


@dataclass(frozen=True, slots=True)
class Case(Term):
    """``case scrutinee of inl x -> left | inr y -> right``."""

    scrutinee: Term
    x: str
    left: Term
    y: str
    right: Term


@dataclass(frozen=True, slots=True)
class Inlr(Term):
    """Partial pairing ``<left, right>``."""

    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Lft(Term):
    term: Term


@dataclass(frozen=True, slots=True)
class Instr(Term):
    """``instr_{\\var. test}(arg)``; ``test`` may mention only ``var``."""

    var: str
    test: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class OneOverN(Term):
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("1/n needs n >= 2")


@dataclass(frozen=True, slots=True)
class Prob(Term):
    """A scalar literal: the coin returning top with probability ``value``."""

    value: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.value <= 1:
            raise ValueError(f"scalar {self.value} outside [0, 1]")


@dataclass(frozen=True, slots=True)
class Norm(Term):
    term: Term


@dataclass(frozen=True, slots=True)
class Ovee(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Ctor(Term):
    enum: Const
    name: str


@dataclass(frozen=True, slots=True)
class EnumCase(Term):
    scrutinee: Term
    arms: tuple[tuple[str, Term], ...]


@dataclass(frozen=True, slots=True)
class Ann(Term):
    """Type ascription; erased by the checker, transparent to evaluation."""

    term: Term
    ty: Type


# ---------------------------------------------------------------- traversal


def children(t: Term) -> tuple[Term, ...]:
    match t:
        case Var() | Star() | OneOverN() | Prob() | Ctor():
            return ()
        case TensorPair(left=a, right=b) | Inlr(left=a, right=b) | Ovee(left=a, right=b):
            return (a, b)
        case LetPair(bound=a, body=b):
            return (a, b)
        case Magic(term=a) | Inl(term=a) | Inr(term=a) | Lft(term=a) | Norm(term=a) | Ann(term=a):
            return (a,)
        case Case(scrutinee=r, left=a, right=b):
            return (r, a, b)
        case Instr(test=a, arg=b):
            return (a, b)
        case EnumCase(scrutinee=r, arms=arms):
            return (r,) + tuple(body for _, body in arms)
    raise TypeError(f"not a term: {t!r}")


def subterms(t: Term) -> Iterator[Term]:
    yield t
    for c in children(t):
        yield from subterms(c)


def term_size(t: Term) -> int:
    return 1 + sum(term_size(c) for c in children(t))


def free_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(name=name):
            return frozenset((name,))
        case LetPair(x=x, y=y, bound=s, body=b):
            return free_vars(s) | (free_vars(b) - {x, y})
        case Case(scrutinee=r, x=x, left=a, y=y, right=b):
            return free_vars(r) | (free_vars(a) - {x}) | (free_vars(b) - {y})
        case Instr(var=x, test=p, arg=s):
            return free_vars(s) | (free_vars(p) - {x})
    out: frozenset[str] = frozenset()
    for c in children(t):
        out |= free_vars(c)
    return out


_TRAILING = re.compile(r"^(.*?)(\d*)$")


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    """A variant of ``base`` not in ``avoid`` (``x`` -> ``x1``, ``x2``, ...)."""
    if base not in avoid:
        return base
    stem = _TRAILING.match(base).group(1) or "v"
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


def _subst_binder(
    binder: str,
    body: Term,
    mapping: dict[str, Term],
    mapping_fvs: frozenset[str],
) -> tuple[str, Term]:
    inner = {k: v for k, v in mapping.items() if k != binder}
    if not inner:
        return binder, body
    body_fvs = free_vars(body)
    if not any(k in body_fvs for k in inner):
        return binder, body
    if binder in mapping_fvs:
        new = fresh_name(binder, mapping_fvs | body_fvs | set(inner))
        body = _subst(body, {binder: Var(new)}, frozenset((new,)))
        binder = new
    return binder, _subst(body, inner, mapping_fvs)


def _subst(t: Term, mapping: dict[str, Term], mapping_fvs: frozenset[str]) -> Term:
    match t:
        case Var(name=name):
            return mapping.get(name, t)
        case LetPair(x=x, y=y, bound=s, body=b):
            s2 = _subst(s, mapping, mapping_fvs)
            # rename both binders in one pass so they stay distinct
            inner = {k: v for k, v in mapping.items() if k not in (x, y)}
            b_fvs = free_vars(b)
            if inner and any(k in b_fvs for k in inner):
                avoid = set(mapping_fvs | b_fvs | set(inner) | {x, y})
                ren: dict[str, Term] = {}
                nx, ny = x, y
                if x in mapping_fvs:
                    nx = fresh_name(x, avoid)
                    avoid.add(nx)
                    ren[x] = Var(nx)
                if y in mapping_fvs:
                    ny = fresh_name(y, avoid)
                    ren[y] = Var(ny)
                if ren:
                    b = _subst(b, ren, frozenset(v.name for v in ren.values()))
                b = _subst(b, inner, mapping_fvs)
                x, y = nx, ny
            return dataclasses.replace(t, x=x, y=y, bound=s2, body=b)
        case Case(scrutinee=r, x=x, left=a, y=y, right=b):
            x2, a2 = _subst_binder(x, a, mapping, mapping_fvs)
            y2, b2 = _subst_binder(y, b, mapping, mapping_fvs)
            return dataclasses.replace(
                t, scrutinee=_subst(r, mapping, mapping_fvs), x=x2, left=a2, y=y2, right=b2
            )
        case Instr(var=x, test=p, arg=s):
            x2, p2 = _subst_binder(x, p, mapping, mapping_fvs)
            return dataclasses.replace(t, var=x2, test=p2, arg=_subst(s, mapping, mapping_fvs))
    return map_children(t, lambda c: _subst(c, mapping, mapping_fvs))


def map_children(t: Term, f: Callable[[Term], Term]) -> Term:
    """Rebuild ``t`` with ``f`` applied to each immediate subterm (no binder care)."""
    match t:
        case Var() | Star() | OneOverN() | Prob() | Ctor():
            return t
        case TensorPair(left=a, right=b) | Inlr(left=a, right=b) | Ovee(left=a, right=b):
            return dataclasses.replace(t, left=f(a), right=f(b))
        case LetPair(bound=a, body=b):
            return dataclasses.replace(t, bound=f(a), body=f(b))
        case Magic(term=a) | Inl(term=a) | Inr(term=a) | Lft(term=a) | Norm(term=a) | Ann(term=a):
            return dataclasses.replace(t, term=f(a))
        case Case(scrutinee=r, left=a, right=b):
            return dataclasses.replace(t, scrutinee=f(r), left=f(a), right=f(b))
        case Instr(test=a, arg=b):
            return dataclasses.replace(t, test=f(a), arg=f(b))
        case EnumCase(scrutinee=r, arms=arms):
            return dataclasses.replace(
                t, scrutinee=f(r), arms=tuple((c, f(body)) for c, body in arms)
            )
    raise TypeError(f"not a term: {t!r}")


def substitute(t: Term, x: str, s: Term) -> Term:
    """Capture-avoiding ``t[x := s]``."""
    return substitute_many(t, {x: s})


def substitute_many(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution."""
    mapping = {k: v for k, v in mapping.items() if not (isinstance(v, Var) and v.name == k)}
    if not mapping:
        return t
    fvs: frozenset[str] = frozenset()
    for v in mapping.values():
        fvs |= free_vars(v)
    return _subst(t, dict(mapping), fvs)


def rename_binders(t: Term, fresh: Callable[[int], str], depth: int = 0,
                   renaming: Mapping[str, str] | None = None) -> Term:
    """Rename every binder to ``fresh(depth)``, the depth of its binding site."""
    renaming = renaming or {}
    match t:
        case Var(name=name):
            new = renaming.get(name)
            return t if new is None else dataclasses.replace(t, name=new)
        case LetPair(x=x, y=y, bound=s, body=b):
            nx, ny = fresh(depth), fresh(depth + 1)
            inner = {**renaming, x: nx, y: ny}
            return dataclasses.replace(
                t, x=nx, y=ny,
                bound=rename_binders(s, fresh, depth, renaming),
                body=rename_binders(b, fresh, depth + 2, inner),
            )
        case Case(scrutinee=r, x=x, left=a, y=y, right=b):
            n = fresh(depth)
            return dataclasses.replace(
                t,
                scrutinee=rename_binders(r, fresh, depth, renaming),
                x=n, left=rename_binders(a, fresh, depth + 1, {**renaming, x: n}),
                y=n, right=rename_binders(b, fresh, depth + 1, {**renaming, y: n}),
            )
        case Instr(var=x, test=p, arg=s):
            n = fresh(depth)
            return dataclasses.replace(
                t, var=n,
                test=rename_binders(p, fresh, depth + 1, {**renaming, x: n}),
                arg=rename_binders(s, fresh, depth, renaming),
            )
    return map_children(t, lambda c: rename_binders(c, fresh, depth, renaming))


def canonical(t: Term) -> Term:
    """Binder names replaced by their de Bruijn level, ``%0``, ``%1``, ..."""
    return rename_binders(t, lambda d: f"%{d}")


def alpha_equal(s: Term, t: Term) -> bool:
    return canonical(s) == canonical(t)


def strip_annotations(t: Term) -> Term:
    if isinstance(t, Ann):
        return strip_annotations(t.term)
    return map_children(t, strip_annotations)


# ---------------------------------------------------------------- contexts


class DuplicateVariable(ValueError):
    pass


@dataclass(frozen=True)
class Context:
    """Ordered, duplicate-free typing context ``x1 : A1, ..., xn : An``."""

    entries: tuple[tuple[str, Type], ...] = ()

    def __post_init__(self) -> None:
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise DuplicateVariable(f"duplicate variable in context: {names}")

    @classmethod
    def of(cls, *pairs: tuple[str, Type], **named: Type) -> "Context":
        return cls(tuple(pairs) + tuple(named.items()))

    def __iter__(self) -> Iterator[tuple[str, Type]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: object) -> bool:
        return any(n == name for n, _ in self.entries)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    def lookup(self, name: str) -> Type | None:
        for n, ty in self.entries:
            if n == name:
                return ty
        return None

    def extend(self, name: str, ty: Type) -> "Context":
        return Context(self.entries + ((name, ty),))

    def bind(self, name: str, ty: Type) -> "Context":
        """Extend, shadowing any existing binding of ``name``."""
        return Context(tuple(e for e in self.entries if e[0] != name) + ((name, ty),))

    def restrict(self, names: set[str] | frozenset[str]) -> "Context":
        return Context(tuple(e for e in self.entries if e[0] in names))

    def permute(self, order: list[int]) -> "Context":
        return Context(tuple(self.entries[i] for i in order))

    def __str__(self) -> str:
        return ", ".join(f"{n} : {format_type(ty)}" for n, ty in self.entries)


def ctx(*pairs: tuple[str, Type], **named: Any) -> Context:
    return Context.of(*pairs, **named)
