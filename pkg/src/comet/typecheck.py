"""Bidirectional type checker with an affine usage discipline.

Equational side conditions (``dom s = ker t`` for partial pairing,
``inl?(t) = top`` for ``lft``, disjointness for partial sums, a positive
lower bound for normalisation) are decided by exhaustive exact evaluation
over the finite denotation of the relevant context.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rationals import least_witness
from .semantics import Value, denote, environments
from .syntax import (
    BOOL, UNIT, Ann, Case, Const, Context, Ctor, EnumCase, Inl, Inlr, Inr, Instr, LetPair,
    Lft, Magic, Norm, One, OneOverN, Ovee, Prob, Span, Star, Sum, Tensor, Term, TensorPair,
    Type, Var, Zero, copower, count_ones, format_type, free_vars,
)


# ---------------------------------------------------------------- errors


class TypeCheckError(Exception):
    """A failed typing derivation; ``rule`` names the rule that did not apply."""

    kind = "TypeError"

    def __init__(self, message: str, rule: str = "", term: Term | None = None,
                 ctx: Context | None = None, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.rule = rule
        self.term = term
        self.ctx = ctx
        self.span = span if span is not None else getattr(term, "span", None)

    def __str__(self) -> str:
        where = f" at {self.span}" if self.span else ""
        rule = f" [{self.rule}]" if self.rule else ""
        return f"{self.kind}{rule}{where}: {self.message}"


class UnboundVariable(TypeCheckError):
    kind = "UnboundVariable"


class LinearityViolation(TypeCheckError):
    kind = "LinearityViolation"


class TypeMismatch(TypeCheckError):
    kind = "TypeMismatch"


class SideConditionFailed(TypeCheckError):
    kind = "SideConditionFailed"


class ZeroDomain(SideConditionFailed):
    kind = "ZeroDomain"


class EmptyEnum(TypeCheckError):
    kind = "EmptyEnum"


class UnknownEnum(TypeCheckError):
    kind = "UnknownEnum"


class CannotInfer(TypeCheckError):
    """Synthesis mode met an unannotated injection or ``magic``."""

    kind = "CannotInfer"


# ---------------------------------------------------------------- judgements


@dataclass(frozen=True)
class TypeOf:
    ctx: Context
    term: Term
    ty: Type


@dataclass(frozen=True)
class Equal:
    ctx: Context
    left: Term
    right: Term
    ty: Type


@dataclass(frozen=True)
class Leq:
    ctx: Context
    left: Term
    right: Term
    ty: Type


@dataclass(frozen=True)
class Disjoint:
    ctx: Context
    left: Term
    right: Term


@dataclass(frozen=True)
class NonZeroDomain:
    ctx: Context
    term: Term
    witness: int | None = None


Judgement = TypeOf | Equal | Leq | Disjoint | NonZeroDomain


def decide(j: Judgement) -> bool:
    """Decide a judgement with the semantic oracle."""
    match j:
        case TypeOf(ctx, term, ty):
            try:
                return infer_type(ctx, term) == ty
            except TypeCheckError:
                try:
                    check_type(ctx, term, ty)
                    return True
                except TypeCheckError:
                    return False
        case Equal(ctx, left, right, ty):
            return check_equal(ctx, left, right, ty)
        case Leq(ctx, left, right, ty):
            return check_leq(ctx, left, right, ty)
        case Disjoint(ctx, left, right):
            return check_disjoint(ctx, left, right)
        case NonZeroDomain(ctx, term, witness):
            try:
                least = check_nonzero_domain(ctx, term)
            except ZeroDomain:
                return False
            return witness is None or witness >= least
    raise TypeError(f"not a judgement: {j!r}")


# ---------------------------------------------------------------- oracle


def _tables(ctx: Context, *terms: Term) -> list[list[dict[Value, Fraction]]]:
    """Denotations of each term at every environment of the relevant context."""
    names: frozenset[str] = frozenset()
    for t in terms:
        names |= free_vars(t)
    for n in names:
        if n not in ctx:
            raise UnboundVariable(f"variable {n} is not in scope", "Tvar")
    sub = ctx.restrict(names)
    envs = environments(sub)
    return [[denote(t, env) for env in envs] for t in terms]


def _inl_mass(d: dict[Value, Fraction]) -> Fraction:
    return sum((w for v, w in d.items() if v.tag == "inl"), Fraction(0))


def check_equal(ctx: Context, s: Term, t: Term, ty: Type | None = None) -> bool:
    """``ctx |- s = t``, decided as pointwise equality of distributions."""
    ts, tt = _tables(ctx, s, t)
    return ts == tt


def check_leq(ctx: Context, s: Term, t: Term, ty: Type | None = None) -> bool:
    """``ctx |- s <= t`` at a type ``A + 1``: ``P(s = inl a) <= P(t = inl a)``."""
    ts, tt = _tables(ctx, s, t)
    for ds, dt in zip(ts, tt):
        for v, w in ds.items():
            if v.tag == "inl" and w > dt.get(v, 0):
                return False
    return True


def check_disjoint(ctx: Context, s: Term, t: Term) -> bool:
    """Total convergence mass of ``s`` and ``t`` is at most 1 at every environment."""
    ts, tt = _tables(ctx, s, t)
    return all(_inl_mass(ds) + _inl_mass(dt) <= 1 for ds, dt in zip(ts, tt))


def domain_minimum(ctx: Context, t: Term) -> Fraction:
    (tt,) = _tables(ctx, t)
    return min(_inl_mass(d) for d in tt)


def check_nonzero_domain(ctx: Context, t: Term) -> int:
    """Least ``n >= 2`` with ``1/n <= dom t`` at every environment."""
    m = domain_minimum(ctx, t)
    if m == 0:
        raise ZeroDomain(
            "normalising a substate whose domain is zero somewhere", "Tnorm", t, ctx
        )
    return least_witness(m)


# ---------------------------------------------------------------- checker


@dataclass
class CheckResult:
    ty: Type
    used: frozenset[str]
    witnesses: list[tuple[Term, int]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def validate_type(ty: Type, term: Term | None = None) -> None:
    """Reject undeclared or empty enumeration types."""
    match ty:
        case Sum(left, right) | Tensor(left, right):
            validate_type(left, term)
            validate_type(right, term)
        case Const(name=name, constructors=ctors):
            if ctors is None:
                raise UnknownEnum(f"type {name} is not declared", "Tconst", term)
            if not ctors:
                raise EmptyEnum(f"type {name} has no constructors", "Tconst", term)


class Checker:
    """One checking run; collects normalisation witnesses and warnings."""

    def __init__(self) -> None:
        self.witnesses: list[tuple[Term, int]] = []
        self.warnings: list[str] = []

    # public entry points ------------------------------------------------

    def infer(self, ctx: Context, t: Term) -> tuple[Type, frozenset[str]]:
        return self._go(ctx, t, None)

    def check(self, ctx: Context, t: Term, ty: Type) -> frozenset[str]:
        validate_type(ty, t)
        return self._go(ctx, t, ty)[1]

    # core ------------------------------------------------------------------

    def _go(self, ctx: Context, t: Term, expected: Type | None) -> tuple[Type, frozenset[str]]:
        ty, used = self._rule(ctx, t, expected)
        if expected is not None and ty != expected:
            raise TypeMismatch(
                f"expected {format_type(expected)} but found {format_type(ty)}",
                _rule_name(t), t, ctx,
            )
        return ty, used

    def _rule(self, ctx: Context, t: Term, expected: Type | None) -> tuple[Type, frozenset[str]]:
        match t:
            case Var(name=name):
                ty = ctx.lookup(name)
                if ty is None:
                    raise UnboundVariable(f"variable {name} is not in scope", "Tvar", t, ctx)
                return ty, frozenset((name,))
            case Star():
                return UNIT, frozenset()
            case OneOverN() | Prob():
                return BOOL, frozenset()
            case Ann(term=inner, ty=ty):
                validate_type(ty, t)
                return ty, self._go(ctx, inner, ty)[1]
            case TensorPair(left=a, right=b):
                ea = eb = None
                if isinstance(expected, Tensor):
                    ea, eb = expected.left, expected.right
                ta, ua = self._go(ctx, a, ea)
                tb, ub = self._go(ctx, b, eb)
                _disjoint_use(ua, ub, "Tpair", t, ctx)
                return Tensor(ta, tb), ua | ub
            case LetPair(x=x, y=y, bound=s, body=b):
                ts, us = self._go(ctx, s, None)
                if not isinstance(ts, Tensor):
                    raise TypeMismatch(
                        f"let-pair needs a tensor, found {format_type(ts)}", "Tlett", s, ctx
                    )
                if x == y:
                    raise LinearityViolation(f"let-pair binds {x} twice", "Tlett", t, ctx)
                inner = ctx.bind(x, ts.left).bind(y, ts.right)
                tb, ub = self._go(inner, b, expected)
                ub = ub - {x, y}
                _disjoint_use(us, ub, "Tlett", t, ctx)
                return tb, us | ub
            case Magic(term=a, ty=ty):
                target = ty if ty is not None else expected
                if target is None:
                    raise CannotInfer("magic needs a result type", "Tmagic", t, ctx)
                validate_type(target, t)
                _, ua = self._go(ctx, a, Zero())
                return target, ua
            case Inl(term=a, right=rt):
                if isinstance(expected, Sum):
                    if rt is not None and rt != expected.right:
                        raise TypeMismatch(
                            f"inl annotated with {format_type(rt)}, expected "
                            f"{format_type(expected.right)}", "Tinl", t, ctx,
                        )
                    return expected, self._go(ctx, a, expected.left)[1]
                if rt is None:
                    if expected is not None:
                        raise TypeMismatch(
                            f"inl cannot have type {format_type(expected)}", "Tinl", t, ctx
                        )
                    raise CannotInfer("inl needs the right summand's type", "Tinl", t, ctx)
                validate_type(rt, t)
                ta, ua = self._go(ctx, a, None)
                return Sum(ta, rt), ua
            case Inr(term=a, left=lt):
                if isinstance(expected, Sum):
                    if lt is not None and lt != expected.left:
                        raise TypeMismatch(
                            f"inr annotated with {format_type(lt)}, expected "
                            f"{format_type(expected.left)}", "Tinr", t, ctx,
                        )
                    return expected, self._go(ctx, a, expected.right)[1]
                if lt is None:
                    if expected is not None:
                        raise TypeMismatch(
                            f"inr cannot have type {format_type(expected)}", "Tinr", t, ctx
                        )
                    raise CannotInfer("inr needs the left summand's type", "Tinr", t, ctx)
                validate_type(lt, t)
                ta, ua = self._go(ctx, a, None)
                return Sum(lt, ta), ua
            case Case(scrutinee=r, x=x, left=a, y=y, right=b):
                tr, ur = self._go(ctx, r, None)
                if not isinstance(tr, Sum):
                    raise TypeMismatch(
                        f"case needs a sum, found {format_type(tr)}", "Tcase", r, ctx
                    )
                lctx, rctx = ctx.bind(x, tr.left), ctx.bind(y, tr.right)
                if expected is not None:
                    ta, ua = self._go(lctx, a, expected)
                    tb, ub = self._go(rctx, b, expected)
                else:
                    try:
                        ta, ua = self._go(lctx, a, None)
                        tb, ub = self._go(rctx, b, ta)
                    except CannotInfer:
                        tb, ub = self._go(rctx, b, None)
                        ta, ua = self._go(lctx, a, tb)
                branches = (ua - {x}) | (ub - {y})
                _disjoint_use(ur, branches, "Tcase", t, ctx)
                return ta, ur | branches
            case EnumCase(scrutinee=r, arms=arms):
                tr, ur = self._go(ctx, r, None)
                if not isinstance(tr, Const):
                    raise TypeMismatch(
                        f"enum case needs an enumeration, found {format_type(tr)}",
                        "Tconstcase", r, ctx,
                    )
                names = [c for c, _ in arms]
                if sorted(names) != sorted(tr.constructors or ()) or len(set(names)) != len(names):
                    raise TypeMismatch(
                        f"arms {names} do not cover {tr.name} exactly", "Tconstcase", t, ctx
                    )
                result, used = expected, frozenset()
                pending = []
                for _, body in arms:
                    try:
                        tb, ub = self._go(ctx, body, result)
                    except CannotInfer:
                        if result is not None:
                            raise
                        pending.append(body)
                        continue
                    result = tb
                    used |= ub
                if result is None:
                    raise CannotInfer("no arm determines the result type", "Tconstcase", t, ctx)
                for body in pending:
                    used |= self._go(ctx, body, result)[1]
                _disjoint_use(ur, used, "Tconstcase", t, ctx)
                return result, ur | used
            case Ctor(enum=enum, name=name):
                validate_type(enum, t)
                if name not in (enum.constructors or ()):
                    raise UnknownEnum(f"{name} is not a constructor of {enum.name}", "Tconst", t, ctx)
                return enum, frozenset()
            case Inlr(left=s, right=u):
                es = eu = None
                if isinstance(expected, Sum):
                    es, eu = Sum(expected.left, UNIT), Sum(expected.right, UNIT)
                ts, us = self._go(ctx, s, es)
                tu, uu = self._go(ctx, u, eu)
                _expect_partial(ts, "Tinlr", s, ctx)
                _expect_partial(tu, "Tinlr", u, ctx)
                ds, du = _tables(ctx, s, u)
                for a, b in zip(ds, du):
                    if _inl_mass(a) != 1 - _inl_mass(b):
                        raise SideConditionFailed(
                            "dom of the left part differs from ker of the right part",
                            "Tinlr", t, ctx,
                        )
                return Sum(ts.left, tu.left), us | uu
            case Lft(term=a):
                # the right summand is not determined by the result type
                ta, ua = self._go(ctx, a, None)
                if not isinstance(ta, Sum):
                    raise TypeMismatch(f"lft needs a sum, found {format_type(ta)}", "Tleft", a, ctx)
                (da,) = _tables(ctx, a)
                if any(_inl_mass(d) != 1 for d in da):
                    raise SideConditionFailed(
                        "lft applied to a term that is not always inl", "Tleft", t, ctx
                    )
                return ta.left, ua
            case Instr(var=x, test=p, arg=s):
                ts, us = self._go(ctx, s, None)
                outer = free_vars(p) - {x}
                if outer:
                    raise LinearityViolation(
                        f"instrument test mentions {sorted(outer)} besides its bound variable",
                        "Tinstr", t, ctx,
                    )
                tp, _ = self._go(Context(((x, ts),)), p, None)
                n = count_ones(tp)
                if n is None:
                    raise TypeMismatch(
                        f"instrument test must have a type n, found {format_type(tp)}",
                        "Tinstr", p, ctx,
                    )
                return copower(n, ts), us
            case Norm(term=a):
                ea = Sum(expected, UNIT) if expected is not None else None
                ta, ua = self._go(ctx, a, ea)
                _expect_partial(ta, "Tnorm", a, ctx)
                n = check_nonzero_domain(ctx, a)
                if free_vars(a):
                    self.warnings.append(
                        f"norm over the open context {ctx.restrict(free_vars(a))} "
                        "is normalised separately at each environment"
                    )
                self.witnesses.append((t, n))
                return ta.left, ua
            case Ovee(left=s, right=u):
                try:
                    ts, us = self._go(ctx, s, expected)
                    tu, uu = self._go(ctx, u, ts)
                except CannotInfer:
                    if expected is not None:
                        raise
                    tu, uu = self._go(ctx, u, None)
                    ts, us = self._go(ctx, s, tu)
                _expect_partial(ts, "Tovee", s, ctx)
                if not check_disjoint(ctx, s, u):
                    raise SideConditionFailed(
                        "partial sum of substates whose total mass exceeds 1", "Tovee", t, ctx
                    )
                return ts, us | uu
        raise TypeError(f"not a term: {t!r}")


def _rule_name(t: Term) -> str:
    return {
        Var: "Tvar", Star: "Tunit", TensorPair: "Tpair", LetPair: "Tlett", Magic: "Tmagic",
        Inl: "Tinl", Inr: "Tinr", Case: "Tcase", Inlr: "Tinlr", Lft: "Tleft",
        Instr: "Tinstr", OneOverN: "Toneovern", Prob: "Tscalar", Norm: "Tnorm",
        Ovee: "Tovee", Ctor: "Tconst", EnumCase: "Tconstcase", Ann: "Tann",
    }.get(type(t), "T?")


def _disjoint_use(a: frozenset[str], b: frozenset[str], rule: str, t: Term, ctx: Context) -> None:
    shared = a & b
    if shared:
        raise LinearityViolation(
            f"variable(s) {', '.join(sorted(shared))} used in two multiplicative positions",
            rule, t, ctx,
        )


def _expect_partial(ty: Type, rule: str, t: Term, ctx: Context) -> None:
    if not (isinstance(ty, Sum) and isinstance(ty.right, One)):
        raise TypeMismatch(f"expected a type A + 1, found {format_type(ty)}", rule, t, ctx)


def _check_context(ctx: Context) -> None:
    for _, ty in ctx:
        validate_type(ty)


def check_term(ctx: Context, t: Term, ty: Type | None = None) -> CheckResult:
    """Full checking run returning type, used variables, witnesses and warnings."""
    _check_context(ctx)
    checker = Checker()
    if ty is None:
        found, used = checker.infer(ctx, t)
    else:
        used = checker.check(ctx, t, ty)
        found = ty
    return CheckResult(found, used, checker.witnesses, checker.warnings)


def infer_type(ctx: Context, t: Term) -> Type:
    """The type of ``t`` in ``ctx``; raises a :class:`TypeCheckError` otherwise."""
    return check_term(ctx, t).ty


def check_type(ctx: Context, t: Term, ty: Type) -> None:
    check_term(ctx, t, ty)


def well_typed(ctx: Context, t: Term, ty: Type | None = None) -> bool:
    try:
        check_term(ctx, t, ty)
    except TypeCheckError:
        return False
    return True
