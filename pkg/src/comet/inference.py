"""Exact Bayesian inference over evaluated states.

The functions here act on :class:`~comet.semantics.Dist` objects directly.
:func:`condition_term` runs the same pipeline through the type theory
(``norm(assert_p(t))``) so the two paths can be cross-checked.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from . import derived
from .rationals import least_witness
from .semantics import TRUE, Dist, PairV, Value, denote, evaluate
from .syntax import BOOL, Context, Norm, Tensor, Term, Type, free_vars, fresh_name, substitute
from .typecheck import TypeMismatch, check_term


class ZeroMass(ArithmeticError):
    """Normalising a substate of mass zero."""


class NotATensor(TypeError):
    """Marginalising a state whose carrier is not a tensor."""


@dataclass(frozen=True)
class Predicate:
    """``var : domain |- body : 2``."""

    var: str
    body: Term
    domain: Type | None = None

    @classmethod
    def constant(cls, body: Term, domain: Type | None = None) -> "Predicate":
        return cls(fresh_name("u", free_vars(body)), body, domain)

    @classmethod
    def top(cls, domain: Type | None = None) -> "Predicate":
        return cls.constant(derived.top(), domain)

    @classmethod
    def bot(cls, domain: Type | None = None) -> "Predicate":
        return cls.constant(derived.bot(), domain)

    def probability(self, v: Value) -> Fraction:
        """``P(p(v) = top)``."""
        return denote(self.body, {self.var: v}).get(TRUE, Fraction(0))

    def apply(self, arg: Term) -> Term:
        return substitute(self.body, self.var, arg)

    def check(self, domain: Type) -> None:
        """Type-check the body as a predicate on ``domain``."""
        names = free_vars(self.body) - {self.var}
        if names:
            raise TypeMismatch(f"predicate mentions free variables {sorted(names)}", "Tinstr", self.body)
        check_term(Context(((self.var, domain),)), self.body, BOOL)


class SubDist(Dist):
    """A distribution whose total mass may fall short of 1."""

    __slots__ = ()

    @property
    def divergence(self) -> Fraction:
        return 1 - self.mass


def assert_state(state: Dist, pred: Predicate) -> SubDist:
    """Keep each outcome ``a`` with probability ``P(p(a) = top)``."""
    return SubDist({v: w * pred.probability(v) for v, w in state.weights.items()}, state.carrier)


def validity(state: Dist, pred: Predicate) -> Fraction:
    return sum((w * pred.probability(v) for v, w in state.weights.items()), Fraction(0))


def normalize(s: Dist) -> Dist:
    m = s.mass
    if m == 0:
        raise ZeroMass("cannot normalise a substate of mass zero")
    return Dist({v: w / m for v, w in s.weights.items()}, s.carrier)


def condition(state: Dist, pred: Predicate) -> Dist:
    """The posterior ``state | pred``."""
    return normalize(assert_state(state, pred))


def marginal(state: Dist, side: int) -> Dist:
    if side not in (1, 2):
        raise ValueError("marginal side must be 1 or 2")
    carrier = state.carrier
    if carrier is not None and not isinstance(carrier, Tensor):
        raise NotATensor(f"cannot marginalise a state on {carrier}")
    out: dict[Value, Fraction] = defaultdict(Fraction)
    for v, w in state.weights.items():
        if not isinstance(v, PairV):
            raise NotATensor(f"value {v} is not a pair")
        out[v.left if side == 1 else v.right] += w
    sub = None
    if isinstance(carrier, Tensor):
        sub = carrier.left if side == 1 else carrier.right
    return Dist(out, sub)


# ---------------------------------------------------------------- syntactic path


def condition_term(state: Term, pred: Predicate) -> Term:
    """``norm(assert_p(state))`` as a core term."""
    return Norm(derived.assert_(pred.var, pred.body, state, None))


def condition_syntactic(state: Term, pred: Predicate) -> Dist:
    """Posterior computed by checking and evaluating :func:`condition_term`."""
    t = condition_term(state, pred)
    empty = Context(())
    res = check_term(empty, t)
    return evaluate(empty, t, ty=res.ty)


# ---------------------------------------------------------------- queries


@dataclass
class InferenceResult:
    prior: Dist
    weights: SubDist
    validity: Fraction
    posterior: Dist
    witness: int
    marginal_side: int | None = None
    marginal: Dist | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def answer(self) -> Dist:
        return self.marginal if self.marginal is not None else self.posterior


def infer(state: Term, pred: Predicate, side: int | None = None, cross_check: bool = True) -> InferenceResult:
    """Type-check, evaluate, condition and optionally marginalise a closed state.

    With ``cross_check`` the posterior is also computed through the core
    term ``norm(assert_p(state))`` and the two results must agree exactly.
    """
    empty = Context(())
    ty = check_term(empty, state).ty
    pred.check(ty)
    prior = evaluate(empty, state, ty=ty)
    weights = assert_state(prior, pred)
    mass = weights.mass
    if mass == 0:
        raise ZeroMass("the evidence has probability zero under the state")
    posterior = normalize(weights)
    if cross_check:
        other = condition_syntactic(state, pred)
        if other != posterior:
            raise AssertionError(f"posterior mismatch: {posterior!r} vs {other!r}")
    result = InferenceResult(prior, weights, mass, posterior, least_witness(mass))
    if side is not None:
        if not isinstance(ty, Tensor):
            raise NotATensor(f"cannot marginalise a state on {ty}")
        result.marginal_side = side
        result.marginal = marginal(posterior, side)
    return result


__all__ = [
    "InferenceResult", "NotATensor", "Predicate", "SubDist", "ZeroMass", "assert_state",
    "condition", "condition_syntactic", "condition_term", "infer", "marginal", "normalize",
    "validity",
]
