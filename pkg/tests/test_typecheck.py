import itertools
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given

from comet import derived
from comet.program import load_program
from comet.semantics import denote, environments
from comet.syntax import (
    BOOL, UNIT, Case, Context, Inl, Inr, Instr, LetPair, Norm, OneOverN, Ovee, Prob, Star, Sum,
    TensorPair, Var, substitute, substitute_many,
)
from comet.typecheck import (
    Equal, LinearityViolation, SideConditionFailed, TypeMismatch, ZeroDomain, check_disjoint,
    check_equal, check_leq, check_nonzero_domain, check_term, decide, infer_type, well_typed,
)
from strategies import predicates, typed_terms

EMPTY = Context(())
X2 = Context((("x", BOOL),))
CORPUS = Path(__file__).resolve().parents[1] / "src" / "comet" / "corpus"


def test_coin_is_a_scalar():
    assert infer_type(EMPTY, OneOverN(2)) == BOOL


def test_contraction_rejected():
    with pytest.raises(LinearityViolation):
        infer_type(X2, TensorPair(Var("x"), Var("x")))


def test_weakening_accepted():
    assert infer_type(Context((("x", BOOL), ("y", BOOL))), Var("x")) == BOOL


def test_branches_share_variables():
    t = Case(Var("x"), "a", Var("y"), "b", Var("y"))
    assert infer_type(Context((("x", BOOL), ("y", BOOL))), t) == BOOL


def test_instrument_test_is_closed_over_its_binder():
    t = Instr("z", Var("y"), Var("x"))
    with pytest.raises(LinearityViolation):
        check_term(Context((("x", BOOL), ("y", BOOL))), t)


def test_type_mismatch():
    with pytest.raises(TypeMismatch):
        check_term(EMPTY, Star(), BOOL)


def test_conditioning_witness():
    prog = load_program(f"{CORPUS}/disease.comet")
    pred = prog.predicate("positive_result")
    term = derived.condition(prog.closed_term("subject"), pred.var, pred.body)
    res = check_term(EMPTY, term)
    assert res.ty == BOOL
    assert res.witnesses[0][1] == 10


def test_check_equal():
    assert check_equal(EMPTY, Prob(F(1, 2)), OneOverN(2), BOOL)
    assert not check_equal(EMPTY, OneOverN(2), OneOverN(3), BOOL)
    assert check_equal(X2, Var("x"), Var("x"), BOOL)


@given(predicates())
def test_orthosupplement_sums_to_top(cp):
    ctx, p = cp
    assert check_equal(ctx, Ovee(p, derived.ortho(p)), derived.top(), BOOL)
    assert check_equal(ctx, derived.ortho(derived.ortho(p)), p, BOOL)


def test_check_leq():
    p = Case(Var("x"), "u", Prob(F(4, 5)), "v", Prob(F(12, 125)))
    assert check_leq(X2, derived.assert_("x", p, Var("x"), BOOL), derived.ret(Var("x")), Sum(BOOL, UNIT))
    assert check_leq(X2, derived.fail(BOOL), Inl(Var("x"), UNIT), Sum(BOOL, UNIT))
    half = Case(OneOverN(2), "u", derived.ret(Star()), "v", derived.fail(UNIT))
    assert not check_leq(EMPTY, derived.ret(Star()), half, BOOL)


def test_check_disjoint():
    def weighted(q, v):
        return Case(Prob(F(q)), "u", derived.ret(v), "w", derived.fail(BOOL))

    a, b = weighted("0.008", derived.top()), weighted("0.09504", derived.bot())
    assert check_disjoint(EMPTY, a, b)
    assert check_disjoint(EMPTY, a, derived.fail(BOOL))
    r = derived.ret(derived.top())
    assert not check_disjoint(EMPTY, r, r)
    with pytest.raises(SideConditionFailed):
        check_term(EMPTY, Ovee(r, r))


def test_nonzero_domain():
    prog = load_program(f"{CORPUS}/disease.comet")
    t = derived.assert_("x", prog.predicate("positive_result").body, prog.closed_term("subject"), BOOL)
    assert check_nonzero_domain(EMPTY, t) == 10
    assert check_nonzero_domain(EMPTY, derived.ret(Star())) == 2
    with pytest.raises(ZeroDomain):
        check_nonzero_domain(EMPTY, derived.fail(UNIT))
    with pytest.raises(ZeroDomain):
        check_term(EMPTY, Norm(derived.fail(UNIT)))


def test_judgements():
    assert decide(Equal(EMPTY, OneOverN(2), Prob(F(1, 2)), BOOL))


@given(typed_terms())
def test_generated_terms_infer(triple):
    ctx, t, ty = triple
    assert infer_type(ctx, t) == ty


@given(typed_terms())
def test_weakening_and_exchange(triple):
    ctx, t, ty = triple
    bigger = ctx.extend("unused", BOOL)
    assert well_typed(bigger, t, ty)
    for order in itertools.permutations(range(len(bigger))):
        assert well_typed(bigger.permute(list(order)), t, ty)


@given(typed_terms())
def test_checked_terms_are_total(triple):
    ctx, t, ty = triple
    for env in environments(ctx):
        assert sum(denote(t, env).values()) == 1


@given(typed_terms(), typed_terms())
def test_substitution_preserves_typing(a, b):
    ctx_s, s, ty_s = a
    ctx_s = Context(tuple((f"s_{n}", ty) for n, ty in ctx_s.entries))
    s = substitute_many(s, {n[2:]: Var(n) for n in ctx_s.names})
    ctx_t, t, ty_t = b
    if "x" not in ctx_t or ctx_t.lookup("x") != ty_s:
        return
    merged = Context(tuple(e for e in ctx_t.entries if e[0] != "x") + ctx_s.entries)
    assert well_typed(merged, substitute(t, "x", s), ty_t)


@given(typed_terms())
def test_equality_is_an_equivalence(triple):
    ctx, t, ty = triple
    assert check_equal(ctx, t, t, ty)
    same = Case(Inl(t, UNIT), "v", Var("v"), "w", t)
    assert check_equal(ctx, same, t, ty) and check_equal(ctx, t, same, ty)
