from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from comet import derived as D
from comet.semantics import TRUE, denote, environments, numeral_value
from comet.syntax import BOOL, UNIT, Context, Sum, Tensor, Var, bold, copower, free_vars
from comet.typecheck import check_equal, check_term
from strategies import gens

EMPTY = Context(())


def test_numerals_and_injections():
    for n in range(1, 5):
        for i in range(1, n + 1):
            assert check_term(EMPTY, D.numeral(i, n)).ty == bold(n)
            assert denote(D.numeral(i, n), {}) == {numeral_value(i, n): 1}
            assert denote(D.in_test(i, D.numeral(i, n), n), {}) == {TRUE: 1}
    with pytest.raises(ValueError):
        D.inj(0, 3, Var("x"))


def test_nabla_and_index():
    t = D.inj(2, 3, Var("x"), BOOL)
    ctx = Context((("x", BOOL),))
    assert check_equal(ctx, D.nabla(t, 3), Var("x"), BOOL)
    assert check_equal(ctx, D.index(t, 3), D.numeral(2, 3), bold(3))


def test_ratio_and_times():
    assert denote(D.ratio(2, 5), {})[TRUE] == F(2, 5)
    assert denote(D.times(4, D.scalar(F(1, 4))), {}) == {TRUE: 1}
    assert D.scalar(F(1, 7)) == D.scalar(F(2, 14))


def test_subject_packing():
    s = D.Subject(["a", "b", "c"])
    assert free_vars(s.term()) == {"a", "b", "c"}
    body = s.unpack(Var("b"))
    assert free_vars(body) == {s.binder}
    assert D.Subject([]).term() == D.Subject([], frozenset()).term()


def test_sequential_product_over_two_variables():
    ctx = Context((("x", BOOL), ("y", BOOL)))
    p = D.andthen(Var("x"), Var("y"))
    for env in environments(ctx):
        both = env["x"] == TRUE and env["y"] == TRUE
        assert denote(p, env).get(TRUE, 0) == (1 if both else 0)


@given(gens(), st.integers(1, 4))
def test_ntest_constructions_agree(g, n):
    ctx = Context((("x", g.type()),))
    ps = g.ntest(n, dict(ctx))
    assert check_equal(ctx, D.ntest(ps), D.ntest_inductive(ps), bold(n))


@given(gens())
def test_cond_agrees_with_case_for_closed_branches(g):
    a = g.type()
    ctx = Context((("x", a),))
    p = g.term(BOOL, dict(ctx))
    s, t = g.term(BOOL, {}), g.term(BOOL, {})
    assert check_equal(ctx, D.cond(p, s, t), D.case_cond(p, s, t), BOOL)


def test_marginals():
    pair = D.marginal(Var("z"), 1)
    ctx = Context((("z", Tensor(BOOL, UNIT)),))
    assert check_term(ctx, pair).ty == BOOL
    with pytest.raises(ValueError):
        D.marginal(Var("z"), 3)


def test_projection_types():
    t = D.proj(D.inj(1, 3, Var("x"), BOOL), 3, [1, 3], BOOL)
    assert check_term(Context((("x", BOOL),)), t).ty == Sum(BOOL, UNIT)
    assert copower(3, BOOL) == Sum(BOOL, Sum(BOOL, BOOL))
