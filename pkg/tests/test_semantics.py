from fractions import Fraction as F

from hypothesis import given

from comet import derived
from comet.semantics import (
    TRUE, Dist, InlV, InrV, PairV, StarV, denote, enumerate_values, environments, eval_all, evaluate,
)
from comet.surface.parser import parse_pred
from comet.surface.elaborate import elaborate_pred
from comet.syntax import BOOL, UNIT, Context, Inl, Instr, OneOverN, Ovee, Prob, Star, Tensor, TensorPair, Var
from comet.typecheck import check_term
from strategies import typed_terms

FALSE = InrV(StarV())


def test_enumeration():
    assert enumerate_values(BOOL) == [InlV(StarV()), InrV(StarV())]
    assert enumerate_values(Tensor(UNIT, UNIT)) == [PairV(StarV(), StarV())]
    assert len(enumerate_values(Tensor(BOOL, BOOL))) == 4


def test_independent_coins():
    d = evaluate(Context(()), TensorPair(OneOverN(2), OneOverN(2)))
    assert len(d) == 4
    assert all(w == F(1, 4) for _, w in d.items())


def test_dirac():
    assert evaluate(Context(()), Inl(Star(), UNIT)) == Dist.dirac(TRUE)


def test_instrument_weights():
    p = elaborate_pred(parse_pred("\\x -> if x then 0.8 else 0.096"))
    t = Instr(p.var, p.body, Var("x"))
    d = denote(t, {"x": TRUE})
    assert d == {InlV(TRUE): F(4, 5), InrV(TRUE): F(1, 5)}


def test_eval_all():
    assert list(eval_all(Context(()), Star()).values()) == [Dist.dirac(StarV())]
    assert len(eval_all(Context((("x", BOOL),)), Var("x"))) == 2
    ctx = Context((("x", BOOL), ("y", BOOL)))
    table = eval_all(ctx, TensorPair(Var("x"), Var("y")))
    assert len(table) == 4
    for env in environments(ctx):
        assert denote(TensorPair(Var("x"), Var("y")), env) == {PairV(env["x"], env["y"]): 1}


def test_partial_sum_clause():
    d = denote(Ovee(Prob(F(1, 3)), Prob(F(1, 2))), {})
    assert d == {TRUE: F(5, 6), FALSE: F(1, 6)}


def test_render():
    d = Dist({TRUE: F(1, 100), FALSE: F(99, 100)}, BOOL)
    assert d.render() == ["inl * : 1/100 (0.01)", "inr * : 99/100 (0.99)"]
    assert repr(d) == "Dist({inl *: 1/100, inr *: 99/100})"


@given(typed_terms())
def test_total_mass(triple):
    ctx, t, ty = triple
    check_term(ctx, t, ty)
    for env in environments(ctx):
        d = denote(t, env)
        assert sum(d.values()) == 1
        assert all(w > 0 for w in d.values())


@given(typed_terms())
def test_partial_sum_weights(triple):
    ctx, t, ty = triple
    if not isinstance(t, Ovee):
        return
    for env in environments(ctx):
        whole = denote(t, env)
        parts = [denote(s, env) for s in (t.left, t.right)]
        for v, w in whole.items():
            if v.tag == "inl":
                assert w == sum(p.get(v, 0) for p in parts)
