from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from comet import derived
from comet.inference import (
    NotATensor, Predicate, ZeroMass, assert_state, condition, condition_syntactic, infer, marginal,
    normalize, validity,
)
from comet.program import load_program
from comet.semantics import TRUE, Dist, InrV, PairV, StarV, evaluate, numeral_value
from comet.syntax import BOOL, Context, Norm, OneOverN, Prob, Var, bold
from comet.surface.parser import parse_term
from comet.surface.elaborate import elaborate
from strategies import scalars

FALSE = InrV(StarV())
CORPUS = Path(__file__).resolve().parents[1] / "src" / "comet" / "corpus"


@pytest.fixture(scope="module")
def disease():
    return load_program(f"{CORPUS}/disease.comet")


@pytest.fixture(scope="module")
def burglary():
    return load_program(f"{CORPUS}/burglary.comet")


def coin(q) -> Dist:
    return Dist({TRUE: F(q), FALSE: 1 - F(q)}, BOOL)


def test_assert_state(disease):
    p = disease.predicate("positive_result")
    s = assert_state(coin("0.01"), p)
    assert s.mass == F("0.10304")
    assert s[TRUE] == F("0.008") and s[FALSE] == F("0.09504")
    assert assert_state(coin("0.01"), Predicate.top()) == coin("0.01")
    assert assert_state(coin("0.01"), Predicate.bot()).mass == 0


def test_normalize():
    post = normalize(Dist({TRUE: F("0.008"), FALSE: F("0.09504")}))
    assert post == Dist({TRUE: F(25, 322), FALSE: F(297, 322)})
    assert normalize(coin("0.3")) == coin("0.3")
    assert normalize(Dist({TRUE: F(1, 4)})) == Dist.dirac(TRUE)
    with pytest.raises(ZeroMass):
        normalize(Dist({}))


def test_condition(disease):
    p = disease.predicate("positive_result")
    assert condition(coin("0.01"), p)[TRUE] == F(25, 322)
    assert condition(coin("0.3"), Predicate.top()) == coin("0.3")
    inl_only = Predicate("x", derived.inl_test(Var("x")))
    assert condition(coin(F(1, 2)), inl_only) == Dist.dirac(TRUE)


def test_marginal(burglary):
    res = burglary.infer("b (x) e", "j . a", 1)
    assert res.marginal[TRUE] == F(8490170, 521389757)
    prior = burglary.evaluate("b (x) e")
    assert marginal(prior, 1) == coin("0.001")
    assert marginal(prior, 2) == coin("0.002")
    assert marginal(Dist.dirac(PairV(TRUE, FALSE)), 1) == Dist.dirac(TRUE)
    with pytest.raises(NotATensor):
        marginal(coin("0.5"), 1)


def test_validity(disease, burglary):
    assert validity(coin("0.01"), disease.predicate("positive_result")) == F("0.10304")
    assert validity(coin("0.01"), Predicate.top()) == 1
    v, _ = burglary.validity("b (x) e", "j . a")
    assert v == F("0.0521389757")


def test_zero_evidence():
    with pytest.raises(ZeroMass):
        infer(OneOverN(2), Predicate.bot())


@given(scalars, scalars, scalars)
def test_semantic_and_syntactic_paths_agree(q, a, b):
    state = Prob(q)
    pred = Predicate("x", elaborate(parse_term(f"if x then {a} else {b}")), BOOL)
    if validity(coin(q), pred) == 0:
        return
    assert condition(coin(q), pred) == condition_syntactic(state, pred)


@given(scalars, scalars, scalars, scalars)
def test_chained_conditioning(q, a, b, c):
    st_ = coin(q)
    p = Predicate("x", elaborate(parse_term(f"if x then {a} else {b}")), BOOL)
    r = Predicate("x", elaborate(parse_term(f"if x then {c} else 1/3")), BOOL)
    both = Predicate("x", derived.andthen(p.body, r.body), BOOL)
    vp = validity(st_, p)
    if vp == 0:
        return
    assert validity(condition(st_, p), r) == validity(st_, both) / vp


@given(scalars, st.integers(1, 20))
def test_normalize_ignores_scaling(q, k):
    s = Dist({TRUE: F(q) / 2, FALSE: (1 - F(q)) / 3})
    if s.mass == 0:
        return
    scaled = Dist({v: w / k for v, w in s.weights.items()})
    assert normalize(scaled) == normalize(s)
    assert normalize(normalize(s)) == normalize(s)


@given(st.lists(st.integers(1, 9), min_size=1, max_size=4), st.integers(1, 9))
def test_normalised_measure_arms(alphas, beta):
    n, total = len(alphas), sum(alphas) + beta
    arms = [(derived.scalar(F(a, total)), derived.ret(derived.numeral(i, n))) for i, a in enumerate(alphas, 1)]
    t = derived.measure(arms + [(derived.scalar(F(beta, total)), derived.fail(bold(n)))])
    post = evaluate(Context(()), Norm(t))
    for i, a in enumerate(alphas, 1):
        assert post[numeral_value(i, n)] == F(a, sum(alphas))


def test_infer_result_fields(disease):
    res = disease.infer("subject", "positive_result")
    assert res.validity == F(322, 3125)
    assert res.posterior[TRUE] == F(25, 322)
    assert res.witness == 10
