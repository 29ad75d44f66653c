from fractions import Fraction as F
from pathlib import Path

import pytest

from comet.program import NotClosed, load_program
from comet.semantics import TRUE, EnumV
from comet.surface.elaborate import ElaborationError
from comet.typecheck import LinearityViolation

CORPUS = Path(__file__).resolve().parents[1] / "src" / "comet" / "corpus"


def test_corpus_programs_check():
    for name in ("disease", "burglary"):
        prog = load_program(f"{CORPUS}/{name}.comet")
        assert prog.name == name
        assert prog.queries


def test_empty_program():
    prog = load_program("\n")
    assert not prog.definitions and not prog.queries


def test_contraction_through_a_definition():
    with pytest.raises(LinearityViolation) as e:
        load_program("def bad(x : 2) : 2 (x) 2 = let z = x in z (x) z\n")
    assert e.value.rule


def test_enums():
    prog = load_program(
        "type Coin = heads | tails\n"
        "def c : Coin = measure 1/3 -> heads | 2/3 -> tails\n"
        "def flip(x : Coin) : Coin = case x of heads -> tails | tails -> heads\n"
        "query eval flip(c)\n"
    )
    (out,) = prog.run_queries()
    coin = prog.enums["Coin"]
    assert out.dist[EnumV(coin.name, "tails", 1)] == F(1, 3)


def test_open_definitions_are_not_states():
    prog = load_program(f"{CORPUS}/disease.comet")
    with pytest.raises(NotClosed):
        prog.evaluate("positive_result")
    with pytest.raises(NotClosed):
        prog.infer("x", "positive_result")


def test_duplicate_definition():
    with pytest.raises(ElaborationError):
        load_program("def a : 2 = top\ndef a : 2 = bot\n")


def test_queries_run_in_order():
    prog = load_program(f"{CORPUS}/burglary.comet")
    kinds = [o.kind for o in prog.run_queries()]
    assert kinds == ["eval", "validity", "infer"]


def test_joint_prior():
    prog = load_program(f"{CORPUS}/burglary.comet")
    prior = prog.evaluate("b (x) e")
    expected = sorted(p * q for p in (F("0.001"), F("0.999")) for q in (F("0.002"), F("0.998")))
    assert sorted(prior.weights.values()) == expected


def test_scalar_definition():
    prog = load_program("def u : 2 = 1/2\n")
    assert prog.evaluate("u")[TRUE] == F(1, 2)


def test_infer_with_top_is_identity():
    prog = load_program(f"{CORPUS}/disease.comet")
    res = prog.infer("subject", "top")
    assert res.posterior == prog.evaluate("subject")
