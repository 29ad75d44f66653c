from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given

from comet import derived
from comet.semantics import TRUE, denote, environments
from comet.surface import ast as S
from comet.laws.gen import COIN, COLOR
from comet.surface.elaborate import ElaborationError, Scope, elaborate
from comet.surface.lexer import ParseError
from comet.surface.parser import parse, parse_term, parse_type
from comet.surface.printer import print_program, print_term
from comet.syntax import BOOL, Context, Sum, Tensor, UNIT, bold
from comet.typecheck import UnboundVariable, check_equal, check_term
from strategies import typed_terms

CORPUS = Path(__file__).resolve().parents[1] / "src" / "comet" / "corpus"


def value(src: str) -> dict:
    t = elaborate(parse_term(src))
    check_term(Context(()), t)
    return denote(t, {})


def test_parse_definition():
    prog = parse("def s : 2 = 0.01")
    (d,) = prog.items
    assert isinstance(d, S.Def) and d.name == "s"
    assert isinstance(d.body, S.SScalar) and d.body.value == F(1, 100)


def test_parse_forms():
    assert isinstance(parse_term("if x then 0.8 else 0.096"), S.SIf)
    assert isinstance(parse_term("do x <- s; return x"), S.SDo)
    assert parse_type("2 (x) 2") == Tensor(BOOL, BOOL)
    assert parse_type("3") == bold(3)
    assert parse_type("2 + 1") == Sum(BOOL, UNIT)


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse("def s : 2 =\n  (0.5")
    assert e.value.line == 2


def test_unknown_names():
    with pytest.raises(ElaborationError):
        parse_and_check("def s : Nope = *")
    with pytest.raises(UnboundVariable):
        check_term(Context(()), elaborate(parse_term("nowhere")))


def parse_and_check(src: str):
    from comet.program import load_program
    return load_program(src + "\n")


def test_dom_of_example_assert():
    assert value("dom (assert[\\x -> if x then 0.8 else 0.096](0.01))")[TRUE] == F("0.10304")


def test_sequential_product_of_halves():
    assert value("1/2 & 1/2")[TRUE] == F(1, 4)
    assert value("1/2 & 1/2^")[TRUE] == F(1, 4)


def test_measure_top():
    t = elaborate(parse_term("measure top -> 1/3"))
    assert check_equal(Context(()), t, elaborate(parse_term("1/3")), BOOL)


def test_conditioning():
    assert value("0.01 | \\x -> if x then 0.8 else 0.096")[TRUE] == F(25, 322)


def test_print_forms():
    assert print_term(elaborate(parse_term("fail"))) in ("inr *", "fail")
    assert print_term(parse_term("1/3 (+) 1/3")) == "1/3 (+) 1/3"


def test_program_round_trip():
    src = open(f"{CORPUS}/disease.comet").read()
    once = print_program(parse(src))
    assert print_program(parse(once)) == once


@pytest.mark.parametrize("src", [
    "do x <- return top; return x",
    "proj[3; 1, 2] num[3; 2]",
    "measure 1/3 -> 0.5 | 2/3 -> 0.25",
    "let f(y) = y & 1/2 in f(0.3)",
    "let z = 1/2 in z (x) z",
    "inlr(return top, fail)",
])
def test_print_parse_elaborate_round_trip(src):
    t = elaborate(parse_term(src))
    back = elaborate(parse_term(print_term(t)))
    assert denote(t, {}) == denote(back, {})


def generator_scope(ctx: Context) -> Scope:
    scope = Scope()
    for enum in (COIN, COLOR):
        scope.declare_enum(enum.name, enum.constructors, None)
    return scope.with_locals(list(ctx.names), dict(ctx))


@given(typed_terms())
def test_core_printing_round_trips(triple):
    ctx, t, ty = triple
    back = elaborate(parse_term(print_term(t)), generator_scope(ctx))
    assert check_equal(ctx, t, back, ty)


def test_derived_laws_elaborate_equal():
    ctx = Context((("x", BOOL),))
    cases = [
        ("do y <- return x; return y", "return x"),
        ("dom (return x)", "top"),
        ("ker (return x)", "bot"),
        ("proj[3; 1, 2] (inj[3; 2] x : 3 * 2)", "proj[3; 1] (inj[3; 2] x : 3 * 2) (+) proj[3; 2] (inj[3; 2] x : 3 * 2)"),
    ]
    scope = Scope().with_locals(["x"], {"x": BOOL})
    for lhs, rhs in cases:
        a, b = elaborate(parse_term(lhs), scope), elaborate(parse_term(rhs), scope)
        ty = check_term(ctx, a).ty
        assert check_equal(ctx, a, b, ty), (lhs, rhs)


def test_measure_requires_a_test():
    with pytest.raises(Exception):
        check_term(Context(()), elaborate(parse_term("measure 1/2 -> top | 1/3 -> bot")))
