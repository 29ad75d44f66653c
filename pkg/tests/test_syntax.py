import pytest
from hypothesis import given

from comet.semantics import denote, environments
from comet.syntax import (
    BOOL, UNIT, Case, Context, DuplicateVariable, Inl, Instr, LetPair, Ovee, Star, Sum, Tensor,
    TensorPair, Var, alpha_equal, bold, copower, copower_count, free_vars, substitute,
)
from comet.typecheck import check_term
from strategies import typed_terms


def test_types():
    assert bold(2) == BOOL == Sum(UNIT, UNIT)
    assert copower(3, UNIT) == Sum(UNIT, Sum(UNIT, UNIT))
    assert copower_count(bold(4), UNIT) == 4
    assert Tensor(BOOL, UNIT) != Tensor(UNIT, BOOL)


def test_substitute_examples():
    assert substitute(Var("x"), "x", Star()) == Star()
    t = Case(Var("y"), "x", Var("x"), "z", Var("z"))
    assert substitute(t, "y", Inl(Star())) == Case(Inl(Star()), "x", Var("x"), "z", Var("z"))
    pair = LetPair("x", "y", Var("w"), TensorPair(Var("x"), Var("y")))
    out = substitute(pair, "w", TensorPair(Star(), Star()))
    assert out == LetPair("x", "y", TensorPair(Star(), Star()), TensorPair(Var("x"), Var("y")))
    assert denote(out, {}) == denote(TensorPair(Star(), Star()), {})


def test_substitute_avoids_capture():
    t = Case(Var("y"), "x", Var("z"), "w", Var("z"))
    out = substitute(t, "z", Var("x"))
    assert free_vars(out) == {"y", "x"}


def test_alpha_equal():
    r = Var("r")
    assert alpha_equal(Case(r, "x", Var("x"), "y", Var("y")), Case(r, "a", Var("a"), "b", Var("b")))
    assert not alpha_equal(Var("x"), Var("y"))
    assert alpha_equal(Instr("x", Inl(Star()), Var("s")), Instr("z", Inl(Star()), Var("s")))


def test_free_vars():
    assert free_vars(Var("x")) == {"x"}
    assert free_vars(LetPair("x", "y", Var("z"), TensorPair(Var("x"), Var("y")))) == {"z"}
    assert free_vars(Ovee(Var("p"), Var("q"))) == {"p", "q"}


def test_context_rejects_duplicates():
    with pytest.raises(DuplicateVariable):
        Context((("x", BOOL), ("x", UNIT)))


@given(typed_terms())
def test_identity_substitution(triple):
    _, t, _ = triple
    for x in free_vars(t):
        assert alpha_equal(substitute(t, x, Var(x)), t)


@given(typed_terms())
def test_renaming_preserves_meaning(triple):
    ctx, t, ty = triple
    if not len(ctx):
        return
    (x, a), *_ = ctx.entries
    renamed = substitute(t, x, Var("fresh"))
    ctx2 = Context(tuple(("fresh" if n == x else n, b) for n, b in ctx.entries))
    check_term(ctx2, renamed, ty)
    for env in environments(ctx):
        env2 = {("fresh" if k == x else k): v for k, v in env.items()}
        assert denote(t, env) == denote(renamed, env2)
