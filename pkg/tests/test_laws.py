import random

import pytest
from hypothesis import given

from comet import derived
from comet.laws import GenConfig, LAWS, LawReport, check_law, gen_predicate, run_law_suite
from comet.laws.claims import decide
from comet.laws.gen import Gen
from comet.laws.suite import _candidates, shrink
from comet.syntax import BOOL, Context, Ovee, free_vars
from comet.typecheck import check_equal, check_leq, infer_type, well_typed
from strategies import gens

SMALL = GenConfig(instances=5)

# one entry per group of statements the suite must cover
REQUIRED = [
    "ovee.zero", "ovee.commutative", "ovee.associative", "ovee.case", "ovee.cancellation",
    "ovee.positivity", "leq.reflexive", "leq.transitive", "leq.antisymmetric",
    "effect.orthosupplement", "effect.zero_one", "effect.cancellation", "effect.positivity",
    "effect.orthogonality", "and.commutative", "and.distributive", "and.associative", "and.top",
    "and.bot", "and.not_complemented", "do.return", "do.right_unit", "do.associative", "kernel.dom",
    "assert.below_return", "assert.bijection", "measure.top", "measure.bot", "measure.nest",
    "measure.permute", "measure.merge", "measure.cond_case", "rational.sum", "rational.product",
    "rule.beta_norm", "rule.eta_norm", "rule.beta_tensor", "rule.eta_sum", "ntest.unique",
    "instr.ntest", "assert.component", "subst.semantic",
]


def test_required_laws_present():
    missing = [n for n in REQUIRED if n not in LAWS]
    assert not missing


def test_zero_instances_gives_empty_report():
    report = run_law_suite(GenConfig(instances=0))
    assert len(report) == 0 and report.ok


def test_config_bounds():
    with pytest.raises(ValueError):
        GenConfig(max_type_size=0)
    with pytest.raises(ValueError):
        GenConfig(instances=-1)


def test_smoke_run_has_no_failures():
    report = run_law_suite(SMALL)
    assert len(report) == len(LAWS)
    assert report.ok, report.to_text()


def test_report_is_deterministic():
    a = run_law_suite(GenConfig(seed=7, instances=3), ["and", "ovee"])
    b = run_law_suite(GenConfig(seed=7, instances=3), ["and", "ovee"])
    assert a.to_json() == b.to_json()
    assert a.to_text() == b.to_text()


def test_parallel_run_matches_serial():
    names = ["effect", "do"]
    serial = run_law_suite(GenConfig(instances=4), names)
    parallel = run_law_suite(GenConfig(instances=4), names, jobs=2)
    assert serial.to_json() == parallel.to_json()


def test_merge_is_associative():
    parts = [run_law_suite(SMALL, [n]) for n in ("do.fail", "do.return", "kernel.dom")]
    left = parts[0].merge(parts[1]).merge(parts[2])
    right = parts[0].merge(parts[1].merge(parts[2]))
    assert left.to_json() == right.to_json()
    with pytest.raises(ValueError):
        parts[0].merge(parts[0])


def test_unknown_law():
    with pytest.raises(KeyError):
        run_law_suite(SMALL, ["no.such.law"])


def test_mutated_product_breaks_commutativity(monkeypatch):
    monkeypatch.setattr(derived, "andthen", lambda p, q: p)
    result = check_law(LAWS["and.commutative"], GenConfig(instances=100))
    assert result.failures > 0
    cx = result.counterexample
    assert cx is not None and cx.kind == "unequal"
    assert set(cx.terms) == {"p", "q"}
    report = LawReport({result.name: result})
    assert not report.ok and "counterexample for and.commutative" in report.to_text()


def test_counterexamples_are_locally_minimal(monkeypatch):
    monkeypatch.setattr(derived, "andthen", lambda p, q: p)
    lw = LAWS["and.commutative"]
    g = Gen.for_law(GenConfig(), lw.name)
    for _ in range(50):
        inst = lw.sample(g)
        v = decide(inst.claim())
        if not v.ok:
            break
    small, sv = shrink(inst, v)
    assert sv.kind == v.kind and small.size <= inst.size
    for name, part in small.parts.items():
        for cand in _candidates(part):
            w = decide(small.with_part(name, cand).claim())
            assert w.ok or w.kind != sv.kind


def test_depth_one_predicates_are_constant_scalars():
    cfg = GenConfig(depth=1)
    rng = random.Random(3)
    for _ in range(30):
        p = gen_predicate(cfg, BOOL, rng)
        assert not free_vars(p)
        assert infer_type(Context(()), p) == BOOL


@given(gens())
def test_generated_predicates(g):
    ty = g.type()
    p = gen_predicate(GenConfig(), ty, g.rng)
    ctx = Context((("x", ty),))
    assert well_typed(ctx, p, BOOL)
    assert check_equal(ctx, derived.ortho(derived.ortho(p)), p, BOOL)


@given(gens())
def test_orthogonal_predicates_are_summable(g):
    ty = g.type()
    ctx = Context((("x", ty),))
    p, q = g.predicate(ty), g.predicate(ty)
    if check_leq(ctx, p, derived.ortho(q), BOOL):
        assert well_typed(ctx, Ovee(p, q), BOOL)
    else:
        assert not well_typed(ctx, Ovee(p, q), BOOL)


@given(gens())
def test_generated_terms_infer_their_type(g):
    ctx, ty = g.context(), g.type()
    t = g.term(ty, dict(ctx))
    assert infer_type(ctx, t) == ty
