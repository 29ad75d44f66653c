"""Hypothesis strategies built on the seeded term generator."""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from comet.laws.gen import Gen, GenConfig

CFG = GenConfig(instances=1)

scalars = st.integers(1, 20).flatmap(lambda d: st.integers(0, d).map(lambda n: Fraction(n, d)))


@st.composite
def gens(draw, depth: int = 2) -> Gen:
    seed = draw(st.integers(0, 2**32 - 1))
    return Gen(GenConfig(instances=1, depth=depth), random.Random(seed))


@st.composite
def typed_terms(draw, depth: int = 2):
    """``(ctx, term, type)`` triples from the generator."""
    g = draw(gens(depth))
    ctx, ty = g.context(), g.type()
    return ctx, g.term(ty, dict(ctx)), ty


@st.composite
def predicates(draw, depth: int = 2):
    """``(ctx, p)`` with ``ctx |- p : 2``."""
    g = draw(gens(depth))
    ctx = g.context()
    return ctx, g.predicate_form(dict(ctx), depth) if depth else g.scalar()
