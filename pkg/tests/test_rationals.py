from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from comet.rationals import (
    DisjointnessViolation, ScalarRangeError, andthen_scalar, format_decimal, format_ratio,
    least_witness, leq_scalar, ortho, ovee_scalar, parse_scalar, scalar, times,
)
from strategies import scalars


def test_decimal_literals_are_exact():
    assert parse_scalar("0.096") == F(12, 125)
    assert parse_scalar("0.01") == F(1, 100)
    assert parse_scalar("3/6") == F(1, 2)
    assert parse_scalar("1") == 1


def test_scalar_range():
    with pytest.raises(ScalarRangeError):
        scalar(F(3, 2))
    with pytest.raises(ScalarRangeError):
        scalar(-1)
    assert scalar(2, 4) == F(1, 2)


def test_partial_sum():
    assert ovee_scalar(ovee_scalar(F("0.008"), F("0.09504")), F("0.89696")) == 1
    assert ovee_scalar(F(2, 7), 0) == F(2, 7)
    with pytest.raises(DisjointnessViolation):
        ovee_scalar(F(3, 4), F(1, 2))


def test_product():
    assert andthen_scalar(F("0.01"), F("0.8")) == F("0.008")
    w = andthen_scalar(andthen_scalar(F("0.999"), F("0.998")), F("0.05085"))
    assert w == F(50697551700, 10**12)
    assert format_decimal(w, places=9) == "0.050697552"
    assert andthen_scalar(F(3, 7), 1) == F(3, 7)


def test_ortho_and_order():
    assert ortho(F("0.01")) == F("0.99")
    assert ortho(F(1)) == 0
    assert leq_scalar(F(1, 10), F("0.10304"))
    assert not leq_scalar(F(1, 2), F(1, 3))


@given(scalars)
def test_ortho_involution(q):
    assert ortho(ortho(q)) == q
    assert leq_scalar(q, q)


@given(scalars, scalars, scalars)
def test_partial_commutative_monoid(q, r, s):
    def total(*xs):
        try:
            out = F(0)
            for x in xs:
                out = ovee_scalar(out, x)
            return out
        except DisjointnessViolation:
            return None

    assert total(q, r) == total(r, q)
    left = None if total(q, r) is None else total(total(q, r), s)
    right = None if total(r, s) is None else total(q, total(r, s))
    assert left == right
    assert ovee_scalar(q, 0) == q


@given(scalars, scalars, scalars)
def test_effect_monoid(q, r, s):
    if r + s <= 1:
        assert andthen_scalar(q, ovee_scalar(r, s)) == ovee_scalar(andthen_scalar(q, r), andthen_scalar(q, s))
    assert andthen_scalar(q, 0) == 0
    assert andthen_scalar(q, r) == andthen_scalar(r, q)
    assert andthen_scalar(q, andthen_scalar(r, s)) == andthen_scalar(andthen_scalar(q, r), s)


@pytest.mark.parametrize("n", [2, 3, 7, 100, 1000])
def test_n_copies_of_one_over_n(n):
    assert times(n, F(1, n)) == 1


@given(st.integers(2, 1000), scalars)
def test_divide(n, t):
    if n * t == 1:
        assert t == F(1, n)


def test_formatting():
    assert format_ratio(F(25, 322)) == "25/322"
    assert format_decimal(F(25, 322)) == "0.07763975155"
    assert format_decimal(F(25, 322), places=4) == "0.0776"
    assert format_decimal(F(1, 8), digits=2) == "0.12"  # half to even
    assert format_decimal(F(0)) == "0"
    assert format_decimal(F(1, 1000000)) == "0.000001"


@given(scalars)
def test_format_round_trip(q):
    assert parse_scalar(format_ratio(q)) == q


def test_least_witness():
    assert least_witness(F("0.10304")) == 10
    assert least_witness(F(1)) == 2
    assert least_witness(F(1, 3)) == 3
    with pytest.raises(ZeroDivisionError):
        least_witness(F(0))
