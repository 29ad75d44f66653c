"""Exact scalars: probabilities in [0, 1] as reduced big-integer fractions.

Scalars are plain :class:`fractions.Fraction` values; the helpers here
enforce the unit-interval range and implement the effect-monoid operations
(partial sum, sequential product, orthosupplement, order).
"""
from __future__ import annotations

import decimal
import re
from fractions import Fraction
from typing import Union

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

Number = Union[int, str, Fraction]


class DisjointnessViolation(ArithmeticError):
    """Raised when a partial sum of scalars exceeds 1."""


class ScalarRangeError(ValueError):
    pass


def scalar(value: Number, denominator: int | None = None) -> Fraction:
    """Build a scalar, rejecting anything outside [0, 1].

    Strings are parsed with :func:`parse_scalar`, so ``scalar("0.096")`` is
    exactly ``12/125``.  Floats are refused: they cannot carry decimal
    literals exactly.
    """
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    if isinstance(value, str):
        if denominator is not None:
            raise TypeError("denominator given with a string literal")
        return parse_scalar(value)
    q = Fraction(value) if denominator is None else Fraction(value, denominator)
    if q < 0 or q > 1:
        raise ScalarRangeError(f"{q} is not in [0, 1]")
    return q


_DECIMAL = re.compile(r"^\s*(\d+)(?:\.(\d*))?\s*$")
_RATIO = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")


def parse_scalar(text: str) -> Fraction:
    """Parse ``p/q`` or a decimal literal such as ``0.10304`` exactly."""
    m = _RATIO.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ScalarRangeError(f"zero denominator in {text!r}")
        return scalar(num, den)
    m = _DECIMAL.match(text)
    if m:
        whole, frac = m.group(1), m.group(2) or ""
        return scalar(int(whole + frac), 10 ** len(frac))
    raise ValueError(f"not a scalar literal: {text!r}")


def format_ratio(q: Fraction) -> str:
    """``p/q`` form; round-trips through :func:`parse_scalar`."""
    return f"{q.numerator}/{q.denominator}"


def format_decimal(q: Fraction, digits: int = 10, places: int | None = None) -> str:
    """Decimal rendering with round-half-even.

    By default rounds to ``digits`` significant digits; with ``places`` set,
    rounds to that many digits after the point instead.  Trailing zeros are
    dropped and scientific notation is never produced.
    """
    if places is not None:
        # round() on a Fraction is exact and rounds half to even
        digits_str = str(round(q * 10**places)).rjust(places + 1, "0")
        if places == 0:
            return digits_str
        return f"{digits_str[:-places]}.{digits_str[-places:]}"
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)
    d = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    if d == 0:
        return "0"
    return format(d.normalize(ctx), "f")


def ovee_scalar(q: Fraction, r: Fraction) -> Fraction:
    total = q + r
    if total > 1:
        raise DisjointnessViolation(f"{q} (+) {r} = {total} exceeds 1")
    return total


def andthen_scalar(q: Fraction, r: Fraction) -> Fraction:
    return q * r


def ortho(q: Fraction) -> Fraction:
    return 1 - q


def leq_scalar(q: Fraction, r: Fraction) -> bool:
    return q <= r


def times(n: int, q: Fraction) -> Fraction:
    """``n . q``: the n-fold partial sum ``q (+) ... (+) q`` (``0 . q = 0``)."""
    total = ZERO
    for _ in range(n):
        total = ovee_scalar(total, q)
    return total


def least_witness(mass: Fraction) -> int:
    """Least integer n >= 2 with ``1/n <= mass``; mass must be positive."""
    if mass <= 0:
        raise ZeroDivisionError("no witness for a zero mass")
    n = -(-mass.denominator // mass.numerator)  # ceil(1 / mass)
    return max(2, n)
