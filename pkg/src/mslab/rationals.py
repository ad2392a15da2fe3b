"""Exact rational scalars and their canonical string form.

All distances and function values in this package are `fractions.Fraction`
instances: lowest terms, positive denominator, exact arithmetic. The string
form used in every JSON interface is `str(Fraction)` ("3/4", "2", "0");
`parse_rational` accepts that form back, so parse o serialize is the
identity on canonical strings.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce an int, 'p/q' string or Fraction to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not a rational value: {value!r}")


def parse_rational(text: str) -> Fraction:
    return as_fraction(text)


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def common_denominator(values: Iterable[Fraction]) -> int:
    """Least common denominator of a collection of fractions (1 if empty)."""
    out = 1
    for v in values:
        out = lcm(out, v.denominator)
    return out


def fraction_ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)
