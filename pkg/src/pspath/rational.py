"""Exact rationals with signed infinity sentinels.

Finite values are :class:`fractions.Fraction` (arbitrary precision, always in
lowest terms, exact comparison by cross-multiplication).  ``INF`` and
``NEG_INF`` order correctly against any finite rational.
"""

from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Union

__all__ = ["Fraction", "INF", "NEG_INF", "Rational", "is_finite", "parse_rational", "format_rational"]


class _Infinity:
    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self):
        return "INF" if self.sign > 0 else "NEG_INF"

    def __str__(self):
        return "inf" if self.sign > 0 else "-inf"

    def __neg__(self):
        return NEG_INF if self.sign > 0 else INF

    def __hash__(self):
        return hash(("pspath-inf", self.sign))

    def _cmp(self, other):
        if isinstance(other, _Infinity):
            return (self.sign > other.sign) - (self.sign < other.sign)
        if isinstance(other, numbers.Rational):
            return self.sign
        return NotImplemented

    def __eq__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c == 0

    def __ne__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c != 0

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __reduce__(self):
        return (_infinity, (self.sign,))


def _infinity(sign):
    return INF if sign > 0 else NEG_INF


INF = _Infinity(1)
NEG_INF = _Infinity(-1)

Rational = Union[Fraction, int, _Infinity]


def is_finite(x) -> bool:
    return not isinstance(x, _Infinity)


def parse_rational(text: str) -> Rational:
    """Parse ``num/den``, ``num``, ``inf`` or ``-inf``."""
    s = text.strip()
    if s in ("inf", "+inf"):
        return INF
    if s == "-inf":
        return NEG_INF
    if "/" in s:
        num, den = s.split("/", 1)
        if int(den) <= 0:
            raise ValueError(f"invalid rational {text!r}: denominator must be positive")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(x: Rational) -> str:
    if isinstance(x, _Infinity):
        return str(x)
    return str(Fraction(x))
