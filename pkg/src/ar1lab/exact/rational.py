"""Exact rational scalars.

``fractions.Fraction`` already provides arbitrary-precision rationals stored
in lowest terms with a positive denominator, so it is used directly as the
scalar type.  This module pins the wire format: ``"num/den"`` with the
denominator omitted when it equals 1.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"`` (also accepts plain decimal strings)."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    if "." in text or "e" in text or "E" in text:
        return Fraction(text)
    return Fraction(int(text))


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
