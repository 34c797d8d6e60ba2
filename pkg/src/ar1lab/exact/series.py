"""Truncated formal power series with exact coefficients.

Coefficients live in any exact commutative ring that supports ``+``, ``-``,
``*``, division by integers, and scalar mixing with ``int``/``Fraction``:
in practice ``Fraction``, ``Polynomial`` or ``LaurentPoly``.  All operations
propagate exactly up to the stored order; products and quotients of series
of different orders are truncated to the smaller order.

Coefficients are stored against the plain basis z^n.  Exponential generating
functions are handled through the ``from_egf`` / ``egf_coefficient``
conversions, never implicitly.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from ar1lab.errors import DomainError, NonInvertibleError


def _is_zero_coeff(c) -> bool:
    z = c * 0
    return c == z


class TruncatedSeries:
    """Series c_0 + c_1 z + ... + c_N z^N, exact up to and including order N."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = list(coeffs)
        if not cs:
            raise ValueError("need at least one coefficient to fix the ring")
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        zero = cs[0] * 0
        if len(cs) < order + 1:
            cs.extend([zero] * (order + 1 - len(cs)))
        else:
            cs = cs[: order + 1]
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_egf(cls, egf_coeffs: Sequence, order: int | None = None) -> "TruncatedSeries":
        """Build from coefficients a_n of sum a_n z^n / n!."""
        if order is None:
            order = len(egf_coeffs) - 1
        cs = [c * Fraction(1, factorial(n)) for n, c in enumerate(egf_coeffs[: order + 1])]
        return cls(cs, order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([Fraction(1)], order)

    # -- accessors ------------------------------------------------------
    def coefficient(self, n: int):
        if n > self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coeffs[n]

    def egf_coefficient(self, n: int):
        """n! times the coefficient of z^n."""
        return self.coefficient(n) * factorial(n)

    @property
    def _zero(self):
        return self.coeffs[0] * 0

    @property
    def _one(self):
        return self.coeffs[0] * 0 + 1

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(("TruncatedSeries", self.coeffs))

    def agrees_with(self, other: "TruncatedSeries", order: int | None = None) -> bool:
        if order is None:
            order = min(self.order, other.order)
        return all(self.coeffs[n] == other.coeffs[n] for n in range(order + 1))

    def __repr__(self) -> str:
        shown = ", ".join(repr(c) for c in self.coeffs[:5])
        return f"TruncatedSeries([{shown}, ...], order={self.order})"

    # -- linear structure -------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return TruncatedSeries(
            [self.coeffs[n] + other.coeffs[n] for n in range(order + 1)], order
        )

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, scalar) -> "TruncatedSeries":
        return TruncatedSeries([c * scalar for c in self.coeffs], self.order)

    # -- multiplicative structure -----------------------------------------
    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        zero = self._zero
        out = [zero] * (order + 1)
        for i in range(order + 1):
            ci = self.coeffs[i]
            if _is_zero_coeff(ci):
                continue
            for j in range(order + 1 - i):
                out[i + j] = out[i + j] + ci * other.coeffs[j]
        return TruncatedSeries(out, order)

    def invert(self) -> "TruncatedSeries":
        """Multiplicative inverse: returns t with self*t = 1 up to order N."""
        c0 = self.coeffs[0]
        if _is_zero_coeff(c0):
            raise NonInvertibleError("constant term is zero; series is not a unit")
        if isinstance(c0, Fraction) or isinstance(c0, int):
            inv0 = Fraction(1) / c0
        else:
            inv0 = c0.multiplicative_inverse()
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = self._zero
            for k in range(1, n + 1):
                acc = acc + self.coeffs[k] * out[n - k]
            out.append(-(inv0 * acc))
        return TruncatedSeries(out, self.order)

    def log(self) -> "TruncatedSeries":
        """Series logarithm; requires constant term equal to 1."""
        if self.coeffs[0] != self._one:
            raise DomainError("series log requires constant term 1")
        out = [self._zero]
        for n in range(1, self.order + 1):
            acc = self.coeffs[n] * n
            for k in range(1, n):
                acc = acc - (out[k] * self.coeffs[n - k]) * k
            out.append(acc / n)
        return TruncatedSeries(out, self.order)

    def exp(self) -> "TruncatedSeries":
        """Series exponential; requires constant term equal to 0."""
        if not _is_zero_coeff(self.coeffs[0]):
            raise DomainError("series exp requires constant term 0")
        out = [self._one]
        for n in range(1, self.order + 1):
            acc = self._zero
            for k in range(1, n + 1):
                acc = acc + (self.coeffs[k] * out[n - k]) * k
            out.append(acc / n)
        return TruncatedSeries(out, self.order)


def sin_series(order: int) -> TruncatedSeries:
    cs = [Fraction(0)] * (order + 1)
    for n in range(1, order + 1, 2):
        cs[n] = Fraction((-1) ** ((n - 1) // 2), factorial(n))
    return TruncatedSeries(cs, order)


def cos_series(order: int) -> TruncatedSeries:
    cs = [Fraction(0)] * (order + 1)
    for n in range(0, order + 1, 2):
        cs[n] = Fraction((-1) ** (n // 2), factorial(n))
    return TruncatedSeries(cs, order)
