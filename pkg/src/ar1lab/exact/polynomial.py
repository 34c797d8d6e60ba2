"""Dense univariate polynomials over exact rationals.

``Polynomial`` stores coefficients in ascending degree with no trailing
zeros, so equality of values is equality of representations.  ``LaurentPoly``
adds a power-of-the-variable offset (possibly negative); it is needed when
ratio-form generating functions put powers of the parameter in denominators.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

_Scalar = (int, Fraction)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"polynomial coefficients must be exact rationals, got {type(c)!r}")


class Polynomial:
    """Immutable dense polynomial with ``Fraction`` coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((1,))

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((c,))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def monomial(cls, power: int, c=1) -> "Polynomial":
        if power < 0:
            raise ValueError("monomial power must be >= 0")
        return cls((0,) * power + (c,))

    @classmethod
    def geometric(cls, nterms: int) -> "Polynomial":
        """1 + x + ... + x^(nterms-1)."""
        return cls((1,) * nterms)

    # -- structure ----------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def valuation(self) -> int | None:
        """Index of the lowest nonzero coefficient; None for zero."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, _Scalar):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(("Polynomial", self.coeffs))

    def __repr__(self) -> str:
        if self.is_zero():
            return "Polynomial(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{k}")
        return "Polynomial(" + " + ".join(terms) + ")"

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        if isinstance(other, _Scalar):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, _Scalar):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _Scalar):
            if other == 0:
                return Polynomial.zero()
            return Polynomial(tuple(c * other for c in self.coeffs))
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial.zero()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, _Scalar):
            return NotImplemented
        return Polynomial(tuple(c / scalar for c in self.coeffs))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def multiplicative_inverse(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial.constant(1 / self.coeffs[0])
        raise ZeroDivisionError("only nonzero constants are invertible")

    # -- calculus -----------------------------------------------------
    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def antiderivative(self) -> "Polynomial":
        """The antiderivative with zero constant term."""
        return Polynomial((Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs)))

    # -- evaluation ---------------------------------------------------
    def __call__(self, x):
        """Horner evaluation; works for rationals, floats and polynomials."""
        result = x * 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def compose(self, inner: "Polynomial") -> "Polynomial":
        result = self(inner)
        if isinstance(result, Polynomial):
            return result
        return Polynomial.constant(result)

    # -- exact division -----------------------------------------------
    def divexact(self, divisor: "Polynomial") -> "Polynomial":
        """Exact polynomial division; raises if the remainder is nonzero."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dc = divisor.coeffs
        dd = len(dc) - 1
        lead = dc[-1]
        if len(rem) - 1 < dd:
            if all(c == 0 for c in rem):
                return Polynomial.zero()
            raise ValueError("inexact polynomial division")
        qt = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            q = rem[k] / lead
            qt[k - dd] = q
            if q != 0:
                for j in range(dd + 1):
                    rem[k - dd + j] -= q * dc[j]
        if any(c != 0 for c in rem):
            raise ValueError("inexact polynomial division")
        return Polynomial(qt)

    # -- serialization ------------------------------------------------
    def to_strings(self) -> list[str]:
        from ar1lab.exact.rational import format_rational

        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "Polynomial":
        from ar1lab.exact.rational import parse_rational

        return cls(tuple(parse_rational(s) for s in items))


class LaurentPoly:
    """A polynomial times an integer (possibly negative) power of the variable.

    Canonical form: the carried polynomial has nonzero constant term unless
    the whole value is zero.
    """

    __slots__ = ("poly", "offset")

    def __init__(self, poly: Polynomial, offset: int = 0):
        if poly.is_zero():
            offset = 0
        else:
            v = poly.valuation
            if v:
                poly = Polynomial(poly.coeffs[v:])
                offset += v
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "offset", offset)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "LaurentPoly":
        return cls(p, 0)

    @classmethod
    def monomial(cls, power: int, c=1) -> "LaurentPoly":
        return cls(Polynomial.constant(c), power)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, _Scalar):
            other = LaurentPoly(Polynomial.constant(other))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.poly == other.poly and (self.is_zero() or self.offset == other.offset)

    def __hash__(self):
        return hash(("LaurentPoly", self.poly.coeffs, self.offset))

    def __repr__(self) -> str:
        return f"LaurentPoly({self.poly!r}, offset={self.offset})"

    def __add__(self, other):
        if isinstance(other, _Scalar):
            other = LaurentPoly(Polynomial.constant(other))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        off = min(self.offset, other.offset)
        a = Polynomial.monomial(self.offset - off) * self.poly
        b = Polynomial.monomial(other.offset - off) * other.poly
        return LaurentPoly(a + b, off)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(-self.poly, self.offset)

    def __sub__(self, other):
        if isinstance(other, _Scalar):
            other = LaurentPoly(Polynomial.constant(other))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _Scalar):
            return LaurentPoly(self.poly * other, self.offset)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return LaurentPoly(self.poly * other.poly, self.offset + other.offset)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, _Scalar):
            return NotImplemented
        return LaurentPoly(self.poly / scalar, self.offset)

    def multiplicative_inverse(self) -> "LaurentPoly":
        if self.poly.degree == 0:
            return LaurentPoly(Polynomial.constant(1 / self.poly.coeffs[0]), -self.offset)
        raise ZeroDivisionError("only monomials are invertible in the Laurent ring")

    def to_polynomial(self) -> Polynomial:
        """Convert back to a plain polynomial; fails on true negative powers."""
        if self.is_zero():
            return Polynomial.zero()
        if self.offset < 0:
            raise ValueError("value has negative powers of the variable")
        return Polynomial.monomial(self.offset) * self.poly
