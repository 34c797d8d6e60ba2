"""Polynomial families behind exact AR(1) persistence probabilities.

Three families of integer polynomials are built here, each by independent
routes that must agree coefficientwise:

* the tree-inversion enumerators J_n (Mallows-Riordan polynomials), from
  the convolution recurrence, from the logarithm of the deformed
  exponential, and from a ratio of two divergent formal series;
* the inverse-drift family J~_n, defined by inverting the alternating
  exponential generating function of the J_n;
* the large-drift family J^_n, a partial-sum transform of the J~_n.

Also here: Euler zigzag numbers, dichromatic polynomials of complete graphs,
the nested-integral volume polynomial, and the exact one-sided derivative
data of the persistence probability at drift -1.

Scalar tables evaluate the same recurrences at a fixed rational drift using
pure integer arithmetic, which stays fast at depths (n in the hundreds)
where building the full polynomials would be wasteful.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from ar1lab.exact.polynomial import LaurentPoly, Polynomial
from ar1lab.exact.series import TruncatedSeries, cos_series, sin_series

_LOCK = threading.RLock()


# ---------------------------------------------------------------------------
# J_n: tree-inversion enumerators
# ---------------------------------------------------------------------------

_J_POLY: list[Polynomial | None] = [None, Polynomial.one(), Polynomial.one()]


def _grow_j(nmax: int) -> None:
    with _LOCK:
        while len(_J_POLY) <= nmax:
            m = len(_J_POLY)  # computing J_m, m = n+2 with n = m-2
            n = m - 2
            acc = Polynomial.zero()
            for i in range(n + 1):
                acc = acc + comb(n, i) * Polynomial.geometric(i + 1) * _J_POLY[i + 1] * _J_POLY[n + 1 - i]
            _J_POLY.append(acc)


def mallows_riordan(n: int, verify_routes: bool = False) -> Polynomial:
    """J_n, via J_{m+2} = sum_i C(m,i)(1+th+...+th^i) J_{i+1} J_{m+1-i}.

    With ``verify_routes`` the value is recomputed from the logarithm of the
    deformed exponential and from the ratio form, and all three must agree
    exactly.
    """
    if n < 1:
        raise IndexError("family index must be >= 1")
    _grow_j(n)
    value = _J_POLY[n]
    if verify_routes:
        via_log = _j_via_log(n)[n]
        via_ratio = _j_via_ratio(n)[n]
        if value != via_log or value != via_ratio:
            raise AssertionError(f"route disagreement for J_{n}")
    return value


def _deformed_exp_series(order: int) -> TruncatedSeries:
    """E(th, z) = sum th^(n(n-1)/2) z^n / n! over the polynomial ring."""
    coeffs = [
        Polynomial.monomial(n * (n - 1) // 2) * Fraction(1, factorial(n))
        for n in range(order + 1)
    ]
    return TruncatedSeries(coeffs, order)


def _j_via_log(nmax: int) -> list[Polynomial | None]:
    """J_1..J_nmax extracted from log E(th,z) = sum (th-1)^(n-1) J_n z^n/n!."""
    logE = _deformed_exp_series(nmax).log()
    out: list[Polynomial | None] = [None] * (nmax + 1)
    tm1 = Polynomial((-1, 1))
    for n in range(1, nmax + 1):
        egf = logE.coefficient(n) * factorial(n)
        out[n] = egf.divexact(tm1 ** (n - 1))
    return out


def _ratio_series_pair(order: int) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Numerator and denominator of the ratio form of sum J_{n+1} z^n/n!.

    Numerator term n>=2:   (th+...+th^(n-1))^n / th^(n(n-1)/2),
    denominator term n>=3: (th+...+th^(n-2))^n / th^(n(n-1)/2); both are
    Laurent polynomials since the powers of th need not clear.
    """
    one = LaurentPoly(Polynomial.one())
    zero = LaurentPoly(Polynomial.zero())
    num = [one, zero]
    den = [one, LaurentPoly(Polynomial.constant(-1)), zero]
    for n in range(2, order + 1):
        p = Polynomial.geometric(n - 1) ** n
        num.append(LaurentPoly(p, n - n * (n - 1) // 2) * Fraction(1, factorial(n)))
    for n in range(3, order + 1):
        p = Polynomial.geometric(n - 2) ** n
        den.append(LaurentPoly(p, n - n * (n - 1) // 2) * Fraction(1, factorial(n)))
    return TruncatedSeries(num, order), TruncatedSeries(den, order)


def _j_via_ratio(nmax: int) -> list[Polynomial | None]:
    order = max(nmax - 1, 0)
    num, den = _ratio_series_pair(order)
    ratio = num * den.invert()
    out: list[Polynomial | None] = [None] * (nmax + 1)
    for n in range(0, nmax):
        out[n + 1] = (ratio.coefficient(n) * factorial(n)).to_polynomial()
    return out


def kreweras_recurrence_holds(nmax: int) -> bool:
    """Linear recurrence of the ratio form, in which J_{n-1} never appears:

    J_{n+1} = (th+...+th^(n-1))^n/th^(n(n-1)/2) + n J_n
              - sum_{k=3}^{n} C(n,k) (th+...+th^(k-2))^k/th^(k(k-1)/2) J_{n-k+1}
    """
    _grow_j(nmax + 1)

    def head(m: int, top: int) -> LaurentPoly:
        # (th + ... + th^top)^m / th^(m(m-1)/2), as a Laurent polynomial
        return LaurentPoly(Polynomial.geometric(top) ** m, m - m * (m - 1) // 2)

    for n in range(2, nmax + 1):
        rhs = head(n, n - 1) + n * LaurentPoly.from_polynomial(_J_POLY[n])
        for k in range(3, n + 1):
            rhs = rhs - comb(n, k) * head(k, k - 2) * LaurentPoly.from_polynomial(_J_POLY[n - k + 1])
        if rhs != LaurentPoly.from_polynomial(_J_POLY[n + 1]):
            return False
    return True


def gessel_identity_holds(order: int) -> bool:
    """Ratio identity with homogeneous sums starting at 1:

    sum J_{n+1} z^n/n! = [sum (1+...+th^n)^n/th^(n(n+1)/2) z^n/n!]
                       / [sum (1+...+th^(n-1))^n/th^(n(n+1)/2) z^n/n!]
    checked as J * denominator = numerator, coefficientwise.
    """
    _grow_j(order + 1)
    u = [LaurentPoly(Polynomial.one())]
    v = [LaurentPoly(Polynomial.one())]
    for n in range(1, order + 1):
        off = -(n * (n + 1) // 2)
        u.append(LaurentPoly(Polynomial.geometric(n + 1) ** n, off) * Fraction(1, factorial(n)))
        v.append(LaurentPoly(Polynomial.geometric(n) ** n, off) * Fraction(1, factorial(n)))
    num = TruncatedSeries(u, order)
    den = TruncatedSeries(v, order)
    jser = TruncatedSeries(
        [LaurentPoly.from_polynomial(_J_POLY[n + 1]) * Fraction(1, factorial(n)) for n in range(order + 1)],
        order,
    )
    return (jser * den).agrees_with(num, order)


# ---------------------------------------------------------------------------
# J~_n: inverse-drift family
# ---------------------------------------------------------------------------

_JT_POLY: list[Polynomial | None] = [None, Polynomial.one()]


def _grow_jt(nmax: int) -> None:
    # incremental form of the defining inversion: with s_k = (-1)^k J_{k+1}/k!
    # and t_m = J~_{m+1}/m!, the product (sum s_k z^k)(sum t_m z^m) = 1 gives
    # t_m = -sum_{k=1}^{m} s_k t_{m-k}.
    with _LOCK:
        _grow_j(nmax + 1)
        while len(_JT_POLY) <= nmax:
            m = len(_JT_POLY) - 1  # producing J~_{m+1}
            acc = Polynomial.zero()
            for k in range(1, m + 1):
                sk = _J_POLY[k + 1] * Fraction((-1) ** k, factorial(k))
                acc = acc + sk * _JT_POLY[m - k + 1] * Fraction(1, factorial(m - k))
            _JT_POLY.append(-acc * factorial(m))


def j_tilde(n: int, verify_routes: bool = False) -> Polynomial:
    """J~_n, defined by sum J~_{n+1} z^n/n! = (sum (-1)^n J_{n+1} z^n/n!)^(-1).

    ``verify_routes`` recomputes the value by direct series inversion, by the
    binomial convolution recurrence, and by the signed variant of the
    J-convolution; all must agree exactly.
    """
    if n < 1:
        raise IndexError("family index must be >= 1")
    _grow_jt(n)
    value = _JT_POLY[n]
    if verify_routes:
        a = _jt_via_inversion(n)[n]
        b = _jt_via_binomial_recurrence(n)[n]
        c = _jt_via_signed_convolution(n)[n]
        if value != a or value != b or value != c:
            raise AssertionError(f"route disagreement for J~_{n}")
    return value


def _jt_via_inversion(nmax: int) -> list[Polynomial | None]:
    """Direct series inversion of sum (-1)^n J_{n+1} z^n / n!."""
    _grow_j(nmax + 1)
    order = nmax - 1
    coeffs = [
        _J_POLY[k + 1] * Fraction((-1) ** k, factorial(k)) for k in range(order + 1)
    ]
    inv = TruncatedSeries(coeffs, order).invert()
    out: list[Polynomial | None] = [None] * (nmax + 1)
    for m in range(order + 1):
        out[m + 1] = inv.coefficient(m) * factorial(m)
    return out


def _jt_via_binomial_recurrence(nmax: int) -> list[Polynomial | None]:
    """J~_{n+1} = sum_{k=1}^{n} (-1)^(k-1) C(n,k) J_{k+1} J~_{n+1-k}."""
    _grow_j(nmax + 1)
    out: list[Polynomial | None] = [None, Polynomial.one()]
    for m in range(2, nmax + 1):
        n = m - 1
        acc = Polynomial.zero()
        for k in range(1, n + 1):
            acc = acc + Fraction((-1) ** (k - 1)) * comb(n, k) * _J_POLY[k + 1] * out[n + 1 - k]
        out.append(acc)
    return out


def _jt_via_signed_convolution(nmax: int) -> list[Polynomial | None]:
    """J~_{n+2} = sum_{k=0}^{n} C(n,k) (-1)^k (1+th+...+th^k) J_{k+1} J~_{n+1-k}."""
    _grow_j(nmax + 1)
    out: list[Polynomial | None] = [None, Polynomial.one(), Polynomial.one()]
    for m in range(3, nmax + 1):
        n = m - 2
        acc = Polynomial.zero()
        for k in range(0, n + 1):
            acc = acc + (
                Fraction((-1) ** k)
                * comb(n, k)
                * Polynomial.geometric(k + 1)
                * _J_POLY[k + 1]
                * out[n + 1 - k]
            )
        out.append(acc)
    return out


def c_polynomial(n: int) -> Polynomial:
    """C_n = (-th)^(-(n-1)) J~_{n+1}: positive coefficients, leading term 1."""
    if n < 1:
        raise IndexError("family index must be >= 1")
    jt = j_tilde(n + 1)
    sign = Fraction((-1) ** (n - 1))
    return (jt * sign).divexact(Polynomial.monomial(n - 1))


# ---------------------------------------------------------------------------
# J^_n: large-drift family
# ---------------------------------------------------------------------------

_JH_POLY: list[Polynomial | None] = [None, Polynomial.one()]


def _grow_jh(nmax: int) -> None:
    with _LOCK:
        _grow_jt(nmax)
        while len(_JH_POLY) <= nmax:
            m = len(_JH_POLY)  # producing J^_m with m = n+1
            n = m - 1
            _JH_POLY.append(2 * n * _JH_POLY[n] + Fraction((-1) ** n) * _JT_POLY[m])


def j_hat(n: int, verify_routes: bool = False) -> Polynomial:
    """J^_n, via J^_{n+1} = 2n J^_n + (-1)^n J~_{n+1}.

    ``verify_routes`` recomputes through the partial-sum identity
    J^_{n+1}/(2^n n!) = sum_{k<=n} (-1)^k J~_{k+1}/(2^k k!).
    """
    if n < 1:
        raise IndexError("family index must be >= 1")
    _grow_jh(n)
    value = _JH_POLY[n]
    if verify_routes:
        alt = _jh_via_partial_sums(n)[n]
        if value != alt:
            raise AssertionError(f"route disagreement for J^_{n}")
    return value


def _jh_via_partial_sums(nmax: int) -> list[Polynomial | None]:
    _grow_jt(nmax)
    out: list[Polynomial | None] = [None] * (nmax + 1)
    acc = Polynomial.zero()
    for k in range(0, nmax):
        acc = acc + _JT_POLY[k + 1] * Fraction((-1) ** k, 2**k * factorial(k))
        out[k + 1] = acc * (2**k * factorial(k))
    return out


# ---------------------------------------------------------------------------
# Euler zigzag numbers
# ---------------------------------------------------------------------------

_ZIGZAG: list[int] = []


def zigzag(n: int) -> int:
    """A_n, the coefficient of z^n/n! in (1 + sin z)/cos z."""
    if n < 0:
        raise IndexError("zigzag index must be >= 0")
    with _LOCK:
        if len(_ZIGZAG) <= n:
            order = max(n, 2 * len(_ZIGZAG), 8)
            one = TruncatedSeries.one(order)
            ser = (one + sin_series(order)) * cos_series(order).invert()
            vals = []
            for k in range(order + 1):
                a = ser.egf_coefficient(k)
                if a.denominator != 1:
                    raise AssertionError("zigzag expansion produced a non-integer")
                vals.append(int(a))
            _ZIGZAG[:] = vals
    return _ZIGZAG[n]


def zigzag_alternating_convolution(n: int) -> int:
    """sum_k C(n,k) (-1)^k A_k A_{n-k}; vanishes for every n >= 1."""
    zigzag(n)
    return sum(comb(n, k) * (-1) ** k * _ZIGZAG[k] * _ZIGZAG[n - k] for k in range(n + 1))


# ---------------------------------------------------------------------------
# Dichromatic polynomials of complete graphs
# ---------------------------------------------------------------------------


def tutte_complete(n: int) -> list[Polynomial]:
    """Dichromatic polynomial T_n(x, th) of the complete graph on n vertices.

    Returned as the list of coefficients of x^0..x^n, each a polynomial in
    th.  Computed from the exponential identity
    sum T_n(x,th) z^n/n! = exp[x * sum J_k(th+1) z^k/k!].
    """
    if n < 0:
        raise IndexError("vertex count must be >= 0")
    if n == 0:
        return [Polynomial.one()]
    _grow_j(n)
    shift = Polynomial((1, 1))
    s_coeffs = [Polynomial.zero()] + [
        _J_POLY[k].compose(shift) * Fraction(1, factorial(k)) for k in range(1, n + 1)
    ]
    s = TruncatedSeries(s_coeffs, n)
    out = [Polynomial.zero()]  # x^0 coefficient of T_n vanishes for n >= 1
    power = TruncatedSeries.one(n)
    for j in range(1, n + 1):
        power = power * s
        out.append(power.coefficient(n) * Fraction(factorial(n), factorial(j)))
    return out


def tutte_modified_eval(n: int, x: Fraction, theta: Fraction) -> Fraction:
    """Evaluation of T_n(x-1, th-1)/(x-1), the complete-graph Tutte polynomial.

    The division is exact because T_n(y, .) has no constant term in y for
    n >= 1; at x = 1 the value reduces to the x^1 coefficient of
    T_n(., th-1), which equals J_n(th).
    """
    if n == 0:
        return Fraction(1)
    coeffs = tutte_complete(n)
    tm1 = Fraction(theta) - 1
    xm1 = Fraction(x) - 1
    acc = Fraction(0)
    for j in range(len(coeffs) - 1, 0, -1):
        acc = acc * xm1 + coeffs[j](tm1)
    return acc


# ---------------------------------------------------------------------------
# Nested-integral volume polynomial
# ---------------------------------------------------------------------------


def nested_volume(n: int) -> Polynomial:
    """The n-fold nested integral over [1, th x] chains, as a polynomial in th.

    int_1^th int_1^(th x_1) ... int_1^(th x_{n-1}) dx_n...dx_1, evaluated by
    iterated antidifferentiation with the innermost variable first.  The
    result equals (th-1)^n J_{n+1}(th)/n! identically.
    """
    if n < 1:
        raise IndexError("depth must be >= 1")
    # g holds the current integrand as coefficients (in the outer variable x)
    # over polynomials in th
    g: list[Polynomial] = [Polynomial.one()]
    for _ in range(n):
        # antiderivative in x, then evaluate between 1 and th*x
        anti = [Polynomial.zero()] + [g[k] / (k + 1) for k in range(len(g))]
        at_one = Polynomial.zero()
        for c in anti:
            at_one = at_one + c
        g = [anti[k] * Polynomial.monomial(k) for k in range(len(anti))]
        g[0] = g[0] - at_one
    total = Polynomial.zero()
    for c in g:
        total = total + c
    return total


# ---------------------------------------------------------------------------
# One-sided derivative data at drift -1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryDerivatives:
    """One-sided first and second derivatives of th -> p_n(th) at th = -1."""

    left_p1: Fraction
    right_p1: Fraction
    left_p2: Fraction
    right_p2: Fraction


def boundary_derivatives(n: int) -> BoundaryDerivatives:
    """Exact one-sided derivatives of the persistence probability at -1.

    Right side differentiates J_{n+1}(th)/(2^n n!); left side differentiates
    J~_{n+1}(1/th)/(2^n n!) via the chain rule, all exactly.
    """
    if n < 2:
        raise IndexError("need horizon n >= 2")
    scale = Fraction(1, 2**n * factorial(n))
    j = mallows_riordan(n + 1)
    jt = j_tilde(n + 1)
    j1, j2 = j.derivative(), j.derivative().derivative()
    jt1, jt2 = jt.derivative(), jt.derivative().derivative()
    minus1 = Fraction(-1)
    right_p1 = j1(minus1) * scale
    right_p2 = j2(minus1) * scale
    # d/dth f(1/th) = -f'(1/th)/th^2 ; d2/dth2 f(1/th) = 2 f'(1/th)/th^3 + f''(1/th)/th^4
    left_p1 = -jt1(minus1) * scale
    left_p2 = (-2 * jt1(minus1) + jt2(minus1)) * scale
    return BoundaryDerivatives(left_p1=left_p1, right_p1=right_p1, left_p2=left_p2, right_p2=right_p2)


# ---------------------------------------------------------------------------
# Scalar tables at a fixed rational drift (pure integer recurrences)
# ---------------------------------------------------------------------------


def _dexp(n: int) -> int:
    # degree of J_n, J~_n, J^_n alike: (n-1)(n-2)/2
    return (n - 1) * (n - 2) // 2


class ScalarFamilies:
    """Values J_n(th), J~_n(th), J^_n(th) at one rational drift.

    Internally each value is an integer: the polynomial value times
    q^((n-1)(n-2)/2) where th = p/q in lowest terms.  The recurrences then
    run over plain integers, which keeps deep tables (n in the hundreds)
    cheap compared to Fraction normalization at every step.
    """

    def __init__(self, theta: Fraction):
        theta = Fraction(theta)
        self.theta = theta
        self._p = theta.numerator
        self._q = theta.denominator
        self._g = [1]  # homogeneous sums G_i = sum_{j<=i} p^j q^(i-j)
        self._j = [0, 1, 1]  # J_n * q^dexp(n)
        self._jt = [0, 1]  # J~_n * q^dexp(n)
        self._jh = [0, 1]  # J^_n * q^dexp(n)
        self._lock = threading.RLock()

    def _grow_g(self, imax: int) -> None:
        while len(self._g) <= imax:
            i = len(self._g)
            self._g.append(self._g[-1] * self._p + self._q**i)

    def _grow_j(self, nmax: int) -> None:
        p, q = self._p, self._q
        self._grow_g(nmax)
        jj = self._j
        while len(jj) <= nmax:
            n = len(jj) - 2
            acc = 0
            for i in range(n + 1):
                acc += comb(n, i) * self._g[i] * jj[i + 1] * jj[n + 1 - i] * q ** ((n - i) * (i + 1))
            jj.append(acc)

    def _grow_jt(self, nmax: int) -> None:
        q = self._q
        self._grow_j(nmax + 1)
        jt = self._jt
        while len(jt) <= nmax:
            n = len(jt) - 1
            acc = 0
            for k in range(1, n + 1):
                acc += (-1) ** (k - 1) * comb(n, k) * self._j[k + 1] * jt[n + 1 - k] * q ** (k * (n - k))
            jt.append(acc)

    def _grow_jh(self, nmax: int) -> None:
        q = self._q
        self._grow_jt(nmax)
        jh = self._jh
        while len(jh) <= nmax:
            n = len(jh) - 1
            jh.append(2 * n * jh[n] * q ** (n - 1) + (-1) ** n * self._jt[n + 1])

    def j(self, n: int) -> Fraction:
        if n < 1:
            raise IndexError("family index must be >= 1")
        with self._lock:
            self._grow_j(n)
            return Fraction(self._j[n], self._q ** _dexp(n))

    def j_tilde(self, n: int) -> Fraction:
        if n < 1:
            raise IndexError("family index must be >= 1")
        with self._lock:
            self._grow_jt(n)
            return Fraction(self._jt[n], self._q ** _dexp(n))

    def j_hat(self, n: int) -> Fraction:
        if n < 1:
            raise IndexError("family index must be >= 1")
        with self._lock:
            self._grow_jh(n)
            return Fraction(self._jh[n], self._q ** _dexp(n))


_SCALAR_TABLES: dict[Fraction, ScalarFamilies] = {}


def scalar_families(theta) -> ScalarFamilies:
    theta = Fraction(theta)
    with _LOCK:
        table = _SCALAR_TABLES.get(theta)
        if table is None:
            table = _SCALAR_TABLES[theta] = ScalarFamilies(theta)
    return table


# ---------------------------------------------------------------------------
# Structural checks shared by tests and the verification suite
# ---------------------------------------------------------------------------


def check_structure_j(n: int) -> bool:
    """J_{n+1}: degree n(n-1)/2, positive integer coefficients, leading 1."""
    p = mallows_riordan(n + 1)
    if p.degree != n * (n - 1) // 2:
        return False
    if p.coeffs[-1] != 1:
        return False
    return all(c.denominator == 1 and c > 0 for c in p.coeffs)


def check_structure_jt(n: int) -> bool:
    """J~_{n+1}: degree n(n-1)/2, valuation n-1, constant sign (-1)^(n-1)."""
    p = j_tilde(n + 1)
    if p.degree != n * (n - 1) // 2:
        return False
    if p.valuation != (n - 1 if n >= 1 else 0):
        return False
    sign = (-1) ** (n - 1)
    return all(c.denominator == 1 and sign * c > 0 for c in p.coeffs if c != 0)


def check_structure_jh(n: int) -> bool:
    """J^_{n+1}: degree n(n-1)/2, constant term 2^(n-1) n!, others negative."""
    p = j_hat(n + 1)
    if p.degree != n * (n - 1) // 2:
        return False
    if n >= 1 and p.coefficient(0) != 2 ** (n - 1) * factorial(n):
        return False
    return all(c.denominator == 1 and c < 0 for c in p.coeffs[1:] if c != 0)
