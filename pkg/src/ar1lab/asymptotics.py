"""Floating-point analytic layer: deformed exponential, roots, rates, limits.

Everything here is numerical but tied back to exact rational persistence
values.  The deformed exponential E(th, z) = sum th^(n(n-1)/2) z^n/n! is
entire for |th| <= 1; its first root on the negative axis sets the
exponential decay rate of the persistence probabilities.  Large arguments
(needed for high root indices) are summed with mpmath at a precision chosen
from the largest term, since the series is violently cancellative there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lgamma

import mpmath as mp

from ar1lab.errors import DomainError, RootSearchError
from ar1lab.families import scalar_families
from ar1lab.persistence import PersistenceQuery, persistence_exact

DEFAULT_ROOT_TOL = 1e-10
DEFAULT_CHECK_TOL = 1e-8


# ---------------------------------------------------------------------------
# Deformed exponential
# ---------------------------------------------------------------------------


def _truncation_order(theta: float, z: float, tol: float) -> int:
    """Smallest N whose analytic tail bound is below tol.

    For moderate |z| the tail after N terms is bounded by
    |th|^(N(N-1)/2) |z|^N/N! e^|z| (plain exponential tail at |th| = 1).
    For large |z| that bound forces N ~ sqrt(|z|), so once the term ratio
    |th|^n |z|/(n+1) has dropped below 1/2 the geometric remainder
    2*term_{N+1} is used instead; it is valid and far tighter there.
    """
    at = min(abs(theta), 1.0)
    az = abs(z)
    if at == 0.0:
        return 2  # E(0, z) = 1 + z exactly
    if az == 0.0:
        return 1
    logtol = math.log(max(tol, 1e-300))
    if az <= 50.0:
        n = 1
        while n < 100000:
            logtail = az + n * math.log(az) - lgamma(n + 1)
            if at < 1.0:
                logtail += (n * (n - 1) / 2) * math.log(at)
            if logtail < logtol:
                return n
            n += 1
        raise RuntimeError("truncation order search did not terminate")
    logterm = 0.0
    lat = math.log(at)
    n = 0
    while n < 200000:
        n += 1
        logterm += (n - 1) * lat + math.log(az) - math.log(n)
        ratio = (n) * lat + math.log(az) - math.log(n + 1)
        if ratio < math.log(0.5) and logterm + math.log(2.0) < logtol:
            return n
    raise RuntimeError("truncation order search did not terminate")


def _max_term_log10(theta: float, z: float) -> float:
    at, az = abs(theta), abs(z)
    if az == 0.0:
        return 0.0
    best = 0.0
    logterm = 0.0
    n = 0
    while n < 100000:
        n += 1
        logterm += math.log10(az) - math.log10(n)
        if at > 0:
            logterm += (n - 1) * math.log10(at)
        if logterm > best:
            best = logterm
        if logterm < best - 40:
            break
    return best


def deformed_exp(theta: float, z: float, tol: float = 1e-12) -> float:
    """E(th, z) with absolute error at most tol; requires |th| <= 1.

    The truncation order is chosen from the analytic tail bound.  If the
    terms grow large enough that double precision would lose the target
    accuracy to cancellation, the sum is done in mpmath at a precision set
    by the largest term.
    """
    if abs(theta) > 1:
        raise DomainError("series diverges for |theta| > 1")
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    order = _truncation_order(theta, z, tol / 10)
    peak = _max_term_log10(theta, z)
    if peak - 16 > math.log10(tol) - 1:
        return float(_deformed_exp_mp(theta, z, order, peak))
    term = 1.0
    terms = [term]
    for n in range(1, order + 1):
        term = term * (theta ** (n - 1)) * z / n
        terms.append(term)
    return math.fsum(terms)


def _deformed_exp_mp(theta, z, order: int, peak_log10: float):
    dps = max(30, int(peak_log10) + 30)
    with mp.workdps(dps):
        th = mp.mpf(theta)
        zz = mp.mpf(z)
        acc = mp.mpf(1)
        term = mp.mpf(1)
        for n in range(1, order + 1):
            term = term * th ** (n - 1) * zz / n
            acc += term
        return acc


def _E_neg(theta: float, z: float, tol: float = 1e-13) -> float:
    """E(theta, -z), the function whose positive roots are scanned."""
    return deformed_exp(theta, -z, tol)


def _E_neg_deriv(theta: float, z: float, tol: float = 1e-13) -> float:
    """d/dz E(theta, -z) = -E(theta, -theta z)."""
    return -deformed_exp(theta, -theta * z, tol)


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootResult:
    """A located root of z -> E(theta, -z) (or of the rate function).

    ``residual`` is scale-free: the magnitude of the final Newton correction
    relative to the root location.  (The raw value |E(theta, -root)| is not
    usable as a tolerance at high root indices, where the local derivative
    reaches 1e30+ and no representable root can make it small.)  For the
    first root the two notions agree up to an O(1) factor.
    """

    value: float
    residual: float
    bracket: tuple[float, float]
    truncation_order: int


def _bisect_then_polish(theta: float, lo: float, hi: float, tol: float) -> RootResult:
    flo = _E_neg(theta, lo)
    fhi = _E_neg(theta, hi)
    if flo == 0.0:
        return RootResult(lo, 0.0, (lo, hi), _truncation_order(theta, lo, tol))
    if flo * fhi > 0:
        raise RootSearchError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > 1e-13 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        fmid = _E_neg(theta, mid)
        if fmid == 0.0:
            lo = hi = mid
            break
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    root = 0.5 * (lo + hi)
    deriv = _E_neg_deriv(theta, root)
    if deriv != 0.0:
        step = _E_neg(theta, root) / deriv
        if abs(step) < (hi - lo) + 1e-9 * max(1.0, root):
            root -= step
    value = _E_neg(theta, root, tol=min(tol * 1e-3, 1e-15))
    deriv = _E_neg_deriv(theta, root)
    if deriv != 0.0:
        residual = abs(value / deriv) / max(abs(root), 1.0)
    else:
        residual = abs(value)
    return RootResult(root, residual, (lo, hi), _truncation_order(theta, root, tol))


def first_negative_root(theta: float, tol: float = DEFAULT_ROOT_TOL) -> RootResult:
    """z_theta = inf{z > 0 : E(theta, -z) = 0}, by scan, bisection and polish."""
    if not -1.0 <= theta < 1.0:
        raise DomainError("first negative root requires theta in [-1, 1)")
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    cap = 10.0 + 20.0 / (1.0 - theta)
    z, step = 1e-3, 0.05
    fprev = _E_neg(theta, z)
    while z < cap:
        z2 = z + step
        f2 = _E_neg(theta, z2)
        if fprev * f2 <= 0:
            return _bisect_then_polish(theta, z, z2, tol)
        z, fprev = z2, f2
        step *= 1.25
    raise RootSearchError(f"no sign change found below z={cap} for theta={theta}")


def positive_roots(theta: float, count: int, tol: float = DEFAULT_ROOT_TOL) -> list[RootResult]:
    """First `count` positive roots of z -> E(theta, -z) for theta in (0, 1).

    All roots are simple and positive in this range; the k-th root grows like
    k theta^(1-k), which informs the geometric scan grid.
    """
    if not 0.0 < theta < 1.0:
        raise DomainError("positive root ladder requires theta in (0, 1)")
    if count < 1:
        raise DomainError("need count >= 1")
    found: list[RootResult] = []
    z = 1e-3
    sign_prev = _E_neg(theta, z)
    for k in range(1, count + 1):
        predicted = (k + 1) * theta ** (-k)
        cap = 10.0 * max(predicted, z * 2.0)
        step = max(z * 0.02, 1e-3)
        hit = None
        while z < cap:
            z2 = z + step
            f2 = _E_neg(theta, z2)
            if sign_prev * f2 <= 0:
                hit = (z, z2)
                sign_prev = f2
                z = z2
                break
            sign_prev = f2
            z = z2
            step *= 1.06
        if hit is None:
            raise RootSearchError(
                f"found only {len(found)} of {count} roots below z={cap}", found
            )
        found.append(_bisect_then_polish(theta, hit[0], hit[1], tol))
    return found


# ---------------------------------------------------------------------------
# Decay rates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RateBundle:
    """Decay-rate data at one drift value; unused slots stay None."""

    theta: float
    z_root: float
    lam: float | None = None  # 2(1-theta) z_theta, drift in [-1, 1/2]
    mu: float | None = None  # 2(1-theta) z_{1/theta}, drift < -1
    ell: float | None = None  # limit of p_n, drift > 1
    nu: float | None = None  # rate of p_n - ell, drift >= 2
    kappa_estimate: float | None = None  # empirical decay exponent, drift > 1
    c_estimate: float | None = None  # fitted constant for drift < -1
    c_rel_drift: float | None = None  # stabilization diagnostic of the fit


def decay_rate(theta: float, tol: float = DEFAULT_ROOT_TOL) -> RateBundle:
    """Exponential decay data: lambda for drift in [-1, 1/2], mu below -1.

    For drift < -1 the constant in front of the rate has no usable closed
    form (the complex-root structure is only conjectural), so it is fitted
    as the stabilized value of 1/(p_n mu^n) from exact persistence values,
    and reported with a relative-drift diagnostic.
    """
    if -1.0 <= theta <= 0.5 + 1e-12:
        root = first_negative_root(theta, tol)
        lam = 2.0 * (1.0 - theta) * root.value
        if lam <= 1.0:
            raise AssertionError(f"rate bound violated: lambda={lam} at theta={theta}")
        return RateBundle(theta=theta, z_root=root.value, lam=lam)
    if theta < -1.0:
        root = first_negative_root(1.0 / theta, tol)
        mu = 2.0 * (1.0 - theta) * root.value
        if mu <= -2.0 * theta:
            raise AssertionError(f"rate bound violated: mu={mu} at theta={theta}")
        th_exact = Fraction(theta)
        values = []
        for n in range(25, 31):
            p = persistence_exact(n, th_exact)
            values.append(1.0 / (float(p) * mu**n))
        drift = max(values) / min(values) - 1.0
        return RateBundle(
            theta=theta,
            z_root=root.value,
            mu=mu,
            c_estimate=values[-1],
            c_rel_drift=drift,
        )
    raise DomainError("no decay-rate formula for drift in (1/2, 1]; use the limit routines for drift > 1")


# ---------------------------------------------------------------------------
# The positive limit of p_n for drift > 1
# ---------------------------------------------------------------------------

# 1/theta expansion of the limit: ell = 1/2 - (1/(8 th) + 1/(16 th^2) + ...)
ELL_EXPANSION_COEFFS: tuple[Fraction, ...] = (
    Fraction(1, 2),
    Fraction(-1, 8),
    Fraction(-1, 16),
    Fraction(-5, 96),
    Fraction(-1, 24),
    Fraction(-5, 128),
    Fraction(-7, 192),
    Fraction(-9, 256),
    Fraction(-107, 3072),
    Fraction(-641, 18432),
)


def ell_expansion_coefficients(kmax: int) -> list[Fraction]:
    """Expansion coefficients a_k derived exactly from the J~ family.

    a_k is the coefficient of th^k in sum_{j<=k+1} (-1)^j J~_{j+1}(th)/(2^j j!).
    """
    from ar1lab.families import j_tilde

    out = []
    for k in range(kmax + 1):
        acc = Fraction(0)
        poly_sum_coeff = Fraction(0)
        for j in range(k + 2):
            poly = j_tilde(j + 1)
            poly_sum_coeff += poly.coefficient(k) * Fraction((-1) ** j, 2**j * factorial(j))
        acc = poly_sum_coeff
        out.append(acc)
    return out


def ell_expansion(theta: float, kmax: int = 9) -> float:
    """Evaluate the printed 1/theta expansion of the limit through th^-kmax."""
    if kmax > len(ELL_EXPANSION_COEFFS) - 1:
        raise DomainError("expansion coefficients available through order 9")
    return float(sum(float(c) / theta**k for k, c in enumerate(ELL_EXPANSION_COEFFS[: kmax + 1])))


def ell_with_tail(theta: float, tol: float = 1e-10, nmax: int = 400) -> tuple[float, Fraction, float, int]:
    """(ell, partial_sum, tail_bound, N): ell = 1/sum p_n(1/theta), drift > 1.

    Exact rational terms are accumulated until the geometric tail estimate
    moves the limit by less than tol.  For drift >= 2 the tail ratio comes
    from the root-based rate of p_n(1/theta); in (1, 2) the empirical ratio
    of consecutive terms is used and only a short oracle chain is affordable.
    """
    if theta <= 1.0:
        raise DomainError("the limit is zero for drift <= 1; positive only above 1")
    th = Fraction(theta)
    r = 1 / th
    ratio_analytic = None
    if r <= Fraction(1, 2):
        # p_n(r) = J_{n+1}(r)/(2^n n!) holds for every n when r <= 1/2
        fam = scalar_families(r)
        ratio_analytic = 1.0 / decay_rate(float(r)).lam
        cap = nmax

        def term_at(n: int) -> Fraction:
            return fam.j(n + 1) / (2**n * factorial(n))

    else:
        cap = min(nmax, 16)
        from ar1lab.persistence import oracle_masses

        chain = oracle_masses(PersistenceQuery(cap, r))

        def term_at(n: int) -> Fraction:
            return chain[n]

    terms: list[Fraction] = []
    acc = Fraction(0)
    n = 0
    while True:
        if n > cap:
            raise DomainError(
                f"tail below {tol} not reachable within {cap} exact terms for drift {theta}"
            )
        term = term_at(n)
        acc += term
        terms.append(term)
        if n >= 2:
            ratio = ratio_analytic if ratio_analytic is not None else float(terms[-1] / terms[-2])
            if 0.0 < ratio < 1.0:
                tail = float(terms[-1]) * ratio / (1.0 - ratio)
                if tail / float(acc) ** 2 < tol:
                    ell = 1.0 / (float(acc) + tail)
                    if not 0.0 < ell <= 0.5 + 1e-12:
                        raise AssertionError(f"limit {ell} escapes (0, 1/2] at drift {theta}")
                    return ell, acc, tail, n
        n += 1


def limit_ell(theta: float, tol: float = 1e-10) -> float:
    """lim p_n(theta) = 1/sum_{n>=0} p_n(1/theta) for drift > 1."""
    return ell_with_tail(theta, tol)[0]


def ell_mp(theta, dps: int = 60):
    """High-precision limit for rational drift >= 2, as an mpmath float.

    Needed for stabilization checks of p_n - ell, whose scale drops far
    below double precision by n = 30.
    """
    th = Fraction(theta)
    if th < 2:
        raise DomainError("high-precision limit implemented for drift >= 2")
    r = 1 / th
    fam = scalar_families(r)
    lam = 2.0 * float(1 - r) * first_negative_root(float(r)).value
    need = int(dps * math.log(10) / math.log(lam)) + 20
    with mp.workdps(dps + 10):
        acc = mp.mpf(0)
        prev = Fraction(0)
        for n in range(need + 1):
            p = fam.j(n + 1) / (2**n * factorial(n))
            acc += mp.mpf(p.numerator) / mp.mpf(p.denominator)
            prev = p
        ratio = mp.mpf(1) / lam
        tail = mp.mpf(prev.numerator) / mp.mpf(prev.denominator) * ratio / (1 - ratio)
        return 1 / (acc + tail)


# ---------------------------------------------------------------------------
# Second-order rate for drift >= 2
# ---------------------------------------------------------------------------


def nu_root(theta: float, count: int = 12, tol: float = DEFAULT_ROOT_TOL) -> RootResult:
    """First positive root of the meromorphic rate function for drift >= 2.

    L(z) = 1/a_1 + sum_{k>=2} (1 - z/l_1)/(a_k (1 - z/l_k)) with a_k the
    positive roots for parameter 1/theta and l_k = 2(1-1/theta) a_k; the
    root lies strictly between l_1 and l_2.  The series is truncated after
    `count` roots; the discarded tail is far below tol there.
    """
    if theta < 2.0:
        raise DomainError("second-order rate requires drift >= 2")
    r = 1.0 / theta
    roots = [rr.value for rr in positive_roots(r, count, tol)]
    lams = [2.0 * (1.0 - r) * a for a in roots]
    a1, l1, l2 = roots[0], lams[0], lams[1]

    def L(z: float) -> float:
        acc = 1.0 / a1
        for a, l in zip(roots[1:], lams[1:]):
            acc += (1.0 - z / l1) / (a * (1.0 - z / l))
        return acc

    lo = l1 * (1.0 + 1e-9)
    hi = l2 * (1.0 - 1e-9)
    flo, fhi = L(lo), L(hi)
    if flo * fhi > 0:
        raise RootSearchError(
            f"no sign change of the rate function in ({l1}, {l2}); increase count", roots
        )
    while hi - lo > 1e-13 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        fmid = L(mid)
        if flo * fmid <= 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    nu = 0.5 * (lo + hi)
    return RootResult(nu, abs(L(nu)), (l1, l2), count)


def volterra_top_eigenvalue(theta: float, a: float = 1.0, b: float = 1.0) -> float:
    """Largest eigenvalue of the one-step survival operator on [-a, b] support.

    This is the geometric factor of p_n for asymmetric uniform innovations:
    b/((a+b)(1-theta) z_theta) for drift in [-1, a/(a+b)], and with z_{1/theta}
    in place of z_theta below -1.  Always strictly less than 1.
    """
    if a <= 0 or b <= 0:
        raise DomainError("support half-widths must be positive")
    if -1.0 <= theta <= a / (a + b) + 1e-12:
        z = first_negative_root(theta).value
    elif theta < -1.0:
        z = first_negative_root(1.0 / theta).value
    else:
        raise DomainError("no closed eigenvalue for drift above a/(a+b)")
    value = b / ((a + b) * (1.0 - theta) * z)
    if not 0.0 < value < 1.0:
        raise AssertionError(f"eigenvalue {value} escapes (0, 1)")
    return value


def rate_bundle(theta: float, tol: float = DEFAULT_ROOT_TOL) -> RateBundle:
    """Assembled rate data for any supported drift (CLI entry point)."""
    if theta <= 0.5 + 1e-12:
        return decay_rate(theta, tol)
    if theta <= 1.0:
        raise DomainError("no rate formula for drift in (1/2, 1]")
    ell, _, _, _ = ell_with_tail(theta, 1e-12 if theta >= 2 else 1e-8)
    nu = kappa = None
    zr = float("nan")
    if theta >= 2.0:
        res = nu_root(theta, tol=tol)
        nu = res.value
        zr = res.bracket[0] / (2.0 * (1.0 - 1.0 / theta))  # recover a_1(1/theta)
        lm = ell_mp(Fraction(theta).limit_denominator(10**6), dps=50)
        th_exact = Fraction(theta).limit_denominator(10**6)
        with mp.workdps(60):
            r20 = _r_n_mp(th_exact, 20, lm)
            r30 = _r_n_mp(th_exact, 30, lm)
            if r20 > 0 and r30 > 0:
                kappa = float((mp.log(r20) - mp.log(r30)) / 10)
    return RateBundle(theta=theta, z_root=zr, ell=ell, nu=nu, kappa_estimate=kappa)


def _r_n_mp(theta_exact: Fraction, n: int, ell_value):
    p = persistence_exact(n, theta_exact)
    return mp.mpf(p.numerator) / mp.mpf(p.denominator) - ell_value


# ---------------------------------------------------------------------------
# q-series for biexponential innovations
# ---------------------------------------------------------------------------


def qpochhammer(x, q: float, tol: float = 1e-14):
    """(x; q)_inf = prod_{n>=0} (1 - x q^n), truncated with a factor bound.

    Stops once the next factor differs from 1 by less than tol divided by
    the number of factors so far, keeping the multiplicative error below
    roughly tol.
    """
    if not 0.0 <= q < 1.0:
        raise DomainError("q must lie in [0, 1)")
    acc = 1.0 + 0.0j if isinstance(x, complex) else 1.0
    qn = 1.0
    n = 0
    while True:
        factor = 1.0 - x * qn
        acc *= factor
        n += 1
        qn *= q
        if abs(x) * qn < tol / (n + 1):
            break
        if n > 100000:
            raise RuntimeError("q-product did not converge")
    return acc


def qseries_biexp(theta: float, z, tol: float = 1e-12):
    """Generating function sum p_n(theta) z^n for biexponential innovations.

    Uses the q-product form with q = theta^2 for theta in (0,1) and
    q = theta^-2 for theta > 1.  At theta = 1 the square-root law of
    symmetric random walks applies instead.
    """
    if theta <= 0:
        raise DomainError("q-series form needs positive drift")
    if theta == 1.0:
        raise DomainError("drift 1 is the random-walk case: sum p_n z^n = (1-z)^(-1/2)")
    if theta < 1.0:
        q = theta * theta
        num = qpochhammer(theta * z, q, tol) + qpochhammer(q * z, q, tol)
        den = qpochhammer(z, q, tol) + qpochhammer(theta * z, q, tol)
        return num / den
    q = theta**-2
    num = qpochhammer(z, q, tol) + qpochhammer(z / theta, q, tol)
    den = (1.0 - z) * (qpochhammer(z / theta, q, tol) + qpochhammer(z / theta**2, q, tol))
    return num / den


def qseries_biexp_coeffs(
    theta: float, nmax: int, tol: float = 1e-14, radius: float = 0.5, npoints: int = 128
) -> list[float]:
    """Taylor coefficients p_0..p_nmax of the q-product generating function.

    Extracted by averaging the product form over a circle of the given
    radius (the discrete Cauchy integral); with |coefficients| <= 1 the
    aliasing error is below radius^(npoints - nmax).
    """
    if nmax >= npoints // 2:
        raise DomainError("npoints must comfortably exceed nmax")
    samples = []
    for j in range(npoints):
        zj = radius * cmath.exp(2j * cmath.pi * j / npoints)
        samples.append(qseries_biexp(theta, zj, tol))
    out = []
    for n in range(nmax + 1):
        acc = 0.0 + 0.0j
        for j, s in enumerate(samples):
            acc += s * cmath.exp(-2j * cmath.pi * j * n / npoints)
        out.append((acc / npoints).real / radius**n)
    return out


def biexp_persistence_nonpositive(theta, n: int) -> Fraction:
    """Exact p_n for biexponential innovations and rational drift <= 0:
    p_n = 2^-n (1-theta)^(1-n)."""
    th = Fraction(theta)
    if th > 0:
        raise DomainError("closed form only for drift <= 0")
    if n < 1:
        return Fraction(1)
    return Fraction(1, 2**n) * (1 - th) ** (1 - n)


# ---------------------------------------------------------------------------
# Compound-Poisson representation of complete-graph dichromatic polynomials
# ---------------------------------------------------------------------------


def _j_values_float(x: float, nmax: int) -> list[float]:
    # J_n(x) for x in [-1, 0): all recurrence terms are nonnegative there,
    # so plain float accumulation is stable.
    j = [0.0, 1.0, 1.0]
    g = [1.0]
    for i in range(1, nmax + 1):
        g.append(g[-1] * x + 1.0)
    while len(j) <= nmax:
        n = len(j) - 2
        acc = 0.0
        for i in range(n + 1):
            acc += math.comb(n, i) * g[i] * j[i + 1] * j[n + 1 - i]
        j.append(acc)
    return j


def tutte_poisson_pmf(t: float, theta: float, n: int, tol: float = 1e-12) -> float:
    """P[X(t) = n] = e^(-t mbar) T_n(t, theta)/n! for the jump process on N.

    Defined for drift theta in [-2, -1), where the total jump mass
    mbar = theta log E(theta+1, 1/theta) is finite (the positive series
    sum J_n(theta+1)/n! converges exactly when theta+1 < 0).
    """
    if not -2.0 <= theta < -1.0:
        raise DomainError("finite jump mass requires theta in [-2, -1)")
    if t < 0:
        raise DomainError("time must be nonnegative")
    if n < 0:
        raise DomainError("count must be nonnegative")
    x = theta + 1.0
    mbar = theta * math.log(deformed_exp(x, 1.0 / theta, tol))
    if n == 0:
        return math.exp(-t * mbar)
    jv = _j_values_float(x, n)
    s = [0.0] + [t * jv[k] / factorial(k) for k in range(1, n + 1)]
    e = [1.0]
    for m in range(1, n + 1):
        acc = 0.0
        for k in range(1, m + 1):
            acc += k * s[k] * e[m - k]
        e.append(acc / m)
    return math.exp(-t * mbar) * e[n]


def tutte_poisson_mgf_limit(t: float, z: float) -> float:
    """E[z^X(t)] at the boundary drift -2: ((1 - sin 1)/(1 - sin z))^t."""
    return ((1.0 - math.sin(1.0)) / (1.0 - math.sin(z))) ** t


# ---------------------------------------------------------------------------
# Log-convexity (infinite-divisibility diagnostics)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogConvexityVerdict:
    holds: bool
    first_violation: int | None


def log_convexity_check(seq) -> LogConvexityVerdict:
    """Check x_{n+1} x_{n-1} >= x_n^2 at every interior index.

    Exact when the entries are rationals; positive entries required.
    """
    items = list(seq)
    if any(x <= 0 for x in items):
        raise DomainError("log-convexity check needs positive entries")
    for n in range(1, len(items) - 1):
        if items[n + 1] * items[n - 1] < items[n] * items[n]:
            return LogConvexityVerdict(False, n)
    return LogConvexityVerdict(True, None)
