"""Exact persistence probabilities for AR(1) with uniform innovations.

p_n(theta) = P[Y_1 >= 0, ..., Y_n >= 0] for Y_k = theta*Y_{k-1} + X_k,
X_k uniform on [-a, b].  Closed polynomial forms exist outside a drift
window bounded by generalized Fibonacci numbers; inside the window only the
density-propagation oracle applies.  Both routes are exact rational
arithmetic and agree wherever both are defined.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ar1lab.errors import DomainError, NoClosedFormError
from ar1lab.exact.piecewise import PiecewisePoly, piecewise_pushforward
from ar1lab.families import scalar_families


class Region(enum.Enum):
    """Which exact formula applies to a (n, theta, a, b) query."""

    DIRECT = "direct"  # p_n = (b/(a+b))^n J_{n+1}(theta)/n!
    INVERSE_NEG = "inverse-negative"  # p_n = (b/(a+b))^n J~_{n+1}(1/theta)/n!
    INVERSE_POS = "inverse-positive"  # p_n = J^_{n+1}(1/theta)/(2^n n!)
    WINDOW = "fibonacci-window"  # no polynomial closed form; oracle only


@dataclass(frozen=True)
class PersistenceQuery:
    """Horizon, rational drift and uniform innovation support [-a, b]."""

    n: int
    theta: Fraction
    a: Fraction = Fraction(1)
    b: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "theta", Fraction(self.theta))
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.n < 0:
            raise DomainError("horizon must be >= 0")
        if self.a <= 0 or self.b <= 0:
            raise DomainError("uniform support half-widths must be positive")

    @property
    def symmetric(self) -> bool:
        return self.a == self.b


def geometric_sum(theta: Fraction, m: int) -> Fraction:
    """theta + theta^2 + ... + theta^m (zero when m < 1)."""
    theta = Fraction(theta)
    acc = Fraction(0)
    power = Fraction(1)
    for _ in range(m):
        power *= theta
        acc += power
    return acc


def classify(query: PersistenceQuery) -> Region:
    """Exact region dispatch by rational comparison of the geometric sum."""
    th, n = query.theta, query.n
    ratio = query.a / query.b
    if th <= -1:
        return Region.INVERSE_NEG
    if geometric_sum(th, n - 1) <= ratio:
        return Region.DIRECT
    if query.symmetric and th > 0 and geometric_sum(1 / th, n - 1) <= 1:
        return Region.INVERSE_POS
    return Region.WINDOW


def fibonacci_root(i: int, ratio: float = 1.0) -> float:
    """Positive solution of theta + ... + theta^i = ratio (float bisection)."""
    if i < 1:
        raise DomainError("need at least one summand")

    def f(x: float) -> float:
        acc, p = 0.0, 1.0
        for _ in range(i):
            p *= x
            acc += p
        return acc - ratio

    lo, hi = 0.0, max(ratio, 1.0) + 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def window_bounds(query: PersistenceQuery) -> tuple[float, float]:
    """Approximate drift window (lo, hi) with no closed form at this horizon."""
    if query.n < 2:
        return (float("inf"), float("inf"))
    lo = fibonacci_root(query.n - 1, float(query.a / query.b))
    hi = 1.0 / fibonacci_root(query.n - 1) if query.symmetric else float("inf")
    return (lo, hi)


def persistence_closed_form(query: PersistenceQuery) -> Fraction:
    """Exact p_n by the dispatched polynomial formula; fails inside the window."""
    region = classify(query)
    n, th = query.n, query.theta
    scale = (query.b / (query.a + query.b)) ** n / factorial(n)
    if region is Region.DIRECT:
        return scale * scalar_families(th).j(n + 1)
    if region is Region.INVERSE_NEG:
        return scale * scalar_families(1 / th).j_tilde(n + 1)
    if region is Region.INVERSE_POS:
        return scale * scalar_families(1 / th).j_hat(n + 1)
    raise NoClosedFormError(
        f"no closed form for n={n}, theta={th}; use persistence_oracle",
        window_bounds(query),
    )


def start_density(query: PersistenceQuery) -> PiecewisePoly:
    """Sub-density of Y_1 on the survival event: 1/(a+b) on [0, b]."""
    return PiecewisePoly.constant(0, query.b, 1 / (query.a + query.b))


def oracle_masses(query: PersistenceQuery) -> list[Fraction]:
    """[p_0, p_1, ..., p_n] by exact density propagation (any rational theta)."""
    n, th, a, b = query.n, query.theta, query.a, query.b
    out = [Fraction(1)]
    if n == 0:
        return out
    if th == 0:
        step = b / (a + b)
        p = Fraction(1)
        for _ in range(n):
            p *= step
            out.append(p)
        return out
    f = start_density(query)
    out.append(f.mass())
    for _ in range(n - 1):
        f = piecewise_pushforward(f, th, a, b)
        out.append(f.mass())
    return out


def persistence_oracle(query: PersistenceQuery) -> Fraction:
    """Exact p_n for any rational drift, including the Fibonacci window."""
    return oracle_masses(query)[-1]


def oracle_density(query: PersistenceQuery) -> PiecewisePoly:
    """The exact sub-density of Y_n on the survival event (n >= 1)."""
    if query.n < 1:
        raise DomainError("density defined for n >= 1")
    if query.theta == 0:
        mass = (query.b / (query.a + query.b)) ** (query.n - 1)
        return PiecewisePoly.constant(0, query.b, mass / (query.a + query.b))
    f = start_density(query)
    for _ in range(query.n - 1):
        f = piecewise_pushforward(f, query.theta, query.a, query.b)
    return f


def persistence_exact(n: int, theta, a=1, b=1) -> Fraction:
    """Closed form when the region admits one, otherwise the oracle."""
    query = PersistenceQuery(n, Fraction(theta), Fraction(a), Fraction(b))
    try:
        return persistence_closed_form(query)
    except NoClosedFormError:
        return persistence_oracle(query)


def persistence_prefix(n: int, theta, a=1, b=1) -> list[Fraction]:
    """[p_0..p_n], closed forms where possible, one oracle chain otherwise."""
    theta, a, b = Fraction(theta), Fraction(a), Fraction(b)
    queries = [PersistenceQuery(k, theta, a, b) for k in range(n + 1)]
    if all(classify(q) is not Region.WINDOW for q in queries):
        return [persistence_closed_form(q) for q in queries]
    return oracle_masses(queries[-1])


def hitting_pmf(query: PersistenceQuery) -> Fraction:
    """P[T = n] = p_{n-1} - p_n for the first passage time below zero.

    For drift >= 2 with symmetric support the value is cross-checked against
    the closed form (-1)^(n-1) J~_{n+1}(1/theta)/(2^n n!).
    """
    if query.n < 1:
        raise IndexError("hitting time starts at n = 1")
    n, th = query.n, query.theta
    p_prev = persistence_exact(n - 1, th, query.a, query.b)
    p_curr = persistence_exact(n, th, query.a, query.b)
    value = p_prev - p_curr
    if th >= 2 and query.symmetric:
        direct = (
            Fraction((-1) ** (n - 1))
            * scalar_families(1 / th).j_tilde(n + 1)
            / (2**n * factorial(n))
        )
        if direct != value:
            raise AssertionError(f"hitting-law closed form mismatch at n={n}, theta={th}")
    return value


def duality_residual(n: int, theta, alternating: bool) -> Fraction:
    """Residual of the drift-inversion factorizations, from oracle values.

    alternating (theta < 0):  sum_k (-1)^k p_k(theta) p_{n-k}(1/theta)  - 0
    plain       (theta > 0):  sum_k        p_k(theta) p_{n-k}(1/theta) - 1
    Both vanish identically; symmetric unit support is used.
    """
    theta = Fraction(theta)
    if theta == 0:
        raise DomainError("drift must be nonzero for the duality")
    if alternating and theta > 0:
        raise DomainError("alternating form requires negative drift")
    if not alternating and theta < 0:
        raise DomainError("plain form requires positive drift")
    ps = oracle_masses(PersistenceQuery(n, theta))
    qs = oracle_masses(PersistenceQuery(n, 1 / theta))
    acc = Fraction(0)
    for k in range(n + 1):
        term = ps[k] * qs[n - k]
        acc += -term if (alternating and k % 2 == 1) else term
    return acc if alternating else acc - 1
