"""Exact substrate: rationals, polynomials, series, piecewise densities."""

from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ar1lab.errors import DomainError, NonInvertibleError
from ar1lab.exact.piecewise import PiecewisePoly, piecewise_pushforward
from ar1lab.exact.polynomial import LaurentPoly, Polynomial
from ar1lab.exact.rational import format_rational, parse_rational
from ar1lab.exact.series import TruncatedSeries, cos_series, sin_series

small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=6)


class TestRational:
    def test_wire_format(self):
        assert format_rational(F(3, 4)) == "3/4"
        assert format_rational(F(5)) == "5"
        assert format_rational(F(-7, 2)) == "-7/2"
        assert parse_rational("3/4") == F(3, 4)
        assert parse_rational("-5") == F(-5)
        assert parse_rational("0.25") == F(1, 4)

    @given(small_fractions)
    def test_round_trip(self, q):
        assert parse_rational(format_rational(q)) == q


class TestPolynomial:
    def test_canonical_form(self):
        assert Polynomial((1, 2, 0, 0)).coeffs == (F(1), F(2))
        assert Polynomial(()).is_zero()
        assert Polynomial((0, 0)).degree == -1

    def test_arithmetic(self):
        p = Polynomial((1, 1))
        q = Polynomial((-1, 1))
        assert p * q == Polynomial((-1, 0, 1))
        assert p + q == Polynomial((0, 2))
        assert p - p == Polynomial.zero()
        assert 2 * p == Polynomial((2, 2))
        assert p / 2 == Polynomial((F(1, 2), F(1, 2)))
        assert p**3 == Polynomial((1, 3, 3, 1))

    def test_evaluation_and_compose(self):
        p = Polynomial((1, 2, 3))
        assert p(F(2)) == 1 + 4 + 12
        assert p(0.5) == pytest.approx(1 + 1 + 0.75)
        inner = Polynomial((1, 1))
        assert p.compose(inner)(F(1)) == p(F(2))

    def test_calculus(self):
        p = Polynomial((5, 0, 3))
        assert p.derivative() == Polynomial((0, 6))
        assert p.antiderivative().derivative() == p

    def test_divexact(self):
        p = Polynomial((-1, 0, 1))
        assert p.divexact(Polynomial((-1, 1))) == Polynomial((1, 1))
        with pytest.raises(ValueError):
            Polynomial((1, 1)).divexact(Polynomial((0, 1)))

    def test_valuation(self):
        assert Polynomial((0, 0, 3, 1)).valuation == 2
        assert Polynomial.zero().valuation is None

    def test_serialization(self):
        p = Polynomial((F(1, 2), F(-3)))
        assert Polynomial.from_strings(p.to_strings()) == p

    @given(st.lists(small_fractions, max_size=5), st.lists(small_fractions, min_size=1, max_size=5))
    @settings(max_examples=30, deadline=None)
    def test_product_division_round_trip(self, a, b):
        p, q = Polynomial(a), Polynomial(b)
        if q.is_zero():
            return
        assert (p * q).divexact(q) == p


class TestLaurent:
    def test_normalization(self):
        v = LaurentPoly(Polynomial((0, 0, 3)), -1)
        assert v.offset == 1 and v.poly == Polynomial((3,))

    def test_monomial_inverse(self):
        m = LaurentPoly.monomial(-3, F(2))
        assert m * m.multiplicative_inverse() == 1

    def test_add_aligns_offsets(self):
        a = LaurentPoly.monomial(-2)
        b = LaurentPoly.monomial(1, 3)
        total = a + b
        assert total.offset == -2
        assert total.poly == Polynomial((1, 0, 0, 3))

    def test_to_polynomial_guards(self):
        with pytest.raises(ValueError):
            LaurentPoly.monomial(-1).to_polynomial()
        assert LaurentPoly.monomial(2, 5).to_polynomial() == Polynomial((0, 0, 5))


class TestTruncatedSeries:
    def test_geometric_inversion(self):
        s = TruncatedSeries([F(1), F(-1)], order=8)
        assert s.invert().coeffs == (F(1),) * 9

    def test_invert_identity(self):
        one = TruncatedSeries.one(5)
        assert one.invert() == one

    def test_invert_requires_unit(self):
        with pytest.raises(NonInvertibleError):
            TruncatedSeries([F(0), F(1)], order=4).invert()

    def test_exp_log_preconditions(self):
        with pytest.raises(DomainError):
            TruncatedSeries([F(2)], order=3).log()
        with pytest.raises(DomainError):
            TruncatedSeries([F(1)], order=3).exp()

    def test_exp_log_inverse_pair(self):
        s = TruncatedSeries([F(1), F(1)], order=9)  # 1 + z
        assert s.log().exp() == s

    @given(st.lists(small_fractions, min_size=1, max_size=5))
    @settings(max_examples=30, deadline=None)
    def test_double_inversion(self, coeffs):
        coeffs = [F(1)] + coeffs
        s = TruncatedSeries(coeffs, order=6)
        assert s.invert().invert() == s

    @given(st.lists(small_fractions, max_size=5))
    @settings(max_examples=30, deadline=None)
    def test_log_exp_round_trip(self, coeffs):
        s = TruncatedSeries([F(0)] + coeffs, order=6)
        assert s.exp().log() == s

    def test_product_truncates_to_min_order(self):
        a = TruncatedSeries([F(1)], order=3)
        b = TruncatedSeries([F(1)], order=7)
        assert (a * b).order == 3

    def test_egf_views(self):
        s = TruncatedSeries.from_egf([F(1)] * 5)
        assert s.coefficient(3) == F(1, 6)
        assert s.egf_coefficient(3) == 1

    def test_zigzag_series_against_inverted_alternating_family(self):
        # inverting sum (-1)^n J_{n+1}(-1) z^n/n! reproduces the zigzag EGF
        from ar1lab.families import mallows_riordan, zigzag

        order = 10
        coeffs = [
            mallows_riordan(n + 1)(F(-1)) * F((-1) ** n, factorial(n)) for n in range(order + 1)
        ]
        inv = TruncatedSeries(coeffs, order).invert()
        for n in range(order + 1):
            assert inv.egf_coefficient(n) == zigzag(n)

    def test_log_of_deformed_exponential_matches_printed_families(self):
        # log E has EGF coefficients (th-1)^(n-1) J_n(th)/n!, n <= 6
        printed = {
            1: Polynomial((1,)),
            2: Polynomial((1,)),
            3: Polynomial((2, 1)),
            4: Polynomial((6, 6, 3, 1)),
            5: Polynomial((24, 36, 30, 20, 10, 4, 1)),
            6: Polynomial((120, 240, 270, 240, 180, 120, 70, 35, 15, 5, 1)),
        }
        order = 6
        e_coeffs = [
            Polynomial.monomial(n * (n - 1) // 2) * F(1, factorial(n)) for n in range(order + 1)
        ]
        logE = TruncatedSeries(e_coeffs, order).log()
        shift = Polynomial((-1, 1))
        for n in range(1, order + 1):
            expected = shift ** (n - 1) * printed[n] * F(1, factorial(n))
            assert logE.coefficient(n) == expected

    def test_exponential_identity_for_family_shift(self):
        # exp[sum J_n (1+th+...+th^(n-1)) z^n/n!] = sum J_{n+1} z^n/n!, n <= 8
        from ar1lab.families import mallows_riordan

        order = 8
        inner = [Polynomial.zero()] + [
            mallows_riordan(n) * Polynomial.geometric(n) * F(1, factorial(n))
            for n in range(1, order + 1)
        ]
        lhs = TruncatedSeries(inner, order).exp()
        for n in range(order + 1):
            assert lhs.egf_coefficient(n) == mallows_riordan(n + 1)

    def test_trig_series(self):
        assert sin_series(5).coefficient(3) == F(-1, 6)
        assert cos_series(6).coefficient(4) == F(1, 24)


class TestPiecewisePoly:
    def test_validation(self):
        with pytest.raises(ValueError):
            PiecewisePoly((1, 0), (Polynomial.one(),))
        with pytest.raises(ValueError):
            PiecewisePoly((0, 1), ())

    def test_left_piece_convention(self):
        f = PiecewisePoly((0, 1, 2), (Polynomial((1,)), Polynomial((3,))))
        assert f.evaluate(F(1)) == 1  # shared breakpoint resolves left
        assert f.evaluate(F(3, 2)) == 3
        assert f.evaluate(F(5)) == 0

    def test_mass_and_cumulative(self):
        f = PiecewisePoly((0, 2), (Polynomial((0, 1)),))  # density x on [0,2]
        assert f.mass() == 2
        assert f.cumulative_at(F(1)) == F(1, 2)
        assert f.cumulative_at(F(5)) == 2

    def test_merge_and_trim(self):
        f = PiecewisePoly(
            (0, 1, 2, 3), (Polynomial((1,)), Polynomial((1,)), Polynomial.zero())
        )
        assert f.breakpoints == (F(0), F(2))
        assert len(f.pieces) == 1

    def test_scale_argument_negative(self):
        f = PiecewisePoly.constant(0, 1, F(1))
        g = f.scale_argument(F(-2))
        assert g.support == (F(-2), F(0))
        assert g.mass() == 1
        assert g.evaluate(F(-1)) == F(1, 2)

    def test_convolve_uniform_mass_preserved(self):
        f = PiecewisePoly.constant(0, 1, F(1))
        g = f.convolve_uniform(F(1), F(1))
        assert g.mass() == 1
        assert g.support == (F(-1), F(2))

    def test_restrict(self):
        f = PiecewisePoly.constant(-1, 1, F(1, 2))
        g = f.restrict_nonneg()
        assert g.support == (F(0), F(1))
        assert g.mass() == F(1, 2)
        assert f.mass() == 1

    def test_serialization_round_trip(self):
        f = PiecewisePoly((F(0), F(1, 2), F(2)), (Polynomial((1, 1)), Polynomial((F(1, 3),))))
        assert PiecewisePoly.from_dict(f.to_dict()) == f

    def test_pushforward_white_noise_halves(self):
        f = PiecewisePoly.constant(0, 1, F(1))
        g = piecewise_pushforward(f, 0, 1, 1)
        assert g.mass() == F(1, 2)
        assert g.evaluate(F(1, 2)) == F(1, 2)
        # repeated halving
        h = piecewise_pushforward(g, 0, 1, 1)
        assert h.mass() == F(1, 4)

    def test_pushforward_random_walk_step(self):
        start = PiecewisePoly.constant(0, 1, F(1, 2))
        g = piecewise_pushforward(start, 1, 1, 1)
        assert g.mass() == F(3, 8)

    def test_pushforward_two_steps_half_drift(self):
        start = PiecewisePoly.constant(0, 1, F(1, 2))
        g = piecewise_pushforward(start, F(1, 2), 1, 1)
        g = piecewise_pushforward(g, F(1, 2), 1, 1)
        assert g.mass() == F(79, 384)

    def test_pushforward_zero_density(self):
        assert piecewise_pushforward(PiecewisePoly.zero(), F(1, 2), 1, 1).is_zero()

    def test_pushforward_guards(self):
        f = PiecewisePoly.constant(0, 1, F(1))
        with pytest.raises(DomainError):
            piecewise_pushforward(f, 1, -1, 1)
        with pytest.raises(DomainError):
            piecewise_pushforward(f, 1, 0, 0)

    @given(
        st.lists(st.fractions(min_value=0, max_value=2, max_denominator=4), min_size=1, max_size=3),
        st.fractions(min_value="1/2", max_value=2, max_denominator=4),
        st.fractions(min_value="1/2", max_value=2, max_denominator=4),
    )
    @settings(max_examples=25, deadline=None)
    def test_convolution_preserves_mass_for_random_densities(self, values, a, b):
        bps = [F(k) for k in range(len(values) + 1)]
        f = PiecewisePoly(bps, [Polynomial((v,)) for v in values])
        if f.is_zero():
            return
        g = f.convolve_uniform(a, b)
        assert g.mass() == f.mass()

    @pytest.mark.parametrize("theta", [F(-3), F(-1), F(-1, 2), F(1, 3), F(4, 5), F(2)])
    def test_pushforward_never_gains_mass(self, theta):
        f = PiecewisePoly.constant(0, 1, F(1, 2))
        prev = f.mass()
        for _ in range(5):
            f = piecewise_pushforward(f, theta, 1, 1)
            m = f.mass()
            assert 0 <= m <= prev
            prev = m
            assert all(isinstance(b, F) for b in f.breakpoints)
