from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filicenter.polycore import (
    FieldMismatchError,
    Polynomial,
    PolynomialSyntaxError,
    RationalFunction,
    ZPoly,
    format_poly,
    from_json,
    parse_poly,
    series_expand,
    to_json,
    xgcd_z,
)
from filicenter.polycore.poly import ExponentOverflowError

from conftest import polynomials


def P(s: str, p=None) -> Polynomial:
    return parse_poly(s, p=p)


class TestParseFormat:
    def test_roundtrip_simple(self):
        s = "3*y0^2*y3 - 3*y0*y1*y2 + y1^3"
        assert format_poly(P(s)) == s

    def test_fraction_coefficients(self):
        f = P("y0*y2 - 1/2*y1^2")
        assert f.coefficient((0, 2)) == Fraction(-1, 2)

    def test_laurent_only_in_y0(self):
        assert P("y0^-2*y1").coefficient((-2, 1)) == 1
        with pytest.raises(PolynomialSyntaxError):
            P("y1^-1")

    def test_offset_symbols(self):
        f = parse_poly("z1^-2*z2^3 + z1^-2*z3^2", symbol="z", offset=1)
        assert parse_poly(format_poly(f, "z", 1), symbol="z", offset=1) == f
        assert f == P("y0^-2*y1^3 + y0^-2*y2^2")
        with pytest.raises(PolynomialSyntaxError):
            parse_poly("z0", symbol="z", offset=1)

    @pytest.mark.parametrize("bad", ["y", "y1^", "2*", "y1 + + y2", "y1/2", "x1"])
    def test_malformed(self, bad):
        with pytest.raises(PolynomialSyntaxError):
            P(bad)

    @given(polynomials(laurent=True))
    def test_text_roundtrip(self, f):
        assert P(format_poly(f)) == f

    @given(polynomials())
    def test_json_roundtrip(self, f):
        assert from_json(to_json(f)) == f

    def test_json_mod_p(self):
        f = P("3*y0 + 4*y1^2", p=5)
        assert from_json(to_json(f)) == f


class TestArithmetic:
    @given(polynomials(), polynomials(), polynomials())
    @settings(max_examples=60)
    def test_ring_axioms(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == Polynomial.zero()

    @given(polynomials(nvars=3, max_terms=3, max_exp=2))
    @settings(max_examples=30)
    def test_power_matches_repeated_product(self, f):
        assert f**3 == f * f * f

    @given(polynomials(), polynomials())
    @settings(max_examples=40)
    def test_leibniz(self, a, b):
        for i in range(4):
            assert (a * b).derivative(i) == a.derivative(i) * b + a * b.derivative(i)

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatchError):
            P("y0", p=5) + P("y0")

    def test_exponent_overflow(self):
        with pytest.raises(ExponentOverflowError):
            Polynomial({(0, 40000): 1})
        with pytest.raises(PolynomialSyntaxError):
            P("y1^40000")

    def test_division_by_y0_power(self):
        f = P("y0^3*y2 + y0*y1")
        assert f / P("y0") == P("y0^2*y2 + y1")
        assert (f / P("y0^2")).has_laurent_terms()

    def test_leading_term_is_lex_with_high_index_first(self):
        f = P("y0^5 + y1*y0 + y2")
        assert f.leading_term() == ((0, 0, 1), 1)

    def test_evaluate(self):
        assert P("y0^2*y1 - 1/2*y2").evaluate([2, 3, 4]) == 10


class TestModP:
    @given(polynomials(nvars=3, max_terms=4, max_exp=3), st.sampled_from([3, 5, 7, 11]))
    @settings(max_examples=40)
    def test_frobenius_is_pth_power(self, f, p):
        g = f.map_coefficients(lambda c: c, p) if all(c.denominator % p for _, c in f.terms()) else None
        if g is None:
            return
        assert g.frobenius() == g**p

    def test_reduction_of_fraction(self):
        f = P("1/2*y0", p=5)
        assert f.coefficient((1,)) == 3

    def test_non_prime_rejected(self):
        with pytest.raises(ValueError):
            Polynomial({(1,): 1}, p=9)


class TestRational:
    def test_xgcd_coprime_linear(self):
        t = RationalFunction.t()
        a = ZPoly.z() - ZPoly([t])
        b = ZPoly.z() + ZPoly([t])
        g, s, u = xgcd_z(a, b)
        assert g == ZPoly([1])
        assert s * a + u * b == g
        assert s == ZPoly([-1 / (2 * t)])

    def test_xgcd_common_factor(self):
        t = RationalFunction.t()
        common = ZPoly.z() - ZPoly([t])
        a = common * (ZPoly.monomial(2) + ZPoly([1]))
        b = common * ZPoly.z()
        g, s, u = xgcd_z(a, b)
        assert g == common
        assert s * a + u * b == g

    def test_series_expand(self):
        r = RationalFunction.from_coeffs([1], [1, -1, -1])
        assert series_expand(r, 8) == [1, 1, 2, 3, 5, 8, 13, 21]

    def test_series_pole_at_zero(self):
        with pytest.raises(ZeroDivisionError):
            series_expand(RationalFunction.from_coeffs([1], [0, 1]), 3)

    def test_equality_by_cross_multiplication(self):
        a = RationalFunction.from_coeffs([1, 1], [1, 0, -1])
        b = RationalFunction.from_coeffs([1], [1, -1])
        assert a == b

    def test_evaluate(self):
        r = RationalFunction.from_coeffs([1], [1, -1])
        assert r(Fraction(1, 2)) == 2
