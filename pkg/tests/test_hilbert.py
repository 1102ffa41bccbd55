from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filicenter.hilbert import (
    MuFactorization,
    cyclotomic_cover,
    delta_partition,
    delta_weight,
    hilbert_rational,
    hilbert_series_terms,
    integral_check,
    pretty_hilbert,
    recurrence_verify,
    sym_power_components,
    weight_multiplicities,
)
from filicenter.polycore import RationalFunction, series_expand, tpoly

SEQ = {
    2: [1, 1, 2, 2, 3, 3, 4, 4, 5, 5],
    3: [1, 1, 2, 3, 5, 6, 8, 10, 13, 15, 18, 21, 25, 28, 32, 36],
    4: [1, 1, 3, 5, 8, 12, 18, 24, 33, 43, 55, 69, 86, 104, 126, 150],
    5: [1, 1, 3, 6, 12, 20, 32, 49, 73, 102, 141, 190, 252, 325, 414, 521, 649, 795, 967, 1165, 1394],
}

RECURRENCES = {
    2: [1, 1, -1],
    3: [2, -1, 0, 1, -2, 1],
    4: [2, 0, -1, -1, 0, 2, -1],
    5: [2, -1, 0, 1, -2, 2, -2, 2, -2, 0, 2, -2, 2, -2, 2, -1, 0, 1, -2, 1],
}


def rf(num, den_factors):
    den = tpoly([1])
    for f in den_factors:
        den = den * tpoly(f)
    return RationalFunction(tpoly(num), den)


def one_minus_t(k):
    return [1] + [0] * (k - 1) + [-1]


PRINTED_H = {
    1: rf([1], [one_minus_t(1)]),
    2: rf([1], [one_minus_t(1), one_minus_t(2)]),
    3: rf(one_minus_t(6), [one_minus_t(1), one_minus_t(2), one_minus_t(3), one_minus_t(4)]),
    4: rf([1, 0, 0, 1], [one_minus_t(1), one_minus_t(2), one_minus_t(2), one_minus_t(3)]),
    5: RationalFunction(
        -tpoly([1, -1, 2, 1, 2, 3, 1, 5, 1, 3, 2, 1, 2, -1, 1]),
        tpoly([1, 0, 0, 0, 1]) * tpoly([1, 1, 1]) * tpoly([1, -1, 1]) * tpoly([1, 0, 1]) ** 2
        * tpoly([1, 1]) ** 3 * tpoly([-1, 1]) ** 5,
    ),
}


class TestCounters:
    @pytest.mark.parametrize("n", sorted(SEQ))
    def test_printed_sequences(self, n):
        assert list(hilbert_series_terms(n, len(SEQ[n]) - 1).values) == SEQ[n]

    def test_examples(self):
        assert delta_partition(2, 5) == 3
        assert delta_partition(5, 8) == 73
        assert delta_weight(3, 4) == 5
        assert delta_weight(4, 2) == 3
        assert all(delta_weight(1, d) == 1 for d in range(20))
        assert delta_partition(7, 0) == 1

    def test_counters_agree_and_are_symmetric(self):
        for n in range(13):
            for d in range(13):
                assert delta_partition(n, d) == delta_partition(d, n)
                if n >= 1:
                    assert delta_partition(n, d) == delta_weight(n, d)

    @given(st.integers(1, 9), st.integers(0, 9))
    @settings(max_examples=40)
    def test_components(self, n, d):
        comps = sym_power_components(n, d)
        assert sum(comps.values()) == delta_weight(n, d)
        assert sum(c * (w + 1) for w, c in comps.items()) == comb(n + d, d)
        assert sum(weight_multiplicities(n, d).values()) == comb(n + d, d)

    def test_negative_input(self):
        with pytest.raises(ValueError):
            delta_partition(-1, 2)


class TestRational:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_printed_forms(self, n):
        assert hilbert_rational(n).series == PRINTED_H[n]

    @pytest.mark.parametrize("n", range(1, 11))
    def test_series_self_check(self, n):
        h = hilbert_rational(n)
        assert h.expand(30) == list(hilbert_series_terms(n, 29).values)

    @pytest.mark.parametrize("n", [3, 5, 6])
    def test_denominator_annihilates(self, n):
        h = hilbert_rational(n)
        den = [int(c) for c in h.series.den_coeffs()]
        a = hilbert_series_terms(n, 60).values
        top = len(h.series.num_coeffs()) - 1
        for d in range(len(den) + top, 61):
            assert sum(c * a[d - j] for j, c in enumerate(den)) == 0

    def test_mu_factorization(self):
        mu = MuFactorization.build(3)
        assert mu.index_set == (-3, -1, 1, 3)
        assert mu.shift == 4
        assert not mu.has_scalar
        assert MuFactorization.build(4).has_scalar

    def test_bound(self):
        with pytest.raises(ValueError):
            hilbert_rational(19)
        with pytest.raises(ValueError):
            hilbert_rational(0)

    def test_pretty(self):
        assert hilbert_rational(2).pretty() == "(1) / ((1-t)(1-t^2))"
        assert "frac" in hilbert_rational(3).latex()
        assert cyclotomic_cover(tpoly([1, 0, 1])) == [4]
        assert pretty_hilbert(RationalFunction(tpoly([1]), tpoly([1, 0, 0, 1, 1]))).count("/") == 1


class TestChecks:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_printed_recurrences(self, n):
        assert recurrence_verify(n, RECURRENCES[n], 40).holds

    def test_false_recurrence(self):
        v = recurrence_verify(2, [1], 5)
        assert not v.holds and v.first_failure == 2

    def test_order_too_large(self):
        with pytest.raises(ValueError):
            recurrence_verify(2, [1] * 6, 5)

    # exact values frozen from Fraction evaluation of the printed closed forms
    @pytest.mark.parametrize(
        "n,t,exact,tol",
        [
            (1, Fraction(1, 2), Fraction(2), 1e-8),
            (2, Fraction(1, 10), Fraction(1000, 891), 1e-8),
            (3, Fraction(1, 10), Fraction(910000, 809919), 1e-6),
            (4, Fraction(1, 10), Fraction(9100000, 8010981), 1e-6),
        ],
    )
    def test_integral(self, n, t, exact, tol):
        res = integral_check(n, t)
        assert res.exact == exact
        assert res.difference < tol

    def test_integral_rejects_bad_t(self):
        with pytest.raises(ValueError):
            integral_check(2, Fraction(3, 2))
        with pytest.raises(ValueError):
            integral_check(2, Fraction(1, 2), panels=100)


def test_series_expand_of_printed_h5_matches_table():
    assert series_expand(PRINTED_H[5], 21) == SEQ[5]
