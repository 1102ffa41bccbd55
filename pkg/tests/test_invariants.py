from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filicenter import invariants
from filicenter.hilbert import delta_weight
from filicenter.invariants import (
    NotInZnError,
    ResourceGuardError,
    ZExpression,
    basis_kernel,
    basis_span,
    highest_weight_dims,
    independence_check,
    minimal_generators,
    rewrite_in_z,
    verify_generating_set,
    weight_space_keys,
)
from filicenter.polycore import Polynomial, parse_poly
from filicenter.sl2 import NotInvariantError, is_invariant, weight
from filicenter.transvect import eval_recipe, eval_recipe_list, z_gen

ZETA4 = "-3*y1^2*y2^2 + 8*y0*y2^3 + 6*y1^3*y3 - 18*y0*y1*y2*y3 + 9*y0^2*y3^2"
ZETA5 = "2*y2^3 - 6*y1*y2*y3 + 9*y0*y3^2 + 6*y1^2*y4 - 12*y0*y2*y4"


def profile(gens):
    out = {}
    for g in gens:
        out[g.degree] = out.get(g.degree, 0) + 1
    return out


class TestBases:
    def test_small_examples(self):
        b = basis_kernel(2, 2)
        assert b.polys == [parse_poly("y0^2"), parse_poly("y0*y2 - 1/2*y1^2")]
        assert basis_kernel(1, 5).polys == [parse_poly("y0^5")]
        assert len(basis_kernel(3, 4)) == 5
        assert len(basis_span(3, 2)) == 2 and basis_span(3, 2).same_span(basis_kernel(3, 2))
        assert basis_span(2, 1).polys == [parse_poly("y0")]
        assert len(basis_span(4, 3)) == 5

    @pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 7) for k in range(1, 7)])
    def test_dimension_matches_counter(self, n, k):
        assert len(basis_kernel(n, k)) == delta_weight(n, k)

    @pytest.mark.parametrize("n,k", [(3, 5), (4, 4), (5, 4), (6, 3)])
    def test_kernel_equals_span(self, n, k):
        a, b = basis_kernel(n, k), basis_span(n, k)
        assert a.same_span(b)
        assert a.weights() == b.weights() == highest_weight_dims(n, k)

    def test_elements_are_invariant_weight_vectors_without_y1_leads(self):
        for e in basis_kernel(4, 5).elements:
            assert is_invariant(e.poly)
            assert weight(e.poly, 4) == e.weight
            assert e.poly.leading_term()[0][1:2] in ((), (0,))

    def test_weight_space_keys(self):
        keys = weight_space_keys(3, 2, 2)
        assert [Polynomial._raw({k: 1}, None) for k in keys] == [parse_poly("y1^2"), parse_poly("y0*y2")]

    def test_resource_guard(self):
        with pytest.raises(ResourceGuardError):
            basis_kernel(10, 10, max_monomials=1000)

    def test_prime_field_needs_large_p(self):
        with pytest.raises(ValueError):
            basis_kernel(3, 5, p=5)
        b = basis_kernel(3, 4, p=7)
        assert b.experimental and len(b) == 5


class TestMinimalGenerators:
    @pytest.mark.parametrize(
        "n,maxdeg,expected",
        [(2, 6, {1: 1, 2: 1}), (3, 8, {1: 1, 2: 1, 3: 1, 4: 1}), (4, 8, {1: 1, 2: 2, 3: 2})],
    )
    def test_small_profiles(self, n, maxdeg, expected):
        assert minimal_generators(n, maxdeg).counts() == expected

    @pytest.mark.parametrize("n,maxdeg", [(3, 8), (4, 8), (5, 9)])
    def test_exact_and_modular_routes_agree(self, n, maxdeg):
        exact = minimal_generators(n, maxdeg, modulus=None)
        modular = minimal_generators(n, maxdeg)
        assert exact.counts() == modular.counts()
        assert [r.recipe for r in exact.records] == [r.recipe for r in modular.records]

    def test_order_independence(self):
        a = minimal_generators(5, 10, order="forward")
        b = minimal_generators(5, 10, order="reverse")
        assert a.counts() == b.counts()

    def test_recipes_materialize_to_invariants(self):
        res = minimal_generators(4, 6, materialize=True)
        for r in res.records:
            assert is_invariant(r.poly)
            assert r.poly.degree() == r.degree
        assert res.warnings

    def test_own_output_passes_generating_set_check(self):
        res = minimal_generators(5, 9, materialize=True)
        env = eval_recipe_list([(r.name, r.recipe) for r in res.records], 5)
        rep = verify_generating_set(5, list(env.values()), 9)
        assert rep.spans and rep.minimal

    def test_generating_set_check_detects_gaps_and_redundancy(self):
        gens = [z_gen(1, 3), z_gen(2, 3), z_gen(3, 3)]
        rep = verify_generating_set(3, gens, 4)
        assert not rep.spans
        rep = verify_generating_set(3, gens + [eval_recipe("(-3/2) y0 o_2 y0 o_1 y0 o_3 y0", 3)], 6)
        assert rep.spans and rep.minimal
        extra = eval_recipe("y0 o_2 y0 o_2 y0", 3)
        rep = verify_generating_set(3, gens + [extra], 3)
        assert not rep.minimal

    def test_published_z5_list(self, generator_recipes):
        env = eval_recipe_list(generator_recipes[5], 5)
        gens = [env[name] for name, _ in generator_recipes[5]]
        assert profile(gens) == {1: 1, 2: 2, 3: 3, 4: 3, 5: 3, 6: 2, 7: 2, 8: 2, 9: 1, 11: 1, 12: 1, 13: 1, 18: 1}

    def test_bad_order(self):
        with pytest.raises(ValueError):
            minimal_generators(3, 4, order="sideways")


class TestRewrite:
    def test_zeta4(self):
        e = rewrite_in_z(parse_poly(ZETA4), 3)
        assert e == ZExpression.parse("z2^3*z1^-2 + z3^2*z1^-2", 3)
        assert e.factored() == "(z3^2 + z2^3)*z1^-2"

    def test_zeta5(self):
        e = rewrite_in_z(parse_poly(ZETA5), 4)
        assert e == ZExpression.parse("z2^3*z1^-3 + z3^2*z1^-3 - 3*z1^-1*z2*z4", 4)

    def test_fixed_point(self):
        assert str(rewrite_in_z(z_gen(2, 4).poly, 4)) == "z2"

    def test_non_invariant_rejected(self):
        with pytest.raises(NotInvariantError):
            rewrite_in_z(parse_poly("y1"), 3)

    def test_y1_lead_rejected(self, monkeypatch):
        # no invariant leads with y1, so bypass the invariance gate to reach this guard
        monkeypatch.setattr(invariants, "is_invariant", lambda f: True)
        with pytest.raises(NotInZnError):
            rewrite_in_z(parse_poly("y1^2"), 3)

    def test_random_elements_roundtrip(self):
        rng = random.Random(11)
        for _ in range(100):
            n, k = rng.randint(2, 4), rng.randint(1, 6)
            basis = basis_kernel(n, k).elements
            w = rng.choice(sorted({e.weight for e in basis}))
            f = Polynomial.zero()
            for e in basis:
                if e.weight == w:
                    f = f + e.poly.scale(Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
            assert rewrite_in_z(f, n).substitute() == f

    @given(st.integers(2, 4), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
    @settings(max_examples=25, deadline=None)
    def test_combinations_roundtrip(self, n, cs):
        f = sum((c * z_gen(2, n).poly ** (i + 1) * z_gen(1, n).poly ** (2 - i) for i, c in enumerate(cs)),
                Polynomial.zero())
        assert rewrite_in_z(f, n).substitute() == f


class TestIndependence:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_z_sequence_independent(self, n):
        v = independence_check([z_gen(i, n).poly for i in range(1, n + 1)], n)
        assert v.independent and v.confidence == "certain"

    def test_trivial_dependence(self):
        v = independence_check([parse_poly("y0"), parse_poly("y0^2")])
        assert not v.independent
        assert v.witness == parse_poly("y1 - y0^2") or v.witness == parse_poly("y0^2 - y1")

    def test_zeta4_relation(self):
        polys = [z_gen(i, 3).poly for i in (1, 2, 3)] + [parse_poly(ZETA4)]
        v = independence_check(polys, 3)
        assert not v.independent
        # p1..p4 stand for z1, z2, z3, zeta4
        assert v.witness in (parse_poly("y2^2 + y1^3 - y0^2*y3"), -parse_poly("y2^2 + y1^3 - y0^2*y3"))
        assert v.witness_text() == "p1^2*p4 - p3^2 - p2^3"

    def test_deterministic(self):
        polys = [z_gen(i, 4).poly for i in range(1, 5)]
        assert independence_check(polys, 4, seed=3) == independence_check(polys, 4, seed=3)
