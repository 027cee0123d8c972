from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from resloc.algebra import (
    MultiPoly,
    TruncatedSeries,
    coefficient_of,
    evaluate,
    fraction_from_str,
    fraction_to_str,
    generalized_binomial,
    series_invert,
)
from resloc.errors import SeriesInversionError, ValidationError


def var(name):
    return MultiPoly.variable(name)


class TestFractionStrings:
    def test_integer_renders_plain(self):
        assert fraction_to_str(Fraction(-10)) == "-10"

    def test_proper_fraction(self):
        assert fraction_to_str(Fraction(5, 3)) == "5/3"

    def test_round_trip(self):
        for s in ("0", "7", "-3/4", "22/7"):
            assert fraction_to_str(fraction_from_str(s)) == s

    def test_bad_string(self):
        with pytest.raises(ValidationError):
            fraction_from_str("1/0")


class TestMultiPoly:
    def test_coefficient_of_binomial(self):
        p = (MultiPoly.constant(1) + var("h")) ** 3
        assert coefficient_of(p, "h", 2) == MultiPoly.constant(3)

    def test_coefficient_of_product(self):
        p = (var("a") + var("h")) * (var("b") + var("h"))
        assert coefficient_of(p, "h", 1) == var("a") + var("b")

    def test_coefficient_above_degree_is_zero(self):
        p = (var("a") + var("h")) * (var("b") + var("h"))
        assert coefficient_of(p, "h", 5).is_zero()

    def test_coefficient_of_unknown_variable(self):
        with pytest.raises(ValidationError):
            coefficient_of(var("x") ** 2, "h", 1)

    def test_evaluate(self):
        p = var("x") ** 2 + var("y")
        assert evaluate(p, {"x": 2, "y": 3}) == 7

    def test_evaluate_constant_ignores_assignment(self):
        p = MultiPoly.constant(Fraction(5, 3))
        assert evaluate(p, {}) == Fraction(5, 3)
        assert evaluate(p, {"x": 100}) == Fraction(5, 3)

    def test_evaluate_missing_variable(self):
        with pytest.raises(ValidationError):
            evaluate(var("x"), {})

    def test_cancelled_variable_is_not_required(self):
        p = var("x") + var("y") - var("y")
        assert evaluate(p, {"x": 4}) == 4

    def test_graded_part(self):
        p = var("x") * var("t") + var("x") ** 2 + var("t")
        part = p.graded_part({"x": 1, "t": 2}, 2)
        assert part == var("x") ** 2 + var("t")

    def test_equality_across_variable_sets(self):
        assert var("x") + MultiPoly.constant(0) * var("y") == var("x")

    def test_power_zero(self):
        assert var("x") ** 0 == MultiPoly.constant(1)

    def test_negative_power_rejected(self):
        with pytest.raises(ValidationError):
            var("x") ** -1


def small_fractions():
    return st.builds(
        Fraction,
        st.integers(min_value=-9, max_value=9),
        st.integers(min_value=1, max_value=5),
    )


@st.composite
def polys(draw):
    names = ("x", "y", "z")
    n_terms = draw(st.integers(min_value=0, max_value=5))
    terms = {}
    for _ in range(n_terms):
        exp = tuple(draw(st.integers(min_value=0, max_value=3)) for _ in names)
        terms[exp] = draw(small_fractions())
    return MultiPoly(names, terms)


class TestRingAxioms:
    @settings(max_examples=50, deadline=None)
    @given(polys(), polys(), polys())
    def test_mul_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @settings(max_examples=50, deadline=None)
    @given(polys(), polys(), polys())
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @settings(max_examples=50, deadline=None)
    @given(polys(), polys())
    def test_commutative(self, a, b):
        assert a * b == b * a
        assert a + b == b + a

    @settings(max_examples=30, deadline=None)
    @given(polys())
    def test_additive_inverse(self, a):
        assert (a - a).is_zero()


class TestTruncatedSeries:
    def test_geometric_series(self):
        s = TruncatedSeries(MultiPoly.constant(1) + var("x"), {"x": 3})
        inv = series_invert(s)
        assert inv.base == MultiPoly.constant(1) - var("x") + var("x") ** 2

    def test_identity(self):
        s = TruncatedSeries(MultiPoly.constant(1), {"x": 5})
        assert series_invert(s).base == MultiPoly.constant(1)

    def test_zero_constant_term_rejected(self):
        s = TruncatedSeries(var("x") + var("x") ** 2, {"x": 3})
        with pytest.raises(SeriesInversionError):
            series_invert(s)

    def test_truncation_respected_by_products(self):
        s = TruncatedSeries(MultiPoly.constant(1) + var("x"), {"x": 2})
        sq = s * s
        assert sq.base == MultiPoly.constant(1) + 2 * var("x")

    def test_uncapped_variable_cannot_be_inverted(self):
        s = TruncatedSeries(MultiPoly.constant(1) + var("x") + var("y"), {"x": 3})
        with pytest.raises(ValidationError):
            series_invert(s)

    @settings(max_examples=40, deadline=None)
    @given(polys(), small_fractions().filter(lambda c: c != 0))
    def test_invert_roundtrip(self, p, const):
        orders = {"x": 3, "y": 3, "z": 3}
        base = MultiPoly.constant(const) + p.graded_part({"x": 1, "y": 1, "z": 1}, 1) + p.graded_part(
            {"x": 1, "y": 1, "z": 1}, 2
        )
        s = TruncatedSeries(base, orders)
        inv = series_invert(s)
        assert (s * inv).base == MultiPoly.constant(1)


class TestGeneralizedBinomial:
    def test_matches_comb_for_nonnegative(self):
        import math

        for a in range(8):
            for k in range(10):
                assert generalized_binomial(a, k) == math.comb(a, k) if k <= a else True
                if k > a:
                    assert generalized_binomial(a, k) == 0

    def test_negative_upper_index(self):
        # (1+h)^-1 = 1 - h + h^2 - ...
        assert generalized_binomial(-1, 3) == -1
        assert generalized_binomial(-2, 2) == 3
