"""Literal grammar for field elements and polynomials."""

from __future__ import annotations

from fractions import Fraction

import pytest

from limitkey.fields import CompositeRank2, MonomialField, PadicRationals
from limitkey.parse import ParseError, parse_element, parse_poly
from limitkey.polyring import Poly, from_rational_coeffs

Q2 = PadicRationals(2)
F2 = MonomialField(2)
K2 = CompositeRank2(2)


class TestElementLiterals:
    def test_rational(self):
        assert parse_element(Q2, "3/4") == Fraction(3, 4)
        assert parse_element(Q2, "-17") == Fraction(-17)

    def test_monomial_sum(self):
        x = parse_element(F2, "t^(-1/8) + t^(1/2)")
        assert x == F2.add(F2.monomial(Fraction(-1, 8)), F2.monomial(Fraction(1, 2)))

    def test_negative_integer_exponent(self):
        assert parse_element(F2, "t^(-1)") == F2.inv(F2.monomial(1))

    def test_rational_function(self):
        x = parse_element(K2, "(2*t^3)/(1+t)")
        assert x == K2.div(K2.t_power(3, Fraction(2)), K2.add(K2.one(), K2.t_power(1)))

    def test_coefficient_times_power(self):
        x = parse_element(F2, "3*t^2")
        assert x == F2.monomial(2, Fraction(3))

    def test_x_rejected_in_element(self):
        with pytest.raises(ParseError):
            parse_element(Q2, "x + 1")

    def test_t_needs_a_field_with_t(self):
        with pytest.raises(ParseError):
            parse_element(Q2, "t + 1")


class TestPolynomialLiterals:
    def test_quadratic(self):
        assert parse_poly(Q2, "x^2 - 17") == from_rational_coeffs(Q2, [-17, 0, 1])

    def test_bound_names(self):
        a = Fraction(3)
        f = parse_poly(Q2, "x^2 - 2*a*x + (a^2 - 17)", names={"a": a})
        assert f == from_rational_coeffs(Q2, [a * a - 17, -2 * a, 1])

    def test_artin_schreier_shape(self):
        f = parse_poly(F2, "x^2 - x - t^(-1)")
        tinv = F2.monomial(-1)
        assert f == Poly.make(F2, [F2.neg(tinv), F2.neg(F2.one()), F2.one()])

    def test_monomial_powers_of_x(self):
        f = parse_poly(Q2, "x^4 + x^2 + 1")
        assert f == from_rational_coeffs(Q2, [1, 0, 1, 0, 1])

    def test_division_by_constant(self):
        f = parse_poly(Q2, "x/2 + 1/2")
        assert f == from_rational_coeffs(Q2, [Fraction(1, 2), Fraction(1, 2)])

    def test_division_by_x_rejected(self):
        with pytest.raises(ParseError):
            parse_poly(Q2, "1/x")

    def test_unknown_name_rejected(self):
        with pytest.raises(ParseError):
            parse_poly(Q2, "x + b")

    def test_fractional_power_of_x_rejected(self):
        with pytest.raises(ParseError):
            parse_poly(F2, "x^(1/2)")

    def test_fractional_power_of_t_composite_rejected(self):
        with pytest.raises(ParseError):
            parse_element(K2, "t^(1/2)")

    def test_trailing_garbage_rejected(self):
        with pytest.raises(ParseError):
            parse_poly(Q2, "x^2 - 17 )")
        with pytest.raises(ParseError):
            parse_poly(Q2, "x^2 @ 17")

    def test_nested_parens_and_unary_minus(self):
        f = parse_poly(Q2, "-(x - (1 - x))^2")
        assert f == from_rational_coeffs(Q2, [-1, 4, -4])
