"""Polynomial layer: derivatives, expansions, mult, binomial criterion."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from limitkey.fields import CompositeRank2, MonomialField, PadicRationals
from limitkey.polyring import (
    Poly,
    from_rational_coeffs,
    linear_from_root,
    mult_data,
    p_divides_binomial,
)

Q2 = PadicRationals(2)
F2 = MonomialField(2)
F3 = MonomialField(3)
Q0 = MonomialField(0)


def poly(field, *coeffs):
    return from_rational_coeffs(field, coeffs)


class TestBasics:
    def test_degree_and_trim(self):
        f = Poly.make(Q2, [Q2.from_int(1), Q2.zero(), Q2.zero()])
        assert f.degree == 0
        assert Poly.zero(Q2).degree == -1

    def test_arithmetic(self):
        f = poly(Q2, -17, 0, 1)  # x^2 - 17
        g = poly(Q2, 1, 1)  # x + 1
        assert f + g == poly(Q2, -16, 1, 1)
        assert f * g == poly(Q2, -17, -17, 1, 1)
        assert f - f == Poly.zero(Q2)
        assert (g ** 2) == poly(Q2, 1, 2, 1)

    def test_eval_horner(self):
        f = poly(Q2, -17, 0, 1)
        assert f.eval_at(Fraction(5)) == Fraction(8)
        assert f.eval_at(Fraction(0)) == Fraction(-17)

    def test_monic_and_support(self):
        f = poly(Q2, 1, 0, 0, 0, 1)
        assert f.is_monic()
        assert f.support() == [0, 4]

    def test_different_fields_rejected(self):
        with pytest.raises(ValueError):
            poly(Q2, 1) + poly(F2, 1)


class TestHasseSchmidt:
    def test_char2_first_derivative_of_square_vanishes(self):
        f = poly(F2, 0, 0, 1)  # x^2
        assert f.hasse_schmidt(1).is_zero()

    def test_char2_second_derivative_of_square(self):
        f = poly(F2, 0, 0, 1)
        assert f.hasse_schmidt(2) == poly(F2, 1)

    def test_char0_derivative(self):
        f = poly(Q2, -17, 0, 1)
        assert f.hasse_schmidt(1) == poly(Q2, 0, 2)

    def test_composition_rule_on_monomials(self):
        """D_s D_t = C(s+t, s) D_{s+t}, checked on monomials up to degree 20."""
        for field in (Q0, F2, F3):
            for n in range(21):
                xn = Poly.monomial(field, n)
                for s in range(0, 6):
                    for t in range(0, 6):
                        lhs = xn.hasse_schmidt(t).hasse_schmidt(s)
                        c = field.from_int(math.comb(s + t, s))
                        rhs = xn.hasse_schmidt(s + t).scale(c)
                        assert lhs == rhs

    def test_taylor_identity_reconstructs_shift(self):
        """sum_s (D_s f)(a) y^s = f(a + y) as polynomials in y."""
        rng = random.Random(8137)
        for field in (Q0, F2, F3, Q2):
            for _ in range(40):
                deg = rng.randint(0, 12)
                f = Poly.make(
                    field,
                    [field.from_int(rng.randint(-9, 9)) for _ in range(deg + 1)],
                )
                if f.is_zero():
                    continue
                a = field.from_int(rng.randint(-5, 5))
                # evaluate both sides at random y values
                for _ in range(4):
                    y = field.from_int(rng.randint(-5, 5))
                    lhs = field.zero()
                    for s, c in enumerate(f.taylor_coeffs(a)):
                        lhs = field.add(lhs, field.mul(c, field.pow(y, s)))
                    assert lhs == f.eval_at(field.add(a, y))


class TestQExpansion:
    def test_spec_examples(self):
        f = poly(Q2, 1, 0, 1)  # x^2 + 1
        q = poly(Q2, -1, 1)  # x - 1
        assert f.q_expansion(q) == [poly(Q2, 2), poly(Q2, 2), poly(Q2, 1)]
        assert q.q_expansion(q) == [Poly.zero(Q2), poly(Q2, 1)]

    def test_generic_linear_base_is_taylor(self):
        a = Fraction(3)
        f = poly(Q2, -17, 0, 1)
        got = f.q_expansion(linear_from_root(Q2, a))
        assert got == [poly(Q2, a * a - 17), poly(Q2, 2 * a), poly(Q2, 1)]

    def test_round_trip_bulk(self):
        rng = random.Random(902113)
        for field in (Q2, F2, F3):
            for _ in range(10**3 // 3):
                df = rng.randint(0, 9)
                dq = rng.randint(1, 4)
                f = Poly.make(field, [field.from_int(rng.randint(-8, 8)) for _ in range(df + 1)])
                q = Poly.make(
                    field,
                    [field.from_int(rng.randint(-8, 8)) for _ in range(dq)] + [field.one()],
                )
                digits = f.q_expansion(q)
                assert len(digits) <= max(0, f.degree) // q.degree + 1
                acc = Poly.zero(field)
                for i, d in enumerate(digits):
                    assert d.degree < q.degree
                    acc = acc + d * q ** i
                assert acc == f

    def test_taylor_agrees_with_expansion_at_linear_base(self):
        rng = random.Random(5531)
        for field in (Q0, F2, Q2):
            for _ in range(100):
                deg = rng.randint(1, 8)
                f = Poly.make(field, [field.from_int(rng.randint(-9, 9)) for _ in range(deg + 1)])
                if f.is_zero():
                    continue
                a = field.from_int(rng.randint(-6, 6))
                digits = f.q_expansion(linear_from_root(field, a))
                taylor = f.taylor_coeffs(a)
                padded = digits + [Poly.zero(field)] * (len(taylor) - len(digits))
                for tc, dg in zip(taylor, padded):
                    assert dg.is_constant()
                    assert field.eq(tc, dg.constant_value())

    def test_monic_required(self):
        f = poly(Q2, 1, 1)
        with pytest.raises(ValueError):
            f.q_expansion(poly(Q2, 1, 2))

    def test_artin_schreier_taylor_in_char_p(self):
        """x^p - x - c at a: constant, then -1, zero middle, top 1."""
        for K, p in ((F2, 2), (F3, 3)):
            c = K.monomial(-1)
            f = Poly.make(K, [K.neg(c), K.neg(K.one())] + [K.zero()] * (p - 2) + [K.one()])
            a = K.monomial(Fraction(-1, p))
            tc = f.taylor_coeffs(a)
            expect0 = K.sub(K.sub(K.pow(a, p), a), c)
            assert tc[0] == expect0
            assert tc[1] == K.from_int(-1)
            for mid in tc[2:p]:
                assert K.is_zero(mid)
            assert tc[p] == K.one()


class TestMultData:
    def test_char2_nested_square(self):
        g = poly(F2, 1, 0, 1, 0, 1)  # x^4 + x^2 + 1
        r, s = mult_data(g, 2)
        assert r == 1
        assert s == 2
        assert g.hasse_schmidt(1).is_zero()
        assert not g.hasse_schmidt(2).is_zero()

    def test_char2_separable(self):
        g = poly(F2, 0, 1, 1)  # x^2 + x
        assert mult_data(g, 2) == (0, 1)

    def test_char0_reading(self):
        g = poly(Q2, -17, 0, 1)
        assert mult_data(g, 1) == (0, 1)

    def test_power_consistency(self):
        rng = random.Random(3999)
        for K, p in ((F2, 2), (F3, 3)):
            for _ in range(200):
                deg = rng.randint(1, 6)
                base = Poly.make(
                    K, [K.from_int(rng.randint(0, p - 1)) for _ in range(deg)] + [K.one()]
                )
                e = rng.choice([1, p, p * p])
                g = base ** e
                r, s = mult_data(g, p)
                assert s == p ** r
                # definitional check: support divisible by p^r but not p^(r+1)
                assert all(n % p ** r == 0 for n in g.support())
                assert any(n % p ** (r + 1) != 0 for n in g.support() if n > 0) or all(
                    n == 0 for n in g.support()
                )

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            mult_data(poly(Q2, 5), 2)


class TestBinomialCriterion:
    def test_spec_examples(self):
        assert p_divides_binomial(4, 2, 2) is True  # C(4,2)=6
        assert p_divides_binomial(4, 2, 3) is True  # 6 = 2*3
        assert p_divides_binomial(4, 2, 5) is False

    def test_against_big_integer_oracle(self):
        for p in (2, 3, 5, 7):
            for l in range(65):
                for k in range(l + 1):
                    expected = math.comb(l, k) % p == 0
                    assert p_divides_binomial(l, k, p) == expected, (l, k, p)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            p_divides_binomial(2, 3, 2)
        with pytest.raises(ValueError):
            p_divides_binomial(4, 2, 1)


class TestFormatting:
    def test_simple_polynomials(self):
        assert poly(Q2, -17, 0, 1).format() == "x^2 - 17"
        assert poly(Q2, 0, 1).format() == "x"
        assert Poly.zero(Q2).format() == "0"

    def test_coefficients_with_structure_get_parens(self):
        K = F2
        f = Poly.make(K, [K.add(K.monomial(1), K.one()), K.one()])
        assert f.format() == "x + (1 + t)"
