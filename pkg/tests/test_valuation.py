"""Tests for monomial/augmented valuations, truncation, level data, S-sets,
and Newton polygons."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from limitkey.fields import CompositeRank2, MonomialField, PadicRationals
from limitkey.ordgroup import INFINITY, NEG_INFINITY, GroupElement
from limitkey.polyring import Poly, from_rational_coeffs, linear_from_root
from limitkey.valuation import (
    AugmentedValuation,
    MonomialValuation,
    NewtonPolygon,
    expansion_term_values,
    is_key_polynomial,
    level,
    nu_degree,
    s_set,
    truncation,
)

Q2 = PadicRationals(2)
Q3 = PadicRationals(3)


def ge(*values):
    return GroupElement.of(*values)


def sqrt17_centers(count):
    """2-adic approximations a with a^2 = 17 mod increasing powers of 2,
    recorded each time the approximation changes.  Computed here from scratch
    as an oracle independent of the library's family builders."""
    centers = [1]
    a, k = 1, 3
    while len(centers) < count:
        if (a * a - 17) % (1 << (k + 1)) != 0:
            a += 1 << (k - 1)
            centers.append(a)
        k += 1
    return centers


def sqrt17_ladder(count):
    """(center, gamma) pairs: gamma is the 2-adic distance to the next center."""
    cs = sqrt17_centers(count + 1)
    out = []
    for i in range(count):
        diff = cs[i + 1] - cs[i]
        g = 0
        while diff % 2 == 0:
            diff //= 2
            g += 1
        out.append((Fraction(cs[i]), ge(g)))
    return out


def artin_schreier_ladder(field, count):
    """(center, gamma) pairs a_i = sum t^(-1/2^j), gamma_i = -1/2^(i+1)."""
    out = []
    a = field.zero()
    for i in range(count):
        out.append((a, ge(Fraction(-1, 2 ** (i + 1)))))
        a = field.add(a, field.monomial(Fraction(-1, 2 ** (i + 1))))
    return out


def artin_schreier_poly(field):
    """x^2 + x + 1/t over a characteristic-two coefficient field."""
    x = Poly.variable(field)
    return x * x + x + Poly.constant(field, field.monomial(Fraction(-1)))


def rand_poly(rng, field, max_degree, allow_zero=False):
    deg = rng.randint(0 if allow_zero else 1, max_degree)
    coeffs = [field.sample(rng) for _ in range(deg + 1)]
    while field.is_zero(coeffs[-1]):
        coeffs[-1] = field.sample(rng)
    return Poly.make(field, coeffs)


def light_sample(rng, field):
    """A cheap random element: at most two monomial-style terms.  Field
    arithmetic has its own bulk axiom tests; here the element weight would
    only slow the valuation checks down without sharpening them."""
    if isinstance(field, PadicRationals):
        return field.sample(rng)
    if isinstance(field, MonomialField):
        out = field.zero()
        for _ in range(rng.randint(0, 2)):
            e = Fraction(rng.randint(-6, 6), rng.choice([1, 2, 4]))
            c = Fraction(rng.randint(1, 6))
            out = field.add(out, field.monomial(e, c))
        return out
    out = field.zero()
    for _ in range(rng.randint(0, 2)):
        c = Fraction(rng.randint(1, 9), rng.choice([1, 2, 3]))
        out = field.add(out, field.t_power(rng.randint(-3, 3), c))
    return out


def light_poly(rng, field, max_degree):
    deg = rng.randint(0, max_degree)
    coeffs = [light_sample(rng, field) for _ in range(deg + 1)]
    return Poly.make(field, coeffs)


class TestMonomialEval:
    def test_quadratic_over_dyadics(self):
        nu = MonomialValuation(Q2, Fraction(0), ge(1))
        f = from_rational_coeffs(Q2, [2, 0, 1])  # x^2 + 2
        assert nu.eval(f) == ge(1)

    def test_constants_take_field_value(self):
        nu = MonomialValuation(Q2, Fraction(3), ge(Fraction(7, 2)))
        for c in (Fraction(8), Fraction(3, 4), Fraction(-40), Fraction(1)):
            assert nu.eval(Poly.constant(Q2, c)) == Q2.val(c)

    def test_zero_polynomial_has_infinite_value(self):
        nu = MonomialValuation(Q2, Fraction(0), ge(1))
        assert nu.eval(Poly.zero(Q2)) is INFINITY

    def test_infinite_gamma_pins_the_center(self):
        nu = MonomialValuation(Q2, Fraction(5), INFINITY)
        x_minus_5 = linear_from_root(Q2, Fraction(5))
        assert nu.eval(x_minus_5) is INFINITY
        assert nu.eval(x_minus_5 * x_minus_5) is INFINITY
        # Off the center the value is the value at the center point.
        f = from_rational_coeffs(Q2, [-1, 0, 1])  # x^2 - 1
        assert nu.eval(f) == Q2.val(Fraction(24))

    def test_fractional_exponent_field(self):
        mf = MonomialField(2)
        a = mf.monomial(Fraction(-1, 2))
        nu = MonomialValuation(mf, a, ge(Fraction(-1, 4)))
        x = Poly.variable(mf)
        # x^2 expands as (x-a)^2 + a^2 in characteristic 2.
        assert nu.eval(x * x) == ge(-1)

    def test_rank_two_values(self):
        cf = CompositeRank2(3)
        nu = MonomialValuation(cf, cf.zero(), ge(1, -2))
        x = Poly.variable(cf)
        three = Poly.constant(cf, cf.from_int(3))
        # min(v(3) + gamma, 2*gamma) in the lexicographic order.
        assert nu.eval(x * x + three * x) == ge(1, -1)

    def test_gamma_rank_must_match(self):
        with pytest.raises(ValueError):
            MonomialValuation(Q2, Fraction(0), ge(1, 0))


class TestAugmentedAndTruncation:
    def test_degree_one_augmentation_is_monomial(self):
        rng = random.Random(441002)
        base = MonomialValuation(Q2, Fraction(0), ge(1))
        for _ in range(100):
            c = Fraction(rng.randint(-50, 50))
            key = linear_from_root(Q2, c)
            floor = base.eval(key)
            gamma = floor + ge(rng.randint(0, 4))
            aug = AugmentedValuation(base, key, gamma)
            mono = MonomialValuation(Q2, c, gamma)
            f = rand_poly(rng, Q2, 5, allow_zero=True)
            assert aug.eval(f) == mono.eval(f)

    def test_truncation_gives_key_its_own_value(self):
        nu = MonomialValuation(Q2, Fraction(0), ge(1))
        key = from_rational_coeffs(Q2, [2, 1, 1])  # x^2 + x + 2
        assert nu.eval(key) == ge(1)
        trunc = truncation(nu, key)
        assert trunc.gamma == ge(1)
        assert trunc.eval(key) == ge(1)

    def test_truncation_never_exceeds_the_valuation(self):
        rng = random.Random(771320)
        F = from_rational_coeffs(Q2, [-17, 0, 1])
        for center, gamma in sqrt17_ladder(4):
            nu = MonomialValuation(Q2, center, gamma)
            trunc = truncation(nu, F)
            for _ in range(50):
                f = rand_poly(rng, Q2, 5)
                assert trunc.eval(f) <= nu.eval(f)

    def test_family_values_increase(self):
        rng = random.Random(590441)
        ladder = [MonomialValuation(Q2, c, g) for c, g in sqrt17_ladder(5)]
        for _ in range(100):
            f = rand_poly(rng, Q2, 4)
            values = [nu.eval(f) for nu in ladder]
            for lo, hi in zip(values, values[1:]):
                assert lo <= hi

    def test_truncating_at_the_previous_center_steps_down_the_ladder(self):
        rng = random.Random(228587)
        ladder = sqrt17_ladder(4)
        for i in range(3):
            lo = MonomialValuation(Q2, ladder[i][0], ladder[i][1])
            hi = MonomialValuation(Q2, ladder[i + 1][0], ladder[i + 1][1])
            key = linear_from_root(Q2, ladder[i][0])
            assert hi.eval(key) == ladder[i][1]
            trunc = truncation(hi, key)
            for _ in range(60):
                f = rand_poly(rng, Q2, 4)
                assert trunc.eval(f) == lo.eval(f)

    def test_rejects_gamma_below_the_key_value(self):
        base = MonomialValuation(Q2, Fraction(0), ge(1))
        key = from_rational_coeffs(Q2, [2, 1, 1])
        with pytest.raises(ValueError):
            AugmentedValuation(base, key, ge(0))

    def test_rejects_bad_keys(self):
        base = MonomialValuation(Q2, Fraction(0), ge(1))
        with pytest.raises(ValueError):
            AugmentedValuation(base, Poly.constant(Q2, Fraction(3)), ge(2))
        with pytest.raises(ValueError):
            AugmentedValuation(base, from_rational_coeffs(Q2, [1, 2]), ge(2))


class TestMultiplicativity:
    CATALOG = [
        (Q2, Fraction(0), ge(1)),
        (Q2, Fraction(9), ge(5)),
        (Q3, Fraction(0), ge(Fraction(-3, 2))),
        (Q2, Fraction(0), INFINITY),
    ]

    def _check(self, nu, field, rng, rounds):
        for _ in range(rounds):
            f = light_poly(rng, field, 4)
            g = light_poly(rng, field, 4)
            assert nu.eval(f * g) == nu.eval(f) + nu.eval(g)
            vmin = min(nu.eval(f), nu.eval(g))
            assert nu.eval(f + g) >= vmin

    def test_rational_centers(self):
        rng = random.Random(96001)
        for field, center, gamma in self.CATALOG:
            self._check(MonomialValuation(field, center, gamma), field, rng, 1000)

    def test_fractional_exponent_centers(self):
        rng = random.Random(96002)
        mf2 = MonomialField(2)
        a2 = artin_schreier_ladder(mf2, 3)[2]
        self._check(MonomialValuation(mf2, a2[0], a2[1]), mf2, rng, 1000)
        mf0 = MonomialField(0)
        nu0 = MonomialValuation(mf0, mf0.monomial(Fraction(2)), ge(Fraction(5, 3)))
        self._check(nu0, mf0, rng, 1000)

    def test_rank_two_center(self):
        rng = random.Random(96003)
        cf = CompositeRank2(3)
        nu = MonomialValuation(cf, cf.t_power(1), ge(1, -2))
        self._check(nu, cf, rng, 1000)


class TestLevel:
    def test_linear_at_the_center(self):
        for g in (ge(0), ge(1), ge(Fraction(5, 2))):
            nu = MonomialValuation(Q2, Fraction(0), g)
            data = level(nu, Poly.variable(Q2))
            assert data.epsilon == g
            assert data.maximizers == {1}

    def test_constants_sit_at_minus_infinity(self):
        nu = MonomialValuation(Q2, Fraction(0), ge(1))
        for c in (Fraction(0), Fraction(1), Fraction(6)):
            data = level(nu, Poly.constant(Q2, c))
            assert data.epsilon is NEG_INFINITY
            assert data.maximizers == frozenset()

    def test_infinite_value_sits_at_plus_infinity(self):
        nu = MonomialValuation(Q2, Fraction(5), INFINITY)
        data = level(nu, linear_from_root(Q2, Fraction(5)))
        assert data.epsilon is INFINITY
        assert data.maximizers == frozenset()

    def test_square_root_ladder_levels(self):
        F = from_rational_coeffs(Q2, [-17, 0, 1])
        for center, gamma in sqrt17_ladder(5):
            nu = MonomialValuation(Q2, center, gamma)
            assert nu.eval(F) == gamma + ge(1)
            data = level(nu, F)
            assert data.epsilon == gamma
            assert data.maximizers == {1}

    def test_artin_schreier_levels(self):
        mf = MonomialField(2)
        F = artin_schreier_poly(mf)
        for center, gamma in artin_schreier_ladder(mf, 5):
            nu = MonomialValuation(mf, center, gamma)
            assert nu.eval(F) == gamma.scale(2)
            data = level(nu, F)
            assert data.epsilon == gamma
            assert data.maximizers == {2}

    def test_level_of_product_is_the_larger_level(self):
        rng = random.Random(337709)
        fields = [Q2, MonomialField(3)]
        for field in fields:
            nu = MonomialValuation(
                field,
                field.from_fraction(Fraction(0)),
                ge(Fraction(3, 2)),
            )
            for _ in range(150):
                f = rand_poly(rng, field, 3)
                g = rand_poly(rng, field, 3)
                lf, lg, lfg = level(nu, f), level(nu, g), level(nu, f * g)
                assert lfg.epsilon == max(lf.epsilon, lg.epsilon)


class TestLevelArgmaxPowers:
    """With a unique farthest root of multiplicity p^r, the level is attained
    exactly at derivative order p^r."""

    def _run(self, field, p, roots, rng, gamma, rounds):
        for _ in range(rounds):
            chosen = rng.sample(roots, rng.randint(1, min(3, len(roots))))
            mults = [p ** rng.randint(0, 2) if p > 1 else 1 for _ in chosen]
            f = Poly.constant(field, field.one())
            expected_value = GroupElement.zero(gamma.rank)
            far_dist = None
            far_mult = None
            for (root, dist), m in zip(chosen, mults):
                lin = linear_from_root(field, root)
                for _ in range(m):
                    f = f * lin
                expected_value = expected_value + dist.scale(m)
                if far_dist is None or dist > far_dist:
                    far_dist, far_mult = dist, m
            nu = MonomialValuation(field, field.zero(), gamma)
            assert nu.eval(f) == expected_value
            data = level(nu, f)
            assert data.epsilon == far_dist
            assert data.maximizers == {far_mult}

    def test_dyadic_roots(self):
        rng = random.Random(660913)
        roots = [(Fraction(3 * 2**m), ge(m)) for m in range(4)]
        self._run(Q2, 2, roots, rng, ge(10), 120)

    def test_triadic_roots(self):
        rng = random.Random(660914)
        roots = [(Fraction(2 * 3**m), ge(m)) for m in range(4)]
        self._run(Q3, 3, roots, rng, ge(10), 120)

    def test_residue_characteristic_zero_roots(self):
        rng = random.Random(660915)
        mf = MonomialField(0)
        roots = [(mf.monomial(Fraction(m, 2)), ge(Fraction(m, 2))) for m in range(4)]
        self._run(mf, 1, roots, rng, ge(10), 60)


class TestSSets:
    def test_key_itself(self):
        nu = MonomialValuation(Q2, Fraction(0), ge(1))
        key = from_rational_coeffs(Q2, [2, 1, 1])
        assert s_set(nu, key, key) == {1}
        d, lead = nu_degree(nu, key, key)
        assert d == 1 and lead == ge(0)

    def test_square_root_ladder(self):
        F = from_rational_coeffs(Q2, [-17, 0, 1])
        for center, gamma in sqrt17_ladder(4):
            nu = MonomialValuation(Q2, center, gamma)
            key = linear_from_root(Q2, center)
            assert s_set(nu, key, F) == {0, 1}
            d, lead = nu_degree(nu, key, F)
            assert d == 1 and lead == ge(1)

    def test_artin_schreier_ladder(self):
        mf = MonomialField(2)
        F = artin_schreier_poly(mf)
        for center, gamma in artin_schreier_ladder(mf, 4):
            nu = MonomialValuation(mf, center, gamma)
            key = linear_from_root(mf, center)
            assert s_set(nu, key, F) == {0, 2}
            d, lead = nu_degree(nu, key, F)
            assert d == 2 and lead == GroupElement.zero(1)

    def test_term_values_expose_the_expansion(self):
        center, gamma = sqrt17_ladder(2)[1]
        nu = MonomialValuation(Q2, center, gamma)
        key = linear_from_root(Q2, center)
        F = from_rational_coeffs(Q2, [-17, 0, 1])
        rows = expansion_term_values(nu, key, F)
        assert [r[0] for r in rows] == [0, 1, 2]
        assert rows[0][1] == gamma + ge(1)
        assert rows[1][1] == ge(1)
        assert rows[2][1] == ge(0)
        assert min(r[2] for r in rows) == gamma + ge(1)


class TestNewtonPolygon:
    def test_pure_power_is_a_single_point(self):
        nu = MonomialValuation(Q2, Fraction(0), ge(1))
        key = from_rational_coeffs(Q2, [2, 1, 1])
        pg = NewtonPolygon.of(nu, key, key * key)
        assert pg.cloud == ((2, ge(0)),)
        assert pg.hull == ((2, ge(0)),)
        assert pg.slopes() == []
        assert pg.on_hull(2)
        assert pg.support_indices(ge(1)) == {2}

    def test_square_root_ladder_polygon(self):
        F = from_rational_coeffs(Q2, [-17, 0, 1])
        for center, gamma in sqrt17_ladder(4):
            nu = MonomialValuation(Q2, center, gamma)
            key = linear_from_root(Q2, center)
            pg = NewtonPolygon.of(nu, key, F)
            assert pg.cloud == ((0, gamma + ge(1)), (1, ge(1)), (2, ge(0)))
            assert pg.hull == pg.cloud
            assert pg.slopes() == [ge(0) - gamma, ge(-1)]
            assert pg.support_indices(gamma) == {0, 1}
            assert pg.support_indices(gamma) == s_set(nu, key, F)

    def test_support_line_matches_s_set_generally(self):
        rng = random.Random(505873)
        nu = MonomialValuation(Q2, Fraction(1), ge(Fraction(3, 2)))
        key = from_rational_coeffs(Q2, [1, -2, 1])  # (x-1)^2
        for _ in range(80):
            f = rand_poly(rng, Q2, 6)
            if not nu.eval(f) < INFINITY:
                continue
            pg = NewtonPolygon.of(nu, key, f)
            gamma = nu.eval(key)
            assert pg.support_indices(gamma) == s_set(nu, key, f)

    def test_hull_lies_below_the_cloud(self):
        rng = random.Random(120778)
        mf = MonomialField(3)
        cases = [
            (Q2, MonomialValuation(Q2, Fraction(0), ge(2))),
            (mf, MonomialValuation(mf, mf.monomial(Fraction(1, 3)), ge(Fraction(1, 3)))),
        ]
        for field, nu in cases:
            x = Poly.variable(field)
            key = x * x - Poly.constant(field, field.from_int(2))
            for _ in range(120):
                f = rand_poly(rng, field, 7)
                rows = expansion_term_values(nu, key, f)
                if any(not row[1] < INFINITY for row in rows):
                    continue
                pg = NewtonPolygon.of(nu, key, f)
                assert set(pg.hull) <= set(pg.cloud)
                # Hull endpoints are the extreme cloud abscissas.
                assert pg.hull[0][0] == min(i for i, _ in pg.cloud)
                assert pg.hull[-1][0] == max(i for i, _ in pg.cloud)
                slopes = pg.slopes()
                assert all(a < b for a, b in zip(slopes, slopes[1:]))
                # Every cloud point sits on or above the hull chain.
                for i, y in pg.cloud:
                    if len(pg.hull) == 1:
                        assert (i, y) == pg.hull[0]
                        continue
                    (x1, y1), (x2, y2) = next(
                        (lo, hi)
                        for lo, hi in zip(pg.hull, pg.hull[1:])
                        if lo[0] <= i <= hi[0]
                    )
                    lhs = (y - y1).scale(x2 - x1)
                    rhs = (y2 - y1).scale(i - x1)
                    assert lhs >= rhs

    def test_infinite_digit_value_is_rejected(self):
        nu = MonomialValuation(Q2, Fraction(0), INFINITY)
        key = from_rational_coeffs(Q2, [0, 0, 1])  # x^2
        with pytest.raises(ValueError):
            NewtonPolygon.of(nu, key, Poly.variable(Q2))

    def test_rows_report_hull_membership(self):
        center, gamma = sqrt17_ladder(3)[2]
        nu = MonomialValuation(Q2, center, gamma)
        key = linear_from_root(Q2, center)
        F = from_rational_coeffs(Q2, [-17, 0, 1])
        rows = NewtonPolygon.of(nu, key, F).rows()
        assert [(i, flag) for i, _y, flag in rows] == [(0, True), (1, True), (2, True)]


class TestKeyWitnesses:
    def test_linear_keys_beat_constant_witnesses(self):
        nu = MonomialValuation(Q2, Fraction(0), ge(1))
        witnesses = [Poly.constant(Q2, Fraction(c)) for c in (1, 2, 3)]
        assert is_key_polynomial(nu, Poly.variable(Q2), witnesses)

    def test_limit_polynomial_is_never_a_key_along_the_ladder(self):
        mf = MonomialField(2)
        F = artin_schreier_poly(mf)
        ladder = artin_schreier_ladder(mf, 4)
        for i, (center, gamma) in enumerate(ladder):
            nu = MonomialValuation(mf, center, gamma)
            here = linear_from_root(mf, center)
            assert not is_key_polynomial(nu, F, [here])
            far = [linear_from_root(mf, c) for c, _g in ladder[:i]]
            if far:
                assert is_key_polynomial(nu, F, far)

    def test_guards(self):
        nu = MonomialValuation(Q2, Fraction(0), ge(1))
        with pytest.raises(ValueError):
            is_key_polynomial(nu, from_rational_coeffs(Q2, [1, 2]), [])
        with pytest.raises(ValueError):
            is_key_polynomial(nu, Poly.variable(Q2), [Poly.variable(Q2)])


class TestStability:
    def test_stable_value_means_stable_level(self):
        rng = random.Random(804211)
        ladder = sqrt17_ladder(4)
        hits = 0
        for i in range(3):
            lo = MonomialValuation(Q2, ladder[i][0], ladder[i][1])
            hi = MonomialValuation(Q2, ladder[i + 1][0], ladder[i + 1][1])
            for _ in range(80):
                f = rand_poly(rng, Q2, 4)
                if lo.eval(f) == hi.eval(f):
                    hits += 1
                    assert level(lo, f).epsilon == level(hi, f).epsilon
        assert hits > 50

    def test_larger_valuations_have_larger_levels(self):
        rng = random.Random(804212)
        ladder = [MonomialValuation(Q2, c, g) for c, g in sqrt17_ladder(4)]
        sample = [rand_poly(rng, Q2, 4) for _ in range(200)]
        for lo, hi in zip(ladder, ladder[1:]):
            assert all(lo.eval(f) <= hi.eval(f) for f in sample)
            for f in sample:
                assert level(lo, f).epsilon <= level(hi, f).epsilon
