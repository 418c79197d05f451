"""Cut descriptors: membership, classification, invariance, vertical bounds."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from limitkey.cuts import (
    BALL_MINUS,
    BALL_PLUS,
    BallCut,
    Classification,
    NON_BALL,
    SequenceCut,
    ValueSequence,
    ball_minus,
    ball_plus,
    crossing_witness,
    cut_leq,
    cut_lt,
    default_crossing_candidates,
    principal_minus,
    principal_plus,
    sequence_cut,
    standard_cut_catalog,
)
from limitkey.ordgroup import ConvexSubgroup, GroupElement


def ge(*coords):
    return GroupElement.of(*coords)


CATALOG = standard_cut_catalog()


def catalog_entry(label):
    for entry in CATALOG:
        if entry.label == label:
            return entry
    raise KeyError(label)


class TestMembership:
    def test_principal_minus_far_below(self):
        cut = principal_minus(ge(1, 0))
        assert cut.member(ge(0, 10**6)) == "L"

    def test_principal_minus_excludes_anchor(self):
        a = ge(2, -7)
        assert principal_minus(a).member(a) == "R"
        assert principal_plus(a).member(a) == "L"

    def test_geometric_sequence_cut(self):
        cut = catalog_entry("rank1 seq -1/2^i").cut
        assert cut.member(ge(0)) == "R"
        assert cut.member(ge(Fraction(-1, 1024))) == "L"

    def test_ball_membership_by_truncation(self):
        cut = ball_plus(ge(0, 0), ConvexSubgroup(2, 1))
        assert cut.member(ge(0, 10**9)) == "L"
        assert cut.member(ge(Fraction(1, 10**9), -5)) == "R"

    def test_improper_and_empty(self):
        assert catalog_entry("rank1 improper top").cut.member(ge(10**12)) == "L"
        assert catalog_entry("rank1 empty bottom").cut.member(ge(-(10**12))) == "R"


class TestClassification:
    def test_catalog_labels(self):
        for entry in CATALOG:
            c = entry.cut.classify()
            assert c.kind == entry.expected_kind, entry.label
            assert c.subgroup == entry.expected_subgroup, entry.label

    def test_vertical_drift_sequence_is_ball_plus(self):
        c = catalog_entry("rank2 seq (0,i)").cut.classify()
        assert c.kind == BALL_PLUS
        assert c.anchor == ge(0, 0)
        assert c.subgroup == ConvexSubgroup(2, 1)

    def test_falling_sequence_is_ball_minus(self):
        c = catalog_entry("rank2 seq (1,-1/i)").cut.classify()
        assert c.kind == BALL_MINUS
        assert c.anchor == ge(1, 0)
        assert c.subgroup.is_trivial()

    def test_sqrt2_cuts_are_non_ball(self):
        assert catalog_entry("rank1 sqrt2 truncations").cut.classify().kind == NON_BALL
        line = catalog_entry("rank2 sqrt2 line").cut.classify()
        assert line.kind == NON_BALL
        assert line.subgroup == ConvexSubgroup(2, 1)

    def test_declared_classification_consistent_with_oracle(self):
        """For ball-classified sequence cuts, the generator oracle must agree
        with the ball membership formula on a probe battery."""
        for entry in CATALOG:
            cut = entry.cut
            if not isinstance(cut, SequenceCut):
                continue
            form = cut.ball_form()
            if form is None:
                continue
            a, h, side = form
            ball = BallCut(a, h, side)
            probes = [cut.gen.element(i) for i in range(12)]
            probes += [a, a - ge(*([1] * cut.rank)), a + ge(*([1] * cut.rank))]
            for beta in probes:
                assert cut.member(beta) == ball.member(beta), (entry.label, str(beta))


def random_positive(rng, rank):
    while True:
        coords = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(rank))
        h = GroupElement(coords)
        if h > GroupElement.zero(rank):
            return h


def force_into(subgroup, h):
    return GroupElement(
        tuple(
            Fraction(0) if j < subgroup.index else c
            for j, c in enumerate(h.coords)
        )
    )


class TestInvarianceGroup:
    def test_examples(self):
        assert catalog_entry("rank2 ball (0+H_1)^+").cut.invariance_group() == ConvexSubgroup(2, 1)
        assert catalog_entry("rank2 seq (0,i)").cut.invariance_group() == ConvexSubgroup(2, 1)
        assert catalog_entry("rank1 seq 1-1/i").cut.invariance_group().is_trivial()

    def test_shift_invariance_sampling(self):
        """Positive h fixes the lower side exactly when h lies in the
        invariance group, probed on 100 random h per catalog cut."""
        rng = random.Random(40411)
        for entry in CATALOG:
            if entry.degenerate:
                continue
            cut = entry.cut
            hgroup = cut.invariance_group()
            for trial in range(100):
                h = random_positive(rng, cut.rank)
                if trial % 2 == 0 and not hgroup.is_trivial():
                    h = force_into(hgroup, h)
                    if h.is_zero():
                        continue
                probes = list(entry.lower_probes())
                form = cut.ball_form()
                if form is not None:
                    a, _h, side = form
                    probes.append(a - h.scale(Fraction(1, 2)))
                    if side == "+":
                        probes.append(a)
                if isinstance(cut, SequenceCut):
                    probes.extend(cut.gen.element(i) for i in range(40))
                probes = [x for x in probes if cut.member(x) == "L"]
                assert probes, entry.label
                stays_inside = all(cut.member(x + h) == "L" for x in probes)
                if hgroup.contains(h):
                    assert stays_inside, (entry.label, str(h))
                else:
                    assert not stays_inside, (entry.label, str(h))


class TestVerticalBoundedness:
    def test_vb_iff_not_ball_plus(self):
        for entry in CATALOG:
            vb, certificate = entry.cut.is_vertically_bounded()
            assert vb == entry.expected_vb, entry.label
            assert vb == (entry.cut.classify().kind != BALL_PLUS), entry.label
            assert certificate

    def test_crossing_witnesses_exist_for_vb_cuts(self):
        for entry in CATALOG:
            if not entry.expected_vb or entry.degenerate:
                continue
            cut = entry.cut
            for x in entry.lower_probes():
                for q in (Fraction(3, 2), Fraction(2), Fraction(10)):
                    cands = default_crossing_candidates(cut, x, q, horizon=40)
                    y = crossing_witness(cut, x, q, cands)
                    assert y is not None, (entry.label, str(x), q)

    def test_no_crossing_from_top_coset_of_ball_plus(self):
        for entry in CATALOG:
            if entry.expected_vb or entry.degenerate:
                continue
            form = entry.cut.ball_form()
            assert form is not None
            a, _h, _side = form
            for q in (Fraction(3, 2), Fraction(2), Fraction(10)):
                cands = default_crossing_candidates(entry.cut, a, q, horizon=40)
                cands += [a + ge(*([k] * entry.cut.rank)) for k in (-3, -1, 0)]
                assert crossing_witness(entry.cut, a, q, cands) is None, entry.label

    def test_witness_rejects_bad_arguments(self):
        cut = principal_minus(ge(0))
        with pytest.raises(ValueError):
            crossing_witness(cut, ge(0), Fraction(2), [])  # x not in lower side
        with pytest.raises(ValueError):
            crossing_witness(cut, ge(-1), Fraction(1, 2), [])  # q must exceed 1


class TestScaleShift:
    def test_shift_of_principal_minus(self):
        a = ge(4, -1)
        shifted = principal_minus(GroupElement.zero(2)).scale_shift(1, a)
        assert shifted.equivalent(principal_minus(a))

    def test_doubling_geometric_generator(self):
        cut = catalog_entry("rank1 seq -1/2^i").cut
        doubled = cut.scale_shift(2, ge(0))
        assert doubled.gen.element(3) == ge(Fraction(-1, 8))
        for beta in (ge(0), ge(Fraction(-1, 3)), ge(Fraction(1, 100)), ge(-2)):
            assert doubled.member(beta) == cut.member(beta)
        c = doubled.classify()
        assert c.kind == BALL_MINUS and c.anchor == ge(0)

    def test_invariance_group_preserved_by_shift(self):
        rng = random.Random(77)
        for entry in CATALOG:
            cut = entry.cut
            a = GroupElement(
                tuple(Fraction(rng.randint(-5, 5)) for _ in range(cut.rank))
            )
            shifted = cut.scale_shift(1, a)
            assert shifted.invariance_group() == cut.invariance_group(), entry.label
            assert shifted.classify().kind == cut.classify().kind, entry.label

    def test_shift_moves_membership(self):
        cut = ball_minus(ge(0, 0), ConvexSubgroup(2, 1))
        shifted = cut.scale_shift(3, ge(1, 1))
        # lower side is now {beta : beta_1 < 1}
        assert shifted.member(ge(1, 10**6)) == "R"
        assert shifted.member(ge(Fraction(9, 10), -(10**6))) == "L"

    def test_scale_must_be_positive_integer(self):
        with pytest.raises(ValueError):
            principal_plus(ge(0)).scale_shift(0, ge(0))


class TestNegation:
    def test_ball_negation_swaps_sides(self):
        rng = random.Random(90901)
        for entry in CATALOG:
            cut = entry.cut
            if not isinstance(cut, BallCut):
                continue
            neg = cut.negate()
            assert neg.invariance_group() == cut.invariance_group()
            for _ in range(50):
                beta = GroupElement(
                    tuple(Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for _ in range(cut.rank))
                )
                assert (neg.member(-beta) == "L") == (cut.member(beta) == "R"), entry.label

    def test_sequence_negation_unsupported(self):
        cut = catalog_entry("rank1 seq -1/2^i").cut
        with pytest.raises(NotImplementedError):
            cut.negate()


def brute_force_leq(c1, c2, witnesses):
    return all(c2.member(w) == "L" for w in witnesses if c1.member(w) == "L")


class TestCutOrder:
    def test_rank_one_chain(self):
        cuts = [
            principal_plus(ge(0)),
            principal_minus(ge(1)),
            principal_plus(ge(1)),
            principal_minus(ge(2)),
        ]
        for i, c1 in enumerate(cuts):
            for j, c2 in enumerate(cuts):
                assert cut_leq(c1, c2) == (i <= j)
        assert cut_lt(cuts[0], cuts[1])
        assert not cut_lt(cuts[1], cuts[1])

    def test_mixed_level_examples(self):
        coarse = ball_plus(ge(0, 0), ConvexSubgroup(2, 1))
        fine = principal_minus(ge(0, 100))
        assert cut_leq(fine, coarse)
        assert not cut_leq(coarse, fine)

    def test_agrees_with_witness_search(self):
        """cut_leq must match containment of lower sides; validated against a
        witness grid rich enough to separate every pair drawn from it."""
        subgroups = [ConvexSubgroup(2, k) for k in range(3)]
        anchors = [ge(0, 0), ge(0, 1), ge(1, 0), ge(1, -1), ge(Fraction(1, 2), 2)]
        cuts = [
            BallCut(a, h, side)
            for a in anchors
            for h in subgroups
            for side in ("+", "-")
        ]
        unit = [ge(1, 0), ge(0, 1)]
        for c1 in cuts:
            for c2 in cuts:
                mid = (c1.anchor + c2.anchor).scale(Fraction(1, 2))
                witnesses = []
                for c in (c1.anchor, c2.anchor, mid):
                    witnesses.append(c)
                    for e in unit:
                        for mu in (Fraction(-100), Fraction(-1), Fraction(-1, 2),
                                   Fraction(1, 2), Fraction(1), Fraction(100)):
                            witnesses.append(c + e.scale(mu))
                got = cut_leq(c1, c2)
                seen = brute_force_leq(c1, c2, witnesses)
                assert got == seen, (c1.describe(), c2.describe())

    def test_reflexive_and_transitive_on_catalog_ball_forms(self):
        forms = [e.cut for e in CATALOG if e.cut.ball_form() is not None and e.cut.rank == 2]
        for c1 in forms:
            assert cut_leq(c1, c1)
            for c2 in forms:
                for c3 in forms:
                    if cut_leq(c1, c2) and cut_leq(c2, c3):
                        assert cut_leq(c1, c3)

    def test_non_ball_comparison_rejected(self):
        sqrt2 = catalog_entry("rank1 sqrt2 truncations").cut
        with pytest.raises(ValueError):
            cut_leq(sqrt2, principal_plus(ge(2)))


class TestRendering:
    def test_describe_strings(self):
        assert principal_plus(ge(3)).describe() == "(3)^+"
        assert ball_minus(ge(0, 0), ConvexSubgroup(2, 1)).describe() == "((0, 0)+H_1)^-"

    def test_machine_form_variant_tags(self):
        assert principal_plus(ge(3)).to_json()["variant"] == "BallPlus"
        assert ball_minus(ge(0), ConvexSubgroup(1, 0)).to_json()["variant"] == "BallMinus"
        data = catalog_entry("rank1 sqrt2 truncations").cut.to_json()
        assert data["variant"] == "SequenceGenerated"
        assert data["classified"]["kind"] == NON_BALL

    def test_classification_validation(self):
        with pytest.raises(ValueError):
            Classification("weird", None, ConvexSubgroup(1, 0))
        with pytest.raises(ValueError):
            Classification(BALL_PLUS, None, ConvexSubgroup(1, 0))
        with pytest.raises(ValueError):
            Classification(NON_BALL, ge(0), ConvexSubgroup(1, 0))


class TestCatalogShape:
    def test_catalog_spans_requirements(self):
        assert len(CATALOG) >= 10
        ranks = {e.cut.rank for e in CATALOG}
        assert ranks == {1, 2}
        kinds = {e.expected_kind for e in CATALOG}
        assert kinds == {BALL_PLUS, BALL_MINUS, NON_BALL}
        # both sides of every convex subgroup in each rank
        seen = {
            (e.cut.rank, e.expected_subgroup.index, e.expected_kind)
            for e in CATALOG
            if e.expected_kind != NON_BALL
        }
        for rank in (1, 2):
            for k in range(rank + 1):
                assert (rank, k, BALL_PLUS) in seen
                assert (rank, k, BALL_MINUS) in seen
