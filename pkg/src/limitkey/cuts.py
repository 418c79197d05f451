"""Cuts in finite-rank ordered groups, represented by finite descriptors.

A cut splits the group into an initial segment ``L`` and its complement ``R``
with ``L < R``.  We never materialize either side; a descriptor answers the
membership question "which side is beta on?" exactly:

* ``BallCut(a, H, side)`` is the cut sitting immediately above (``'+'``) or
  below (``'-'``) the ball ``a + H``, for a convex subgroup ``H``.  Principal
  cuts ``a^+`` / ``a^-`` are ball cuts with trivial ``H``; the improper cut
  (everything on the left) is ``(a + whole group)^+``.
* ``SequenceCut(gen)`` is generated by a strictly increasing closed-form
  sequence; its lower side is the initial segment spanned by the terms, and
  the generator carries an exact "is some term >= beta?" oracle plus a
  declared classification (ball data or non-ball), because no finite sample
  can distinguish ball from non-ball.

The classification of a cut is the triple (kind, anchor, subgroup): the cut
equals ``(anchor + subgroup)^±`` for ball kinds, while a non-ball cut carries
only its invariance group.  The invariance group of a cut is the largest
convex subgroup whose shifts fix the lower side; for a ball cut it is the
ball's own subgroup.

A cut is vertically bounded when its lower side keeps growing inside the top
coset: for every ``x`` in ``L`` and rational ``q > 1`` some ``y`` in ``L`` has
``x + q(y - x)`` on the right side.  Exactly the ``'+'``-side ball cuts fail
this; everything else admits a vertical supremum class, which we report as
the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

from .ordgroup import ConvexSubgroup, GroupElement, RankMismatch

BALL_PLUS = "ball_plus"
BALL_MINUS = "ball_minus"
NON_BALL = "non_ball"

_SIDE_KIND = {"+": BALL_PLUS, "-": BALL_MINUS}


@dataclass(frozen=True)
class Classification:
    """Result of classifying a cut: ball data, or non-ball with invariance group."""

    kind: str
    anchor: Optional[GroupElement]
    subgroup: ConvexSubgroup

    def __post_init__(self):
        if self.kind not in (BALL_PLUS, BALL_MINUS, NON_BALL):
            raise ValueError(f"unknown cut kind {self.kind!r}")
        if self.kind == NON_BALL:
            if self.anchor is not None:
                raise ValueError("non-ball classification carries no anchor")
        elif self.anchor is None:
            raise ValueError(f"{self.kind} classification needs an anchor")

    @property
    def side(self) -> Optional[str]:
        if self.kind == BALL_PLUS:
            return "+"
        if self.kind == BALL_MINUS:
            return "-"
        return None

    def describe(self) -> str:
        if self.kind == NON_BALL:
            return f"non-ball (invariance group {self.subgroup})"
        if self.subgroup.is_trivial():
            return f"{self.anchor}^{self.side}"
        return f"({self.anchor}+{self.subgroup})^{self.side}"


@dataclass(frozen=True)
class ValueSequence:
    """Closed-form strictly increasing sequence with an exact bound oracle.

    ``element(i)`` is the i-th term (i >= 0); ``exists_ge(beta)`` decides
    whether some term is >= beta.  ``declared`` is the catalog-supplied
    classification of the generated cut; it is validated by consistency
    checks, never inferred from samples.
    """

    label: str
    rank: int
    element: Callable[[int], GroupElement]
    exists_ge: Callable[[GroupElement], bool]
    declared: Classification


class CutDescriptor:
    """Common interface of ball and sequence-generated cuts."""

    rank: int

    def member(self, beta: GroupElement) -> str:
        """'L' if beta lies in the lower side, else 'R'."""
        raise NotImplementedError

    def classify(self) -> Classification:
        raise NotImplementedError

    def invariance_group(self) -> ConvexSubgroup:
        return self.classify().subgroup

    def ball_form(self) -> Optional[tuple[GroupElement, ConvexSubgroup, str]]:
        """(anchor, subgroup, side) when the cut is (anchor+subgroup)^side."""
        c = self.classify()
        if c.kind == NON_BALL:
            return None
        return (c.anchor, c.subgroup, c.side)

    def is_vertically_bounded(self) -> tuple[bool, str]:
        """Whether a vertical supremum class exists, with a printable certificate."""
        c = self.classify()
        if c.kind == BALL_PLUS:
            return (False, f"lower side tops out at the coset {c.anchor}+{c.subgroup}")
        if c.kind == BALL_MINUS:
            return (True, f"vertical supremum class {c.anchor}+{c.subgroup}")
        assert isinstance(self, SequenceCut)
        return (True, f"vertical supremum class realized by generator '{self.gen.label}'")

    def scale_shift(self, n: int, a: GroupElement) -> "CutDescriptor":
        """The cut a + n*self, for an integer n >= 1.

        The map x -> a + n*x is an order isomorphism fixing every convex
        subgroup, so ball data shifts along and the invariance group is
        unchanged.
        """
        raise NotImplementedError

    def negate(self) -> "CutDescriptor":
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def _check_rank(self, beta: GroupElement) -> None:
        if beta.rank != self.rank:
            raise RankMismatch(f"rank {beta.rank} element against rank {self.rank} cut")


@dataclass(frozen=True)
class BallCut(CutDescriptor):
    anchor: GroupElement
    subgroup: ConvexSubgroup
    side: str

    def __post_init__(self):
        if self.side not in ("+", "-"):
            raise ValueError(f"side must be '+' or '-', got {self.side!r}")
        if self.anchor.rank != self.subgroup.rank:
            raise RankMismatch(
                f"anchor rank {self.anchor.rank} vs subgroup rank {self.subgroup.rank}"
            )

    @property
    def rank(self) -> int:
        return self.anchor.rank

    def member(self, beta: GroupElement) -> str:
        self._check_rank(beta)
        k = self.subgroup.index
        b, a = beta.truncate(k), self.anchor.truncate(k)
        if self.side == "+":
            return "L" if b <= a else "R"
        return "L" if b < a else "R"

    def classify(self) -> Classification:
        return Classification(_SIDE_KIND[self.side], self.anchor, self.subgroup)

    def scale_shift(self, n: int, a: GroupElement) -> "BallCut":
        if not (isinstance(n, int) and n >= 1):
            raise ValueError(f"scale factor must be an integer >= 1, got {n!r}")
        self._check_rank(a)
        return BallCut(a + self.anchor.scale(n), self.subgroup, self.side)

    def negate(self) -> "BallCut":
        flipped = "-" if self.side == "+" else "+"
        return BallCut(-self.anchor, self.subgroup, flipped)

    def equivalent(self, other: "CutDescriptor") -> bool:
        """Same cut as a set partition (anchors may differ within the ball)."""
        mine, theirs = self.ball_form(), other.ball_form()
        if theirs is None:
            return False
        a, h, s = mine
        b, k, t = theirs
        return s == t and h == k and k.contains(a - b)

    def describe(self) -> str:
        return self.classify().describe()

    def to_json(self):
        variant = "BallPlus" if self.side == "+" else "BallMinus"
        return {
            "variant": variant,
            "anchor": str(self.anchor),
            "subgroup": str(self.subgroup),
        }


@dataclass(frozen=True)
class SequenceCut(CutDescriptor):
    gen: ValueSequence

    @property
    def rank(self) -> int:
        return self.gen.rank

    def member(self, beta: GroupElement) -> str:
        self._check_rank(beta)
        return "L" if self.gen.exists_ge(beta) else "R"

    def classify(self) -> Classification:
        return self.gen.declared

    def scale_shift(self, n: int, a: GroupElement) -> "SequenceCut":
        if not (isinstance(n, int) and n >= 1):
            raise ValueError(f"scale factor must be an integer >= 1, got {n!r}")
        self._check_rank(a)
        gen = self.gen
        inv = Fraction(1, n)

        def element(i: int, _g=gen, _a=a, _n=n) -> GroupElement:
            return _a + _g.element(i).scale(_n)

        def exists_ge(beta: GroupElement, _g=gen, _a=a, _q=inv) -> bool:
            return _g.exists_ge((beta - _a).scale(_q))

        declared = gen.declared
        if declared.kind != NON_BALL:
            declared = replace(declared, anchor=a + declared.anchor.scale(n))
        label = f"{a}+{n}*({gen.label})"
        return SequenceCut(ValueSequence(label, gen.rank, element, exists_ge, declared))

    def negate(self) -> "CutDescriptor":
        raise NotImplementedError(
            "negation of a sequence-generated cut would need a decreasing "
            "generator; only ball cuts support negate()"
        )

    def describe(self) -> str:
        return f"cut<{self.gen.label}> classified {self.classify().describe()}"

    def to_json(self):
        c = self.classify()
        return {
            "variant": "SequenceGenerated",
            "generator": self.gen.label,
            "classified": {
                "kind": c.kind,
                "anchor": None if c.anchor is None else str(c.anchor),
                "subgroup": str(c.subgroup),
            },
        }


def principal_plus(a: GroupElement) -> BallCut:
    return BallCut(a, ConvexSubgroup.trivial(a.rank), "+")


def principal_minus(a: GroupElement) -> BallCut:
    return BallCut(a, ConvexSubgroup.trivial(a.rank), "-")


def ball_plus(a: GroupElement, subgroup: ConvexSubgroup) -> BallCut:
    return BallCut(a, subgroup, "+")


def ball_minus(a: GroupElement, subgroup: ConvexSubgroup) -> BallCut:
    return BallCut(a, subgroup, "-")


def sequence_cut(gen: ValueSequence) -> SequenceCut:
    return SequenceCut(gen)


def cut_leq(c1: CutDescriptor, c2: CutDescriptor) -> bool:
    """Whether the lower side of c1 is contained in the lower side of c2.

    Decided exactly from the ball forms.  With L(a,H_k,+) = {b : b_{:k} <=
    a_{:k}} and L(a,H_k,-) = {b : b_{:k} < a_{:k}}, containment reduces to a
    comparison of truncated anchors at the coarser of the two levels, with
    the side flags breaking ties:

    * equal levels: strict anchor inequality, or equality when c1 is the
      '-' side or c2 is the '+' side;
    * c1 finer (k1 > k2): c1's lower side reaches the coset of its anchor at
      level k2, so compare anchors at level k2 with c2's side on ties;
    * c1 coarser (k1 < k2): c1's lower side contains whole cosets of H_{k1},
      so c2's anchor must exceed c1's at level k1 ('+' side of c1), or at
      least reach it ('-' side).
    """
    f1, f2 = c1.ball_form(), c2.ball_form()
    if f1 is None or f2 is None:
        raise ValueError("cut_leq needs ball-classified cuts on both sides")
    a, h1, s1 = f1
    b, h2, s2 = f2
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} cut against rank {b.rank} cut")
    k1, k2 = h1.index, h2.index
    if k1 == k2:
        p, q = a.truncate(k1), b.truncate(k1)
        return p < q or (p == q and (s1 == "-" or s2 == "+"))
    if k1 > k2:
        p, q = a.truncate(k2), b.truncate(k2)
        return p < q or (p == q and s2 == "+")
    p, q = a.truncate(k1), b.truncate(k1)
    return q > p if s1 == "+" else q >= p


def cut_lt(c1: CutDescriptor, c2: CutDescriptor) -> bool:
    return cut_leq(c1, c2) and not cut_leq(c2, c1)


def crossing_witness(
    cut: CutDescriptor,
    x: GroupElement,
    q: Fraction,
    candidates: list[GroupElement],
) -> Optional[GroupElement]:
    """A candidate y in the lower side with x + q(y-x) on the right side.

    This is the vertical-boundedness inequality in oracle form: q(y-x)
    exceeds every element of L - x exactly when x + q(y-x) lands in R.
    Returns the first witness among the candidates, or None.
    """
    if cut.member(x) != "L":
        raise ValueError("crossing witness requires x in the lower side")
    if not q > 1:
        raise ValueError("vertical boundedness concerns rationals q > 1")
    for y in candidates:
        if cut.member(y) != "L":
            continue
        if cut.member(x + (y - x).scale(q)) == "R":
            return y
    return None


def default_crossing_candidates(
    cut: CutDescriptor, x: GroupElement, q: Fraction, horizon: int = 24
) -> list[GroupElement]:
    """Candidate y's for crossing_witness: near-anchor points or generator terms."""
    out: list[GroupElement] = []
    form = cut.ball_form()
    if form is not None:
        a, _h, _side = form
        s = (1 + 1 / Fraction(q)) / 2
        out.extend([x + (a - x).scale(s), x + (a - x).scale(Fraction(9, 10))])
    if isinstance(cut, SequenceCut):
        out.extend(cut.gen.element(i) for i in range(horizon))
    return out


@dataclass(frozen=True)
class LabeledCut:
    """Catalog entry: a cut with its hand-derived expected labels."""

    label: str
    cut: CutDescriptor
    expected_kind: str
    expected_subgroup: ConvexSubgroup
    expected_vb: bool
    degenerate: bool = False  # empty or full lower side; samplers skip it

    def lower_probes(self) -> list[GroupElement]:
        """A few elements of the lower side, including near-top ones."""
        if self.degenerate and isinstance(self.cut, BallCut):
            if self.cut.side == "-" and self.cut.subgroup.is_whole():
                return []  # empty lower side
        if isinstance(self.cut, SequenceCut):
            return [self.cut.gen.element(i) for i in range(8)]
        assert isinstance(self.cut, BallCut)
        a, rank = self.cut.anchor, self.cut.rank
        ones = GroupElement.of(*([1] * rank))
        probes = [a - ones, a - ones.scale(Fraction(1, 7))]
        if self.cut.side == "+":
            probes.append(a)
            if not self.cut.subgroup.is_trivial():
                inside = GroupElement(
                    tuple(
                        Fraction(0) if j < self.cut.subgroup.index else Fraction(5)
                        for j in range(rank)
                    )
                )
                probes.extend([a + inside, a - inside])
        return [p for p in probes if self.cut.member(p) == "L"]


def _sqrt2_convergents() -> Callable[[int], Fraction]:
    """Pell-equation convergents below sqrt(2): 1, 7/5, 41/29, 239/169, ..."""

    def term(i: int) -> Fraction:
        p, q = 1, 1
        for _ in range(i):
            p, q = 3 * p + 4 * q, 2 * p + 3 * q
        return Fraction(p, q)

    return term


def _below_sqrt2(b: Fraction) -> bool:
    return b <= 0 or b * b < 2


def standard_cut_catalog() -> list[LabeledCut]:
    """Hand-labeled cuts spanning ranks 1 and 2: both sides of every convex
    subgroup, sequence-generated ball cuts, and non-ball cuts."""
    entries: list[LabeledCut] = []
    r1_whole = ConvexSubgroup.whole(1)
    r1_triv = ConvexSubgroup.trivial(1)
    r2_whole = ConvexSubgroup.whole(2)
    r2_mid = ConvexSubgroup(2, 1)
    r2_triv = ConvexSubgroup.trivial(2)
    three = GroupElement.of(3)
    zero1 = GroupElement.zero(1)
    zero2 = GroupElement.zero(2)

    entries.append(
        LabeledCut("rank1 principal 3^+", principal_plus(three), BALL_PLUS, r1_triv, False)
    )
    entries.append(
        LabeledCut("rank1 principal 3^-", principal_minus(three), BALL_MINUS, r1_triv, True)
    )
    entries.append(
        LabeledCut(
            "rank1 improper top", ball_plus(zero1, r1_whole), BALL_PLUS, r1_whole, False,
            degenerate=True,
        )
    )
    entries.append(
        LabeledCut(
            "rank1 empty bottom", ball_minus(zero1, r1_whole), BALL_MINUS, r1_whole, True,
            degenerate=True,
        )
    )

    def geom_term(i: int) -> GroupElement:
        return GroupElement.of(Fraction(-1, 2 ** (i + 1)))

    def geom_ge(beta: GroupElement) -> bool:
        return beta.coords[0] < 0

    entries.append(
        LabeledCut(
            "rank1 seq -1/2^i",
            sequence_cut(
                ValueSequence(
                    "-1/2^i", 1, geom_term, geom_ge,
                    Classification(BALL_MINUS, zero1, r1_triv),
                )
            ),
            BALL_MINUS, r1_triv, True,
        )
    )

    def harmonic_term(i: int) -> GroupElement:
        return GroupElement.of(1 - Fraction(1, i + 2))

    def harmonic_ge(beta: GroupElement) -> bool:
        return beta.coords[0] < 1

    entries.append(
        LabeledCut(
            "rank1 seq 1-1/i",
            sequence_cut(
                ValueSequence(
                    "1-1/i", 1, harmonic_term, harmonic_ge,
                    Classification(BALL_MINUS, GroupElement.of(1), r1_triv),
                )
            ),
            BALL_MINUS, r1_triv, True,
        )
    )

    def unbounded_term(i: int) -> GroupElement:
        return GroupElement.of(i)

    entries.append(
        LabeledCut(
            "rank1 seq i (cofinal)",
            sequence_cut(
                ValueSequence(
                    "i", 1, unbounded_term, lambda beta: True,
                    Classification(BALL_PLUS, zero1, r1_whole),
                )
            ),
            BALL_PLUS, r1_whole, False,
        )
    )

    conv = _sqrt2_convergents()

    def sqrt2_term(i: int) -> GroupElement:
        return GroupElement.of(conv(i))

    def sqrt2_ge(beta: GroupElement) -> bool:
        return _below_sqrt2(beta.coords[0])

    entries.append(
        LabeledCut(
            "rank1 sqrt2 truncations",
            sequence_cut(
                ValueSequence(
                    "sqrt2 convergents", 1, sqrt2_term, sqrt2_ge,
                    Classification(NON_BALL, None, r1_triv),
                )
            ),
            NON_BALL, r1_triv, True,
        )
    )

    anchor2 = GroupElement.of(1, -1)
    entries.append(
        LabeledCut("rank2 principal (1,-1)^+", principal_plus(anchor2), BALL_PLUS, r2_triv, False)
    )
    entries.append(
        LabeledCut("rank2 principal (1,-1)^-", principal_minus(anchor2), BALL_MINUS, r2_triv, True)
    )
    entries.append(
        LabeledCut("rank2 ball (0+H_1)^+", ball_plus(zero2, r2_mid), BALL_PLUS, r2_mid, False)
    )
    entries.append(
        LabeledCut("rank2 ball (0+H_1)^-", ball_minus(zero2, r2_mid), BALL_MINUS, r2_mid, True)
    )
    entries.append(
        LabeledCut(
            "rank2 improper top", ball_plus(zero2, r2_whole), BALL_PLUS, r2_whole, False,
            degenerate=True,
        )
    )
    entries.append(
        LabeledCut(
            "rank2 empty bottom", ball_minus(zero2, r2_whole), BALL_MINUS, r2_whole, True,
            degenerate=True,
        )
    )

    def vert_term(i: int) -> GroupElement:
        return GroupElement.of(0, i)

    def vert_ge(beta: GroupElement) -> bool:
        return beta.coords[0] <= 0

    entries.append(
        LabeledCut(
            "rank2 seq (0,i)",
            sequence_cut(
                ValueSequence(
                    "(0,i)", 2, vert_term, vert_ge,
                    Classification(BALL_PLUS, zero2, r2_mid),
                )
            ),
            BALL_PLUS, r2_mid, False,
        )
    )

    def drop_term(i: int) -> GroupElement:
        return GroupElement.of(1, Fraction(-1, i + 1))

    def drop_ge(beta: GroupElement) -> bool:
        b1, b2 = beta.coords
        return b1 < 1 or (b1 == 1 and b2 < 0)

    entries.append(
        LabeledCut(
            "rank2 seq (1,-1/i)",
            sequence_cut(
                ValueSequence(
                    "(1,-1/i)", 2, drop_term, drop_ge,
                    Classification(BALL_MINUS, GroupElement.of(1, 0), r2_triv),
                )
            ),
            BALL_MINUS, r2_triv, True,
        )
    )

    def line_term(i: int) -> GroupElement:
        return GroupElement.of(conv(i), 0)

    def line_ge(beta: GroupElement) -> bool:
        return _below_sqrt2(beta.coords[0])

    entries.append(
        LabeledCut(
            "rank2 sqrt2 line",
            sequence_cut(
                ValueSequence(
                    "(sqrt2 convergents, 0)", 2, line_term, line_ge,
                    Classification(NON_BALL, None, r2_mid),
                )
            ),
            NON_BALL, r2_mid, True,
        )
    )
    return entries
