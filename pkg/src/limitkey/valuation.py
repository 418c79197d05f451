"""Valuations on K[x]: monomial and augmented nodes, truncation, level data,
S-sets, and Newton polygons.

A valuation is an immutable evaluation tree.  The leaf form is a monomial
valuation: expand at a center a and read ``min(v(c_i) + i*gamma)``.  The
inner form augments a base valuation by a monic polynomial Q and a value
gamma, evaluating ``min(base(f_i) + i*gamma)`` over the Q-expansion digits.
Truncating any valuation at Q is the same mechanism with gamma defaulting to
the value of Q itself; these truncated functions are treated as functions
and their multiplicativity is checked by tests, never assumed.

The level of f under nu is the largest drop rate toward a derivative:
``max (nu(f) - nu(D_s f)) / s`` over positive s, with the argmax set
recorded in full.  Constants sit at level minus infinity; polynomials of
infinite value at plus infinity.

The Newton polygon of (nu, Q, f) plots each expansion digit's value against
its index and carries the exact lower convex hull; the support line of slope
``-gamma`` touches exactly the indices minimizing ``value + index*gamma``,
which is the S-set of the pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .ordgroup import (
    GroupElement,
    INFINITY,
    NEG_INFINITY,
    Value,
    is_finite,
)
from .polyring import Poly, linear_from_root


def _scaled(gamma: Value, i: int, rank: int) -> Value:
    """i * gamma with 0 * infinity = 0 (an empty sum of terms)."""
    if i == 0:
        return GroupElement.zero(rank)
    return gamma.scale(i) if gamma is INFINITY else gamma.scale(Fraction(i))


class PolyValuation:
    """A valuation (or truncated function) on polynomials over a fixed field."""

    def value_rank(self) -> int:
        raise NotImplementedError

    @property
    def field(self):
        raise NotImplementedError

    def eval(self, f: Poly) -> Value:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def _check_gamma(self, gamma: Value) -> None:
        if gamma is INFINITY:
            return
        if isinstance(gamma, GroupElement) and gamma.rank == self.value_rank():
            return
        raise ValueError(
            f"gamma must be a rank-{self.value_rank()} group element or infinity"
        )


@dataclass(frozen=True)
class MonomialValuation(PolyValuation):
    """nu(sum c_i (x-a)^i) = min(v(c_i) + i*gamma)."""

    base_field: object
    center: object
    gamma: Value

    def __post_init__(self):
        self._check_gamma(self.gamma)

    def value_rank(self) -> int:
        return self.base_field.rank

    @property
    def field(self):
        return self.base_field

    def eval(self, f: Poly) -> Value:
        if f.is_zero():
            return INFINITY
        K = self.base_field
        best: Value = INFINITY
        for i, digit in enumerate(f.q_expansion(linear_from_root(K, self.center))):
            if digit.is_zero():
                continue
            term = K.val(digit.constant_value()) + _scaled(self.gamma, i, self.value_rank())
            if term < best:
                best = term
        return best

    def describe(self) -> str:
        return f"monomial(center={self.base_field.format(self.center)}, gamma={self.gamma})"


@dataclass(frozen=True)
class AugmentedValuation(PolyValuation):
    """nu(f) = min(base(f_i) + i*gamma) over the Q-expansion of f."""

    base: PolyValuation
    key: Poly
    gamma: Value

    def __post_init__(self):
        if not self.key.is_monic() or self.key.degree < 1:
            raise ValueError("augmentation key must be monic of degree >= 1")
        self._check_gamma(self.gamma)
        base_value = self.base.eval(self.key)
        if self.gamma < base_value:
            raise ValueError(
                f"gamma {self.gamma} below the base value {base_value} of the key"
            )

    def value_rank(self) -> int:
        return self.base.value_rank()

    @property
    def field(self):
        return self.base.field

    def eval(self, f: Poly) -> Value:
        if f.is_zero():
            return INFINITY
        best: Value = INFINITY
        for i, digit in enumerate(f.q_expansion(self.key)):
            if digit.is_zero():
                continue
            term = self.base.eval(digit) + _scaled(self.gamma, i, self.value_rank())
            if term < best:
                best = term
        return best

    def describe(self) -> str:
        return f"augmented(key={self.key.format()}, gamma={self.gamma})"


def truncation(nu: PolyValuation, key: Poly, gamma: Optional[Value] = None) -> AugmentedValuation:
    """The truncated function nu_Q, or a proper augmentation when gamma > nu(Q).

    With the default gamma = nu(Q) the result evaluates
    ``min over i of nu(f_i) + i*nu(Q)``, the truncation of nu at Q.
    """
    if gamma is None:
        gamma = nu.eval(key)
    return AugmentedValuation(nu, key, gamma)


@dataclass(frozen=True)
class LevelData:
    """Level value and its argmax derivative orders."""

    epsilon: Value
    maximizers: frozenset[int]


def level(nu: PolyValuation, f: Poly) -> LevelData:
    """The level of f: max (nu(f) - nu(D_s f))/s with the full argmax set."""
    if f.degree < 1:
        return LevelData(NEG_INFINITY, frozenset())
    vf = nu.eval(f)
    if vf is INFINITY:
        return LevelData(INFINITY, frozenset())
    best: Value = NEG_INFINITY
    argmax: list[int] = []
    for s in range(1, f.degree + 1):
        ds = f.hasse_schmidt(s)
        if ds.is_zero():
            continue
        vds = nu.eval(ds)
        ratio: Value = (vf - vds).scale(Fraction(1, s)) if is_finite(vds) else NEG_INFINITY
        if ratio > best:
            best, argmax = ratio, [s]
        elif ratio == best:
            argmax.append(s)
    return LevelData(best, frozenset(argmax))


def expansion_term_values(nu: PolyValuation, key: Poly, f: Poly,
                          gamma: Optional[Value] = None) -> list[tuple[int, Value, Value]]:
    """(index, digit value nu(f_i), term value nu(f_i) + i*gamma) for nonzero digits."""
    if gamma is None:
        gamma = nu.eval(key)
    rank = nu.value_rank()
    out = []
    for i, digit in enumerate(f.q_expansion(key)):
        if digit.is_zero():
            continue
        v = nu.eval(digit)
        out.append((i, v, v + _scaled(gamma, i, rank)))
    return out


def s_set(nu: PolyValuation, key: Poly, f: Poly) -> set[int]:
    """Indices of the Q-expansion attaining the minimal term value."""
    terms = expansion_term_values(nu, key, f)
    if not terms:
        return set()
    mn = min(t[2] for t in terms)
    return {i for i, _v, t in terms if t == mn}


def nu_degree(nu: PolyValuation, key: Poly, f: Poly) -> tuple[int, Value]:
    """(d, leading value): d = max of the S-set, value = nu(f_{Q,d})."""
    terms = expansion_term_values(nu, key, f)
    if not terms:
        raise ValueError("nu-degree of the zero polynomial is undefined")
    mn = min(t[2] for t in terms)
    d = max(i for i, _v, t in terms if t == mn)
    lead = next(v for i, v, _t in terms if i == d)
    return d, lead


@dataclass(frozen=True)
class NewtonPolygon:
    """Cloud of (index, digit value) points with its exact lower convex hull."""

    cloud: tuple[tuple[int, GroupElement], ...]
    hull: tuple[tuple[int, GroupElement], ...]

    @staticmethod
    def of(
        nu: PolyValuation, key: Poly, f: Poly, *, skip_infinite: bool = False
    ) -> "NewtonPolygon":
        pts = []
        for i, v, _t in expansion_term_values(nu, key, f):
            if not is_finite(v):
                if skip_infinite:
                    continue
                raise ValueError(
                    f"digit {i} has infinite value; the polygon needs finite digit values"
                )
            pts.append((i, v))
        return NewtonPolygon(tuple(pts), _lower_hull(pts))

    def on_hull(self, i: int) -> bool:
        """Whether the cloud point at abscissa i lies on the hull boundary."""
        point = next((p for p in self.cloud if p[0] == i), None)
        if point is None:
            raise KeyError(f"no cloud point at index {i}")
        for (x1, y1), (x2, y2) in zip(self.hull, self.hull[1:]):
            if x1 <= i <= x2:
                if _cross((x1, y1), (x2, y2), point).is_zero():
                    return True
        return point in self.hull

    def support_indices(self, gamma: Value) -> set[int]:
        """Indices touched by the support line of slope -gamma."""
        vals = [(i, y + _scaled(gamma, i, y.rank)) for i, y in self.cloud]
        mn = min(t for _i, t in vals)
        return {i for i, t in vals if t == mn}

    def slopes(self) -> list[GroupElement]:
        """Edge slopes, strictly increasing left to right."""
        out = []
        for (x1, y1), (x2, y2) in zip(self.hull, self.hull[1:]):
            out.append((y2 - y1).scale(Fraction(1, x2 - x1)))
        return out

    def rows(self) -> list[tuple[int, GroupElement, bool]]:
        """(index, value, on-hull) per cloud point, for delimited export."""
        return [(i, y, self.on_hull(i)) for i, y in self.cloud]


def _cross(o, a, b) -> GroupElement:
    """Cross product (a-o) x (b-o) with integer x and group-element y."""
    (ox, oy), (ax, ay), (bx, by) = o, a, b
    return (by - oy).scale(ax - ox) - (ay - oy).scale(bx - ox)


def _lower_hull(points: Sequence[tuple[int, GroupElement]]):
    pts = sorted(points)
    if len(pts) <= 1:
        return tuple(pts)
    zero = GroupElement.zero(pts[0][1].rank)
    hull: list[tuple[int, GroupElement]] = []
    for p in pts:
        while len(hull) >= 2 and not _cross(hull[-2], hull[-1], p) > zero:
            hull.pop()
        hull.append(p)
    return tuple(hull)


def is_key_polynomial(nu: PolyValuation, key: Poly, witnesses: Sequence[Poly]) -> bool:
    """Witness-based key check: every witness of lower degree has strictly
    smaller level.  This validates against the supplied witnesses only; it is
    not a proof over all lower-degree polynomials."""
    if not key.is_monic():
        raise ValueError("key polynomials are monic")
    cap = level(nu, key).epsilon
    for w in witnesses:
        if w.degree >= key.degree:
            raise ValueError("witnesses must have degree below the key")
        if not level(nu, w).epsilon < cap:
            return False
    return True
