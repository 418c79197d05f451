"""Finite-rank ordered abelian groups with exact rational coordinates.

Every value group handled by this package is a finite lexicographic power of
the rationals.  An element of rank ``r`` is a vector of ``r`` exact rationals,
compared coordinate by coordinate with the leftmost coordinate dominant.  The
group is divisible, so scaling by any nonzero rational stays inside it; this
is what lets truncated valuations take values such as ``gamma / 2`` without any
extension bookkeeping.

Besides plain elements the valuation layer needs two formal endpoints:

* ``INFINITY`` is the value of ``0`` under any valuation.  It is larger than
  every group element and absorbs addition.
* ``NEG_INFINITY`` is the level of a nonzero constant.  It is smaller than
  every group element and only ever participates in comparisons.

Convex subgroups of the lexicographic order form a chain ``H_0 > H_1 > ... >
H_r`` where ``H_k`` consists of the vectors whose first ``k`` coordinates
vanish.  ``H_0`` is the whole group and ``H_r`` is trivial.  Quotients by
``H_k`` are realised by truncating vectors to their first ``k`` coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union


class RankMismatch(ValueError):
    """Raised when elements of different ranks are mixed."""


class _PlusInfinity:
    """Formal top element; compares above every group element."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __neg__(self):
        return NEG_INFINITY

    def __add__(self, other):
        if other is NEG_INFINITY:
            raise ArithmeticError("inf + (-inf) is undefined")
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("inf - inf is undefined")
        return self

    def __rsub__(self, other):
        # other - inf for a finite other
        return NEG_INFINITY

    def scale(self, q) -> "_PlusInfinity":
        if Fraction(q) <= 0:
            raise ArithmeticError("scaling inf needs a positive factor")
        return self


class _MinusInfinity:
    """Formal bottom element; compares below every group element."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    __str__ = __repr__

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __neg__(self):
        return INFINITY

    def __add__(self, other):
        if other is INFINITY:
            raise ArithmeticError("-inf + inf is undefined")
        return self

    __radd__ = __add__

    def scale(self, q) -> "_MinusInfinity":
        if Fraction(q) <= 0:
            raise ArithmeticError("scaling -inf needs a positive factor")
        return self


INFINITY = _PlusInfinity()
NEG_INFINITY = _MinusInfinity()


@dataclass(frozen=True)
class GroupElement:
    """A vector of exact rationals ordered lexicographically."""

    coords: tuple[Fraction, ...]

    @staticmethod
    def of(*values) -> "GroupElement":
        return GroupElement(tuple(Fraction(v) for v in values))

    @staticmethod
    def zero(rank: int) -> "GroupElement":
        return GroupElement((Fraction(0),) * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def _same_rank(self, other: "GroupElement") -> None:
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")

    def __add__(self, other):
        if isinstance(other, (_PlusInfinity, _MinusInfinity)):
            return other.__radd__(self)
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._same_rank(other)
        return GroupElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        if other is INFINITY:
            return NEG_INFINITY
        if other is NEG_INFINITY:
            return INFINITY
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._same_rank(other)
        return GroupElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return GroupElement(tuple(-a for a in self.coords))

    def scale(self, q) -> "GroupElement":
        q = Fraction(q)
        return GroupElement(tuple(q * a for a in self.coords))

    def __rmul__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(q)
        return NotImplemented

    def _cmp_key(self, other):
        if other is INFINITY:
            return -1
        if other is NEG_INFINITY:
            return 1
        if not isinstance(other, GroupElement):
            raise TypeError(f"cannot compare GroupElement with {type(other).__name__}")
        self._same_rank(other)
        if self.coords < other.coords:
            return -1
        if self.coords > other.coords:
            return 1
        return 0

    def __lt__(self, other):
        return self._cmp_key(other) < 0

    def __le__(self, other):
        return self._cmp_key(other) <= 0

    def __gt__(self, other):
        return self._cmp_key(other) > 0

    def __ge__(self, other):
        return self._cmp_key(other) >= 0

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def natural_val(self):
        """Index (1-based) of the first nonzero coordinate, or INFINITY for 0."""
        for i, a in enumerate(self.coords):
            if a != 0:
                return i + 1
        return INFINITY

    def truncate(self, k: int) -> "GroupElement":
        """Image in the quotient by ``H_k``: the first ``k`` coordinates."""
        if not 0 <= k <= self.rank:
            raise ValueError(f"truncation index {k} outside 0..{self.rank}")
        return GroupElement(self.coords[:k])

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.coords) + ")"


Value = Union[GroupElement, _PlusInfinity, _MinusInfinity]


def is_finite(v: Value) -> bool:
    return isinstance(v, GroupElement)


def vmin(values: Iterable[Value]) -> Value:
    """Minimum of a nonempty iterable of values (INFINITY if all are)."""
    best = None
    for v in values:
        if best is None or v < best:
            best = v
    if best is None:
        raise ValueError("vmin of empty iterable")
    return best


@dataclass(frozen=True)
class ConvexSubgroup:
    """The convex subgroup ``H_k`` of vectors with first ``k`` coordinates zero."""

    rank: int
    index: int

    def __post_init__(self):
        if not 0 <= self.index <= self.rank:
            raise ValueError(f"subgroup index {self.index} outside 0..{self.rank}")

    @staticmethod
    def whole(rank: int) -> "ConvexSubgroup":
        return ConvexSubgroup(rank, 0)

    @staticmethod
    def trivial(rank: int) -> "ConvexSubgroup":
        return ConvexSubgroup(rank, rank)

    def contains(self, x: GroupElement) -> bool:
        if x.rank != self.rank:
            raise RankMismatch(f"rank {x.rank} element against rank {self.rank} subgroup")
        return all(a == 0 for a in x.coords[: self.index])

    def is_trivial(self) -> bool:
        return self.index == self.rank

    def is_whole(self) -> bool:
        return self.index == 0

    def __str__(self):
        return f"H_{self.index}"


def convex_subgroups(rank: int) -> list[ConvexSubgroup]:
    """The full chain ``H_0 > H_1 > ... > H_rank``."""
    return [ConvexSubgroup(rank, k) for k in range(rank + 1)]


def parse_group_element(text: str, rank: int | None = None) -> GroupElement:
    """Parse ``(a/b, c/d)`` or a bare rational (rank 1)."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        inner = s[1:-1].strip()
        parts = [p.strip() for p in inner.split(",")] if inner else []
    else:
        parts = [s]
    try:
        coords = tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad group element literal {text!r}: {exc}") from None
    g = GroupElement(coords)
    if rank is not None and g.rank != rank:
        raise RankMismatch(f"literal {text!r} has rank {g.rank}, expected {rank}")
    return g
