"""Catalog of exact valued base fields.

Three field variants cover every instance the analysis pipelines need:

* ``PadicRationals(p)`` — the rationals with the p-adic order; rank 1,
  residue characteristic p, mixed characteristic.
* ``MonomialField(p)`` — quotients of finite sums ``sum c_q t^q`` with
  rational exponents ``q``, coefficients in F_p (or in Q when p = 0); the
  valuation reads off the least exponent.  Rank 1, value group Q, equal
  characteristic.  This replaces Puiseux-series towers: every family formula
  we evaluate telescopes to a finite support, so sparse rational-exponent
  sums keep all arithmetic exact and finite.
* ``CompositeRank2(p)`` — rational functions in t over Q with the rank-2
  valuation v(f) = (ord_t f, v_p(a)) for f = t^k (a + t g), a != 0; the
  minimal higher-rank field distinguishing v(p) inside or above a proper
  convex subgroup.

Elements are plain immutable values (Fraction, MonomialElement, RatFunc);
the field object supplies arithmetic, the valuation, parsing hooks, and
characteristic data.  All representations are canonical, so structural
equality is field equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

from .ordgroup import GroupElement, INFINITY


def padic_order(q: Fraction, p: int):
    """p-adic order of a rational; INFINITY at 0."""
    if q == 0:
        return INFINITY
    n = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        n += 1
    while den % p == 0:
        den //= p
        n -= 1
    return n


class BaseField:
    """Common interface of the catalog fields."""

    rank: int
    characteristic: int
    residue_characteristic: int

    @property
    def char_exponent(self) -> int:
        """1 when the residue characteristic is 0, else that characteristic."""
        return self.residue_characteristic if self.residue_characteristic else 1

    # -- element constructors -------------------------------------------------
    def zero(self):
        raise NotImplementedError

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        return self.from_fraction(Fraction(n))

    def from_fraction(self, q: Fraction):
        raise NotImplementedError

    # -- arithmetic -----------------------------------------------------------
    def add(self, x, y):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, n: int):
        if n < 0:
            return self.pow(self.inv(x), -n)
        out, base = self.one(), x
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def is_zero(self, x) -> bool:
        raise NotImplementedError

    def eq(self, x, y) -> bool:
        return x == y

    # -- valuation ------------------------------------------------------------
    def val(self, x):
        """Value in the rank-r group, or INFINITY at 0."""
        raise NotImplementedError

    def val_of_p(self):
        """Value of the residue characteristic as a field element (INFINITY
        in equal characteristic, where it is the value of 0)."""
        return self.val(self.from_int(self.residue_characteristic))

    # -- presentation ----------------------------------------------------------
    def format(self, x) -> str:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def sample(self, rng):
        raise NotImplementedError


@dataclass(frozen=True)
class PadicRationals(BaseField):
    p: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be a prime >= 2")

    rank = 1

    @property
    def characteristic(self) -> int:
        return 0

    @property
    def residue_characteristic(self) -> int:
        return self.p

    def zero(self):
        return Fraction(0)

    def from_fraction(self, q: Fraction):
        return Fraction(q)

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def is_zero(self, x) -> bool:
        return x == 0

    def val(self, x):
        o = padic_order(x, self.p)
        return o if o is INFINITY else GroupElement.of(o)

    def format(self, x) -> str:
        return str(x)

    def describe(self) -> str:
        return f"padic({self.p})"

    def sample(self, rng):
        num = rng.randint(-4, 4)
        return Fraction(num * self.p ** rng.randint(0, 2), rng.choice([1, 1, 2, 3, self.p]))


@dataclass(frozen=True)
class MonomialElement:
    """Canonical quotient of finite monomial sums in t with rational exponents.

    Both parts are sorted tuples of (exponent, coefficient) with nonzero
    coefficients; the denominator's least exponent is 0 with coefficient 1,
    and numerator and denominator share no common polynomial factor.
    """

    num: tuple[tuple[Fraction, object], ...]
    den: tuple[tuple[Fraction, object], ...]

    def is_zero(self) -> bool:
        return not self.num

    def least_exponent(self):
        return self.num[0][0] if self.num else None


def _merge_terms(terms, add, is_zero):
    out: dict[Fraction, object] = {}
    for e, c in terms:
        if e in out:
            out[e] = add(out[e], c)
        else:
            out[e] = c
    return tuple(sorted((e, c) for e, c in out.items() if not is_zero(c)))


@dataclass(frozen=True)
class MonomialField(BaseField):
    p: int  # coefficient characteristic: 0 for Q, else a prime

    def __post_init__(self):
        if self.p != 0 and self.p < 2:
            raise ValueError("characteristic must be 0 or a prime >= 2")

    rank = 1

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def residue_characteristic(self) -> int:
        return self.p

    # -- coefficient arithmetic (F_p or Q) ------------------------------------
    def _cadd(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def _cmul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def _cneg(self, a):
        return (-a) % self.p if self.p else -a

    def _cinv(self, a):
        if self.p:
            return pow(a, -1, self.p)
        return 1 / a

    def _czero(self, a) -> bool:
        return a == 0

    def _coeff_from_fraction(self, q: Fraction):
        if not self.p:
            return Fraction(q)
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"{q} has no image in characteristic {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    # -- construction & normalization -----------------------------------------
    def _build(self, num_terms, den_terms) -> MonomialElement:
        num = _merge_terms(num_terms, self._cadd, self._czero)
        den = _merge_terms(den_terms, self._cadd, self._czero)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return MonomialElement((), ((Fraction(0), self._coeff_from_fraction(Fraction(1))),))
        if len(den) == 1:
            e0, c0 = den[0]
            cinv = self._cinv(c0)
            num = tuple((e - e0, self._cmul(c, cinv)) for e, c in num)
            return MonomialElement(num, ((Fraction(0), self._cmul(c0, cinv)),))
        return self._reduce_fraction(num, den)

    def _reduce_fraction(self, num, den) -> MonomialElement:
        # Rescale all exponents to a common integer lattice, factor out the
        # least power, cancel the polynomial gcd, and anchor the denominator
        # at exponent 0 with leading (lowest) coefficient 1.
        n = lcm(*[e.denominator for e, _ in num + den])
        nexp = [int(e * n) for e, _ in num]
        dexp = [int(e * n) for e, _ in den]
        nmin, dmin = min(nexp), min(dexp)
        pnum = self._dense([(e - nmin, c) for e, (_, c) in zip(nexp, num)])
        pden = self._dense([(e - dmin, c) for e, (_, c) in zip(dexp, den)])
        g = self._poly_gcd(pnum, pden)
        pnum = self._poly_divexact(pnum, g)
        pden = self._poly_divexact(pden, g)
        c0 = next(c for c in pden if not self._czero(c))
        cinv = self._cinv(c0)
        shift = Fraction(nmin - dmin, n)
        new_num = tuple(
            (shift + Fraction(j, n), self._cmul(c, cinv))
            for j, c in enumerate(pnum)
            if not self._czero(c)
        )
        new_den = tuple(
            (Fraction(j, n), self._cmul(c, cinv))
            for j, c in enumerate(pden)
            if not self._czero(c)
        )
        return MonomialElement(new_num, new_den)

    def _dense(self, terms):
        deg = max(e for e, _ in terms)
        out = [0 if self.p else Fraction(0)] * (deg + 1)
        for e, c in terms:
            out[e] = self._cadd(out[e], c)
        return out

    def _poly_trim(self, a):
        while a and self._czero(a[-1]):
            a.pop()
        return a

    def _poly_divmod(self, a, b):
        a = list(a)
        binv = self._cinv(b[-1])
        q = [0 if self.p else Fraction(0)] * max(0, len(a) - len(b) + 1)
        while len(a) >= len(b) and self._poly_trim(a):
            if len(a) < len(b):
                break
            coef = self._cmul(a[-1], binv)
            shift = len(a) - len(b)
            q[shift] = coef
            for i, bc in enumerate(b):
                a[shift + i] = self._cadd(a[shift + i], self._cneg(self._cmul(coef, bc)))
            self._poly_trim(a)
        return q, a

    def _poly_gcd(self, a, b):
        a, b = list(a), list(b)
        self._poly_trim(a)
        self._poly_trim(b)
        while b:
            _, r = self._poly_divmod(a, b)
            a, b = b, self._poly_trim(r)
        cinv = self._cinv(a[-1])
        return [self._cmul(c, cinv) for c in a]

    def _poly_divexact(self, a, b):
        q, r = self._poly_divmod(list(a), b)
        if self._poly_trim(list(r)):
            raise ArithmeticError("inexact polynomial division during reduction")
        return q

    # -- field interface -------------------------------------------------------
    def zero(self):
        return self._build((), ((Fraction(0), self._coeff_from_fraction(Fraction(1))),))

    def from_fraction(self, q: Fraction):
        c = self._coeff_from_fraction(q)
        terms = () if self._czero(c) else ((Fraction(0), c),)
        return self._build(terms, ((Fraction(0), self._coeff_from_fraction(Fraction(1))),))

    def monomial(self, exponent, coefficient: Fraction = Fraction(1)) -> MonomialElement:
        c = self._coeff_from_fraction(Fraction(coefficient))
        terms = () if self._czero(c) else ((Fraction(exponent), c),)
        return self._build(terms, ((Fraction(0), self._coeff_from_fraction(Fraction(1))),))

    def _cross(self, a, b):
        return [(ea + eb, self._cmul(ca, cb)) for ea, ca in a for eb, cb in b]

    def add(self, x: MonomialElement, y: MonomialElement):
        num = self._cross(x.num, y.den) + self._cross(y.num, x.den)
        return self._build(num, self._cross(x.den, y.den))

    def mul(self, x: MonomialElement, y: MonomialElement):
        return self._build(self._cross(x.num, y.num), self._cross(x.den, y.den))

    def neg(self, x: MonomialElement):
        return MonomialElement(tuple((e, self._cneg(c)) for e, c in x.num), x.den)

    def inv(self, x: MonomialElement):
        if x.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self._build(x.den, x.num)

    def is_zero(self, x: MonomialElement) -> bool:
        return x.is_zero()

    def val(self, x: MonomialElement):
        if x.is_zero():
            return INFINITY
        return GroupElement.of(x.least_exponent())

    def format(self, x: MonomialElement) -> str:
        if x.is_zero():
            return "0"

        def fmt_part(terms) -> str:
            bits = []
            for e, c in terms:
                if e == 0:
                    bits.append(str(c))
                else:
                    exp = f"t^({e})" if (e < 0 or e.denominator != 1) else (
                        "t" if e == 1 else f"t^{e}"
                    )
                    bits.append(exp if c == 1 else f"{c}*{exp}")
            return " + ".join(bits)

        num = fmt_part(x.num)
        if len(x.den) == 1 and x.den[0] == (Fraction(0), x.den[0][1]) and x.den[0][1] == 1:
            return num
        return f"({num})/({fmt_part(x.den)})"

    def describe(self) -> str:
        return f"monomial({self.p})"

    def sample(self, rng):
        terms = []
        for _ in range(rng.randint(1, 3)):
            e = Fraction(rng.randint(-6, 6), rng.choice([1, 2, 4]))
            c = Fraction(rng.randint(1, 6)) if not self.p else rng.randint(1, self.p - 1)
            terms.append((e, c if self.p else Fraction(c)))
        x = self._build(tuple(terms), ((Fraction(0), self._coeff_from_fraction(Fraction(1))),))
        if rng.random() < 0.25:
            den = ((Fraction(0), self._coeff_from_fraction(Fraction(1))),
                   (Fraction(rng.randint(1, 3)), self._coeff_from_fraction(Fraction(1))))
            x = self.mul(x, self._build(((Fraction(0), self._coeff_from_fraction(Fraction(1))),), den))
        return x


@dataclass(frozen=True)
class RatFunc:
    """Canonical rational function in t over Q: dense coefficient tuples,
    reduced, denominator's lowest nonzero coefficient equal to 1."""

    num: tuple[Fraction, ...]
    den: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return not self.num


def _qtrim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _qadd(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _qtrim(out)


def _qmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c:
            for j, d in enumerate(b):
                out[i + j] += c * d
    return _qtrim(out)


def _qdivmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        coef = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = coef
        for i, bc in enumerate(b):
            a[shift + i] -= coef * bc
        _qtrim(a)
        if not a:
            break
    return q, a


def _qgcd(a, b):
    a, b = _qtrim(list(a)), _qtrim(list(b))
    while b:
        _, r = _qdivmod(a, b)
        a, b = b, _qtrim(r)
    return [c / a[-1] for c in a]


@dataclass(frozen=True)
class CompositeRank2(BaseField):
    p: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be a prime >= 2")

    rank = 2

    @property
    def characteristic(self) -> int:
        return 0

    @property
    def residue_characteristic(self) -> int:
        return self.p

    def _build(self, num, den) -> RatFunc:
        num, den = _qtrim(list(num)), _qtrim(list(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return RatFunc((), (Fraction(1),))
        g = _qgcd(num, den)
        if len(g) > 1:
            num, _ = _qdivmod(num, g)
            den, _ = _qdivmod(den, g)
            num, den = _qtrim(num), _qtrim(den)
        c0 = next(c for c in den if c)
        return RatFunc(tuple(c / c0 for c in num), tuple(c / c0 for c in den))

    def zero(self):
        return RatFunc((), (Fraction(1),))

    def from_fraction(self, q: Fraction):
        if q == 0:
            return self.zero()
        return RatFunc((Fraction(q),), (Fraction(1),))

    def t_power(self, k: int, coefficient: Fraction = Fraction(1)) -> RatFunc:
        if k >= 0:
            return self._build([Fraction(0)] * k + [Fraction(coefficient)], [Fraction(1)])
        return self._build([Fraction(coefficient)], [Fraction(0)] * (-k) + [Fraction(1)])

    def add(self, x: RatFunc, y: RatFunc):
        num = _qadd(_qmul(list(x.num), list(y.den)), _qmul(list(y.num), list(x.den)))
        return self._build(num, _qmul(list(x.den), list(y.den)))

    def mul(self, x: RatFunc, y: RatFunc):
        return self._build(_qmul(list(x.num), list(y.num)), _qmul(list(x.den), list(y.den)))

    def neg(self, x: RatFunc):
        return RatFunc(tuple(-c for c in x.num), x.den)

    def inv(self, x: RatFunc):
        if x.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self._build(list(x.den), list(x.num))

    def is_zero(self, x: RatFunc) -> bool:
        return x.is_zero()

    def val(self, x: RatFunc):
        if x.is_zero():
            return INFINITY
        knum = next(i for i, c in enumerate(x.num) if c)
        kden = next(i for i, c in enumerate(x.den) if c)
        lead = x.num[knum] / x.den[kden]
        return GroupElement.of(knum - kden, padic_order(lead, self.p))

    def format(self, x: RatFunc) -> str:
        if x.is_zero():
            return "0"

        def fmt(coeffs) -> str:
            bits = []
            for i, c in enumerate(coeffs):
                if not c:
                    continue
                if i == 0:
                    bits.append(str(c))
                else:
                    tpow = "t" if i == 1 else f"t^{i}"
                    bits.append(tpow if c == 1 else f"{c}*{tpow}")
            return " + ".join(bits)

        if x.den == (Fraction(1),):
            return fmt(x.num)
        return f"({fmt(x.num)})/({fmt(x.den)})"

    def describe(self) -> str:
        return f"composite2({self.p})"

    def sample(self, rng):
        num = [Fraction(rng.randint(-6, 6)) for _ in range(rng.randint(1, 3))]
        den = [Fraction(rng.randint(-6, 6)) for _ in range(rng.randint(1, 2))] + [Fraction(1)]
        if not _qtrim(list(num)):
            num = [Fraction(1)]
        return self._build(num, den)


def field_from_config(text: str) -> BaseField:
    """Parse "padic(p)" | "monomial(p|0)" | "composite2(p)"."""
    s = text.strip().lower()
    for name, cls in (("padic", PadicRationals), ("monomial", MonomialField),
                      ("composite2", CompositeRank2)):
        prefix = name + "("
        if s.startswith(prefix) and s.endswith(")"):
            arg = s[len(prefix):-1].strip()
            try:
                return cls(int(arg))
            except ValueError as exc:
                raise ValueError(f"bad field spec {text!r}: {exc}") from None
    raise ValueError(
        f"unknown field spec {text!r}; expected padic(p), monomial(p|0), or composite2(p)"
    )
