"""Dense exact polynomials over a catalog base field.

A polynomial stores its owning field and a low-to-high coefficient tuple with
no trailing zeros.  Everything the valuation layer consumes lives here:

* Hasse-Schmidt derivatives ``D_s``, the characteristic-safe replacement for
  ``f^(s)/s!``: ``D_s(x^n) = C(n, s) x^(n-s)`` with the binomial coefficient
  mapped into the field, so it vanishes mod p exactly when it should.
* Q-expansions ``f = sum f_i Q^i`` for monic Q, by repeated long division;
  each digit has degree below deg Q.
* Taylor coefficients at a point, computed through the derivatives; they
  must agree with ``q_expansion(f, x - a)``, which the tests use as a cross
  oracle.
* ``mult_data``: in residue characteristic p, the largest r with
  ``g in K[x^(p^r)]`` together with the least positive s with ``D_s g != 0``;
  the two are tied by the digit criterion and are computed independently.
* ``p_divides_binomial``: the base-p digit test for ``p | C(l, k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .fields import BaseField


@dataclass(frozen=True)
class Poly:
    field: BaseField
    coeffs: tuple  # low to high, no trailing zeros

    def __post_init__(self):
        if self.coeffs and self.field.is_zero(self.coeffs[-1]):
            raise ValueError("coefficient tuple has trailing zeros; use make()")

    # -- constructors ---------------------------------------------------------
    @staticmethod
    def make(field: BaseField, coeffs) -> "Poly":
        cs = list(coeffs)
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        return Poly(field, tuple(cs))

    @staticmethod
    def zero(field: BaseField) -> "Poly":
        return Poly(field, ())

    @staticmethod
    def constant(field: BaseField, c) -> "Poly":
        return Poly.make(field, [c])

    @staticmethod
    def from_int(field: BaseField, n: int) -> "Poly":
        return Poly.constant(field, field.from_int(n))

    @staticmethod
    def variable(field: BaseField) -> "Poly":
        return Poly(field, (field.zero(), field.one()))

    @staticmethod
    def monomial(field: BaseField, n: int, c=None) -> "Poly":
        c = field.one() if c is None else c
        if field.is_zero(c):
            return Poly.zero(field)
        return Poly(field, (field.zero(),) * n + (c,))

    # -- basic queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def leading(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return not self.is_zero() and self.field.eq(self.leading(), self.field.one())

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.coeffs[0] if self.coeffs else self.field.zero()

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if not self.field.is_zero(c)]

    # -- arithmetic -----------------------------------------------------------
    def _check_field(self, other: "Poly") -> None:
        if self.field != other.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check_field(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.make(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, tuple(F.neg(c) for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check_field(other)
        F = self.field
        if self.is_zero() or other.is_zero():
            return Poly.zero(F)
        out = [F.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if F.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly.make(F, out)

    def scale(self, c) -> "Poly":
        F = self.field
        if F.is_zero(c):
            return Poly.zero(F)
        return Poly.make(F, [F.mul(c, a) for a in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly(self.field, (self.field.zero(),) * k + self.coeffs)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Poly.constant(self.field, self.field.one())
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def eval_at(self, a):
        """Value at a field element, by Horner's rule."""
        F = self.field
        acc = F.zero()
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), c)
        return acc

    # -- derivative / expansion operations ------------------------------------
    def hasse_schmidt(self, s: int) -> "Poly":
        """The s-th Hasse-Schmidt derivative: D_s(x^n) = C(n,s) x^(n-s)."""
        if s < 0:
            raise ValueError("derivative order must be nonnegative")
        if s == 0:
            return self
        F = self.field
        out = [F.zero()] * max(0, len(self.coeffs) - s)
        for n in range(s, len(self.coeffs)):
            c = self.coeffs[n]
            if F.is_zero(c):
                continue
            out[n - s] = F.mul(F.from_int(math.comb(n, s)), c)
        return Poly.make(F, out)

    def divmod_monic(self, q: "Poly") -> tuple["Poly", "Poly"]:
        """Quotient and remainder by a monic divisor (no field division)."""
        self._check_field(q)
        if not q.is_monic():
            raise ValueError("divisor must be monic")
        F = self.field
        rem = list(self.coeffs)
        dq = q.degree
        quot = [F.zero()] * max(0, len(rem) - dq)
        while len(rem) > dq:
            c = rem[-1]
            shift = len(rem) - 1 - dq
            if not F.is_zero(c):
                quot[shift] = c
                for i, b in enumerate(q.coeffs):
                    rem[shift + i] = F.sub(rem[shift + i], F.mul(c, b))
            rem.pop()
        return Poly.make(F, quot), Poly.make(F, rem)

    def q_expansion(self, q: "Poly") -> list["Poly"]:
        """Digits f_0, f_1, ... with f = sum f_i q^i and deg f_i < deg q."""
        if q.degree < 1:
            raise ValueError("expansion base must have degree >= 1")
        digits: list[Poly] = []
        rest = self
        if rest.is_zero():
            return [rest]
        while not rest.is_zero():
            rest, digit = rest.divmod_monic(q)
            digits.append(digit)
        return digits

    def taylor_coeffs(self, a) -> list:
        """Field elements (D_l f)(a) for l = 0..deg f (empty for f = 0)."""
        return [self.hasse_schmidt(s).eval_at(a) for s in range(len(self.coeffs))]

    # -- presentation ----------------------------------------------------------
    def format(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        F = self.field
        bits: list[str] = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if F.is_zero(c):
                continue
            cs = F.format(c)
            if i == 0:
                term = f"({cs})" if any(op in cs for op in " +(") else cs
            else:
                xp = var if i == 1 else f"{var}^{i}"
                if cs == "1":
                    term = xp
                elif cs == "-1":
                    term = f"-{xp}"
                elif any(op in cs for op in " +/("):
                    term = f"({cs})*{xp}"
                else:
                    term = f"{cs}*{xp}"
            bits.append(term)
        out = bits[0]
        for term in bits[1:]:
            if term.startswith("-"):
                out += f" - {term[1:]}"
            else:
                out += f" + {term}"
        return out


def from_rational_coeffs(field: BaseField, coeffs) -> Poly:
    """Build a polynomial from low-to-high rational coefficients."""
    return Poly.make(field, [field.from_fraction(Fraction(c)) for c in coeffs])


def linear_from_root(field: BaseField, a) -> Poly:
    """The monic linear polynomial x - a."""
    return Poly.make(field, [field.neg(a), field.one()])


def mult_data(g: Poly, p: int) -> tuple[int, int]:
    """(r, s): largest r with g in K[x^(p^r)], least s >= 1 with D_s g != 0.

    ``p`` is the characteristic exponent; with p = 1 the answer is (0, 1) for
    any nonconstant polynomial.  The two components are computed from
    independent definitions (support divisibility vs. derivative scan); in
    residue characteristic p they satisfy s = p^r.
    """
    if g.is_constant():
        raise ValueError("mult_data needs a nonconstant polynomial")
    least_s = next(s for s in range(1, g.degree + 1) if not g.hasse_schmidt(s).is_zero())
    if p == 1:
        return 0, least_s
    r = 0
    while all(n % p ** (r + 1) == 0 for n in g.support() if n > 0):
        r += 1
    return r, least_s


def p_divides_binomial(l: int, k: int, p: int) -> bool:
    """Whether p divides C(l, k), by the base-p digit comparison."""
    if k > l:
        raise ValueError("need k <= l")
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    while l or k:
        if k % p > l % p:
            return True
        l //= p
        k //= p
    return False
