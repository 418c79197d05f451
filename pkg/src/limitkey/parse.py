"""Literal grammar for field elements and polynomials.

Accepted forms include ``3/4``, ``t^(-1/8) + t^(1/2)``, ``(2*t^3)/(1+t)``,
``x^2 - 17``, and ``x^2 - 2*a*x + (a^2 - 17)`` with ``a`` supplied through a
name binding.  The grammar:

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := '-'* power
    power    := atom ('^' exponent)?
    exponent := integer | '(' expr ')'   -- must evaluate to a rational
    atom     := integer | 't' | 'x' | name | '(' expr ')'

Everything evaluates to a polynomial over the target field; constants are
degree-0 polynomials.  Division requires an x-free (constant) divisor.
Fractional exponents are only meaningful on monomial bases (powers of t) and
are rejected elsewhere; negative exponents force a constant base.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .fields import BaseField, CompositeRank2, MonomialField
from .polyring import Poly


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos:].strip()[0]!r} in {text!r}")
            break
        pos = m.end()
        for kind in ("int", "name", "op"):
            tok = m.group(kind)
            if tok is not None:
                tokens.append((kind, tok))
                break
    tokens.append(("end", ""))
    return tokens


# AST nodes: ('num', Fraction) | ('var', 'x'|'t') | ('name', str)
#          | ('add'|'sub'|'mul'|'div', left, right) | ('neg', node) | ('pow', node, node)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}, found {val or 'end of input'!r}")

    def parse(self):
        node = self.expr()
        kind, val = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r} in {self.text!r}")
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                node = ("add" if val == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                node = ("mul" if val == "*" else "div", node, rhs)
            else:
                return node

    def factor(self):
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return ("neg", self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return ("pow", base, self.exponent())
        return base

    def exponent(self):
        kind, val = self.peek()
        if kind == "int":
            self.take()
            return ("num", Fraction(int(val)))
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"expected integer or parenthesized exponent in {self.text!r}")

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return ("num", Fraction(int(val)))
        if kind == "name":
            if val in ("x", "t"):
                return ("var", val)
            return ("name", val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r} in {self.text!r}")


def _as_rational(node, text: str) -> Fraction:
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "neg":
        return -_as_rational(node[1], text)
    if tag in ("add", "sub", "mul", "div"):
        a, b = _as_rational(node[1], text), _as_rational(node[2], text)
        if tag == "add":
            return a + b
        if tag == "sub":
            return a - b
        if tag == "mul":
            return a * b
        if b == 0:
            raise ParseError(f"zero denominator in exponent of {text!r}")
        return a / b
    raise ParseError(f"exponent must be a rational constant in {text!r}")


class _Evaluator:
    def __init__(self, field: BaseField, text: str, names: Optional[dict] = None):
        self.field = field
        self.text = text
        self.names = names or {}

    def run(self, node) -> Poly:
        F = self.field
        tag = node[0]
        if tag == "num":
            return Poly.constant(F, F.from_fraction(node[1]))
        if tag == "var":
            if node[1] == "x":
                return Poly.variable(F)
            return Poly.constant(F, self._t_element())
        if tag == "name":
            if node[1] not in self.names:
                raise ParseError(f"unknown name {node[1]!r} in {self.text!r}")
            return Poly.constant(F, self.names[node[1]])
        if tag == "neg":
            return -self.run(node[1])
        if tag in ("add", "sub", "mul", "div"):
            a = self.run(node[1])
            b = self.run(node[2])
            if tag == "add":
                return a + b
            if tag == "sub":
                return a - b
            if tag == "mul":
                return a * b
            return self._divide(a, b)
        if tag == "pow":
            return self._power(node[1], node[2])
        raise ParseError(f"cannot evaluate {tag!r}")

    def _t_element(self):
        F = self.field
        if isinstance(F, MonomialField):
            return F.monomial(1)
        if isinstance(F, CompositeRank2):
            return F.t_power(1)
        raise ParseError(f"'t' is not an element of {F.describe()}")

    def _divide(self, a: Poly, b: Poly) -> Poly:
        if not b.is_constant():
            raise ParseError(f"division only by x-free factors in {self.text!r}")
        c = b.constant_value()
        if self.field.is_zero(c):
            raise ParseError(f"division by zero in {self.text!r}")
        return a.scale(self.field.inv(c))

    def _power(self, base_node, exp_node) -> Poly:
        q = _as_rational(exp_node, self.text)
        base = self.run(base_node)
        if q.denominator == 1 and q >= 0:
            return base ** int(q)
        if not base.is_constant():
            raise ParseError(
                f"exponent {q} needs a constant base in {self.text!r}"
            )
        c = base.constant_value()
        F = self.field
        if F.is_zero(c):
            raise ParseError(f"0 raised to a nonpositive or fractional power in {self.text!r}")
        if q.denominator == 1:
            return Poly.constant(F, F.pow(c, int(q)))
        # fractional exponent: only a pure power of t supports it
        if (
            isinstance(F, MonomialField)
            and len(c.num) == 1
            and len(c.den) == 1
            and c.den[0][0] == 0
            and c.num[0][1] == 1
        ):
            return Poly.constant(F, F.monomial(c.num[0][0] * q))
        raise ParseError(
            f"fractional exponent {q} only applies to powers of t in {self.text!r}"
        )


def parse_poly(field: BaseField, text: str, names: Optional[dict] = None) -> Poly:
    """Parse a polynomial literal over the given field."""
    node = _Parser(text).parse()
    return _Evaluator(field, text, names).run(node)


def parse_element(field: BaseField, text: str, names: Optional[dict] = None):
    """Parse a field-element literal (an x-free polynomial expression)."""
    poly = parse_poly(field, text, names)
    if not poly.is_constant():
        raise ParseError(f"{text!r} is not a field element: it involves x")
    return poly.constant_value()
