"""Parser for a_p expressions.

Grammar::

    AP    := TERM (('+'|'-') TERM)*
    TERM  := [COEFF '*'] 'p' ['^' INT | '^(' INT '/' '2' ')'] | COEFF
    COEFF := integer | 'u' | '(' COEFF ['+' COEFF '*' 'sqrt(p)'] ')'

'u' denotes the fixed unit whose residue generates F_{p^2} (theta, an
exact square root of the least non-residue); it needs residue degree 2.
Expressions evaluate to exact elements and must have positive slope.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonPositiveSlope, ParseError, ZeroAp
from .padic import PadicElement

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|([pu])|([()^*/+-]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        num, sqrt, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num), pos))
        elif sqrt is not None:
            tokens.append(("sqrt", "sqrt", pos))
        elif name is not None:
            tokens.append((name, name, pos))
        else:
            tokens.append((op, op, pos))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


@dataclass(frozen=True)
class Coeff:
    """integer | the unit symbol | c0 + c1*sqrt(p)."""

    kind: str                 # "int" | "unit" | "pair"
    n: int = 0
    c0: "Coeff" = None
    c1: "Coeff" = None

    def render(self) -> str:
        if self.kind == "int":
            return str(self.n)
        if self.kind == "unit":
            return "u"
        return f"({self.c0.render()}+{self.c1.render()}*sqrt(p))"

    def evaluate(self, p: int, f: int) -> PadicElement:
        if self.kind == "int":
            return PadicElement.from_rational(p, f, self.n)
        if self.kind == "unit":
            if f < 2:
                raise ParseError("the unit symbol 'u' requires residue degree 2")
            return PadicElement.unit_gen(p, f)
        pi = PadicElement.sqrt_p(p, f)
        return self.c0.evaluate(p, f) + self.c1.evaluate(p, f) * pi


@dataclass(frozen=True)
class Term:
    sign: int
    coeff: Coeff            # None when the term is a bare power of p
    exponent: Fraction      # 0 for a bare coefficient

    def render(self, first: bool) -> str:
        sign = "" if (first and self.sign > 0) else ("+" if self.sign > 0 else "-")
        parts = []
        if self.coeff is not None:
            parts.append(self.coeff.render())
        if self.exponent != 0:
            e = self.exponent
            if e == 1:
                ptxt = "p"
            elif e.denominator == 1:
                ptxt = f"p^{e.numerator}"
            else:
                ptxt = f"p^({e.numerator}/2)"
            parts.append(ptxt)
        return sign + "*".join(parts)

    def evaluate(self, p: int, f: int) -> PadicElement:
        value = PadicElement.one(p, f) if self.coeff is None else self.coeff.evaluate(p, f)
        e = self.exponent
        pi = PadicElement.sqrt_p(p, f)
        power = pi ** int(2 * e) if e >= 0 else (pi ** (-int(2 * e))).inverse()
        return value * power * (1 if self.sign > 0 else -1)


@dataclass(frozen=True)
class ApExpression:
    """Parsed a_p: a signed sum of coefficient * p^exponent terms."""

    terms: tuple
    text: str
    p: int
    f: int
    value: PadicElement

    @property
    def slope(self):
        return self.value.valuation()

    def render(self) -> str:
        return "".join(t.render(i == 0) for i, t in enumerate(self.terms))

    def to_json(self) -> str:
        return self.render()


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def parse_ap(self):
        terms = [self.parse_term(1)]
        while self.peek()[0] in "+-":
            op = self.take()[0]
            terms.append(self.parse_term(1 if op == "+" else -1))
        self.take("end")
        return tuple(terms)

    def parse_term(self, sign):
        kind = self.peek()[0]
        if kind == "p":
            self.take()
            return Term(sign, None, self.parse_exponent())
        coeff = self.parse_coeff()
        if self.peek()[0] == "*":
            save = self.i
            self.take()
            if self.peek()[0] == "p":
                self.take()
                return Term(sign, coeff, self.parse_exponent())
            self.i = save
        return Term(sign, coeff, Fraction(0))

    def parse_exponent(self):
        if self.peek()[0] != "^":
            return Fraction(1)
        self.take()
        if self.peek()[0] == "(":
            self.take()
            num = self.parse_int()
            self.take("/")
            tok = self.take("num")
            if tok[1] != 2:
                raise ParseError("exponent denominator must be 2", tok[2])
            self.take(")")
            return Fraction(num, 2)
        return Fraction(self.parse_int())

    def parse_int(self):
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        tok = self.take("num")
        return sign * tok[1]

    def parse_coeff(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return Coeff("int", n=val)
        if kind == "-":
            self.take()
            tok = self.take("num")
            return Coeff("int", n=-tok[1])
        if kind == "u":
            self.take()
            return Coeff("unit")
        if kind == "(":
            self.take()
            c0 = self.parse_coeff()
            c1 = None
            if self.peek()[0] == "+":
                self.take()
                c1 = self.parse_coeff()
                self.take("*")
                self.take("sqrt")
                self.take("(")
                self.take("p")
                self.take(")")
            self.take(")")
            if c1 is None:
                return c0
            return Coeff("pair", c0=c0, c1=c1)
        raise ParseError(f"expected a coefficient, found {val!r}", pos)


def parse_ap(text: str, p: int, f: int = 2, precision: int = 12) -> ApExpression:
    """Parse and evaluate; rejects empty input, zero, and non-positive slope."""
    if not text or not text.strip():
        raise ParseError("empty a_p expression", 0)
    terms = _Parser(_tokenize(text)).parse_ap()
    value = PadicElement.zero(p, f)
    for t in terms:
        value = value + t.evaluate(p, f)
    if value.is_zero():
        raise ZeroAp("a_p expression evaluates to zero")
    if value.valuation() <= 0:
        raise NonPositiveSlope(f"a_p has slope {value.valuation()} <= 0")
    return ApExpression(terms, text.strip(), p, f, value)
