"""Small recursive-descent parser for coefficients and free-algebra elements.

Grammar (``*`` is mandatory, there is no implicit multiplication)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := NUMBER | NAME | "(" expr ")" | "[" expr "," expr "]" | "{" expr "," expr "}"

Names resolve to ring parameters first, then to generators (ASCII or Greek
spelling).  ``[X, Y]`` is ``XY - YX`` and ``{X, Y}`` is ``XY + YX``.
Division is allowed by rational constants only.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .coeff import Coefficient, CoefficientError, UnboundParameter

__all__ = ["ParseError", "parse_free", "parse_coefficient", "parse_relation"]


class ParseError(CoefficientError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_Ͱ-Ͽ][A-Za-z0-9_Ͱ-Ͽ]*)|(?P<op>[-+*/^()\[\]{},]))"
)

_ALIASES = {"ρ": "rho", "τ": "tau", "σ": "sigma", "θ": "theta", "ε": "epsilon"}


def _tokenize(text):
    pos = 0
    out = []
    text = text.replace("−", "-").replace("·", "*")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} in {text!r}")
        pos = m.end()
        for kind in ("num", "name", "op"):
            if m.group(kind) is not None:
                out.append((kind, m.group(kind)))
                break
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, text, ring):
        from .algebra import FreeElement, gen_index

        self.FreeElement = FreeElement
        self.gen_index = gen_index
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r} in {self.text!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            raise ParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                e = e * rhs
            else:
                e = e.scale(1 / self._constant(rhs))
        return e

    def _constant(self, e):
        if set(e.terms) - {()}:
            raise ParseError(f"division by a non-constant in {self.text!r}")
        c = e.terms.get((), self.ring.zero)
        if not c.is_constant() or not c:
            raise ParseError(f"division by a non-rational or zero in {self.text!r}")
        return c.constant()

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val = self.take()
            if kind != "num" or not val.isdigit():
                raise ParseError(f"exponent must be a non-negative integer in {self.text!r}")
            out = self.FreeElement.unit(self.ring)
            for _ in range(int(val)):
                out = out * base
            return out
        return base

    def atom(self):
        kind, val = self.take()
        F = self.FreeElement
        if kind == "num":
            return F.unit(self.ring, Fraction(val))
        if kind == "name":
            name = _ALIASES.get(val, val)
            if name in self.ring.index:
                return F(self.ring, {(): self.ring.gen(name)})
            try:
                return F.word(self.ring, (self.gen_index(name),))
            except KeyError:
                raise UnboundParameter(f"{val!r} is neither a parameter nor a generator") from None
        if val == "(":
            e = self.expr()
            self.take(")")
            return e
        if val in ("[", "{"):
            x = self.expr()
            self.take(",")
            y = self.expr()
            self.take("]" if val == "[" else "}")
            return x * y - y * x if val == "[" else x * y + y * x
        raise ParseError(f"unexpected {val!r} in {self.text!r}")


def parse_free(text, ring):
    """Parse ``text`` into a :class:`~twoosc.algebra.FreeElement`."""
    return _Parser(text, ring).parse()


def parse_relation(text, ring):
    """Parse ``lhs = rhs`` (or a bare expression) as the element ``lhs - rhs``."""
    if text.count("=") > 1:
        raise ParseError(f"more than one '=' in {text!r}")
    lhs, sep, rhs = text.partition("=")
    e = parse_free(lhs, ring)
    if sep:
        e = e - parse_free(rhs, ring)
    return e


def parse_coefficient(text, ring) -> Coefficient:
    e = parse_free(text, ring)
    if set(e.terms) - {()}:
        raise ParseError(f"{text!r} contains generators")
    return e.terms.get((), ring.zero)
