"""Exact coefficient arithmetic.

Coefficients are polynomials with rational coefficients in a finite set of
named deformation parameters.  A ring may carry monomial reduction rules:

* ``s`` is reserved for a signed square root of ``x*z`` and obeys
  ``s**2 -> x*z``;
* a *quotient* parameter ``u`` declared as ``num/den`` obeys ``den*u -> num``.

All rules rewrite a monomial into a single monomial, their leading monomials
are pairwise coprime and no rule output contains a leading variable, so
reduction terminates and the normal form is unique.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

__all__ = [
    "CoefficientError",
    "DuplicateParameter",
    "UnboundParameter",
    "InconsistentRoot",
    "Ring",
    "Coefficient",
    "ring_make",
    "parse_assignments",
]


class CoefficientError(Exception):
    pass


class DuplicateParameter(CoefficientError):
    pass


class UnboundParameter(CoefficientError):
    pass


class InconsistentRoot(CoefficientError):
    pass


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

ROOT_TOL = 1e-12


class Ring:
    """Parameter context against which coefficients are normalized.

    ``quotients`` maps a derived parameter name to ``(numerator, denominator)``
    where the numerator is a product of declared parameters written as a
    string (``"rho*sigma"``) and the denominator is a single parameter.
    """

    def __init__(self, params, quotients=None):
        params = [str(p) for p in params]
        quotients = dict(quotients or {})
        names = params + [q for q in quotients if q not in params]
        seen = set()
        for name in names:
            if not _NAME.match(name):
                raise CoefficientError(f"bad parameter name {name!r}")
            if name in seen:
                raise DuplicateParameter(name)
            seen.add(name)
        self.params = tuple(names)
        self.index = {n: i for i, n in enumerate(self.params)}
        self.quotients = {}
        rules = []
        if "s" in self.index:
            for need in ("x", "z"):
                if need not in self.index:
                    raise CoefficientError("parameter s requires x and z")
            rules.append(({"s": 2}, {"x": 1, "z": 1}))
        for name, (num, den) in quotients.items():
            num_exp = _parse_monomial(num)
            for n in list(num_exp) + [den]:
                if n not in self.index:
                    raise UnboundParameter(n)
            self.quotients[name] = (dict(num_exp), den)
            rules.append(({den: 1, name: 1}, num_exp))
        self._rules = []
        for lead, repl in rules:
            self._rules.append((self._vec(lead), self._vec(repl)))
        self._check_rules()
        self.zero = Coefficient(self, {})
        self.one = Coefficient(self, {self._unit: Fraction(1)})

    @property
    def _unit(self):
        return (0,) * len(self.params)

    def _vec(self, exps):
        v = [0] * len(self.params)
        for n, e in exps.items():
            v[self.index[n]] += e
        return tuple(v)

    def _check_rules(self):
        leads = [set(i for i, e in enumerate(lead) if e) for lead, _ in self._rules]
        outs = set()
        for _, repl in self._rules:
            outs |= {i for i, e in enumerate(repl) if e}
        for a in range(len(leads)):
            if leads[a] & outs:
                raise CoefficientError("reduction rule output feeds a rule lead")
            for b in range(a + 1, len(leads)):
                if leads[a] & leads[b]:
                    raise CoefficientError("reduction rules must have coprime leads")

    def reduce_monomial(self, mono):
        if not self._rules:
            return mono
        mono = list(mono)
        for lead, repl in self._rules:
            k = min(mono[i] // e for i, e in enumerate(lead) if e)
            if k:
                for i in range(len(mono)):
                    mono[i] += k * (repl[i] - lead[i])
        return tuple(mono)

    def __eq__(self, other):
        return isinstance(other, Ring) and self.params == other.params and self._rules == other._rules

    def __hash__(self):
        return hash((self.params, tuple(self._rules)))

    def __repr__(self):
        return f"Ring({list(self.params)})"

    def __call__(self, value):
        if isinstance(value, Coefficient):
            if value.ring != self:
                raise CoefficientError("coefficient belongs to another ring")
            return value
        if isinstance(value, str):
            return self.parse(value)
        value = Fraction(value)
        if not value:
            return self.zero
        return Coefficient(self, {self._unit: value})

    def gen(self, name):
        if name not in self.index:
            raise UnboundParameter(name)
        return Coefficient(self, {self._vec({name: 1}): Fraction(1)})

    def gens(self):
        return {n: self.gen(n) for n in self.params}

    def parse(self, text):
        """Parse ``text`` such as ``"x*z/2 - (r11_13 - s)^2"``."""
        from .parsing import parse_coefficient

        return parse_coefficient(text, self)


def _parse_monomial(text):
    exps = {}
    for factor in str(text).split("*"):
        factor = factor.strip()
        if not factor:
            continue
        name, _, power = factor.partition("^")
        exps[name.strip()] = exps.get(name.strip(), 0) + int(power or 1)
    return exps


class Coefficient:
    """Immutable polynomial in the parameters of ``ring``.

    Canonical form: no zero rationals stored and every monomial reduced by
    the ring rules.  Two canonical forms are equal iff the values are equal.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring, terms):
        out = {}
        for mono, c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            mono = ring.reduce_monomial(tuple(mono))
            v = out.get(mono, 0) + c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return cls(ring, out)

    def _coerce(self, other):
        if isinstance(other, Coefficient):
            if other.ring is not self.ring and other.ring != self.ring:
                raise CoefficientError("mixing coefficients of different rings")
            return other
        if isinstance(other, (int, Rational)):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for mono, c in other.terms.items():
            v = out.get(mono, 0) + c
            if v:
                out[mono] = v
            else:
                del out[mono]
        return Coefficient(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            other = Fraction(other)
            if not other:
                return self.ring.zero
            return Coefficient(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.ring.zero
        reduce = self.ring.reduce_monomial
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = reduce(tuple(a + b for a, b in zip(m1, m2)))
                v = out.get(mono, 0) + c1 * c2
                if v:
                    out[mono] = v
                else:
                    out.pop(mono, None)
        return Coefficient(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # exact division by a nonzero rational only
        other = Fraction(other)
        return self * (1 / other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("non-negative integer powers only")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = self.ring(other)
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.ring._unit in self.terms)

    def constant(self):
        """Rational value of a constant coefficient."""
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms[self.ring._unit]

    def variables(self):
        names = set()
        for mono in self.terms:
            names.update(self.ring.params[i] for i, e in enumerate(mono) if e)
        return names

    def degree_in(self, name):
        i = self.ring.index[name]
        return max((m[i] for m in self.terms), default=0)

    def substitute(self, values):
        """Exact substitution of rational values for some parameters."""
        ring = self.ring
        out = {}
        for mono, c in self.terms.items():
            mono = list(mono)
            for name, val in values.items():
                i = ring.index.get(name)
                if i is not None and mono[i]:
                    c = c * Fraction(val) ** mono[i]
                    mono[i] = 0
            key = ring.reduce_monomial(tuple(mono))
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return Coefficient(ring, out)

    def derivative(self, name):
        i = self.ring.index[name]
        out = {}
        for mono, c in self.terms.items():
            if mono[i]:
                m = list(mono)
                m[i] -= 1
                out[tuple(m)] = c * mono[i]
        return Coefficient.from_terms(self.ring, out)

    def compose(self, mapping, target):
        """Substitute a coefficient of ring ``target`` for every parameter."""
        total = target.zero
        for mono, c in self.terms.items():
            term = target(c)
            for i, e in enumerate(mono):
                if e:
                    term = term * mapping[self.ring.params[i]] ** e
            total = total + term
        return total

    def eval(self, assignment):
        """Evaluate numerically; see :func:`check_assignment` for validation."""
        check_assignment(self.ring, assignment, self.variables())
        total = 0.0
        for mono, c in self.terms.items():
            term = float(c)
            for i, e in enumerate(mono):
                if e:
                    term *= float(assignment[self.ring.params[i]]) ** e
            total += term
        return total

    def sort_key(self):
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sort_key():
            factors = []
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(self.ring.params[i])
                elif e:
                    factors.append(f"{self.ring.params[i]}^{e}")
            mag = abs(c)
            if factors:
                body = "*".join(factors)
                if mag != 1:
                    body = f"{mag}*{body}"
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Coefficient({self})"


def ring_make(params, quotients=None):
    return Ring(params, quotients)


def check_assignment(ring, assignment, needed=None):
    """Validate a numeric assignment against the ring's reduction rules."""
    needed = set(ring.params if needed is None else needed)
    for name in needed:
        if name not in assignment:
            raise UnboundParameter(name)
    if "s" in assignment and "s" in ring.index:
        x, z, s = (float(assignment.get(n, math.nan)) for n in ("x", "z", "s"))
        if math.isnan(x) or math.isnan(z):
            raise UnboundParameter("x and z are needed to check s")
        if abs(s * s - x * z) > ROOT_TOL * max(1.0, abs(x * z)):
            raise InconsistentRoot(f"s={s} but x*z={x * z}")
    for name, (num, den) in ring.quotients.items():
        if name in assignment:
            if any(n not in assignment for n in list(num) + [den]):
                raise UnboundParameter(f"constraint on {name} needs {num} and {den}")
            lhs = float(assignment[den]) * float(assignment[name])
            rhs = math.prod(float(assignment[n]) ** e for n, e in num.items())
            if abs(lhs - rhs) > ROOT_TOL * max(1.0, abs(rhs)):
                raise InconsistentRoot(f"{den}*{name} != {num}")


def _literal(text):
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise CoefficientError(f"bad numeric literal {text!r}") from None


def parse_assignments(text):
    """Parse ``name = value`` lines; values are decimals or ``a/b`` rationals.

    Blank lines and ``#`` comments are ignored.  Values come back as exact
    :class:`~fractions.Fraction` whenever the literal allows it.
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CoefficientError(f"line {lineno}: expected name = value")
        name, value = (part.strip() for part in line.split("=", 1))
        if not _NAME.match(name):
            raise CoefficientError(f"line {lineno}: bad name {name!r}")
        if name in out:
            raise DuplicateParameter(name)
        out[name] = _literal(value)
    return out
