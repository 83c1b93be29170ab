"""Graded noncommutative algebra on the eight group generators.

Generators are numbered in the canonical PBW order used everywhere in the
package::

    0 beta   1 eta   2 alpha   3 gamma   4 b   5 a   6 d   7 c

so a canonical monomial ``beta^k eta^l alpha^m gamma^n b^r a^s d^t c^u`` is
just the exponent tuple ``(k, l, m, n, r, s, t, u)``.  ``alpha`` and
``gamma`` are odd, every other generator is even.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from itertools import product

from .coeff import Coefficient, Ring

__all__ = [
    "GENERATORS",
    "GREEK",
    "ODD",
    "FERMIONIC",
    "BOSONIC",
    "IncompleteRewriteSystem",
    "RewriteError",
    "AlgebraElement",
    "FreeElement",
    "TensorElement",
    "RewriteSystem",
    "monomial",
    "word_of",
    "gen_index",
    "normal_order",
    "multiply",
    "tensor_multiply",
    "parity",
    "degree",
    "format_monomial",
    "classical_derivation_check",
]

GENERATORS = ("beta", "eta", "alpha", "gamma", "b", "a", "d", "c")
GREEK = {"beta": "β", "eta": "η", "alpha": "α", "gamma": "γ"}
ODD = frozenset({2, 3})
FERMIONIC = (0, 1, 2, 3)
BOSONIC = (4, 5, 6, 7)
NGEN = len(GENERATORS)
UNIT = (0,) * NGEN

_ALIASES = {name: i for i, name in enumerate(GENERATORS)}
_ALIASES.update({GREEK[name]: i for i, name in enumerate(GENERATORS) if name in GREEK})

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))


class RewriteError(Exception):
    pass


class IncompleteRewriteSystem(RewriteError):
    """Raised when an out-of-order pair has no rewrite rule."""


def gen_index(name):
    if isinstance(name, int):
        return name
    try:
        return _ALIASES[name]
    except KeyError:
        raise KeyError(f"unknown generator {name!r}") from None


def monomial(**exps):
    """``monomial(beta=1, eta=2)`` -> exponent tuple."""
    v = [0] * NGEN
    for name, e in exps.items():
        v[gen_index(name)] = e
    return tuple(v)


def word_of(mono):
    """Canonical word (tuple of generator indices) spelling ``mono``."""
    out = []
    for i, e in enumerate(mono):
        out.extend([i] * e)
    return tuple(out)


def parity(mono):
    return (mono[2] + mono[3]) % 2


def degree(mono):
    return sum(mono)


def format_word(word, unicode=False):
    if not word:
        return "1"
    names = [GENERATORS[g] for g in word]
    if unicode:
        names = [GREEK.get(n, n) for n in names]
    out = []
    i = 0
    while i < len(names):
        j = i
        while j < len(names) and names[j] == names[i]:
            j += 1
        out.append(names[i] if j - i == 1 else f"{names[i]}^{j - i}")
        i = j
    return "*".join(out)


def format_monomial(mono, unicode=False):
    return format_word(word_of(mono), unicode)


class _Linear:
    """Finite linear combination of hashable basis keys."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} and {type(other).__name__}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out[k] + c if k in out else c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return self._raw(self.ring, out)

    def __neg__(self):
        return self._raw(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.ring(c)
        if not c:
            return self._raw(self.ring, {})
        out = {}
        for k, v in self.terms.items():
            p = v * c
            if p:
                out[k] = p
        return self._raw(self.ring, out)

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction, Coefficient)):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coefficient(self, key):
        return self.terms.get(key, self.ring.zero)

    def map_coefficients(self, fn):
        out = {}
        for k, c in self.terms.items():
            c = fn(c)
            if c:
                out[k] = c
        return self._raw(self.ring, out)

    def _key_order(self, key):
        raise NotImplementedError

    def _format_key(self, key, unicode):
        raise NotImplementedError

    def to_text(self, unicode=False):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=self._key_order, reverse=True):
            c = self.terms[key]
            body = self._format_key(key, unicode)
            if c.is_constant():
                v = c.constant()
                sign = "-" if v < 0 else "+"
                mag = abs(v)
                if body == "1":
                    text = str(mag)
                elif mag == 1:
                    text = body
                else:
                    text = f"{mag}*{body}"
            else:
                sign = "+"
                cs = str(c)
                if len(c.terms) > 1:
                    cs = f"({cs})"
                elif cs.startswith("-"):
                    sign, cs = "-", cs[1:]
                text = cs if body == "1" else f"{cs}*{body}"
            parts.append((sign, text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"{type(self).__name__}({self.to_text()})"


class AlgebraElement(_Linear):
    """Element of the quotient algebra in canonical (normal-ordered) form."""

    __slots__ = ()

    @classmethod
    def unit(cls, ring, c=1):
        return cls(ring, {UNIT: ring(c)})

    @classmethod
    def gen(cls, ring, name, c=1):
        i = gen_index(name)
        mono = [0] * NGEN
        mono[i] = 1
        return cls(ring, {tuple(mono): ring(c)})

    @classmethod
    def from_monomial(cls, ring, mono, c=1):
        return cls(ring, {tuple(mono): ring(c)})

    def _key_order(self, mono):
        return (degree(mono), word_of(mono))

    def _format_key(self, mono, unicode):
        return format_monomial(mono, unicode)

    def max_degree(self):
        return max((degree(m) for m in self.terms), default=0)

    def to_free(self):
        return FreeElement._raw(self.ring, {word_of(m): c for m, c in self.terms.items()})

    def counit(self):
        """Value at alpha=beta=gamma=0, eta=1, a=b=c=0, d=1."""
        total = self.ring.zero
        for m, c in self.terms.items():
            if not any(m[i] for i in (0, 2, 3, 4, 5, 7)):
                total = total + c
        return total


class FreeElement(_Linear):
    """Element of the free associative algebra; keys are generator words."""

    __slots__ = ()

    @classmethod
    def unit(cls, ring, c=1):
        return cls(ring, {(): ring(c)})

    @classmethod
    def word(cls, ring, word, c=1):
        return cls(ring, {tuple(gen_index(g) for g in word): ring(c)})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Coefficient)):
            return self.scale(other)
        self._check(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = out[w] + c1 * c2 if w in out else c1 * c2
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return self._raw(self.ring, out)

    def _key_order(self, word):
        return (len(word), word)

    def _format_key(self, word, unicode):
        return format_word(word, unicode)

    def max_length(self):
        return max((len(w) for w in self.terms), default=0)


class TensorElement(_Linear):
    """Element of the n-fold tensor power; keys are tuples of monomials.

    Slots multiply componentwise with no Koszul sign.
    """

    __slots__ = ()

    @classmethod
    def pure(cls, ring, *monos, c=1):
        return cls(ring, {tuple(monos): ring(c)})

    @classmethod
    def from_elements(cls, *elements):
        ring = elements[0].ring
        out = {}
        for combo in product(*(e.terms.items() for e in elements)):
            key = tuple(m for m, _ in combo)
            c = ring.one
            for _, v in combo:
                c = c * v
            out[key] = out[key] + c if key in out else c
        return cls(ring, out)

    def _key_order(self, key):
        return tuple((degree(m), word_of(m)) for m in key)

    def _format_key(self, key, unicode):
        return "⊗".join(format_monomial(m, unicode) for m in key) if unicode else " @ ".join(
            format_monomial(m) for m in key
        )

    def to_text(self, unicode=False):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=self._key_order, reverse=True):
            c = self.terms[key]
            body = f"({self._format_key(key, unicode)})"
            parts.append(f"({c})*{body}" if c != 1 else body)
        return " + ".join(parts)

    @property
    def order(self):
        for key in self.terms:
            return len(key)
        return 0

    def slot(self, i, fn):
        """Apply a linear map ``fn(monomial) -> AlgebraElement`` to slot ``i``."""
        out = {}
        for key, c in self.terms.items():
            image = fn(key[i])
            for m, v in image.terms.items():
                k = key[:i] + (m,) + key[i + 1 :]
                val = c * v
                val = out[k] + val if k in out else val
                if val:
                    out[k] = val
                else:
                    out.pop(k, None)
        return self._raw(self.ring, out)


def _word_less(w1, w2):
    """Degree-lexicographic comparison of generator words."""
    return (len(w1), w1) < (len(w2), w2)


class RewriteSystem:
    """Quadratic rewrite rules defining a quotient of the free algebra.

    ``rules`` maps a pair ``(g1, g2)`` of generator indices to the canonical
    element replacing the word ``g1 g2``.  Every out-of-order pair
    (``g1 > g2``) needs a rule; in-order pairs may have one as well (the
    square rules for ``alpha`` and ``gamma``).  Each replacement must be
    strictly smaller than ``g1 g2`` in the degree-lexicographic word order,
    which makes rewriting terminate.
    """

    def __init__(self, ring: Ring, rules, name=""):
        self.ring = ring
        self.name = name
        self.rules = {}
        for (g1, g2), rhs in rules.items():
            g1, g2 = gen_index(g1), gen_index(g2)
            if isinstance(rhs, FreeElement):
                rhs = AlgebraElement(ring, {_canonical_key(w): c for w, c in rhs.terms.items()})
            for mono in rhs.terms:
                if not _word_less(word_of(mono), (g1, g2)):
                    raise RewriteError(
                        f"rule {format_word((g1, g2))} -> {rhs} does not decrease the word order"
                    )
            self.rules[(g1, g2)] = rhs
        self._gen_cache = {}
        self._mono_cache = {}

    def missing_rules(self):
        return [(g1, g2) for g1 in range(NGEN) for g2 in range(g1) if (g1, g2) not in self.rules]

    def is_closed(self):
        return not self.missing_rules()

    def square_free(self, g):
        return (g, g) in self.rules

    def _mul_gen(self, mono, g):
        key = (mono, g)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        last = -1
        for i in range(NGEN - 1, -1, -1):
            if mono[i]:
                last = i
                break
        rule = self.rules.get((last, g)) if last >= 0 else None
        if rule is not None:
            rest = list(mono)
            rest[last] -= 1
            rest = tuple(rest)
            out = {}
            for m, c in rule.terms.items():
                for m2, c2 in self._mul_word(rest, word_of(m)).items():
                    v = c * c2
                    v = out[m2] + v if m2 in out else v
                    if v:
                        out[m2] = v
                    else:
                        out.pop(m2, None)
        elif last <= g:
            new = list(mono)
            new[g] += 1
            out = {tuple(new): self.ring.one}
        else:
            raise IncompleteRewriteSystem(
                f"no rule for {format_word((last, g))} in {self.name or 'rewrite system'}"
            )
        self._gen_cache[key] = out
        return out

    def _mul_word(self, mono, word):
        cur = {mono: self.ring.one}
        for g in word:
            nxt = {}
            for m, c in cur.items():
                for m2, c2 in self._mul_gen(m, g).items():
                    v = c * c2
                    v = nxt[m2] + v if m2 in nxt else v
                    if v:
                        nxt[m2] = v
                    else:
                        nxt.pop(m2, None)
            cur = nxt
        return cur

    def mul_monomials(self, m1, m2):
        key = (m1, m2)
        hit = self._mono_cache.get(key)
        if hit is None:
            hit = self._mul_word(m1, word_of(m2))
            self._mono_cache[key] = hit
        return hit

    def normal_order(self, word, c=1):
        word = tuple(gen_index(g) for g in word)
        terms = self._mul_word(UNIT, word)
        e = AlgebraElement._raw(self.ring, dict(terms))
        return e if c == 1 else e.scale(c)

    def reduce(self, element):
        """Normal form of a free-algebra element."""
        out = {}
        for w, c in element.terms.items():
            for m, c2 in self._mul_word(UNIT, w).items():
                v = c * c2
                v = out[m] + v if m in out else v
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return AlgebraElement._raw(self.ring, out)

    def reduce_random(self, word, rng, c=1):
        """Normal form of ``word`` by firing redexes at random positions.

        Independent of the cached left-to-right strategy used by
        ``normal_order``; agreement of the two is a confluence witness.
        """
        todo = {tuple(gen_index(g) for g in word): self.ring(c)}
        done = {}
        while todo:
            w, coef = todo.popitem()
            redexes = [i for i in range(len(w) - 1) if (w[i], w[i + 1]) in self.rules or w[i] > w[i + 1]]
            if not redexes:
                m = _canonical_key(w)
                v = done[m] + coef if m in done else coef
                if v:
                    done[m] = v
                else:
                    done.pop(m, None)
                continue
            i = rng.choice(redexes)
            rule = self.rules.get((w[i], w[i + 1]))
            if rule is None:
                raise IncompleteRewriteSystem(f"no rule for {format_word(w[i:i + 2])} in {self.name or 'rewrite system'}")
            for m, c2 in rule.terms.items():
                nw = w[:i] + word_of(m) + w[i + 2:]
                v = coef * c2
                v = todo[nw] + v if nw in todo else v
                if v:
                    todo[nw] = v
                else:
                    todo.pop(nw, None)
        return AlgebraElement._raw(self.ring, done)

    def multiply(self, e1, e2):
        out = {}
        for m1, c1 in e1.terms.items():
            for m2, c2 in e2.terms.items():
                c12 = c1 * c2
                for m, c in self.mul_monomials(m1, m2).items():
                    v = c12 * c
                    v = out[m] + v if m in out else v
                    if v:
                        out[m] = v
                    else:
                        out.pop(m, None)
        return AlgebraElement._raw(self.ring, out)

    def power(self, e, n):
        out = AlgebraElement.unit(self.ring)
        for _ in range(n):
            out = self.multiply(out, e)
        return out

    def tensor_multiply(self, t1, t2):
        out = {}
        for k1, c1 in t1.terms.items():
            for k2, c2 in t2.terms.items():
                slots = [self.mul_monomials(a, b) for a, b in zip(k1, k2)]
                c12 = c1 * c2
                for combo in product(*(s.items() for s in slots)):
                    key = tuple(m for m, _ in combo)
                    v = c12
                    for _, c in combo:
                        v = v * c
                    v = out[key] + v if key in out else v
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return TensorElement._raw(self.ring, out)

    def to_text(self):
        lines = []
        for (g1, g2) in sorted(self.rules):
            lines.append(f"{GENERATORS[g1]}*{GENERATORS[g2]} = {self.rules[(g1, g2)].to_text()}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, ring, name=""):
        from .parsing import parse_free

        rules = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            lhs, sep, rhs = line.partition("=")
            if not sep:
                raise RewriteError(f"line {lineno}: expected 'g1*g2 = element'")
            word = tuple(gen_index(g.strip()) for g in lhs.split("*"))
            if len(word) != 2:
                raise RewriteError(f"line {lineno}: left side must be a two-letter word")
            rules[word] = parse_free(rhs, ring)
        return cls(ring, rules, name)


def _canonical_key(word):
    if any(word[i] > word[i + 1] for i in range(len(word) - 1)):
        raise RewriteError(f"replacement word {format_word(word)} is not in canonical order")
    mono = [0] * NGEN
    for g in word:
        mono[g] += 1
    return tuple(mono)


def normal_order(word, rs):
    return rs.normal_order(word)


def multiply(e1, e2, rs):
    return rs.multiply(e1, e2)


def tensor_multiply(t1, t2, rs):
    return rs.tensor_multiply(t1, t2)


# -- classical (commutative) check ------------------------------------------

_VARS = {"alpha": 2, "beta": 0, "gamma": 3, "eta": 1, "a": 5, "b": 4, "c": 7, "d": 6}


def _vf(*pairs):
    """Vector field sum(coef_var * d/d target) with monomial coefficients."""
    field = {}
    for coef_var, target in pairs:
        mono = [0] * NGEN
        if coef_var is not None:
            mono[_VARS[coef_var]] = 1
        field.setdefault(_VARS[target], {})[tuple(mono)] = Fraction(1)
    return field


CLASSICAL_FIELDS = {
    "X1": _vf((None, "alpha")),
    "X2": _vf((None, "beta")),
    "X3": _vf(("alpha", "beta"), ("eta", "gamma")),
    "X4": _vf(("eta", "eta"), ("alpha", "alpha")),
    "Xt1": _vf((None, "a")),
    "Xt2": _vf((None, "b")),
    "Xt3": _vf(("a", "b"), ("d", "c")),
    "Xt4": _vf(("d", "d"), ("a", "a")),
}

CLASSICAL_BRACKETS = {
    ("X1", "X3"): {"X2": 1},
    ("X4", "X1"): {"X1": -1},
    ("X4", "X3"): {"X3": 1},
    ("Xt1", "Xt3"): {"Xt2": 1},
    ("Xt4", "Xt1"): {"Xt1": -1},
    ("Xt4", "Xt3"): {"Xt3": 1},
}


def _poly_add(p, q, sign=1):
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _poly_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _poly_diff(p, var):
    out = {}
    for m, c in p.items():
        if m[var]:
            mm = list(m)
            mm[var] -= 1
            out[tuple(mm)] = out.get(tuple(mm), 0) + c * m[var]
    return out


def apply_field(field, poly):
    """Apply a first-order differential operator to a commutative polynomial."""
    out = {}
    for var, coef in field.items():
        out = _poly_add(out, _poly_mul(coef, _poly_diff(poly, var)))
    return out


def field_bracket(f, g):
    out = {}
    for var in set(f) | set(g):
        comp = _poly_add(apply_field(f, g.get(var, {})), apply_field(g, f.get(var, {})), -1)
        if comp:
            out[var] = comp
    return out


def _field_add(f, g, c):
    out = {v: dict(p) for v, p in f.items()}
    for var, p in g.items():
        comp = _poly_add(out.get(var, {}), {m: c * x for m, x in p.items()})
        if comp:
            out[var] = comp
        else:
            out.pop(var, None)
    return out


def _express(field):
    """Write ``field`` as a rational combination of the classical generators."""
    rest = field
    combo = {}
    for name, basis in CLASSICAL_FIELDS.items():
        # each basis field has a distinguishing constant or linear component
        for var, poly in basis.items():
            for mono, c in poly.items():
                owners = [n for n, b in CLASSICAL_FIELDS.items() if mono in b.get(var, {})]
                if owners == [name]:
                    k = rest.get(var, {}).get(mono, 0) / c
                    if k:
                        combo[name] = Fraction(k)
                        rest = _field_add(rest, basis, -k)
                    break
            else:
                continue
            break
    return combo, rest


def classical_derivation_check():
    """Commutator table of the classical vector fields.

    Returns ``{"table": {(X, Y): {Z: coef}}, "failures": [...], "passed": bool}``
    where the table holds every bracket ``[X, Y]`` expanded in the basis.
    """
    names = list(CLASSICAL_FIELDS)
    table = {}
    failures = []
    for x in names:
        for y in names:
            bracket = field_bracket(CLASSICAL_FIELDS[x], CLASSICAL_FIELDS[y])
            combo, rest = _express(bracket)
            table[(x, y)] = combo
            if rest:
                failures.append(((x, y), "bracket leaves the span of the generators"))
            expected = CLASSICAL_BRACKETS.get((x, y))
            if expected is None and (y, x) in CLASSICAL_BRACKETS:
                expected = {k: -v for k, v in CLASSICAL_BRACKETS[(y, x)].items()}
            expected = {k: Fraction(v) for k, v in (expected or {}).items()}
            if combo != expected:
                failures.append(((x, y), f"got {combo}, expected {expected}"))
    return {"table": table, "failures": failures, "passed": not failures}
