"""Coproduct, duality pairing and the dual deformed superalgebra.

Dual generators are named ``A B C H`` (fermionic block) and ``At Bt Ct Ht``
(bosonic block, the tilded partners).  ``A`` and ``C`` are odd.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .algebra import (
    NGEN,
    UNIT,
    AlgebraElement,
    TensorElement,
    degree,
    gen_index,
    word_of,
)

__all__ = [
    "DUAL_GENERATORS",
    "DUAL_ODD",
    "TruncationTooSmall",
    "coproduct",
    "coproduct_free",
    "coproduct_monomial",
    "iterated_coproduct",
    "counit_slot",
    "pair_generator",
    "pair_word",
    "pair_supercommutator",
    "SeriesExpression",
    "pair_series",
    "DualParameters",
    "dual_relations",
    "monomials_up_to",
    "verify_dual_relations",
    "coproduct_expansion_tables",
    "lambda_identities",
]

DUAL_GENERATORS = ("A", "B", "C", "H", "At", "Bt", "Ct", "Ht")
DUAL_ODD = frozenset({"A", "C"})
FERMIONIC_DUAL = ("A", "B", "C", "H")
BOSONIC_DUAL = ("At", "Bt", "Ct", "Ht")


class TruncationTooSmall(ValueError):
    pass


# -- coproduct ----------------------------------------------------------------

_BETA, _ETA, _ALPHA, _GAMMA, _B, _A, _D, _C = range(NGEN)


def _m(*gens):
    v = [0] * NGEN
    for g in gens:
        v[g] += 1
    return tuple(v)


_ONE = UNIT
# Delta on generators: list of (left monomial, right monomial)
_DELTA_GEN = {
    _ALPHA: [(_ONE, _m(_ALPHA)), (_m(_ALPHA), _m(_ETA))],
    _BETA: [(_ONE, _m(_BETA)), (_m(_BETA), _ONE), (_m(_ALPHA), _m(_GAMMA))],
    _GAMMA: [(_m(_ETA), _m(_GAMMA)), (_m(_GAMMA), _ONE)],
    _ETA: [(_m(_ETA), _m(_ETA))],
    _A: [(_ONE, _m(_A)), (_m(_A), _m(_D))],
    _B: [(_ONE, _m(_B)), (_m(_B), _ONE), (_m(_A), _m(_C))],
    _C: [(_m(_D), _m(_C)), (_m(_C), _ONE)],
    _D: [(_m(_D), _m(_D))],
}


def _cache(rs, name):
    store = rs.__dict__.setdefault("_hopf_cache", {})
    return store.setdefault(name, {})


def _delta_gen(g, rs):
    ring = rs.ring
    return TensorElement._raw(ring, {k: ring.one for k in _DELTA_GEN[g]})


def coproduct_monomial(mono, rs):
    """Delta of a canonical monomial, both slots normal-ordered."""
    cache = _cache(rs, "delta")
    hit = cache.get(mono)
    if hit is not None:
        return hit
    word = word_of(mono)
    if not word:
        out = TensorElement._raw(rs.ring, {(UNIT, UNIT): rs.ring.one})
    elif len(word) == 1:
        out = _delta_gen(word[0], rs)
    else:
        rest = list(mono)
        rest[word[0]] -= 1
        out = rs.tensor_multiply(_delta_gen(word[0], rs), coproduct_monomial(tuple(rest), rs))
    cache[mono] = out
    return out


def _accumulate(out, t, c):
    for k, v in t.terms.items():
        val = v * c
        val = out[k] + val if k in out else val
        if val:
            out[k] = val
        else:
            out.pop(k, None)


def coproduct(e, rs):
    """Homomorphic extension of the generator coproduct to ``e``."""
    out = {}
    for mono, c in e.terms.items():
        _accumulate(out, coproduct_monomial(mono, rs), c)
    return TensorElement._raw(rs.ring, out)


def coproduct_free(e, rs):
    """Coproduct of a free-algebra element, letter by letter."""
    out = {}
    for word, c in e.terms.items():
        t = TensorElement._raw(rs.ring, {(UNIT, UNIT): rs.ring.one})
        for g in word:
            t = rs.tensor_multiply(t, _delta_gen(g, rs))
        _accumulate(out, t, c)
    return TensorElement._raw(rs.ring, out)


def iterated_coproduct(e, n, rs, side="left"):
    """``n``-fold coproduct; ``side`` picks which slot is split each time."""
    if n < 1:
        raise ValueError("order must be at least 1")
    t = TensorElement._raw(rs.ring, {(m,): c for m, c in e.terms.items()})
    for _ in range(n - 1):
        i = 0 if side == "left" else t.order - 1
        out = {}
        for key, c in t.terms.items():
            for (u, v), c2 in coproduct_monomial(key[i], rs).terms.items():
                k = key[:i] + (u, v) + key[i + 1 :]
                val = c * c2
                val = out[k] + val if k in out else val
                if val:
                    out[k] = val
                else:
                    out.pop(k, None)
        t = TensorElement._raw(rs.ring, out)
    return t


def counit_slot(t, i):
    """Apply the counit to slot ``i`` of a tensor element."""
    out = {}
    for key, c in t.terms.items():
        if AlgebraElement._raw(t.ring, {key[i]: t.ring.one}).counit():
            k = key[:i] + key[i + 1 :]
            val = out[k] + c if k in out else c
            if val:
                out[k] = val
            else:
                out.pop(k, None)
    return TensorElement._raw(t.ring, out)


# -- pairing ------------------------------------------------------------------


def _only(mono, **want):
    """True iff the exponents named in ``want`` match and the rest are free."""
    return all(mono[gen_index(n)] == v for n, v in want.items())


_FERMI_ZERO = dict(b=0, a=0, c=0)
_BOSE_ZERO = dict(beta=0, alpha=0, gamma=0)


def pair_generator(V, mono):
    """Value of a dual generator on a canonical monomial (an integer)."""
    if V == "A":
        return int(_only(mono, beta=0, alpha=1, gamma=0, **_FERMI_ZERO))
    if V == "B":
        return int(_only(mono, beta=1, alpha=0, gamma=0, **_FERMI_ZERO))
    if V == "C":
        return int(_only(mono, beta=0, alpha=0, gamma=1, **_FERMI_ZERO))
    if V == "H":
        return mono[_ETA] if _only(mono, beta=0, alpha=0, gamma=0, **_FERMI_ZERO) else 0
    if V == "At":
        return int(_only(mono, a=1, b=0, c=0, **_BOSE_ZERO))
    if V == "Bt":
        return int(_only(mono, a=0, b=1, c=0, **_BOSE_ZERO))
    if V == "Ct":
        return int(_only(mono, a=0, b=0, c=1, **_BOSE_ZERO))
    if V == "Ht":
        return mono[_D] if _only(mono, a=0, b=0, c=0, **_BOSE_ZERO) else 0
    if V == "1":
        return _counit_mono(mono)
    raise KeyError(f"unknown dual generator {V!r}")


def _counit_mono(mono):
    return int(not any(mono[i] for i in (_BETA, _ALPHA, _GAMMA, _B, _A, _C)))


def _pair_word_mono(word, mono, rs):
    ring = rs.ring
    if not word:
        return ring(_counit_mono(mono))
    if len(word) == 1:
        return ring(pair_generator(word[0], mono))
    cache = _cache(rs, "pair")
    key = (word, mono)
    hit = cache.get(key)
    if hit is not None:
        return hit
    head, rest = word[0], word[1:]
    total = ring.zero
    for (u, v), c in coproduct_monomial(mono, rs).terms.items():
        g = pair_generator(head, u)
        if g:
            sub = _pair_word_mono(rest, v, rs)
            if sub:
                total = total + c * sub * g
    cache[key] = total
    return total


def pair_word(word, e, rs):
    """``(V1 V2 ... Vn, e)`` through the iterated coproduct."""
    if isinstance(word, str):
        word = (word,)
    word = tuple(word)
    total = rs.ring.zero
    for mono, c in e.terms.items():
        v = _pair_word_mono(word, mono, rs)
        if v:
            total = total + c * v
    return total


def supersign(V, W):
    return 1 if (V in DUAL_ODD and W in DUAL_ODD) else -1


def pair_supercommutator(V, W, e, rs):
    """``(V W -+ W V, e)``: anticommutator iff both generators are odd."""
    return pair_word((V, W), e, rs) + pair_word((W, V), e, rs) * supersign(V, W)


# -- series -------------------------------------------------------------------


def _complete_homogeneous(degree, nodes, ring):
    """h_degree(nodes) as a coefficient; nodes are coefficients."""
    if degree < 0:
        return ring.zero
    total = ring.zero
    for combo in itertools.combinations_with_replacement(range(len(nodes)), degree):
        term = ring.one
        for i in combo:
            term = term * nodes[i]
        total = total + term
    return total


class SeriesExpression:
    """Formal power series in one even dual generator, with letter factors.

    Each part is ``scale * prefix * (sum_j coeff(j) G^j) * suffix`` where
    ``G`` is ``"B"`` or ``"Bt"`` and ``coeff(j)`` is an exact coefficient.
    A part with ``gen=None`` is the plain word ``scale * prefix * suffix``.
    """

    def __init__(self, ring, parts):
        self.ring = ring
        self.parts = list(parts)

    @classmethod
    def from_coefficients(cls, ring, gen, coeff, name=""):
        return cls(ring, [((), gen, coeff, (), ring.one, name)])

    @classmethod
    def word(cls, ring, letters, scale=1):
        return cls(ring, [(tuple(letters), None, None, (), ring(scale), "")])

    @classmethod
    def sinhc(cls, ring, xz, gen="B"):
        """sinh(2 G sqrt(xz)) / (2 sqrt(xz)) with ``xz`` a coefficient."""
        def coeff(j):
            if j % 2 == 0:
                return ring.zero
            return (xz * 4) ** ((j - 1) // 2) * Fraction(1, math.factorial(j))

        return cls.from_coefficients(ring, gen, coeff, "sinhc")

    @classmethod
    def cosh(cls, ring, xz, gen="B"):
        """cosh(2 G sqrt(xz))."""
        def coeff(j):
            if j % 2:
                return ring.zero
            return (xz * 4) ** (j // 2) * Fraction(1, math.factorial(j))

        return cls.from_coefficients(ring, gen, coeff, "cosh")

    @classmethod
    def one_minus_cosh_over(cls, ring, xz, denom_other, gen="B"):
        """(1 - cosh(2 G sqrt(xz))) / (4 v) where ``xz = v * w``, ``w = denom_other``.

        The division is exact term by term: for ``j = 2h`` the coefficient is
        ``-4^(h-1) (xz)^(h-1) w / j!``.
        """
        def coeff(j):
            if j % 2 or j == 0:
                return ring.zero
            h = j // 2
            return -(xz ** (h - 1)) * denom_other * Fraction(4 ** (h - 1), math.factorial(j))

        return cls.from_coefficients(ring, gen, coeff, "1-cosh")

    @classmethod
    def exp_divided_difference(cls, ring, nodes, gen="Bt"):
        """Divided difference of u -> exp(u G) at ``nodes``.

        With ``n`` nodes the j-th coefficient is ``h_{j-n+1}(nodes) / j!``;
        e.g. nodes ``(p+q, 0)`` give ``(exp((p+q) G) - 1) / (p+q)``.
        """
        nodes = [ring(n) for n in nodes]
        n = len(nodes)

        def coeff(j):
            return _complete_homogeneous(j - n + 1, nodes, ring) * Fraction(1, math.factorial(j))

        return cls.from_coefficients(ring, gen, coeff, f"dd{n}")

    def __add__(self, other):
        return SeriesExpression(self.ring, self.parts + other.parts)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c):
        c = self.ring(c)
        return SeriesExpression(
            self.ring, [(pre, g, f, suf, sc * c, nm) for pre, g, f, suf, sc, nm in self.parts]
        )

    def left(self, *letters):
        return SeriesExpression(
            self.ring, [(tuple(letters) + pre, g, f, suf, sc, nm) for pre, g, f, suf, sc, nm in self.parts]
        )

    def right(self, *letters):
        return SeriesExpression(
            self.ring, [(pre, g, f, suf + tuple(letters), sc, nm) for pre, g, f, suf, sc, nm in self.parts]
        )

    def truncate(self, K):
        """Explicit ``[(word, coefficient)]`` up to order ``K`` in the series variable."""
        out = {}
        for pre, g, f, suf, sc, _ in self.parts:
            if g is None:
                terms = [((), sc)]
            else:
                terms = [((g,) * j, f(j) * sc) for j in range(K + 1)]
            for body, c in terms:
                if c:
                    w = pre + body + suf
                    out[w] = out[w] + c if w in out else c
        return [(w, c) for w, c in out.items() if c]


def pair_series(se, e, K, rs):
    """Pair a series with ``e`` after truncation at order ``K``.

    ``(G^j, P)`` vanishes once ``j`` exceeds the degree of ``P`` (each factor
    needs its own ``beta`` or ``b``), so the value is exact for
    ``K >= deg(e)``; smaller ``K`` raises :class:`TruncationTooSmall`.
    """
    need = max((degree(m) for m in e.terms), default=0)
    if K < need:
        raise TruncationTooSmall(f"truncation order {K} below the degree {need} of the element")
    total = rs.ring.zero
    for word, c in se.truncate(K):
        v = pair_word(word, e, rs)
        if v:
            total = total + c * v
    return total


# -- dual relations -----------------------------------------------------------


class DualParameters:
    """Deformation data entering the dual relations, read off an R-matrix.

    ``z = r^{12}_{12}``, ``x = r^{23}_{23}``, ``rho = r^{53}_{43}``,
    ``tau = r^{54}_{53}`` and ``p, q`` from the two defining consistency
    relations.
    """

    def __init__(self, x, z, p, q, rho, tau):
        self.x, self.z, self.p, self.q, self.rho, self.tau = x, z, p, q, rho, tau

    @classmethod
    def from_rmatrix(cls, R):
        from .rmatrix import check_consistency

        report = check_consistency(R)
        return cls(R["2323"], R["1212"], report["p"], report["q"], R["5343"], R["5453"])

    def as_dict(self):
        return {k: str(getattr(self, k)) for k in ("x", "z", "p", "q", "rho", "tau")}


def dual_relations(ring, params, graded=True, corrected=False):
    """Expected brackets ``{(V, W): SeriesExpression}``.

    Every generator pair not listed brackets to zero.  With ``graded=False``
    (commutative bialgebra) the undeformed ungraded Lie algebra is returned.

    The literal ``[Ht, Ct]`` carries ``+tau``; expanding the pairing against
    ``[a, b] = p a + tau (1 - d)`` gives ``-tau`` instead (already
    ``([Ht, Ct], b^2) = -tau``).  ``corrected=True`` uses the computed sign.
    """
    P = params
    S = SeriesExpression
    if not graded:
        return {
            ("A", "C"): S.word(ring, ("B",)),
            ("H", "A"): S.word(ring, ("A",), -1),
            ("H", "C"): S.word(ring, ("C",)),
            ("At", "Ct"): S.word(ring, ("Bt",)),
            ("Ht", "At"): S.word(ring, ("At",), -1),
            ("Ht", "Ct"): S.word(ring, ("Ct",)),
        }
    xz = P.x * P.z
    sinhc = S.sinhc(ring, xz)
    one_plus_cosh = S.word(ring, ()) + S.cosh(ring, xz)
    pq = P.p + P.q
    return {
        ("A", "C"): sinhc,
        ("A", "A"): S.one_minus_cosh_over(ring, xz, P.x),
        ("C", "C"): S.one_minus_cosh_over(ring, xz, P.z),
        ("H", "A"): one_plus_cosh.left("A").scaled(Fraction(-1, 2)) - sinhc.right("C").scaled(P.x),
        ("H", "C"): one_plus_cosh.left("C").scaled(Fraction(1, 2)) + sinhc.right("A").scaled(P.z),
        ("At", "Ct"): S.exp_divided_difference(ring, (pq, 0)),
        ("Ht", "At"): S.word(ring, ("At",), -1) + S.exp_divided_difference(ring, (pq, 0, P.p)).scaled(P.rho),
        ("Ht", "Ct"): S.word(ring, ("Ct",))
        + S.exp_divided_difference(ring, (pq, 0, P.q)).scaled(-P.tau if corrected else P.tau),
    }


def monomials_up_to(D, square_free=(_ALPHA, _GAMMA)):
    """Canonical monomials of total degree <= D (alpha, gamma exponents <= 1)."""
    out = []
    for total in range(D + 1):
        for combo in itertools.combinations_with_replacement(range(NGEN), total):
            mono = [0] * NGEN
            for g in combo:
                mono[g] += 1
            if any(mono[g] > 1 for g in square_free):
                continue
            out.append(tuple(mono))
    return out


def _bracket_pairs(graded=True):
    pairs = []
    for block in (FERMIONIC_DUAL, BOSONIC_DUAL):
        for i, V in enumerate(block):
            for W in block[i:]:
                if V == W and not (graded and V in DUAL_ODD):
                    continue
                pairs.append((V, W))
    return pairs


def verify_dual_relations(R, D=6, rs=None, graded=None, corrected=False):
    """Check every dual bracket pointwise on monomials of degree <= D.

    ``R`` is an :class:`~twoosc.rmatrix.RMatrixInstance`; its derived
    relation set supplies the rewrite system unless ``rs`` is given.
    Returns a report with one record per bracket and the mixed
    (fermionic-bosonic) commutators.
    """
    from .rmatrix import derive_relations

    if rs is None:
        rs = derive_relations(R).rewrite_system(R.family)
    graded = (R.family != "IDENTITY") if graded is None else graded
    ring = R.ring
    params = DualParameters.from_rmatrix(R)
    expected = dual_relations(ring, params, graded, corrected)
    square_free = (_ALPHA, _GAMMA) if graded else ()
    monos = monomials_up_to(D, square_free)
    elements = [AlgebraElement._raw(ring, {m: ring.one}) for m in monos]

    def sign(V, W):
        return supersign(V, W) if graded else -1

    records = []
    for V, W in _bracket_pairs(graded):
        rhs, flip = expected.get((V, W)), 1
        if rhs is None and (W, V) in expected:
            # [V, W] = -[W, V]; anticommutators are symmetric
            rhs, flip = expected[(W, V)], sign(V, W)
        bad = []
        for mono, e in zip(monos, elements):
            if V == W:
                lhs = pair_word((V, V), e, rs)
            else:
                lhs = pair_word((V, W), e, rs) + pair_word((W, V), e, rs) * sign(V, W)
            val = pair_series(rhs, e, D, rs) * flip if rhs is not None else ring.zero
            if lhs != val:
                bad.append((mono, lhs - val))
        records.append({"bracket": (V, W), "kind": "deformed" if rhs is not None else "zero", "failures": bad})
    for V in FERMIONIC_DUAL:
        for W in BOSONIC_DUAL:
            bad = []
            for mono, e in zip(monos, elements):
                val = pair_supercommutator(V, W, e, rs)
                if val:
                    bad.append((mono, val))
            records.append({"bracket": (V, W), "kind": "mixed", "failures": bad})
    return {
        "family": R.family,
        "degree": D,
        "monomials": len(monos),
        "params": params.as_dict(),
        "records": records,
        "passed": all(not r["failures"] for r in records),
    }


# -- expansion tables ---------------------------------------------------------


def coproduct_expansion_tables(rs, k=0, l=0, r=0, s=0, t=0, u=0):
    """Coefficient tables of the coproduct in the split-index form.

    ``gamma_delta``: Delta(beta^k eta^l) split by whether the (alpha, gamma)
    exponents of the two slots agree (Gamma part) or differ by one in both
    (Delta part, exponents taken mod 2); keys ``(i, j, v, w, v', w')`` with
    slot exponents ``beta^v eta^{w+l}`` and ``beta^{v'} eta^{w'+l}``.

    ``lam``: for ``s = t = u = 0`` the table ``Lambda^r`` keyed by
    ``(k~, l~, m~, k', l', m', j')`` from Delta(b^r).  Also returns the
    full tensor elements.
    """
    ring = rs.ring
    f = [0] * NGEN
    f[_BETA], f[_ETA] = k, l
    fermi = coproduct_monomial(tuple(f), rs)
    gamma, delta, other = {}, {}, {}
    for (u1, u2), c in fermi.terms.items():
        if any(u1[g] or u2[g] for g in (_B, _A, _D, _C)):
            other[(u1, u2)] = c
            continue
        i, j = u1[_ALPHA], u1[_GAMMA]
        key = (i, j, u1[_BETA], u1[_ETA] - l, u2[_BETA], u2[_ETA] - l)
        if (u2[_ALPHA], u2[_GAMMA]) == (i, j):
            gamma[key] = c
        elif (u2[_ALPHA], u2[_GAMMA]) == ((i + 1) % 2, (j + 1) % 2):
            delta[key] = c
        else:
            other[(u1, u2)] = c
    bmono = [0] * NGEN
    bmono[_B], bmono[_A], bmono[_D], bmono[_C] = r, s, t, u
    bose = coproduct_monomial(tuple(bmono), rs)
    lam = {}
    for (u1, u2), c in bose.terms.items():
        if s == t == u == 0 and not u1[_C]:
            lam[(u1[_B], u1[_A], u1[_D], u2[_B], u2[_A], u2[_D], u2[_C])] = c
    return {
        "fermionic": fermi,
        "bosonic": bose,
        "gamma": gamma,
        "delta": delta,
        "other": other,
        "lambda": lam,
        "ring": ring,
    }


def lambda_identities(rs, r):
    """Evaluate the Lambda sum identities for Delta(b^r).

    Returns ``{name: (value, expected)}`` with exact coefficients.
    """
    ring = rs.ring
    lam = coproduct_expansion_tables(rs, r=r)["lambda"]

    def total(pred, weight=lambda key: 1):
        acc = ring.zero
        for key, c in lam.items():
            if pred(key):
                acc = acc + c * weight(key)
        return acc

    def shape(kt, lt, kp, lp, jp):
        return lambda key: (key[0], key[1], key[3], key[4], key[6]) == (kt, lt, kp, lp, jp)

    delta_r1 = ring(1 if r == 1 else 0)
    return {
        "sum L[0,0,m;0,1,m',0]": (total(shape(0, 0, 0, 1, 0)), ring.zero),
        "sum L[0,1,m;0,0,m',0]": (total(shape(0, 1, 0, 0, 0)), ring.zero),
        "sum L[0,0,m;1,0,m',0]": (total(shape(0, 0, 1, 0, 0)), delta_r1),
        "sum L[1,0,m;0,0,m',0]": (total(shape(1, 0, 0, 0, 0)), delta_r1),
        "sum L[0,0,m;0,0,m',1]": (total(shape(0, 0, 0, 0, 1)), ring.zero),
        "sum m~ L[0,0,m;0,0,m',0]": (total(shape(0, 0, 0, 0, 0), lambda key: key[2]), ring.zero),
        "sum m' L[0,0,m;0,0,m',0]": (total(shape(0, 0, 0, 0, 0), lambda key: key[5]), ring.zero),
    }
