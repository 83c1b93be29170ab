"""R-matrices of the two-oscillator group and the bialgebras they define.

An R-matrix is stored sparsely as ``(i, j, k, l) -> r^{ij}_{kl}`` with all
indices in ``1..5``.  As a 25x25 matrix, ``r^{ij}_{kl}`` sits in row
``(i, k)`` and column ``(j, l)``, so the block ``R^{ij}`` is the 5x5 matrix
``(r^{ij}_{kl})_{kl}`` and the first tensor factor is the block index.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction

import numpy as np

from .algebra import GENERATORS, FreeElement, RewriteError, RewriteSystem
from .coeff import Ring, UnboundParameter, check_assignment

__all__ = [
    "UnknownFamily",
    "FAMILIES",
    "T_ENTRIES",
    "RMatrixInstance",
    "RelationSet",
    "family_ring",
    "build_family",
    "check_qybe",
    "numeric_qybe",
    "random_assignment",
    "derive_relations",
    "template_positions",
    "CONSTRAINTS",
    "check_consistency",
    "constrained_entries",
    "verify_coproduct_compatibility",
    "load_golden",
]


class UnknownFamily(KeyError):
    pass


# entries of T as generator indices; missing positions are zero, () is 1
T_ENTRIES = {
    (1, 1): (),
    (1, 2): (GENERATORS.index("alpha"),),
    (1, 3): (GENERATORS.index("beta"),),
    (2, 2): (GENERATORS.index("eta"),),
    (2, 3): (GENERATORS.index("gamma"),),
    (3, 3): (),
    (4, 3): (GENERATORS.index("c"),),
    (4, 4): (GENERATORS.index("d"),),
    (5, 3): (GENERATORS.index("b"),),
    (5, 4): (GENERATORS.index("a"),),
    (5, 5): (),
}

IDX = range(1, 6)

_QUOTIENTS_D = {"u1": ("rho*sigma", "q"), "u2": ("tau*sigma", "p")}

FAMILY_PARAMS = {
    "IDENTITY": ([], {}),
    "FB-NONDEF": ([], {}),
    "I-II-A": (["x", "z", "s", "p", "q", "w", "rho", "tau", "r1113", "r1311", "r1313", "r1353"], {}),
    "I-II-B": (["x", "z", "s", "p", "rho", "tau", "r1113", "r1353"], {}),
    "I-II-C": (["x", "z", "s", "p", "theta", "r1113", "r1311", "r1313", "r5353"], {}),
    "I-II-D": (["x", "z", "s", "p", "q", "rho", "tau", "sigma", "r1113", "r1353"], _QUOTIENTS_D),
}

# r^{ij}_{kl} written "ijkl"; the I-II families start from the
# non-deformed fermionic-bosonic diagonal.
_FAMILY_ENTRIES = {
    "I-II-A": {
        "1212": "z", "2323": "x",
        "1223": "s", "2312": "s",
        "1322": "r1311 - s", "2213": "r1113 - s",
        "4314": "w", "5315": "w",
        "5343": "rho", "4353": "-rho",
        "4413": "r1113 - w", "5513": "r1113 - w",
        "5344": "q", "4453": "-q",
        "5453": "tau", "5354": "-tau",
        "5355": "p + q", "5553": "-p - q",
        "1333": "r1311", "1344": "r1311", "1355": "r1311",
        "3313": "r1113",
        "1113": "r1113", "1311": "r1311", "1313": "r1313",
        "1353": "r1353", "5313": "-r1353",
    },
    "I-II-B": {
        "1212": "z", "2323": "x",
        "1223": "s", "2312": "-s",
        "1322": "s - r1113", "2213": "r1113 - s",
        "1311": "-r1113", "1113": "r1113",
        "1313": "x*z/2 - (r1113 - s)^2",
        "5343": "rho", "4353": "-rho",
        "5344": "-p", "4453": "p",
        "5453": "tau", "5354": "-tau",
        "1333": "2*s - r1113", "1344": "2*s - r1113", "1355": "2*s - r1113",
        "4413": "r1113 - 2*s", "5513": "r1113 - 2*s", "3313": "r1113 - 2*s",
        "1353": "r1353", "5313": "-r1353",
    },
    "I-II-C": {
        "1212": "z", "2323": "x",
        "1223": "s", "2312": "s",
        "2213": "r1113 - s", "1322": "r1311 - s",
        "4413": "r1113 - theta", "1344": "r1311 + theta",
        "1333": "r1311", "1355": "r1311",
        "3313": "r1113", "5513": "r1113",
        "5344": "-p", "4453": "p",
        "1113": "r1113", "1311": "r1311", "1313": "r1313",
        "5353": "r5353",
    },
    "I-II-D": {
        "1212": "z", "2323": "x",
        "1223": "s", "2312": "-s",
        "1313": "x*z/2 - (r1113 - s)^2",
        "1322": "s - r1113", "2213": "r1113 - s",
        "1333": "2*s - r1113", "1355": "2*s - r1113",
        "3313": "r1113 - 2*s", "5513": "r1113 - 2*s",
        "1311": "-r1113", "1113": "r1113",
        "1344": "sigma - r1113 + 2*s", "4413": "r1113 - 2*s - sigma",
        "1353": "r1353", "5313": "-r1353",
        "5343": "rho", "4353": "-rho",
        "5453": "tau", "5354": "-tau",
        "5344": "q", "4453": "-q",
        "1343": "u1", "4313": "-u1",
        "1354": "-u2", "5413": "u2",
        "1351": "p - q", "2352": "p - q", "3353": "p - q", "4354": "p - q",
        "5113": "q - p", "5223": "q - p", "5333": "q - p", "5443": "q - p",
    },
}

FAMILIES = tuple(FAMILY_PARAMS)


def family_ring(family):
    if family not in FAMILY_PARAMS:
        raise UnknownFamily(family)
    params, quotients = FAMILY_PARAMS[family]
    return Ring(params, quotients)


def _key(text):
    return tuple(int(ch) for ch in text)


def _name(key):
    i, j, k, l = key
    return f"r{i}{j}_{k}{l}"


class RMatrixInstance:
    """Sparse R-matrix with coefficient entries ``r^{ij}_{kl}``."""

    def __init__(self, ring, entries, family="", free_entries=None):
        self.ring = ring
        self.family = family
        self.entries = {k: ring(v) for k, v in entries.items() if v}
        self.free_entries = dict(free_entries or {})

    def __getitem__(self, key):
        if isinstance(key, str):
            key = _key(key)
        return self.entries.get(tuple(key), self.ring.zero)

    def with_entry(self, key, value):
        if isinstance(key, str):
            key = _key(key)
        entries = dict(self.entries)
        entries[tuple(key)] = self.ring(value)
        return RMatrixInstance(self.ring, entries, self.family + "*", self.free_entries)

    def perturbed(self, key, delta=1):
        return self.with_entry(key, self[key] + delta)

    def scaled(self, factor):
        return RMatrixInstance(
            self.ring, {k: v * factor for k, v in self.entries.items()}, self.family, self.free_entries
        )

    def numeric(self, assignment):
        """Dense 25x25 float matrix at a numeric parameter assignment."""
        check_assignment(self.ring, assignment, set().union(*(v.variables() for v in self.entries.values())))
        M = np.zeros((25, 25))
        for (i, j, k, l), v in self.entries.items():
            M[5 * (i - 1) + (k - 1), 5 * (j - 1) + (l - 1)] = v.eval(assignment)
        return M

    def to_text(self):
        lines = [f"# family {self.family}"] if self.family else []
        for key in sorted(self.entries):
            lines.append(" ".join(map(str, key)) + f" {self.entries[key]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, ring, family=""):
        entries = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split(None, 4)
            if len(parts) != 5:
                raise ValueError(f"line {lineno}: expected 'i j k l <coefficient>'")
            key = tuple(int(p) for p in parts[:4])
            if not all(1 <= v <= 5 for v in key):
                raise ValueError(f"line {lineno}: index out of range")
            if key in entries:
                raise ValueError(f"line {lineno}: duplicate entry {_name(key)}")
            entries[key] = ring.parse(parts[4])
        return cls(ring, entries, family)

    def __eq__(self, other):
        return isinstance(other, RMatrixInstance) and self.entries == other.entries

    def __repr__(self):
        return f"RMatrixInstance({self.family or '?'}, {len(self.entries)} entries)"


def build_family(family, ring=None):
    """Build one of the bundled R-matrices.

    ``ring`` defaults to :func:`family_ring`; a user ring must declare every
    parameter the family needs.
    """
    if family not in FAMILY_PARAMS:
        raise UnknownFamily(family)
    params, quotients = FAMILY_PARAMS[family]
    if ring is None:
        ring = family_ring(family)
    for name in list(params) + list(quotients):
        if name not in ring.index:
            raise UnboundParameter(f"{family} needs parameter {name}")
    for name, (num, den) in quotients.items():
        if ring.quotients.get(name, (None, None))[1] != den:
            raise UnboundParameter(f"{family} needs {name} declared as a quotient by {den}")
    entries = {}
    for i in IDX:
        for k in IDX:
            entries[(i, i, k, k)] = ring(1)
    if family == "IDENTITY":
        return RMatrixInstance(ring, entries, family)
    entries[(2, 2, 2, 2)] = ring(-1)
    for key, text in _FAMILY_ENTRIES.get(family, {}).items():
        entries[_key(key)] = ring.parse(text)
    free = {n: ring.gen(n) for n in params if n.startswith("r")}
    return RMatrixInstance(ring, entries, family, free)


# -- QYBE ---------------------------------------------------------------------


def _embed(R, which):
    """Sparse 125x125 matrix R_12, R_13 or R_23 as {row: {col: coef}}."""
    out = {}
    for (i, j, k, l), v in R.entries.items():
        for m in IDX:
            if which == 12:
                row, col = (i, k, m), (j, l, m)
            elif which == 23:
                row, col = (m, i, k), (m, j, l)
            else:
                row, col = (i, m, k), (j, m, l)
            out.setdefault(row, {})[col] = v
    return out


def _sparse_mul(A, B, zero):
    out = {}
    for row, cols in A.items():
        acc = {}
        for mid, v in cols.items():
            for col, w in B.get(mid, {}).items():
                acc[col] = acc[col] + v * w if col in acc else v * w
        acc = {c: v for c, v in acc.items() if v}
        if acc:
            out[row] = acc
    return out


def check_qybe(R):
    """Symbolic residual of ``R12 R13 R23 - R23 R13 R12``.

    Returns ``{(row, col): residual}`` over the 125-dimensional triple
    tensor space; an empty dict means the QYBE holds identically.
    """
    R12, R13, R23 = (_embed(R, w) for w in (12, 13, 23))
    zero = R.ring.zero
    lhs = _sparse_mul(_sparse_mul(R12, R13, zero), R23, zero)
    rhs = _sparse_mul(_sparse_mul(R23, R13, zero), R12, zero)
    residual = {}
    for row in set(lhs) | set(rhs):
        a, b = lhs.get(row, {}), rhs.get(row, {})
        for col in set(a) | set(b):
            d = a.get(col, zero) - b.get(col, zero)
            if d:
                residual[(row, col)] = d
    return residual


def random_assignment(ring, rng):
    """Random rational point respecting ``s^2 = x z`` and quotient rules."""
    def draw():
        while True:
            v = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            if v:
                return v

    values = {}
    for name in ring.params:
        if name not in ring.quotients:
            values[name] = draw()
    if "s" in values:
        values["z"] = values["s"] ** 2 / values["x"]
    for name, (num, den) in ring.quotients.items():
        v = Fraction(1)
        for n, e in num.items():
            v *= values[n] ** e
        values[name] = v / values[den]
    return values


def numeric_qybe(R, assignment):
    """Max-norm of the QYBE residual computed with dense Kronecker products."""
    M = R.numeric({k: float(v) for k, v in assignment.items()})
    I5 = np.eye(5)
    R12 = np.kron(M, I5)
    R23 = np.kron(I5, M)
    # swap tensor factors 2 and 3 to move R12 onto factors 1 and 3
    P = np.zeros((125, 125))
    for a, b, c in itertools.product(range(5), repeat=3):
        P[25 * a + 5 * c + b, 25 * a + 5 * b + c] = 1
    R13 = P @ R12 @ P
    return float(np.max(np.abs(R12 @ R13 @ R23 - R23 @ R13 @ R12)))


# -- relations ----------------------------------------------------------------


def _rank(word):
    if len(word) == 2:
        return (2 if word[0] > word[1] else 1, word)
    return (0, word)


def _normalize(e):
    """Scale so the top word with a rational coefficient has coefficient 1."""
    best = None
    for w, c in e.terms.items():
        if c.is_constant() and (best is None or _rank(w) > _rank(best)):
            best = w
    if best is not None:
        return e.scale(1 / e.terms[best].constant())
    top = max(e.terms, key=_rank)
    lead = e.terms[top]
    sign = max(lead.terms.items(), key=lambda kv: kv[0])[1]
    return e.scale(-1) if sign < 0 else e


class RelationSet:
    """Quadratic relations ``e = 0`` in the free algebra, echelonized.

    ``raw`` keeps the distinct normalized input relations together with their
    multiplicities (``counts``).  ``basis`` maps each pivot word to the
    reduced relation in which that word has coefficient 1; pivots are chosen
    as the highest word, out-of-order pairs first, whose coefficient is a
    nonzero rational.  Rows that never acquire such a pivot end up in
    ``unresolved``.
    """

    def __init__(self, ring, relations, sources=None):
        self.ring = ring
        self.raw = []
        self.counts = {}
        self.sources = {}
        for n, e in enumerate(relations):
            if not e:
                continue
            e = _normalize(e)
            if e not in self.counts:
                self.raw.append(e)
                self.counts[e] = 0
                self.sources[e] = []
            self.counts[e] += 1
            if sources is not None:
                self.sources[e].append(sources[n])
        self.basis = {}
        self.redundant = 0
        self.unresolved = []
        self._echelonize()

    def reduce(self, e):
        for _ in range(64):
            hits = [w for w in e.terms if w in self.basis]
            if not hits:
                return e
            for w in hits:
                c = e.terms.get(w)
                if c:
                    e = e - self.basis[w].scale(c)
        raise RewriteError("reduction modulo the relation basis did not settle")

    def _add(self, e):
        e = self.reduce(e)
        if not e:
            self.redundant += 1
            return True
        cands = [w for w, c in e.terms.items() if c.is_constant()]
        if not cands:
            return False
        pivot = max(cands, key=_rank)
        e = e.scale(1 / e.terms[pivot].constant())
        for w, row in list(self.basis.items()):
            c = row.terms.get(pivot)
            if c:
                self.basis[w] = row - e.scale(c)
        self.basis[pivot] = e
        return True

    def _echelonize(self):
        pending = list(self.raw)
        while pending:
            left = [e for e in pending if not self._add(e)]
            if len(left) == len(pending):
                break
            pending = left
        self.unresolved = [self.reduce(e) for e in pending]
        self.unresolved = [e for e in self.unresolved if e]

    def __len__(self):
        return len(self.basis)

    def contains(self, e):
        return not self.reduce(e)

    def same_span(self, other):
        """Exact equality of the generated relation spaces."""
        if set(self.basis) != set(other.basis) or self.unresolved or other.unresolved:
            return False
        return all(other.contains(e) for e in self.basis.values()) and all(
            self.contains(e) for e in other.basis.values()
        )

    def difference(self, other):
        """Relations of ``self`` not implied by ``other`` and vice versa."""
        missing = [e for e in self.basis.values() if not other.contains(e)]
        extra = [e for e in other.basis.values() if not self.contains(e)]
        return missing, extra

    def rules(self):
        out = {}
        for pivot, row in self.basis.items():
            if len(pivot) != 2:
                raise RewriteError(f"relation {row} has a pivot of length {len(pivot)}")
            out[pivot] = -(row - FreeElement(self.ring, {pivot: self.ring.one}))
        return out

    def rewrite_system(self, name=""):
        if self.unresolved:
            raise RewriteError(f"{len(self.unresolved)} relations have no rational pivot")
        return RewriteSystem(self.ring, self.rules(), name)

    def to_text(self):
        lines = []
        for pivot in sorted(self.basis, key=_rank, reverse=True):
            rhs = -(self.basis[pivot] - FreeElement(self.ring, {pivot: self.ring.one}))
            lines.append(f"{GENERATORS[pivot[0]]}*{GENERATORS[pivot[1]]} = {rhs.to_text()}")
        for e in self.unresolved:
            lines.append(f"{e.to_text()} = 0")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, ring):
        from .parsing import parse_relation

        rels = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                rels.append(parse_relation(line, ring))
        return cls(ring, rels)


def _t(i, j):
    return T_ENTRIES.get((i, j))


def derive_relations(R):
    """Relations ``r^{ij}_{kl} t_{jm} t_{ls} - t_{kl} t_{ij} r^{jm}_{ls} = 0``.

    Both sides are expanded in the free algebra, one relation per free index
    tuple ``(i, k, m, s)``; identically zero tuples are dropped.
    """
    ring = R.ring
    by_first = {}
    for (i, j, k, l), v in R.entries.items():
        by_first.setdefault((i, k), []).append((j, l, v))
    by_last = {}
    for (j, m, l, s), v in R.entries.items():
        by_last.setdefault((m, s), []).append((j, l, v))
    rels, sources = [], []
    for i, k, m, s in itertools.product(IDX, repeat=4):
        acc = {}
        for j, l, v in by_first.get((i, k), ()):
            a, b = _t(j, m), _t(l, s)
            if a is not None and b is not None:
                w = a + b
                acc[w] = acc[w] + v if w in acc else v
        for j, l, v in by_last.get((m, s), ()):
            a, b = _t(k, l), _t(i, j)
            if a is not None and b is not None:
                w = a + b
                acc[w] = acc[w] - v if w in acc else -v
        e = FreeElement(ring, acc)
        if e:
            rels.append(e)
            sources.append((i, k, m, s))
    return RelationSet(ring, rels, sources)


def load_golden(family, ring=None):
    """Relation set read from the bundled golden file of the family."""
    from importlib.resources import files

    ring = ring or family_ring(family)
    name = family.lower().replace("-", "_") + ".txt"
    text = files("twoosc").joinpath("data", "golden", name).read_text(encoding="utf-8")
    return RelationSet.from_text(text, ring)


# -- consistency --------------------------------------------------------------

_TEMPLATE = {
    (1, 1): "11 13 22 33 44 53 55",
    (1, 2): "12 13 22 23 43 44 53 54",
    (1, 3): "11 12 13 22 23 33 43 44 51 53 54 55",
    (1, 4): "43",
    (1, 5): "53",
    (2, 2): "11 12 13 22 23 33 43 44 53 54 55",
    (2, 3): "12 13 22 23 43 44 52 53 54",
    (3, 3): "11 13 22 33 44 53 55",
    (4, 3): "12 13 14 22 23 43 44 53 54",
    (4, 4): "11 12 13 22 23 33 43 44 53 54 55",
    (5, 1): "13",
    (5, 2): "23",
    (5, 3): "11 12 13 15 22 23 33 43 44 53 54 55",
    (5, 4): "12 13 22 23 43 44 53 54",
    (5, 5): "11 13 22 33 44 53 55",
}


def template_positions():
    out = set()
    for (i, j), cells in _TEMPLATE.items():
        for cell in cells.split():
            out.add((i, j, int(cell[0]), int(cell[1])))
    return out


# entries forced equal by the block template
_EQUAL = [
    "r11_11 r11_22 r11_33 r11_44 r11_55 r22_11 r22_33 r22_55 r33_11 r33_22 r33_33 r33_44 r33_55"
    " r44_11 r44_33 r44_55 r55_11 r55_22 r55_33 r55_44 r55_55",
    "r14_43 r15_53",
    "r23_52 r13_51",
    "r43_14 r53_15",
    "r51_13 r52_23",
]

CONSTRAINTS = [
    "r23_23*r12_22 = 0",
    "r12_12*r22_23 = 0",
    "r12_13 + r13_12 = 0",
    "r22_12 = r12_22",
    "r23_22 = r22_23",
    "r13_11 + r11_13 = r13_33 + r33_13",
    "r13_23 + r23_13 = 0",
    "2*r22_23*r12_22 = (r13_11 - r23_12 - r13_22) + (r11_13 - r12_23 - r22_13)",
    "r44_54 = -r54_44",
    "r43_44 = -r44_43",
    "r54_54 = 0",
    "r43_43 = 0",
    "r53_55 + r55_53 = r53_33 + r33_53",
    "r53_43 + r43_53 = 0",
    "r54_53 + r53_54 = 0",
    "r53_55 - r43_54 - r53_44 = r54_43 + r44_53 - r55_53",
    "r54_43 + r53_44 - r53_33 = r33_53 - r43_54 - r44_53",
    "r43_22 + r22_43 = 0",
    "r54_22 + r22_54 = 0",
    "r44_23 + r23_44 = 0",
    "r12_44 + r44_12 = 0",
    "r43_23 + r23_43 = 0",
    "r12_54 + r54_12 = 0",
    "r23_54 + r54_23 = -r44_23*r22_54",
    "r12_43 + r43_12 = -r22_43*r44_12",
    "r12_53 + r53_12 = -r12_54*r43_22",
    "r13_54 + r54_13 = -r12_54*r44_23",
    "r13_43 + r43_13 = r12_44*r23_43",
    "r53_23 + r23_53 = -r23_43*r54_22",
    "r13_44 + r44_13 - r13_55 - r55_13 = r12_44*r23_44",
    "r13_33 + r33_13 - r13_44 - r44_13 - r14_43 - r43_14 = -r12_44*r23_44",
    "r22_53 + r53_22 - r11_53 - r53_11 = r22_43*r22_54",
    "r53_33 + r33_53 - r53_22 - r22_53 - r52_23 - r23_52 = -r22_43*r22_54",
]

P_EXPR = "r53_55 - r43_54 - r53_44"
Q_EXPR = "r54_43 + r53_44 - r53_33"


def _entry_key(name):
    return (int(name[1]), int(name[2]), int(name[4]), int(name[5]))


def _entry_names(text):
    return sorted(set(re.findall(r"r\d\d_\d\d", text)))


def _compiled():
    from .parsing import parse_relation

    names = set()
    for text in CONSTRAINTS + [P_EXPR, Q_EXPR]:
        names.update(_entry_names(text))
    ring = Ring(sorted(names))
    out = []
    for text in CONSTRAINTS:
        e = parse_relation(text, ring)
        out.append((text, e.terms.get((), ring.zero)))
    return ring, out


_ENTRY_RING, _COMPILED = _compiled()


def _as_family(poly, R):
    mapping = {n: R[_entry_key(n)] for n in _ENTRY_RING.params}
    return poly.compose(mapping, R.ring)


def check_consistency(R):
    """Check the block template and every listed consistency relation.

    Returns ``{"violations": [(label, residual)], "p": ..., "q": ...,
    "passed": bool}``.  ``p`` and ``q`` are the values the two defining
    consistency relations assign to the bosonic deformation parameters.
    """
    violations = []
    allowed = template_positions()
    for key, v in sorted(R.entries.items()):
        if key not in allowed:
            violations.append((f"{_name(key)} outside the block template", v))
    for group in _EQUAL:
        names = group.split()
        ref = R[_entry_key(names[0])]
        for n in names[1:]:
            d = R[_entry_key(n)] - ref
            if d:
                violations.append((f"{n} = {names[0]}", d))
    for label, poly in _COMPILED:
        d = _as_family(poly, R)
        if d:
            violations.append((label, d))
    from .parsing import parse_coefficient

    p = _as_family(parse_coefficient(P_EXPR, _ENTRY_RING), R)
    q = _as_family(parse_coefficient(Q_EXPR, _ENTRY_RING), R)
    return {"violations": violations, "p": p, "q": q, "passed": not violations}


def constrained_entries(R):
    """Positions whose single-entry perturbation must break consistency.

    These are the template-tied entries, every position outside the
    template, and every entry with a nonzero partial derivative in some
    consistency relation at ``R``.
    """
    out = set()
    for group in _EQUAL:
        out.update(_entry_key(n) for n in group.split())
    for label, poly in _COMPILED:
        for name in poly.variables():
            if _as_family(poly.derivative(name), R):
                out.add(_entry_key(name))
    everything = set(itertools.product(IDX, repeat=4))
    out |= everything - template_positions()
    return sorted(out)


# -- coproduct compatibility --------------------------------------------------


def verify_coproduct_compatibility(rels, rs=None):
    """Check that the coproduct maps every relation into the ideal.

    Each relation ``e = 0`` is pushed through the coproduct letter by letter
    (homomorphism extension) and both tensor slots are normal-ordered with
    the rewrite system induced by ``rels``.  Returns
    ``{"failures": [(relation, image)], "checked": n, "passed": bool}``.
    """
    from .hopf import coproduct_free

    rs = rs or rels.rewrite_system()
    failures = []
    checked = 0
    for e in rels.raw:
        image = coproduct_free(e, rs)
        checked += 1
        if image:
            failures.append((e, image))
    return {"failures": failures, "checked": checked, "passed": not failures}

