"""Truncated Fock superspace realizations of the deformed oscillator superalgebra.

Basis states are ``|n; j>`` with ``n = 0..N-1`` bosonic and ``j = 0, 1``
fermionic; the flat index is ``2 n + j`` (the fermion index runs fastest).
All realizations have ``B = Bt = I``, so every scalar function of ``B`` in
the dual relations becomes a multiple of the identity.

Deformation enters through ``s = sqrt(x z)``.  Square roots are taken on
the principal complex branch with ``s = sqrt(x) sqrt(z)``, so the formulas
stay consistent for negative ``x`` or ``z``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

__all__ = [
    "FockSpace",
    "InvalidRealization",
    "REALIZATION_FAMILIES",
    "ladder_ops",
    "omega",
    "bracket_factor",
    "tilde_params",
    "fermionic_coefficients",
    "appendixB_residual",
    "realize",
    "check_relations",
    "undeformed_ops",
    "random_params",
    "PARAM_KEYS",
]

REALIZATION_FAMILIES = ("HYPERBOLIC-DEFORMED", "ANTISYM", "APPB-1", "APPB-2", "APPB-3", "APPB-4")
APPB_FAMILIES = REALIZATION_FAMILIES[2:]
COEFF_NAMES = ("a0", "a1", "a2", "a3", "c0", "c1", "c2", "c3", "h0", "h1", "h2", "h3")
DEFAULT_N = 60
DEFAULT_SAFE_BAND = 5
DEFAULT_TOL = 1e-10


class InvalidRealization(ValueError):
    pass


class FockSpace:
    """``N`` bosonic levels times a two-level fermion; index ``2 n + j``."""

    fermion_dim = 2

    def __init__(self, n_boson=DEFAULT_N):
        if int(n_boson) != n_boson or n_boson < 8:
            raise ValueError(f"n_boson must be an integer >= 8, got {n_boson!r}")
        self.n_boson = int(n_boson)
        self.dim = 2 * self.n_boson

    def index(self, n, j):
        if not (0 <= n < self.n_boson and j in (0, 1)):
            raise IndexError(f"state |{n};{j}> outside the truncated space")
        return 2 * n + j

    def label(self, i):
        return divmod(i, 2)

    def state(self, n, j):
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(n, j)] = 1.0
        return v

    def safe_indices(self, safe_band=DEFAULT_SAFE_BAND):
        """Indices with ``n <= N - safe_band``."""
        top = min(self.n_boson, self.n_boson - safe_band + 1)
        return np.arange(2 * max(top, 0))

    def __eq__(self, other):
        return isinstance(other, FockSpace) and other.n_boson == self.n_boson

    def __hash__(self):
        return hash(("FockSpace", self.n_boson))

    def __repr__(self):
        return f"FockSpace(n_boson={self.n_boson})"


def ladder_ops(space):
    """``(a, a_dag, b, b_dag, I)`` as dense complex matrices."""
    N = space.n_boson
    aN = np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1)
    f = np.array([[0.0, 1.0], [0.0, 0.0]])
    a = np.kron(aN, np.eye(2)).astype(complex)
    b = np.kron(np.eye(N), f).astype(complex)
    return a, a.conj().T.copy(), b, b.conj().T.copy(), np.eye(space.dim, dtype=complex)


# -- scalar functions ---------------------------------------------------------


def omega(p, q):
    """``(e^{p+q} - 1)/(p+q)`` with the series ``1 + u/2 + u^2/6`` near zero."""
    u = p + q
    if abs(u) < 1e-6:
        return 1 + u / 2 + u * u / 6
    return np.expm1(u) / u


def _divided_difference_exp(nodes):
    """Divided difference of ``exp`` on ``nodes`` (top-right entry of the
    exponential of the bidiagonal node matrix; stable for coincident nodes)."""
    k = len(nodes)
    M = np.diag(np.asarray(nodes, dtype=complex)) + np.diag(np.ones(k - 1), 1)
    return expm(M)[0, k - 1]


def bracket_factor(p, q):
    """``e^q/(p+q) ((e^p - 1)/p + (e^{-q} - 1)/q)``, i.e. ``e^q exp[p, 0, -q]``.

    The literal quotient is used away from the removable singularities
    (``p``, ``q`` or ``p+q`` near zero); there the divided-difference form is
    used instead.
    """
    if min(abs(p), abs(q), abs(p + q)) > 1e-4:
        return np.exp(q) / (p + q) * (np.expm1(p) / p + np.expm1(-q) / q)
    return np.exp(q) * _divided_difference_exp((p, 0.0, -q))


def tilde_params(p, q, rho, tau):
    """``(tau_t, rho_t)`` entering ``Ht = a^dag a + tau_t a - rho_t a^dag``."""
    w = np.sqrt(omega(p, q))
    return tau / w * bracket_factor(p, q), rho / w * bracket_factor(q, p)


def _hyperbolic(x, z):
    """Scalars of ``s = sqrt(x z)``: ``s, cosh s, sinh s, sinh(s)/s``, and the roots."""
    rx, rz = np.sqrt(complex(x)), np.sqrt(complex(z))
    s = rx * rz
    ch, sh = np.cosh(s), np.sinh(s)
    shc = sh / s if abs(s) > 1e-8 else 1 + s * s / 6
    return {"rx": rx, "rz": rz, "s": s, "ch": ch, "sh": sh, "shc": shc}


def _fermionic_rhs(x, z):
    """Scalars of the fermionic relations at ``B = 1``."""
    h = _hyperbolic(x, z)
    S2 = h["shc"] * h["ch"]  # sinh(2s)/(2s)
    return {
        "AC": S2,
        "AA": -x * h["shc"] ** 2 / 2,  # (1 - cosh 2s)/(4z)
        "CC": -z * h["shc"] ** 2 / 2,  # (1 - cosh 2s)/(4x)
        "K2": h["ch"] ** 2,  # (1 + cosh 2s)/2
        "xS2": x * S2,
        "zS2": z * S2,
    }


# -- fermionic coefficient families --------------------------------------------


def _need(cond, msg):
    if not cond:
        raise InvalidRealization(msg)


def fermionic_coefficients(family, params, printed=False):
    """Coefficients of ``A, C, H`` in the basis ``I, b, b^dag, b^dag b``.

    ``params`` holds ``x, z`` and the family's free data (``h0``, ``a2``,
    ``c1``, ``c2``, ``sign`` = +1 or -1 for the upper or lower choice).
    ``printed=True`` uses the literal closed forms for the
    four solution families; the default uses the forms that solve the system
    (see :func:`appendixB_residual`).
    """
    x, z = params.get("x", 0.0), params.get("z", 0.0)
    h = _hyperbolic(x, z)
    rx, rz, s, ch, sh, shc = h["rx"], h["rz"], h["s"], h["ch"], h["sh"], h["shc"]
    h0 = params.get("h0", 0.0)
    sg = params.get("sign", 1)
    _need(sg in (1, -1), f"sign must be +1 or -1, got {sg!r}")
    co = dict.fromkeys(COEFF_NAMES, 0j)
    co["h0"] = complex(h0)
    r2 = np.sqrt(2.0)
    if family == "HYPERBOLIC-DEFORMED":
        co.update(a1=1, a2=-x * shc**2 / 2, c1=-z * shc / (ch + 1), c2=(ch + 1) * shc / 2, h3=ch)
    elif family == "ANTISYM":
        _need(x != 0, "ANTISYM needs x != 0")
        co.update(a1=rx * shc / r2, a2=-rx * shc / r2, c1=-(ch - 1) / (r2 * rx), c2=(ch + 1) / (r2 * rx), h3=ch)
    elif family == "APPB-1":
        a2 = params.get("a2", 1.0)
        _need(a2 != 0 and x != 0 and z != 0, "APPB-1 needs a2, x, z nonzero")
        a0 = sg * 1j * ch / (r2 * rz)
        c0 = -sg * 1j * sh / (r2 * rx)
        co.update(
            a0=a0, a1=1 / (2 * z * a2), a2=a2, a3=-2 * a0, c0=c0, c3=-2 * c0,
            h1=-sg * 1j * ch / (2 * r2 * rz * a2), h2=sg * 1j * rz / r2 * a2 * ch,
        )
    elif family == "APPB-2":
        a2 = params.get("a2", 1.0)
        _need(a2 != 0 and x != 0 and z != 0 and ch != 0, "APPB-2 needs a2, x, z, cosh s nonzero")
        c0 = -1j * sh / (r2 * rx)
        c1 = shc / (2 * a2) if printed else shc * ch / a2
        if printed:
            h2 = 1j * a2 * (rz / rx) * (np.cosh(4 * s) - 1) / (4 * r2 * ch)
        else:
            h2 = 1j * a2 * rz / r2 * ch
        co.update(
            a1=-x * shc**2 / (2 * a2), a2=a2, c0=c0, c1=c1, c3=-2 * c0,
            h1=1j * (np.cosh(4 * s) - 1) / (16 * a2 * r2 * rz * ch), h2=h2,
            h3=-(np.cosh(3 * s) + 3 * ch) / (4 * ch),
        )
    elif family == "APPB-3":
        c1 = params.get("c1", 1.0)
        _need(c1 != 0 and x != 0 and z != 0 and sh != 0, "APPB-3 needs c1, x, z, sinh s nonzero")
        a0 = sg * 1j * sh / (r2 * rz)
        co.update(
            a0=a0, a1=-2 * (rx / rz) * c1 * ch / sh, a3=-2 * a0, c1=c1, c2=-(sh**2) / (2 * x * c1),
            h1=-sg * 1j * rx / r2 * c1 * ch, h2=-sg * 1j * sh**2 / (2 * r2 * rx * c1) * ch, h3=ch**2,
        )
    elif family == "APPB-4":
        c2 = params.get("c2", 1.0)
        _need(c2 != 0 and x != 0 and z != 0 and sh != 0, "APPB-4 needs c2, x, z, sinh s nonzero")
        # the literal pairing puts the upper sign on (cosh s - 1) in a1 with
        # h3 = cosh s for both signs; the system needs a1 ~ (cosh s + sign),
        # a2 ~ (cosh s - sign) and h3 = sign * cosh s
        e = -sg if printed else sg
        co.update(
            a1=(ch + e) * sh / (2 * c2 * s), a2=-(rx / rz) * c2 * (ch - e) / sh,
            c1=-(sh**2) / (2 * x * c2), c2=c2, h3=ch if printed else sg * ch,
        )
    else:
        raise InvalidRealization(f"unknown realization family {family!r}")
    return {k: complex(v) for k, v in co.items()}


def appendixB_residual(family, params, printed=False):
    """Residuals of the eleven coefficient equations for ``A, C, H``.

    ``family`` may also be a coefficient dict (keys ``a0..h3``) to test
    arbitrary coefficients.
    """
    co = family if isinstance(family, dict) else fermionic_coefficients(family, params, printed)
    x, z = params.get("x", 0.0), params.get("z", 0.0)
    r = _fermionic_rhs(x, z)
    a0, a1, a2, a3, c0, c1, c2, c3, _, h1, h2, h3 = (co[k] for k in COEFF_NAMES)
    K2, xS2, zS2 = r["K2"], r["xS2"], r["zS2"]
    return np.array(
        [
            a3 + 2 * a0,
            c3 + 2 * c0,
            a0**2 + a1 * a2 - r["AA"],
            c0**2 + c1 * c2 - r["CC"],
            2 * a0 * c0 + a1 * c2 + a2 * c1 - r["AC"],
            h1 * a2 - h2 * a1 + K2 * a0 + xS2 * c0,
            h3 * a1 + 2 * h1 * a0 - K2 * a1 - xS2 * c1,
            h3 * a2 + 2 * h2 * a0 + K2 * a2 + xS2 * c2,
            h1 * c2 - h2 * c1 - zS2 * a0 - K2 * c0,
            h3 * c1 + 2 * h1 * c0 + zS2 * a1 + K2 * c1,
            h3 * c2 + 2 * h2 * c0 - zS2 * a2 - K2 * c2,
        ]
    )


# -- realizations -------------------------------------------------------------


def realize(family, params, space=None, printed=False):
    """The eight operators ``A, B, C, H, At, Bt, Ct, Ht`` on ``space``.

    ``params`` supplies ``x, z, p, q, rho, tau`` plus the family's free data;
    missing deformation parameters default to zero.
    """
    space = space or FockSpace()
    co = fermionic_coefficients(family, params, printed)
    a, ad, b, bd, I = ladder_ops(space)
    n_f = bd @ b

    def lin(prefix):
        return co[prefix + "0"] * I + co[prefix + "1"] * b + co[prefix + "2"] * bd + co[prefix + "3"] * n_f

    p, q = params.get("p", 0.0), params.get("q", 0.0)
    rho, tau = params.get("rho", 0.0), params.get("tau", 0.0)
    w = omega(p, q)
    tau_t, rho_t = tilde_params(p, q, rho, tau)
    rw = np.sqrt(w)
    return {
        "A": lin("a"),
        "B": I.copy(),
        "C": lin("c"),
        "H": lin("h"),
        "At": rw * a,
        "Bt": I.copy(),
        "Ct": rw * ad,
        "Ht": ad @ a + tau_t * a - rho_t * ad,
        "space": space,
        "family": family,
        "params": dict(params),
        "coefficients": co,
        "omega": w,
        "tau_t": tau_t,
        "rho_t": rho_t,
    }


def undeformed_ops(space=None):
    """The undeformed super-oscillator realization ``A = b, C = b^dag, ...``."""
    space = space or FockSpace()
    a, ad, b, bd, I = ladder_ops(space)
    return {"A": b, "B": I, "C": bd, "H": bd @ b, "At": a, "Bt": I, "Ct": ad, "Ht": ad @ a}


FERMIONIC_GENS = ("A", "B", "C", "H")
BOSONIC_GENS = ("At", "Bt", "Ct", "Ht")
_ODD = ("A", "C")


def check_relations(ops, tol=DEFAULT_TOL, safe_band=DEFAULT_SAFE_BAND):
    """Residuals of the deformed relations evaluated on realized operators.

    Fermionic-only and mixed relations are evaluated on the full space; any
    relation involving ``a, a^dag`` is restricted to ``n <= N - safe_band``.
    Each record is ``{name, sector, residual, passed}``.
    """
    space = ops["space"]
    P = ops["params"]
    x, z = P.get("x", 0.0), P.get("z", 0.0)
    p, q = P.get("p", 0.0), P.get("q", 0.0)
    rho, tau = P.get("rho", 0.0), P.get("tau", 0.0)
    r = _fermionic_rhs(x, z)
    I = np.eye(space.dim)
    safe = space.safe_indices(safe_band)
    A, C, H = ops["A"], ops["C"], ops["H"]
    At, Ct, Ht = ops["At"], ops["Ct"], ops["Ht"]

    def comm(X, Y):
        return X @ Y - Y @ X

    def acomm(X, Y):
        return X @ Y + Y @ X

    w = omega(p, q)
    fermi = {
        "{A,C}": acomm(A, C) - r["AC"] * I,
        "A^2": A @ A - r["AA"] * I,
        "C^2": C @ C - r["CC"] * I,
        "[H,A]": comm(H, A) + r["K2"] * A + r["xS2"] * C,
        "[H,C]": comm(H, C) - r["K2"] * C - r["zS2"] * A,
        "[B,A]": comm(ops["B"], A),
        "[B,C]": comm(ops["B"], C),
        "[B,H]": comm(ops["B"], H),
    }
    bose = {
        "[At,Ct]": comm(At, Ct) - w * I,
        "[Ht,At]": comm(Ht, At) + At - rho * bracket_factor(q, p) * I,
        "[Ht,Ct]": comm(Ht, Ct) - Ct - tau * bracket_factor(p, q) * I,
        "[Bt,At]": comm(ops["Bt"], At),
        "[Bt,Ct]": comm(ops["Bt"], Ct),
        "[Bt,Ht]": comm(ops["Bt"], Ht),
    }
    records = []
    for name, M in fermi.items():
        records.append({"name": name, "sector": "fermionic", "residual": float(np.abs(M).max())})
    for name, M in bose.items():
        res = float(np.abs(M[np.ix_(safe, safe)]).max())
        records.append({"name": name, "sector": "bosonic", "residual": res})
    for V in FERMIONIC_GENS:
        for W in BOSONIC_GENS:
            res = float(np.abs(comm(ops[V], ops[W])).max())
            records.append({"name": f"[{V},{W}]", "sector": "mixed", "residual": res})
    for rec in records:
        rec["passed"] = rec["residual"] <= tol
    return {
        "family": ops.get("family"),
        "n_boson": space.n_boson,
        "safe_band": safe_band,
        "tol": tol,
        "records": records,
        "max_residual": max(rec["residual"] for rec in records),
        "passed": all(rec["passed"] for rec in records),
    }


PARAM_KEYS = ("x", "z", "p", "q", "rho", "tau", "h0", "a2", "c1", "c2", "sign")


def random_params(family, rng, bound=1.0, floor=0.1):
    """Random valid parameters with ``|value| <= bound``.

    Quantities the family divides by (``x, z, a2, c1, c2``) are kept at
    least ``floor`` away from zero.
    """
    if family not in REALIZATION_FAMILIES:
        raise InvalidRealization(f"unknown realization family {family!r}")
    P = {k: float(rng.uniform(-bound, bound)) for k in ("p", "q", "rho", "tau", "h0")}
    for k in ("x", "z", "a2", "c1", "c2"):
        P[k] = float(rng.choice([-1.0, 1.0]) * rng.uniform(floor, bound))
    P["sign"] = int(rng.choice([-1, 1]))
    return P
