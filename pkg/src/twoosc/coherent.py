"""Deformed annihilators, their coherent states and the pseudo-Hermitian transform.

Two annihilators are built on the truncated Fock superspace::

    SUPER:  A0 = sqrt(w) a + b + k b^dag,        k = (1 - cosh 2s)/(4z) = -mu^2
    ISO:    A0 = sqrt(w) a + mu (b - b^dag),     mu = sinh(s)/sqrt(2z)

with ``s = sqrt(x z)``.  The fermionic part of either operator has the
eigenvectors ``chi_e = |0> + e i c |1>`` (``e = -1, +1``; ``c = mu`` for SUPER,
``c = 1`` for ISO) with eigenvalue ``e i mu``, so ``D(alpha) |0> chi_e`` is an
eigenstate with eigenvalue ``sqrt(w) alpha + e i mu``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import expm, subspace_angles

from .fock import DEFAULT_SAFE_BAND, FockSpace, _hyperbolic, ladder_ops

__all__ = [
    "VARIANTS",
    "AnnihilatorSpec",
    "InvalidVariant",
    "TruncationRisk",
    "UnexpectedKernel",
    "build_annihilator",
    "displacement",
    "phase_align",
    "coherent_closed_form",
    "coherent_numeric_kernel",
    "kernel_angles",
    "hamiltonian_H0",
    "displaced_coherent_and_U",
    "pseudo_hermitian_transform",
    "t_operator",
    "transformed_coherent",
]

VARIANTS = ("SUPER", "ISO")
BRANCHES = (-1, 1)
MASS_FRACTION = 0.9999


class InvalidVariant(ValueError):
    pass


class TruncationRisk(RuntimeError):
    pass


class UnexpectedKernel(RuntimeError):
    pass


class AnnihilatorSpec:
    """Variant plus the numbers ``x, z, omega`` entering ``A0``."""

    def __init__(self, variant, x=0.0, z=0.0, omega=1.0):
        if variant not in VARIANTS:
            raise InvalidVariant(f"unknown variant {variant!r}; expected one of {VARIANTS}")
        if variant == "ISO" and x == 0:
            raise InvalidVariant("ISO variant needs x != 0")
        if not omega or (np.isreal(omega) and np.real(omega) <= 0):
            raise InvalidVariant(f"omega must be positive, got {omega!r}")
        self.variant, self.x, self.z, self.omega = variant, x, z, omega
        h = _hyperbolic(x, z)
        self.mu = h["rx"] * h["shc"] / np.sqrt(2.0)  # sinh(s)/sqrt(2z)

    @property
    def k(self):
        return -self.mu**2

    def fermion_vector(self, e):
        c = self.mu if self.variant == "SUPER" else 1.0
        return np.array([1.0, e * 1j * c])

    def __repr__(self):
        return f"AnnihilatorSpec({self.variant!r}, x={self.x!r}, z={self.z!r}, omega={self.omega!r})"


def build_annihilator(spec, space=None):
    space = space or FockSpace()
    a, ad, b, bd, _ = ladder_ops(space)
    rw = np.sqrt(spec.omega)
    if spec.variant == "SUPER":
        return rw * a + b + spec.k * bd
    return rw * a + spec.mu * (b - bd)


def displacement(alpha, space=None):
    """``exp(alpha a^dag - conj(alpha) a)`` on the bosonic factor."""
    space = space or FockSpace()
    a, ad, _, _, _ = ladder_ops(space)
    return expm(alpha * ad - np.conj(alpha) * a)


def phase_align(v, ref):
    """``v`` times the phase that makes its largest component agree with ``ref``'s."""
    i = int(np.argmax(np.abs(ref)))
    if abs(v[i]) == 0:
        return v
    return v * (ref[i] / v[i]) / abs(ref[i] / v[i])


def _product_state(space, boson, fermion):
    """``sum_n boson[n] |n> (x) fermion``."""
    return np.kron(boson, fermion)


def _vacuum(space):
    v = np.zeros(space.n_boson, dtype=complex)
    v[0] = 1
    return v


def _mass(v, space, safe_band):
    idx = space.safe_indices(safe_band)
    total = np.vdot(v, v).real
    return float(np.vdot(v[idx], v[idx]).real / total) if total else 1.0


def _guard(v, space, safe_band, what):
    m = _mass(v, space, safe_band)
    if m < MASS_FRACTION:
        raise TruncationRisk(f"{what}: only {m:.6f} of the norm lies below n = N - {safe_band}")
    return m


def _displaced(space, alpha, fermion, safe_band):
    if abs(alpha) ** 2 > space.n_boson - safe_band:
        raise TruncationRisk(f"displacement |alpha| = {abs(alpha):.3g} too large for N = {space.n_boson}")
    a, ad, _, _, _ = ladder_ops(space)
    boson = expm(alpha * ad[::2, ::2] - np.conj(alpha) * a[::2, ::2]) @ _vacuum(space)
    v = _product_state(space, boson, fermion)
    _guard(v, space, safe_band, "coherent state")
    return v


def _branch_alpha(spec, Z, e, printed):
    rw = np.sqrt(spec.omega)
    if printed:
        return (Z + 1j * spec.mu) / rw
    return (Z - e * 1j * spec.mu) / rw


def coherent_closed_form(spec, Z, space=None, printed=False, safe_band=DEFAULT_SAFE_BAND):
    """Closed-form eigenstates of ``A0`` with eigenvalue ``Z``.

    Returns a dict with ``states`` (list of normalized vectors), ``labels``,
    ``residuals`` (``||A0 v - Z v||``), ``norms``, ``mass`` and, for ISO, the
    overlap between the two branches.

    ``printed=True`` keeps the literal displays: both branches are
    displaced by ``(Z + i mu)/sqrt(w)`` and the undeformed SUPER extra state is
    ``D(Z/sqrt(w)) (|1;0> - |0;1>)/sqrt(2)``.  The default displaces branch
    ``e`` by ``(Z - e i mu)/sqrt(w)`` and uses ``(|1;0> - sqrt(w)|0;1>)/sqrt(1+w)``,
    which are eigenstates for every branch and every ``w``.
    """
    space = space or FockSpace()
    A0 = build_annihilator(spec, space)
    states, labels = [], []
    if spec.variant == "SUPER" and spec.mu == 0:
        rw = np.sqrt(spec.omega)
        alpha = Z / rw
        states.append(_displaced(space, alpha, np.array([1.0, 0.0]), safe_band))
        labels.append("coherent")
        D = np.kron(displacement(alpha, space)[::2, ::2], np.eye(2))
        az = np.zeros(space.dim, dtype=complex)
        c = 1.0 if printed else rw
        az[space.index(1, 0)] = 1.0
        az[space.index(0, 1)] = -c
        v = D @ az / np.sqrt(1 + abs(c) ** 2)
        _guard(v, space, safe_band, "Aragone-Zypman state")
        states.append(v)
        labels.append("aragone-zypman")
    else:
        norm = 1 / np.sqrt(1 + abs(spec.mu) ** 2) if spec.variant == "SUPER" else 1 / np.sqrt(2)
        for e in BRANCHES:
            alpha = _branch_alpha(spec, Z, e, printed)
            states.append(_displaced(space, alpha, spec.fermion_vector(e), safe_band) * norm)
            labels.append("-" if e < 0 else "+")
    residuals = [float(np.linalg.norm(A0 @ v - Z * v) / np.linalg.norm(v)) for v in states]
    out = {
        "variant": spec.variant,
        "Z": complex(Z),
        "states": states,
        "labels": labels,
        "residuals": residuals,
        "norms": [float(np.linalg.norm(v)) for v in states],
        "mass": [_mass(v, space, safe_band) for v in states],
        "printed": printed,
    }
    out["overlap"] = float(abs(np.vdot(states[0], states[1])))
    return out


def coherent_numeric_kernel(A0, Z, space=None, safe_band=DEFAULT_SAFE_BAND, kernel_tol=1e-8, gap=1e-4):
    """Two-dimensional numerical kernel of ``A0 - Z`` on the safe band.

    Takes the SVD of the safe-band block and returns the right singular
    vectors of the two smallest singular values (zero-padded to the full
    space).  Raises :class:`UnexpectedKernel` unless exactly two singular
    values lie below ``kernel_tol`` and the third exceeds ``gap``.
    """
    space = space or FockSpace(A0.shape[0] // 2)
    idx = space.safe_indices(safe_band)
    M = (A0 - Z * np.eye(space.dim))[np.ix_(idx, idx)]
    _, sv, vh = np.linalg.svd(M)
    order = np.argsort(sv)
    small = sv[order[:3]]
    if not (small[0] <= kernel_tol and small[1] <= kernel_tol and small[2] > gap):
        raise UnexpectedKernel(f"smallest singular values {small.tolist()} do not give a 2-dim kernel")
    states = []
    for i in order[:2]:
        v = np.zeros(space.dim, dtype=complex)
        v[idx] = vh[i].conj()
        states.append(v)
    return {"states": states, "singular_values": small.tolist()}


def kernel_angles(states_a, states_b):
    """Principal angles (radians) between two spans."""
    return subspace_angles(np.column_stack(states_a), np.column_stack(states_b))


def _clusters(values, gap):
    groups = []
    for v in np.sort(values):
        if groups and v - groups[-1][-1] < gap:
            groups[-1].append(v)
        else:
            groups.append([v])
    return groups


def hamiltonian_H0(spec, space=None, n_max=10, safe_band=DEFAULT_SAFE_BAND, printed=False):
    """``H0 = A0^dag A0`` for the ISO variant and its spectrum report.

    Checks the doubly degenerate ladder ``0, 0, w, w, ..., n_max w``, the
    relations ``[H0, A0] = -w A0`` and ``[H0, A0^dag] = w A0^dag`` on the safe
    band, and ``H0 |E_n> = n w |E_n>`` for ``|E_n> = (A0^dag)^n/sqrt(n!) |0; e>``.
    """
    if spec.variant != "ISO":
        raise InvalidVariant("hamiltonian_H0 needs the ISO variant")
    space = space or FockSpace()
    w = spec.omega
    A0 = build_annihilator(spec, space)
    A0d = A0.conj().T
    H0 = A0d @ A0
    ev = np.linalg.eigvalsh(H0)
    count = 2 * (n_max + 1)
    expected = np.repeat(np.arange(n_max + 1) * w, 2)
    low = ev[:count]
    groups = _clusters(ev[ev < (n_max + 0.5) * w], w / 10)
    idx = space.safe_indices(safe_band)

    def band(M):
        return float(np.abs(M[np.ix_(idx, idx)]).max())

    ladder = {
        "[H0,A0]+wA0": band(H0 @ A0 - A0 @ H0 + w * A0),
        "[H0,A0^dag]-wA0^dag": band(H0 @ A0d - A0d @ H0 - w * A0d),
        "[A0,A0^dag]-w": band(A0 @ A0d - A0d @ A0 - w * np.eye(space.dim)),
    }
    ground = coherent_closed_form(spec, 0.0, space, printed=printed, safe_band=safe_band)
    eigen = []
    for v0, label in zip(ground["states"], ground["labels"]):
        v = v0.copy()
        for n in range(n_max + 1):
            if n:
                v = A0d @ v / math.sqrt(n)
            if _mass(v, space, safe_band) < MASS_FRACTION:
                break
            res = np.linalg.norm((H0 @ v - n * w * v)[idx]) / np.linalg.norm(v)
            eigen.append({"branch": label, "n": n, "residual": float(res)})
    return H0, {
        "eigenvalues": low.tolist(),
        "expected": expected.tolist(),
        "spectrum_error": float(np.abs(low - expected).max()),
        "degeneracy": [(float(np.mean(g)), len(g)) for g in groups],
        "ladder": ladder,
        "eigenstates": eigen,
    }


def displaced_coherent_and_U(spec, Z, space=None, printed=False, safe_band=DEFAULT_SAFE_BAND):
    """Compare ``DD(beta) |0; e>`` with ``U |Z; e>`` up to a global phase.

    ``DD(beta) = exp(beta A0^dag - conj(beta) A0)`` and
    ``U = exp(sqrt(2)/w Re Z sinh(s)/sqrt(z) (b - b^dag))``.  Since
    ``[A0, A0^dag] = w``, the eigenvalue of ``DD(beta)|0; e>`` is ``w beta``;
    the default takes ``beta = Z/w``.  ``printed=True`` takes the literal
    ``beta = Z/sqrt(w)``, which agrees only at ``w = 1``.
    """
    if spec.variant != "ISO":
        raise InvalidVariant("displaced_coherent_and_U needs the ISO variant")
    space = space or FockSpace()
    w = spec.omega
    A0 = build_annihilator(spec, space)
    _, _, b, bd, _ = ladder_ops(space)
    beta = Z / np.sqrt(w) if printed else Z / w
    DD = expm(beta * A0.conj().T - np.conj(beta) * A0)
    U = expm(np.sqrt(2) / w * np.real(Z) * np.sqrt(2.0) * spec.mu * (b - bd))
    ground = coherent_closed_form(spec, 0.0, space, safe_band=safe_band)
    states = coherent_closed_form(spec, Z, space, safe_band=safe_band)
    idx = space.safe_indices(safe_band)
    records = []
    for g, v, label in zip(ground["states"], states["states"], states["labels"]):
        lhs = DD @ g
        rhs = U @ v
        overlap = abs(np.vdot(lhs[idx], rhs[idx])) / (np.linalg.norm(lhs) * np.linalg.norm(rhs))
        diff = np.linalg.norm((phase_align(rhs, lhs) - lhs)[idx])
        eig = np.linalg.norm((A0 @ lhs - Z * lhs)[idx]) / np.linalg.norm(lhs)
        records.append(
            {"branch": label, "overlap": float(overlap), "difference": float(diff), "eigen_residual": float(eig)}
        )
    return {"Z": complex(Z), "beta": complex(beta), "printed": printed, "records": records, "U": U, "DD": DD}


def t_operator(rho_t, tau_t, space):
    """``T = exp(tau_t a) exp(rho_t a^dag)`` and its inverse on ``space``."""
    a, ad, _, _, _ = ladder_ops(space)
    T = expm(tau_t * a) @ expm(rho_t * ad)
    Tinv = expm(-rho_t * ad) @ expm(-tau_t * a)
    return T, Tinv


def pseudo_hermitian_transform(rho_t, tau_t, spec, space=None, n_max=10, safe_band=DEFAULT_SAFE_BAND, pad=40):
    """Transform ``A0, H0`` by ``T`` and check the deformed oscillator algebra.

    Operators are built on an enlarged space (``N + pad``) so that the
    non-unitary ``T`` does not carry truncation artifacts into the reported
    band ``n <= N - safe_band``; all residuals are taken there.
    """
    if spec.variant != "ISO":
        raise InvalidVariant("pseudo_hermitian_transform needs the ISO variant")
    space = space or FockSpace()
    big = FockSpace(space.n_boson + pad)
    idx = space.safe_indices(safe_band)
    w = spec.omega
    A0 = build_annihilator(spec, big)
    A0d = A0.conj().T
    H0 = A0d @ A0
    T, Tinv = t_operator(rho_t, tau_t, big)
    H = T @ H0 @ Tinv
    A = T @ A0 @ Tinv
    At = T @ A0d @ Tinv
    eta = Tinv.conj().T @ Tinv

    def band(M):
        return float(np.abs(M[np.ix_(idx, idx)]).max())

    I = np.eye(big.dim)
    relations = {
        "[A,At]-w": band(A @ At - At @ A - w * I),
        "[H,A]+wA": band(H @ A - A @ H + w * A),
        "[H,At]-wAt": band(H @ At - At @ H - w * At),
        "H-At*A": band(H - At @ A),
    }
    count = 2 * (n_max + 1)
    spec0 = np.sort(np.linalg.eigvalsh(H0))[:count]
    specH = np.sort_complex(np.linalg.eigvals(H[np.ix_(idx, idx)]))
    specH = specH[np.argsort(specH.real)][:count]
    eta_band = eta[np.ix_(idx, idx)]
    ground = coherent_closed_form(spec, 0.0, big, safe_band=pad + safe_band)
    eigen = []
    for v0, label in zip(ground["states"], ground["labels"]):
        v = v0.copy()
        for n in range(n_max + 1):
            if n:
                v = A0d @ v / math.sqrt(n)
            tv = T @ v
            res = np.linalg.norm((H @ tv - n * w * tv)[idx]) / np.linalg.norm(tv[idx])
            eigen.append({"branch": label, "n": n, "residual": float(res)})
    return {
        "T": T,
        "Tinv": Tinv,
        "eta": eta,
        "H": H,
        "A": A,
        "At": At,
        "space": big,
        "band": idx,
        "rho_t": rho_t,
        "tau_t": tau_t,
        "relations": relations,
        "pseudo_hermiticity": band(H.conj().T @ eta - eta @ H),
        "eta_hermitian": band(eta - eta.conj().T),
        "eta_min_eigenvalue": float(np.linalg.eigvalsh((eta_band + eta_band.conj().T) / 2).min()),
        "spectrum_H0": spec0.tolist(),
        "spectrum_H": specH.real.tolist(),
        "spectrum_error": float(np.abs(specH - spec0).max()),
        "unitarity_defect": band(T.conj().T @ T - I),
        "eigenstates": eigen,
    }


def transformed_coherent(bundle, spec, Z, safe_band=DEFAULT_SAFE_BAND):
    """Residuals of ``A T|Z; e> = Z T|Z; e>``, raw and after renormalizing."""
    big = bundle["space"]
    idx = bundle["band"]
    states = coherent_closed_form(spec, Z, big, safe_band=safe_band)
    out = []
    for v, label in zip(states["states"], states["labels"]):
        tv = bundle["T"] @ v
        r = (bundle["A"] @ tv - Z * tv)[idx]
        out.append(
            {
                "branch": label,
                "raw": float(np.linalg.norm(r)),
                "normalized": float(np.linalg.norm(r) / np.linalg.norm(tv[idx])),
            }
        )
    return out
