"""Acceptance criteria, each at its stated tolerance.

Every test prints exactly one ``criterion N PASS|FAIL`` line (repeated in the
terminal summary) and then asserts the criterion as stated.
"""

import random
import time

import numpy as np

from conftest import family, relations, report_criterion, rewrite
from twoosc.algebra import NGEN, AlgebraElement
from twoosc.coherent import (
    AnnihilatorSpec,
    UnexpectedKernel,
    build_annihilator,
    coherent_closed_form,
    coherent_numeric_kernel,
    hamiltonian_H0,
    kernel_angles,
    pseudo_hermitian_transform,
)
from twoosc.fock import (
    APPB_FAMILIES,
    REALIZATION_FAMILIES,
    FockSpace,
    appendixB_residual,
    check_relations,
    random_params,
    realize,
)
from twoosc.hopf import iterated_coproduct, lambda_identities, verify_dual_relations
from twoosc.rmatrix import (
    FAMILIES,
    check_consistency,
    check_qybe,
    constrained_entries,
    derive_relations,
    load_golden,
    verify_coproduct_compatibility,
)

SEED = 20240601


def test_criterion_01_qybe_symbolic_zero():
    bad, slow = [], []
    for name in FAMILIES:
        t = time.perf_counter()
        res = check_qybe(family(name))
        dt = time.perf_counter() - t
        if res:
            bad.append(f"{name}: {len(res)} nonzero entries")
        if dt > 60:
            slow.append(f"{name}: {dt:.1f} s")
    ok = report_criterion(1, "QYBE residual symbolically empty for every family", not bad and not slow, "; ".join(bad + slow))
    assert ok


def test_criterion_02_relation_golden_match():
    bad = []
    for name in FAMILIES:
        derived = derive_relations(family(name))
        golden = load_golden(name)
        if not derived.same_span(golden):
            missing, extra = derived.difference(golden)
            bad.append(f"{name}: {len(missing)} derived-only, {len(extra)} golden-only")
    ok = report_criterion(2, "derived relations equal the golden sets", not bad, "; ".join(bad))
    assert ok


def test_criterion_03_consistency_and_perturbations():
    bad = []
    rng = random.Random(SEED)
    for name in FAMILIES:
        R = family(name)
        rep = check_consistency(R)
        if not rep["passed"]:
            bad.append(f"{name}: {len(rep['violations'])} violations")
        for key in rng.sample(constrained_entries(R), 10):
            if check_consistency(R.perturbed(key))["passed"]:
                bad.append(f"{name}: perturbing r{key} went unnoticed")
    ok = report_criterion(3, "consistency holds and 10 perturbations each break it", not bad, "; ".join(bad))
    assert ok


def test_criterion_04_coproduct_homomorphism():
    bad = []
    for name in FAMILIES:
        rep = verify_coproduct_compatibility(relations(name), rewrite(name))
        if not rep["passed"]:
            bad.append(f"{name}: {len(rep['failures'])} of {rep['checked']}")
    ok = report_criterion(4, "coproduct respects every relation", not bad, "; ".join(bad))
    assert ok


def test_criterion_05_dual_superalgebra():
    bad = []
    t = time.perf_counter()
    for name in ("I-II-A", "I-II-C"):
        rep = verify_dual_relations(family(name), D=6, rs=rewrite(name))
        deformed = [r for r in rep["records"] if r["kind"] == "deformed"]
        mixed = [r for r in rep["records"] if r["kind"] == "mixed"]
        if len(deformed) < 7 or len(mixed) != 16:
            bad.append(f"{name}: {len(deformed)} deformed and {len(mixed)} mixed brackets")
        for r in rep["records"]:
            if r["failures"]:
                V, W = r["bracket"]
                bad.append(f"{name} [{V},{W}] fails on {len(r['failures'])} monomials")
        for order in range(1, 9):
            for label, (val, want) in lambda_identities(rewrite(name), order).items():
                if val != want:
                    bad.append(f"{name} r={order} {label}")
    dt = time.perf_counter() - t
    if dt > 600:
        bad.append(f"runtime {dt:.0f} s")
    ok = report_criterion(5, "dual relations at D = 6 and Lambda identities r <= 8", not bad, "; ".join(bad) or f"{dt:.0f} s")
    assert ok


def test_criterion_06_fock_residuals():
    space = FockSpace(60)
    rng = np.random.default_rng(SEED)
    worst_deformed, worst_fermi = 0.0, 0.0
    where = ""
    for name in REALIZATION_FAMILIES:
        for _ in range(50):
            P = random_params(name, rng)
            rep = check_relations(realize(name, P, space), tol=1e-10, safe_band=5)
            for r in rep["records"]:
                if r["residual"] > worst_deformed:
                    worst_deformed, where = r["residual"], f"{name} {r['name']}"
                if r["sector"] == "fermionic":
                    worst_fermi = max(worst_fermi, r["residual"])
    ok = worst_deformed <= 1e-10 and worst_fermi <= 1e-13
    report_criterion(6, "Fock realization residuals", ok, f"max {worst_deformed:.2e} at {where}; fermionic {worst_fermi:.2e}")
    assert ok


def test_criterion_07_coefficient_system():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for name in APPB_FAMILIES:
        for _ in range(50):
            worst = max(worst, float(np.abs(appendixB_residual(name, random_params(name, rng))).max()))
    # upper sign with the literal c2 against the hyperbolic pair
    space = FockSpace(20)
    repro = []
    for x, z in ((0.6, 0.35), (-0.4, 0.8), (0.9, 0.9)):
        s = np.sqrt(complex(x * z))
        c2 = (np.cosh(s) - 1) * np.sinh(s) / (2 * s)
        ref = realize("HYPERBOLIC-DEFORMED", {"x": x, "z": z}, space)
        best = np.inf
        for printed in (False, True):
            ops = realize("APPB-4", {"x": x, "z": z, "sign": 1, "c2": c2}, space, printed=printed)
            best = min(best, max(np.abs(ops[k] - ref[k]).max() for k in ("A", "C")))
        repro.append(best)
    ok = worst <= 1e-12 and max(repro) <= 1e-12
    detail = f"system residual {worst:.2e}; APPB-4 reproduction residual {max(repro):.2e}"
    report_criterion(7, "coefficient system solutions and APPB-4 reproduction", ok, detail)
    assert ok


def test_criterion_08_coherent_states():
    space = FockSpace(60)
    cases = [
        ("SUPER", 0.0, 0.0, 1.0),
        ("SUPER", 0.0, 0.0, 1.7),
        ("SUPER", 0.5, 0.3, 1.3),
        ("SUPER", -0.4, 0.7, 0.8),
        ("ISO", 0.5, 0.3, 1.3),
        ("ISO", -0.4, 0.7, 0.8),
        ("ISO", 0.9, -0.2, 1.0),
    ]
    Zs = [0.0, 1.0, 2j, -1.4 + 1.4j, 0.5 - 0.3j]
    worst_res, worst_ang, worst_orth = 0.0, 0.0, 0.0
    where = ""
    for variant, x, z, w in cases:
        spec = AnnihilatorSpec(variant, x, z, w)
        A0 = build_annihilator(spec, space)
        for Z in Zs:
            cf = coherent_closed_form(spec, Z, space, printed=True)
            res = max(cf["residuals"])
            if res > worst_res:
                worst_res, where = res, f"{variant} x={x} z={z} w={w} Z={Z}"
            try:
                kern = coherent_numeric_kernel(A0, Z, space)
                worst_ang = max(worst_ang, float(kernel_angles(kern["states"], cf["states"]).max()))
            except UnexpectedKernel:
                worst_ang = np.inf
            if variant == "ISO":
                worst_orth = max(worst_orth, cf["overlap"])
    ok = worst_res <= 1e-8 and worst_ang <= 1e-6 and worst_orth <= 1e-10
    detail = f"eigen-residual {worst_res:.2e} at {where}; angle {worst_ang:.2e}; overlap {worst_orth:.2e}"
    report_criterion(8, "closed-form coherent states", ok, detail)
    assert ok


def test_criterion_09_spectrum_and_metric():
    space = FockSpace(60)
    notes = []
    ok = True
    for w in (1.0, 1.3):
        spec = AnnihilatorSpec("ISO", 0.5, 0.3, w)
        _, rep = hamiltonian_H0(spec, space)
        if rep["spectrum_error"] > 1e-8 * w:
            ok = False
            notes.append(f"H0 spectrum {rep['spectrum_error']:.2e}")
        b = pseudo_hermitian_transform(0.3, 0.2, spec, space)
        if b["spectrum_error"] > 1e-7 * w:
            ok = False
            notes.append(f"H spectrum {b['spectrum_error']:.2e}")
        if b["pseudo_hermiticity"] > 1e-8:
            ok = False
            notes.append(f"pseudo-hermiticity {b['pseudo_hermiticity']:.2e}")
        if b["unitarity_defect"] <= 1e-2:
            ok = False
            notes.append(f"T unitary at 0.3, 0.2: {b['unitarity_defect']:.2e}")
        u = pseudo_hermitian_transform(-0.2, 0.2, spec, space)
        if u["unitarity_defect"] >= 1e-9:
            ok = False
            notes.append(f"||T^dag T - I|| = {u['unitarity_defect']:.2e} at rho~ = -tau~ = -0.2, w={w}")
    report_criterion(9, "spectra, pseudo-hermiticity and unitarity of T", ok, "; ".join(notes))
    assert ok


def _random_element(rs, rng, max_len):
    e = AlgebraElement(rs.ring)
    for _ in range(rng.randint(1, 3)):
        e = e + rs.normal_order([rng.randrange(NGEN) for _ in range(rng.randint(0, max_len))]).scale(rng.randint(-3, 3))
    return e


def test_criterion_10_algebra_health():
    rng = random.Random(SEED)
    bad = []
    for name in FAMILIES:
        rs = rewrite(name)
        fails = 0
        for _ in range(10_000):
            w = [rng.randrange(NGEN) for _ in range(rng.randint(2, 6))]
            k = rng.randint(0, len(w))
            fails += rs.normal_order(w) != rs.multiply(rs.normal_order(w[:k]), rs.normal_order(w[k:]))
            fails += rs.normal_order(w) != rs.reduce_random(w, rng)
        if fails:
            bad.append(f"{name}: {fails} confluence failures")
        fails = 0
        for _ in range(10_000):
            e1, e2, e3 = (_random_element(rs, rng, 2) for _ in range(3))
            fails += rs.multiply(rs.multiply(e1, e2), e3) != rs.multiply(e1, rs.multiply(e2, e3))
        if fails:
            bad.append(f"{name}: {fails} associativity failures")
        fails = 0
        for _ in range(200):
            e = _random_element(rs, rng, 6)
            fails += iterated_coproduct(e, 3, rs, "left") != iterated_coproduct(e, 3, rs, "right")
        if fails:
            bad.append(f"{name}: {fails} coassociativity failures")
    ok = report_criterion(10, "confluence, associativity and coassociativity", not bad, "; ".join(bad))
    assert ok
