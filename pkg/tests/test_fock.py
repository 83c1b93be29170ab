import numpy as np
import pytest

from twoosc.fock import (
    APPB_FAMILIES,
    COEFF_NAMES,
    REALIZATION_FAMILIES,
    FockSpace,
    InvalidRealization,
    appendixB_residual,
    bracket_factor,
    check_relations,
    fermionic_coefficients,
    ladder_ops,
    omega,
    random_params,
    realize,
    tilde_params,
    undeformed_ops,
)

SMALL = FockSpace(20)


def test_ladder_matrix_elements():
    sp = FockSpace(10)
    a, ad, b, bd, I = ladder_ops(sp)
    assert sp.state(0, 1) @ bd @ sp.state(0, 0) == 1
    assert sp.state(4, 0) @ a @ sp.state(5, 0) == pytest.approx(np.sqrt(5))
    assert np.allclose(b @ b, 0)
    assert np.allclose(b @ bd + bd @ b, I)


def test_fock_space_guards():
    with pytest.raises(ValueError):
        FockSpace(4)
    with pytest.raises(IndexError):
        FockSpace(10).index(10, 0)
    assert len(FockSpace(10).safe_indices(5)) == 12


def test_omega_removable_singularity():
    assert omega(0.0, 0.0) == 1
    assert omega(1e-7, 0.0) == pytest.approx(np.expm1(1e-7) / 1e-7, rel=1e-14)
    assert omega(0.3, 0.2) == pytest.approx(np.expm1(0.5) / 0.5)


@pytest.mark.parametrize("p, q", [(1e-6, 0.3), (0.3, 1e-7), (0.2, -0.2 + 1e-8), (1e-9, 1e-9)])
def test_bracket_factor_continuous(p, q):
    def literal(p, q):
        return np.exp(q) / (p + q) * (np.expm1(p) / p + np.expm1(-q) / q)

    near = literal(p + 1e-3, q + 2e-3)
    assert abs(bracket_factor(p, q) - near) < 1e-2
    assert np.isfinite(bracket_factor(p, q))


def test_tilde_params_undeformed_limit():
    t, r = tilde_params(0.0, 0.0, 0.2, 0.3)
    # e^q exp[p, 0, -q] at p = q = 0 is 1/2
    assert t == pytest.approx(0.15) and r == pytest.approx(0.1)


def test_hyperbolic_undeformed_limit():
    ops = realize("HYPERBOLIC-DEFORMED", {"x": 0.0, "z": 0.0}, SMALL)
    ref = undeformed_ops(SMALL)
    for k in ("A", "C", "H", "At", "Ct", "Ht"):
        assert np.allclose(ops[k], ref[k], atol=1e-15), k


def test_antisym_small_z():
    x = 0.5
    ops = realize("ANTISYM", {"x": x, "z": 1e-12}, SMALL)
    _, _, b, bd, _ = ladder_ops(SMALL)
    assert np.allclose(ops["A"], np.sqrt(x / 2) * (b - bd), atol=1e-9)
    assert np.allclose(ops["C"], np.sqrt(2 / x) * bd, atol=1e-9)


def _residual(rep, name):
    return next(r["residual"] for r in rep["records"] if r["name"] == name)


def test_check_relations_examples():
    rep = check_relations(realize("HYPERBOLIC-DEFORMED", {"x": 0.3, "z": 0.2}, SMALL))
    assert _residual(rep, "{A,C}") < 1e-12
    rep = check_relations(realize("ANTISYM", {"x": 0.5, "z": 0.1}, SMALL))
    assert _residual(rep, "A^2") < 1e-12
    for fam in REALIZATION_FAMILIES:
        P = {} if fam == "HYPERBOLIC-DEFORMED" else {"x": 1.0, "z": 1.0}
        assert _residual(check_relations(realize(fam, P, SMALL)), "[At,Ct]") < 1e-12


def test_check_relations_detects_wrong_operator():
    ops = realize("HYPERBOLIC-DEFORMED", {"x": 0.3, "z": 0.2, "tau": 0.4}, SMALL)
    ops["Ht"] = ops["Ht"] + 0.01 * ladder_ops(SMALL)[0]
    assert not check_relations(ops)["passed"]


@pytest.mark.parametrize("fam", REALIZATION_FAMILIES)
def test_random_draws(fam):
    rng = np.random.default_rng(17)
    sp = FockSpace(30)
    for _ in range(8):
        rep = check_relations(realize(fam, random_params(fam, rng), sp), tol=1e-10)
        assert rep["passed"], [r for r in rep["records"] if not r["passed"]]
        fermi = max(r["residual"] for r in rep["records"] if r["sector"] != "bosonic")
        assert fermi <= 1e-13


def test_truncation_containment():
    P = {"x": 0.4, "z": -0.3, "p": 0.5, "q": -0.2, "rho": 0.3, "tau": -0.6}
    small = check_relations(realize("HYPERBOLIC-DEFORMED", P, FockSpace(30)))
    big = check_relations(realize("HYPERBOLIC-DEFORMED", P, FockSpace(60)))
    for r1 in small["records"]:
        assert abs(r1["residual"] - _residual(big, r1["name"])) <= 1e-12


def test_limit_is_linear_in_epsilon():
    P0 = {"x": 0.7, "z": 0.4, "p": 0.5, "q": -0.3, "rho": 0.2, "tau": 0.6}
    ref = undeformed_ops(SMALL)

    def dev(eps):
        ops = realize("HYPERBOLIC-DEFORMED", {k: eps * v for k, v in P0.items()}, SMALL)
        return max(np.abs(ops[k] - ref[k]).max() for k in ("A", "C", "H", "At", "Ct", "Ht"))

    ratio = dev(1e-3) / dev(1e-4)
    assert ratio == pytest.approx(10, rel=1e-2)


def test_coefficient_system_first_family_example():
    P = {"x": 0.4, "z": 0.9, "a2": 1.3, "sign": 1}
    co = fermionic_coefficients("APPB-1", P)
    assert co["c1"] == co["c2"] == co["h3"] == 0
    assert co["a0"] == pytest.approx(1j * np.cosh(np.sqrt(0.36)) / np.sqrt(1.8))
    assert np.abs(appendixB_residual("APPB-1", P)).max() < 1e-12


def test_coefficient_system_undeformed_point():
    co = dict.fromkeys(COEFF_NAMES, 0j)
    co.update(a1=1, c2=1, h3=1)
    assert np.abs(appendixB_residual(co, {"x": 0.0, "z": 0.0})).max() == 0


@pytest.mark.parametrize("fam", APPB_FAMILIES)
def test_coefficient_system_random_draws(fam):
    rng = np.random.default_rng(23)
    for _ in range(50):
        assert np.abs(appendixB_residual(fam, random_params(fam, rng))).max() < 1e-12


def test_coefficient_system_printed_family_2_fails():
    P = {"x": 0.5, "z": 0.7, "a2": 0.9}
    assert np.abs(appendixB_residual("APPB-2", P, printed=True)).max() > 1e-2


def test_coefficient_system_printed_family_4_only_lower_sign():
    P = {"x": 0.5, "z": 0.7, "c2": 0.9}
    assert np.abs(appendixB_residual("APPB-4", dict(P, sign=-1), printed=True)).max() < 1e-12
    assert np.abs(appendixB_residual("APPB-4", dict(P, sign=1), printed=True)).max() > 1e-2


def _hyp(x, z):
    s = np.sqrt(x * z)
    return s, np.cosh(s), np.sinh(s)


def test_appb4_upper_sign_reproduces_hyperbolic_pair():
    x, z = 0.6, 0.35
    s, ch, sh = _hyp(x, z)
    want = fermionic_coefficients("HYPERBOLIC-DEFORMED", {"x": x, "z": z})
    got = fermionic_coefficients("APPB-4", {"x": x, "z": z, "sign": 1, "c2": (ch + 1) * sh / (2 * s)})
    for k in ("a0", "a1", "a2", "a3", "c0", "c1", "c2", "c3"):
        assert abs(got[k] - want[k]) < 1e-12, k
    # the literal choice c2 = (cosh s - 1) sinh s/(2s) does not
    lit = fermionic_coefficients("APPB-4", {"x": x, "z": z, "sign": 1, "c2": (ch - 1) * sh / (2 * s)})
    assert max(abs(lit[k] - want[k]) for k in ("a1", "a2", "c1", "c2")) > 1e-2


def test_appb4_reproduces_antisym():
    x, z = 0.6, 0.35
    s, ch, sh = _hyp(x, z)
    want = fermionic_coefficients("ANTISYM", {"x": x, "z": z})
    got = fermionic_coefficients("APPB-4", {"x": x, "z": z, "sign": 1, "c2": (ch + 1) / np.sqrt(2 * x)})
    for k in ("a0", "a1", "a2", "a3", "c0", "c1", "c2", "c3"):
        assert abs(got[k] - want[k]) < 1e-12, k


def test_appb4_cartan_is_diagonal():
    x, z, h0 = 0.6, 0.35, 0.25
    _, ch, _ = _hyp(x, z)
    ops = realize("APPB-4", {"x": x, "z": z, "h0": h0, "c2": 0.8, "sign": 1}, SMALL)
    _, _, b, bd, I = ladder_ops(SMALL)
    assert np.abs(ops["H"] - (h0 * I + ch * bd @ b)).max() == 0
    low = realize("APPB-4", {"x": x, "z": z, "h0": h0, "c2": 0.8, "sign": -1}, SMALL)
    assert np.allclose(low["H"], h0 * I - ch * bd @ b, atol=1e-15)


def test_invalid_realization():
    with pytest.raises(InvalidRealization):
        realize("APPB-1", {"x": 0.4, "z": 0.9, "a2": 0.0}, SMALL)
    with pytest.raises(InvalidRealization):
        fermionic_coefficients("NOPE", {})
    with pytest.raises(InvalidRealization):
        random_params("NOPE", np.random.default_rng(0))
