import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import family, relations, rewrite
from twoosc.coeff import UnboundParameter, ring_make
from twoosc.parsing import parse_relation
from twoosc.rmatrix import (
    FAMILIES,
    IDX,
    RelationSet,
    RMatrixInstance,
    UnknownFamily,
    build_family,
    check_consistency,
    check_qybe,
    constrained_entries,
    derive_relations,
    family_ring,
    load_golden,
    numeric_qybe,
    random_assignment,
    verify_coproduct_compatibility,
)


def test_identity_entries():
    R = family("IDENTITY")
    for i, j, k, l in itertools.product(IDX, repeat=4):
        assert R[(i, j, k, l)] == R.ring(int(i == j and k == l))


def test_fb_nondef_block():
    R = family("FB-NONDEF")
    assert [R[(2, 2, k, k)] for k in IDX] == [R.ring(v) for v in (1, -1, 1, 1, 1)]
    for i in (1, 3, 4, 5):
        assert [R[(i, i, k, k)] for k in IDX] == [R.ring.one] * 5


def test_unknown_family():
    with pytest.raises(UnknownFamily):
        build_family("NOPE")


def test_ring_missing_parameter():
    with pytest.raises(UnboundParameter):
        build_family("I-II-A", ring_make(["x", "z"]))


def test_rmatrix_text_round_trip(fam):
    R = family(fam)
    assert RMatrixInstance.from_text(R.to_text(), R.ring, fam) == R


def test_qybe_symbolic_zero(fam):
    assert check_qybe(family(fam)) == {}


def test_qybe_detects_perturbation():
    assert check_qybe(family("I-II-A").perturbed("1212"))


def test_qybe_numeric_cross_check(fam):
    R = family(fam)
    rng = random.Random(11)
    assert max(numeric_qybe(R, random_assignment(R.ring, rng)) for _ in range(20)) < 1e-12


def test_qybe_numeric_sees_perturbation():
    R = family("I-II-A").perturbed("1212")
    rng = random.Random(3)
    assert numeric_qybe(R, random_assignment(R.ring, rng)) > 1e-3


def test_identity_gives_commutative_algebra():
    rs = rewrite("IDENTITY")
    for g1, g2 in itertools.combinations(range(8), 2):
        assert rs.normal_order((g2, g1)) == rs.normal_order((g1, g2))


def _holds(rels, text):
    return rels.contains(parse_relation(text, rels.ring))


def test_deformed_relations_present():
    rels = relations("I-II-A")
    for text in (
        "alpha*beta - beta*alpha = z*gamma*eta",
        "gamma*beta - beta*gamma = x*alpha*eta",
        "alpha*alpha = z/2 - z/2*eta*eta",
        "gamma*gamma = x/2 - x/2*eta*eta",
        "a*b - b*a = p*a + tau - tau*d",
        "b*c - c*b = -q*c - rho + rho*d",
        "alpha*eta + eta*alpha = 0",
        "alpha*b - b*alpha = 0",
    ):
        assert _holds(rels, text), text


@pytest.mark.parametrize("name", [f for f in FAMILIES if f != "I-II-D"])
def test_golden_match(name):
    derived = relations(name)
    assert not derived.unresolved
    assert derived.same_span(load_golden(name))


def test_i_ii_d_derived_set():
    # the derived set carries p*a with the opposite sign and an extra b-beta relation
    rels = relations("I-II-D")
    assert _holds(rels, "a*b - b*a = -p*a + tau - tau*d")
    assert _holds(rels, "beta*b - b*beta = u1*a + u2*c")
    missing, extra = rels.difference(load_golden("I-II-D"))
    assert len(missing) == 2 and len(extra) == 2


def test_relation_text_round_trip(fam):
    rels = relations(fam)
    assert RelationSet.from_text(rels.to_text(), rels.ring).same_span(rels)


@pytest.mark.parametrize("name", FAMILIES)
@settings(max_examples=5, deadline=None)
@given(lam=st.sampled_from([2, -1, 3, -7]))
def test_scaling_invariance(name, lam):
    assert derive_relations(family(name).scaled(lam)).same_span(relations(name))


def test_consistency_passes(fam):
    rep = check_consistency(family(fam))
    assert rep["passed"], rep["violations"]


def test_consistency_fb_nondef_p_q_zero():
    rep = check_consistency(family("FB-NONDEF"))
    assert not rep["p"] and not rep["q"]


def test_consistency_i_ii_a_p_q():
    R = family("I-II-A")
    rep = check_consistency(R)
    assert rep["p"] == R.ring.gen("p") and rep["q"] == R.ring.gen("q")


def test_consistency_violation():
    R = family("FB-NONDEF").with_entry("1222", 1).with_entry("2323", 1)
    labels = [label for label, _ in check_consistency(R)["violations"]]
    assert "r23_23*r12_22 = 0" in labels


@pytest.mark.parametrize("name", FAMILIES)
def test_single_entry_perturbations(name):
    R = family(name)
    keys = constrained_entries(R)
    rng = random.Random(5)
    missed = [k for k in rng.sample(keys, 25) if check_consistency(R.perturbed(k))["passed"]]
    assert not missed


def test_coproduct_compatibility(fam):
    rep = verify_coproduct_compatibility(relations(fam), rewrite(fam))
    assert rep["passed"] and rep["checked"] > 0


def test_coproduct_compatibility_catches_wrong_relation():
    ring = family_ring("I-II-A")
    rels = RelationSet(ring, [parse_relation("alpha*alpha = z", ring)])
    rep = verify_coproduct_compatibility(rels, rewrite("I-II-A"))
    assert not rep["passed"]
