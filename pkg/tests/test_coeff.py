import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoosc.coeff import (
    CoefficientError,
    DuplicateParameter,
    InconsistentRoot,
    UnboundParameter,
    parse_assignments,
    ring_make,
)
from twoosc.rmatrix import family_ring

R = ring_make(["x", "z", "s"])
x, z, s = R.gen("x"), R.gen("z"), R.gen("s")


def test_ring_with_s_reduces_square():
    assert s * s == x * z


def test_ring_without_s_has_no_reduction():
    P = ring_make(["p", "q"])
    p = P.gen("p")
    assert str(p * p) != str(p)
    assert (p * p).eval({"p": 3, "q": 0}) == 9


def test_duplicate_parameter():
    with pytest.raises(DuplicateParameter):
        ring_make(["x", "x"])


def test_cancellation_is_empty():
    assert not (x * z - x * z)
    assert (x * z - x * z) == R.zero


def test_difference_of_squares():
    e = (s + 1) * (s - 1)
    assert e == x * z - 1
    assert e.eval({"x": 4, "z": 1, "s": 2}) == 3


def test_eval_product():
    assert (x * z).eval({"x": 2, "z": 3}) == 6


def test_eval_negative_root_branch():
    assert s.eval({"x": 4, "z": 1, "s": -2}) == -2


def test_eval_inconsistent_root():
    with pytest.raises(InconsistentRoot):
        s.eval({"x": 4, "z": 1, "s": 3})


def test_eval_missing_parameter():
    with pytest.raises(UnboundParameter):
        (x * z).eval({"x": 1})


def test_parse_round_trip():
    e = R.parse("x*z/2 - (x - s)^2")
    assert e == x * z / 2 - (x - s) ** 2
    assert R.parse(str(e)) == e


def test_quotient_symbols_stay_polynomial():
    D = family_ring("I-II-D")
    q, u1, rho, sigma = D.gen("q"), D.gen("u1"), D.gen("rho"), D.gen("sigma")
    assert q * u1 == rho * sigma
    assert (q * u1 * u1).eval({"q": 2.0, "rho": 3.0, "sigma": 5.0, "u1": 7.5}) == pytest.approx(112.5)


def test_root_symbol_may_not_feed_a_quotient():
    with pytest.raises(CoefficientError):
        ring_make(["x", "z", "s", "q"], {"u": ("s", "q")})


def test_parse_assignments():
    got = parse_assignments("x = 1/2\n# comment\nz = 0.25\n")
    assert got == {"x": Fraction(1, 2), "z": Fraction(1, 4)}
    with pytest.raises(CoefficientError):
        parse_assignments("x = 1\nx = 2\n")


small = st.integers(-3, 3)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


@st.composite
def coefficients(draw):
    out = R.zero
    for _ in range(draw(st.integers(0, 4))):
        i, j, k = draw(exps)
        out = out + R(draw(small)) * x**i * z**j * s**k
    return out


@st.composite
def assignments(draw):
    xv = draw(st.floats(0.1, 2.0))
    zv = draw(st.floats(0.1, 2.0))
    sign = draw(st.sampled_from([-1, 1]))
    return {"x": xv, "z": zv, "s": sign * math.sqrt(xv * zv)}


def _close(a, b):
    return abs(a - b) <= 1e-10 * max(1.0, abs(a), abs(b))


@settings(max_examples=200, deadline=None)
@given(coefficients(), coefficients(), assignments())
def test_eval_is_a_ring_homomorphism(c1, c2, sigma):
    assert _close((c1 * c2).eval(sigma), c1.eval(sigma) * c2.eval(sigma))
    assert _close((c1 + c2).eval(sigma), c1.eval(sigma) + c2.eval(sigma))


@settings(max_examples=200, deadline=None)
@given(coefficients())
def test_s_exponent_is_at_most_one(c):
    si = R.index["s"]
    assert all(mono[si] <= 1 for mono in c.terms)
    assert not (c - c)
    assert R(c) == c
