from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowdr.errors import DuplicateBasisName, RingMismatch, ValidationError
from chowdr.geometry.library import elliptic_square
from chowdr.ring import (
    GradedClass,
    as_rational,
    component,
    equal,
    exp_truncated,
    format_rational,
    integrate,
    make_ring,
    mul,
    power,
)


def cubic():
    # Q[x]/(x^3), the Chow ring of P^2
    return make_ring("P2", 2, {0: ["one"], 1: ["h"], 2: ["pt"]}, {("h", "h"): "pt"}, point_class="pt")


def test_projective_plane_by_hand():
    r = cubic()
    h = r.basis_class("h")
    assert power(h, 2) == r.point()
    assert power(h, 3).is_zero()
    assert integrate(power(h * 3, 2)) == 9
    assert exp_truncated(h) == r.unit + h + r.point() / 2


def test_poincare_square_on_elliptic_square():
    sq = elliptic_square()
    P = sq.poincare
    assert P == sq.ring.element({"delta": 1, "f1": -1, "f2": -1})
    assert integrate(P * P) == -2
    assert exp_truncated(P) == sq.ring.unit + P - sq.ring.point()


def test_component_and_str():
    r = cubic()
    x = r.element({"one": Fraction(1, 2), "h": -3, "pt": 2})
    assert component(x, 1) == r.element({"h": -3})
    assert str(x) == "1/2 - 3*h + 2*pt"
    assert str(r.zero()) == "0"


def test_exact_literals_only():
    assert as_rational("3/4") == Fraction(3, 4)
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    with pytest.raises((ValidationError, TypeError, ValueError)):
        as_rational(0.5)


def test_duplicate_symbol_rejected():
    with pytest.raises(DuplicateBasisName):
        make_ring("bad", 1, {0: ["one"], 1: ["one"]})


def test_grading_violation_rejected():
    with pytest.raises(ValidationError):
        make_ring("bad", 2, {0: ["one"], 1: ["a"], 2: ["b"]}, {("a", "a"): "a"})


def test_truncation_violation_rejected():
    with pytest.raises(ValidationError):
        make_ring("bad", 1, {0: ["one"], 1: ["a"]}, {("a", "a"): {"a": 1}})


def test_associativity_failure_detected():
    # a*b = c but a*(b*b) != (a*b)*b
    with pytest.raises(ValidationError):
        make_ring(
            "nonassoc",
            3,
            {0: ["one"], 1: ["a", "b"], 2: ["c", "bb"], 3: ["t"]},
            {("a", "b"): "c", ("b", "b"): "bb", ("a", "bb"): "t"},
        )


def test_mixing_rings_raises():
    r1, r2 = cubic(), cubic()
    with pytest.raises(RingMismatch):
        mul(r1.unit, r2.unit)


# -- properties --

coeff = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def classes(ring, positive=False):
    keys = [k for k in ring.keys() if not positive or k[0] > 0]
    return st.dictionaries(st.sampled_from(keys), coeff, max_size=len(keys)).map(
        lambda d: GradedClass(ring, d))


SQ = elliptic_square().ring


@settings(max_examples=200, deadline=None)
@given(classes(SQ), classes(SQ), classes(SQ))
def test_ring_laws(x, y, z):
    assert equal(mul(x, y), mul(y, x))
    assert mul(mul(x, y), z) == mul(x, mul(y, z))
    assert mul(x, y + z) == mul(x, y) + mul(x, z)
    assert mul(SQ.unit, x) == x


@settings(max_examples=200, deadline=None)
@given(classes(SQ, positive=True), classes(SQ, positive=True))
def test_exp_is_a_homomorphism(u, v):
    assert exp_truncated(u + v) == exp_truncated(u) * exp_truncated(v)
    assert exp_truncated(u) * exp_truncated(-u) == SQ.unit


@settings(max_examples=100, deadline=None)
@given(classes(SQ), st.integers(0, 4), st.integers(0, 4))
def test_power_adds_exponents(x, a, b):
    assert power(x, a) * power(x, b) == power(x, a + b)
