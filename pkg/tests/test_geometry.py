import pytest

from chowdr.errors import (
    CompositionMismatch,
    DegreeMismatch,
    NotRingHomomorphism,
    ProjectionFormulaViolation,
    ValidationError,
)
from chowdr.geometry import compose, identity, register_morphism, validate_family, validate_morphism
from chowdr.geometry import library as L
from chowdr.geometry.products import tensor_product, truncated_polynomial_ring
from chowdr.ring import make_ring


def pt():
    return make_ring("pt", 0, {0: ["one"]}, point_class="one")


def line():
    return make_ring("P1", 1, {0: ["one"], 1: ["p"]}, point_class="p")


def test_structure_map_of_p1():
    X, S = line(), pt()
    f = register_morphism("c", X, S, {}, {"p": "one"}, 1)
    assert f.pushforward(X.point()) == S.unit
    assert f.pullback(S.unit) == X.unit


def test_wrong_pushforward_breaks_projection_formula():
    # identity pullback on P1 but p pushes to 2p
    X = line()
    with pytest.raises(ProjectionFormulaViolation):
        register_morphism("twice", X, X, {"p": "p"}, {"one": "one", "p": {"p": 2}}, 0)


def test_pullback_must_be_multiplicative():
    P2 = truncated_polynomial_ring([("h", 1, 3)], 2, name="P2")
    with pytest.raises(NotRingHomomorphism):
        register_morphism("bad", P2, P2, {"h": "h", "h_pow2": {"h_pow2": 2}}, {"one": "one", "h": "h", "h_pow2": {"h_pow2": 2}}, 0)


def test_rel_dim_checked():
    X, S = line(), pt()
    with pytest.raises(DegreeMismatch):
        register_morphism("c", X, S, {}, {"p": "one"}, 0)


def test_library_morphisms_all_validate():
    labels = set()
    for label, f in L.all_morphisms():
        assert validate_morphism(f) is f
        labels.add(label)
    assert len(labels) == len(L.all_morphisms())


def test_elliptic_square_sections():
    sq = L.elliptic_square()
    m = sq.morphisms
    e, ed = L.elliptic(), L.elliptic_dual()
    assert compose(m["p1"], m["e2"]).is_identity()
    assert compose(m["p2"], m["e1"]).is_identity()
    assert compose(m["p1"], m["diag"]).is_identity()
    assert m["e1"].pullback(sq.poincare) == ed.zero()
    assert m["e2"].pullback(sq.poincare) == e.zero()
    assert m["p2"].pushforward(sq.poincare * sq.poincare) == ed.point() * -2


def test_multiplication_maps():
    sq = L.elliptic_square()
    for r in (-2, -1, 2, 3):
        assert sq.mult_r(r).pullback(sq.poincare) == sq.poincare * r
    assert compose(sq.mult_r(2), sq.mult_r(-1)).same_as(sq.mult_r(-2))
    assert compose(sq.morphisms["inv"], sq.morphisms["inv"]).is_identity()


def test_compose_needs_matching_rings():
    sq = L.elliptic_square()
    with pytest.raises(CompositionMismatch):
        compose(sq.morphisms["p1"], sq.morphisms["p1"])


def test_identity_is_identity():
    r = L.elliptic_square().ring
    assert identity(r).is_identity()


def test_tensor_product_dimensions():
    e = L.elliptic()
    r, p1, p2 = tensor_product(e, e)
    assert r.dimension == 2
    assert r.size == 4
    assert r.point_class is not None
    assert p1.pushforward(r.point()) == e.point()
    assert p1.pushforward(r.unit) == e.zero()
    assert p2.pullback(e.point()) * p1.pullback(e.point()) == r.point()


def test_families_validate():
    for fam in L.families():
        assert validate_family(fam) is fam


def test_family_rejects_non_trivial_bundle():
    fam = L.flagship_family()
    bad = fam.with_bundle(fam.total.basis_class("f1"))
    with pytest.raises(ValidationError):
        validate_family(bad)


def test_library_registry(lib):
    assert "flagship_family" in lib.families
    assert lib.ring("elliptic").dimension == 1
    with pytest.raises(ValidationError):
        lib.ring("no_such_model")
