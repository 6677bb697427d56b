import pytest

from chowdr import abelian
from chowdr.errors import NotPositiveInteger
from chowdr.geometry import library as L


@pytest.mark.parametrize("g", [1, 2, 3])
def test_fourier_zero_section(g):
    pair = L.abelian_pair(g)
    assert abelian.check_fourier_zero_section(pair)
    # F(e) = [dual], F([A]) = (-1)^g pt
    assert abelian.fourier(pair, pair.zero_class("A")) == pair.dual_model.unit
    assert abelian.fourier(pair, pair.a_model.unit) == pair.dual_model.point() * (-1) ** g


def test_fourier_on_elliptic_curve_by_hand():
    pair = L.abelian_pair(1)
    # exp(P) = 1 + P - pt, so F(1) = p2_*(P) - p2_*(pt) = -theta_hat
    theta_hat = pair.dual_model.basis_class("theta_hat")
    assert abelian.fourier(pair, pair.a_model.unit) == -theta_hat


def test_poincare_formula_cases():
    ed = L.elliptic_dual()
    j2 = L.tensor_power_models(2).dual
    E = j2.element({"theta_hat_1": 2, "theta_hat_2": 2})
    assert abelian.poincare_formula_check(ed, ed.point(), 1, 1)
    assert abelian.poincare_formula_check(ed, ed.point() * 2, 1, 2)
    assert abelian.poincare_formula_check(j2, E, 2, 4)
    assert not abelian.poincare_formula_check(j2, E, 2, 3)
    assert [abelian.polarization_rank(r, x, g) for r, x, g in
            ((ed, ed.point(), 1), (ed, ed.point() * 2, 1), (j2, E, 2))] == [1, 2, 4]


def test_rank_must_be_positive_integer():
    ed = L.elliptic_dual()
    with pytest.raises(NotPositiveInteger):
        abelian.polarization_rank(ed, ed.point() * -1, 1)


def test_symmetry_and_rigidity_of_poincare():
    sq = L.elliptic_square()
    P = sq.poincare
    # P itself is antisymmetric under [-1] on the dual factor
    assert not abelian.check_symmetric(sq.ring, P, sq.morphisms["inv"])
    assert abelian.check_symmetric(sq.ring, P * P, sq.morphisms["inv"])
    assert abelian.check_rigidified(sq.ring, P, sq.morphisms["e1"])
