import pytest

from chowdr import dr
from chowdr.dsl import eval_text, load_model_file
from chowdr.dsl.dump import library_files

SHIPPED = ["elliptic_square.chow", "flagship.chow", "curve_over_surface.chow",
           "flagship_g2.chow", "flagship_g3.chow", "product_curves.chow"]


@pytest.fixture(scope="module")
def generated():
    return library_files()


def test_shipped_files_are_current(data_dir, generated):
    assert sorted(generated) == sorted(SHIPPED)
    for name, text in generated.items():
        assert (data_dir / name).read_text(encoding="utf-8") == text, f"{name} is stale; regenerate it"


@pytest.fixture(scope="module")
def models(data_dir):
    return {name: load_model_file(data_dir / name) for name in SHIPPED}


def test_flagship_file(models):
    mf = models["flagship.chow"]
    fam = mf.families["flagship_family"]
    theta_hat = fam.base.point()
    assert dr.dr_main(fam, 2).value == theta_hat
    assert dr.dr_hain(fam).value == theta_hat
    assert dr.dr_albanese_family(fam).value == theta_hat
    env = mf.env(family=fam)
    assert eval_text("-1/2 * push(pi, c1(L)^2)", env) == theta_hat
    assert eval_text("integrate(c1(P)^2)", env) == -2


def test_curve_over_surface_file(models):
    mf = models["curve_over_surface.chow"]
    fam = mf.families["curve_over_surface"]
    assert dr.dr_main(fam, 2).value == mf.classes["antidiagonal"]


@pytest.mark.parametrize("g,d", [(2, 4), (3, 64)])
def test_power_family_files(models, g, d):
    fam = models[f"flagship_g{g}.chow"].families[f"flagship_family_g{g}"]
    assert dr.rank_for_family(fam) == d
    assert dr.dr_main(fam, d).value == fam.base.point()


def test_elliptic_square_file(models):
    mf = models["elliptic_square.chow"]
    env = mf.env(ring=mf.rings["elliptic_square"])
    for r in (2, 3, 5):
        assert eval_text(f"pull(mult_{r}, c1(P)) - {r} * c1(P)", env).is_zero()
        assert eval_text(f"integrate(pull(dual_mult_{r}, theta_hat))", env.with_ring(mf.rings["elliptic_dual"])) == r * r


def test_product_curves_file(models):
    rings = models["product_curves.chow"].rings
    assert set(rings) == {"product_g2_g2", "product_g2_g3"}
