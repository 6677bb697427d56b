"""Identity suites over the built-in models, as run by ``chowdr verify``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import abelian, dr
from .errors import ChowError
from .geometry import library as lib
from .geometry.morphism import compose, validate_morphism
from .ring import GradedClass, exp_truncated, format_rational, mul, power

SUITES = ("ring", "geometry", "fourier", "poincare", "dr", "product", "scaling")


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    passed: bool
    expected: str
    actual: str

    def to_json(self):
        return {"id": self.id, "anchor": self.anchor, "passed": self.passed,
                "expected": self.expected, "actual": self.actual}


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)
    duration: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self, timing=False):
        out = {"suite": self.suite, "status": self.status,
               "checks": [c.to_json() for c in self.checks]}
        if timing:
            out["duration_s"] = round(self.duration, 3)
        return out


def _text(v) -> str:
    if isinstance(v, GradedClass):
        return str(v)
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return format_rational(v)
    return str(v).lower() if isinstance(v, bool) else str(v)


class _Recorder:
    def __init__(self, report):
        self.report = report

    def equal(self, cid, anchor, expected, thunk):
        """Record ``thunk() == expected``; exceptions count as failures."""
        try:
            actual = thunk()
            ok = actual == expected
            shown = _text(actual)
        except ChowError as exc:
            ok, shown = False, f"{type(exc).__name__}: {exc}"
        self.report.checks.append(Check(cid, anchor, bool(ok), _text(expected), shown))

    def true(self, cid, anchor, thunk):
        self.equal(cid, anchor, True, thunk)


# -- random classes for the algebra laws --


def random_class(ring, rng: random.Random, max_terms=3, positive=False):
    keys = [k for k in ring.keys() if not positive or k[0] > 0]
    if not keys:
        return ring.zero()
    coeffs = {}
    for _ in range(rng.randint(0, max_terms)):
        k = rng.choice(keys)
        coeffs[k] = coeffs.get(k, 0) + Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return GradedClass(ring, coeffs)


def law_failures(ring, cases=1000, seed=0):
    """Count failures of commutativity, associativity, distributivity and
    ``exp(x + y) = exp(x) exp(y)`` over ``cases`` random triples."""
    rng = random.Random(f"{ring.name}:{seed}")
    bad = 0
    for _ in range(cases):
        x, y, z = (random_class(ring, rng) for _ in range(3))
        ok = (
            mul(x, y) == mul(y, x)
            and mul(mul(x, y), z) == mul(x, mul(y, z))
            and mul(x, y + z) == mul(x, y) + mul(x, z)
        )
        u, v = random_class(ring, rng, positive=True), random_class(ring, rng, positive=True)
        ok = ok and exp_truncated(u + v) == mul(exp_truncated(u), exp_truncated(v))
        bad += not ok
    return bad


def suite_ring(rec: _Recorder):
    sq = lib.elliptic_square()
    ring = sq.ring
    P = sq.poincare
    rec.equal("ring.poincare_square", "c1(P)^2 = -2 pt", ring.point() * -2, lambda: power(P, 2))
    rec.equal("ring.exp_poincare", "exp(c1(P)) = 1 + c1(P) - pt", ring.unit + P - ring.point(),
              lambda: exp_truncated(P))
    rec.equal("ring.integrate_f1f2", "f1 . f2 = pt", 1, lambda: (ring.basis_class("f1") * ring.basis_class("f2")).coefficient("pt"))
    rec.equal("ring.truncation", "pt . f1 = 0", ring.zero(), lambda: ring.point() * ring.basis_class("f1"))
    models = lib.library().rings
    for name in sorted(models):
        rec.equal(f"ring.laws.{name}", "commutative, associative, distributive; exp(x+y) = exp(x) exp(y)",
                  0, lambda r=models[name]: law_failures(r))


def suite_geometry(rec: _Recorder):
    for label, f in lib.all_morphisms():
        rec.true(f"geometry.validated.{label}", "projection formula and ring homomorphism on all basis pairs",
                 lambda f=f: validate_morphism(f) is f)
    sq = lib.elliptic_square()
    m, ring, P = sq.morphisms, sq.ring, sq.poincare
    e, ed = lib.elliptic(), lib.elliptic_dual()
    rec.equal("geometry.push_poincare_square", "p2_*(c1(P)^2) = -2 theta_hat", ed.point() * -2,
              lambda: m["p2"].pushforward(P * P))
    rec.equal("geometry.pull_p2", "p2^* theta_hat = f2", ring.basis_class("f2"),
              lambda: m["p2"].pullback(ed.point()))
    rec.equal("geometry.inv_poincare", "[-1]^* c1(P) = -c1(P)", -P, lambda: m["inv"].pullback(P))
    for r in range(-3, 4):
        rec.equal(f"geometry.mult_{r}_poincare", "[r]^* c1(P) = r c1(P)", P * r,
                  lambda r=r: sq.mult_r(r).pullback(P))
    rec.equal("geometry.rigid_e1", "P trivial on e x Ê", ed.zero(), lambda: m["e1"].pullback(P))
    rec.equal("geometry.rigid_e2", "P trivial on E x e", e.zero(), lambda: m["e2"].pullback(P))
    rec.equal("geometry.poincare_g2_terms", "external sum of two Poincaré classes", 6,
              lambda: len(lib.poincare_class(lib.tensor_power_models(2).square).coefficients))

    chains = [
        ("p1.e2", m["p1"], m["e2"], True),
        ("p2.e1", m["p2"], m["e1"], True),
        ("p1.diag", m["p1"], m["diag"], True),
        ("p2.diag", m["p2"], m["diag"], False),
        ("p2.e2", m["p2"], m["e2"], False),
        ("inv.inv", m["inv"], m["inv"], True),
        ("mult_2.mult_3", sq.mult_r(2), sq.mult_r(3), False),
    ]
    for fam in lib.families():
        chains.append((f"{fam.name}.proj.fiber", fam.proj, fam.fiber_restrict, False))
        u = fam.universal
        if u is not None and u.relative:
            pj = lib.jacobian_structure_map(fam)
            chains.append((f"{fam.name}.pi_J.sigma", pj, u.sigma, True))
            chains.append((f"{fam.name}.pi_J.zero", pj, u.zero, True))
            chains.append((f"{fam.name}.inv.inv", u.inversion, u.inversion, True))

    for cid, f, g, is_id in chains:
        rec.true(f"geometry.functorial.{cid}", "(f g)^* = g^* f^*, (f g)_* = f_* g_*",
                 lambda f=f, g=g: _functorial(f, g))
        if is_id:
            rec.true(f"geometry.identity.{cid}", "composite is the identity",
                     lambda f=f, g=g: compose(f, g).is_identity())
    rec.true("geometry.mult_2.mult_3", "[2][3] = [6]",
             lambda: compose(sq.mult_r(2), sq.mult_r(3)).same_as(sq.mult_r(6)))


def _functorial(f, g):
    h = compose(f, g)
    for k in f.target.keys():
        x = GradedClass(f.target, {k: 1})
        if h.pullback(x) != g.pullback(f.pullback(x)):
            return False
    for k in g.source.keys():
        x = GradedClass(g.source, {k: 1})
        if h.pushforward(x) != f.pushforward(g.pushforward(x)):
            return False
    return True


def suite_fourier(rec: _Recorder):
    for g in (1, 2, 3):
        pair = lib.abelian_pair(g)
        rec.true(f"fourier.zero_section.g{g}", "e = (-1)^g F([A])",
                 lambda pair=pair: abelian.check_fourier_zero_section(pair))
        rec.equal(f"fourier.of_origin.g{g}", "F(e_A) = [Â]", pair.dual_model.unit,
                  lambda pair=pair: abelian.fourier(pair, pair.zero_class("A")))
        rec.equal(f"fourier.of_unit.g{g}", "F([A]) = (-1)^g pt", pair.dual_model.point() * (-1) ** g,
                  lambda pair=pair: abelian.fourier(pair, pair.a_model.unit))


def suite_poincare(rec: _Recorder):
    ed = lib.elliptic_dual()
    j2 = lib.tensor_power_models(2).dual
    cases = [
        ("g1_d1", ed, ed.point(), 1, 1),
        ("g1_d2", ed, ed.point() * 2, 1, 2),
        ("g2_d4", j2, j2.element({"theta_hat_1": 2, "theta_hat_2": 2}), 2, 4),
    ]
    for cid, ring, E, g, d in cases:
        rec.true(f"poincare.formula.{cid}", "E^g / g! = d e and E^(g+1) = 0",
                 lambda ring=ring, E=E, g=g, d=d: abelian.poincare_formula_check(ring, E, g, d))
        rec.equal(f"poincare.rank.{cid}", "d = deg(E^g) / g!", d,
                  lambda ring=ring, E=E, g=g: abelian.polarization_rank(ring, E, g))
        rec.equal(f"poincare.unique_d.{cid}", "exactly one d works", [d],
                  lambda ring=ring, E=E, g=g: [k for k in range(1, 3 * d + 1)
                                               if abelian.poincare_formula_check(ring, E, g, k)])
    for fam in lib.families():
        u = fam.universal
        E = dr.e_class(fam)
        J = u.jacobian
        rec.true(f"poincare.e_rigidified.{fam.name}", "e^* E = 0",
                 lambda J=J, E=E, u=u: abelian.check_rigidified(J, E, u.zero))
        rec.true(f"poincare.e_symmetric.{fam.name}", "[-1]^* E = E",
                 lambda J=J, E=E, u=u: abelian.check_symmetric(J, E, u.inversion))
        e_class = u.zero.pushforward(u.zero.source.unit)
        d = dr.rank_for_family(fam)
        rec.true(f"poincare.e_formula.{fam.name}", "E^g / g! = d e on the Jacobian",
                 lambda J=J, E=E, fam=fam, d=d, e_class=e_class:
                 abelian.poincare_formula_check(J, E, fam.g, d, zero_class=e_class))


def suite_dr(rec: _Recorder):
    for fam in lib.families():
        d = dr.rank_for_family(fam)
        main = dr.dr_main(fam, d).value
        rec.equal(f"dr.abelian.{fam.name}", "main formula = abelian formula", main,
                  lambda fam=fam: dr.dr_abelian(fam).value)
        rec.equal(f"dr.albanese.{fam.name}", "main formula = Albanese formula", main,
                  lambda fam=fam: dr.dr_albanese_family(fam).value)
        if fam.n == 1:
            rec.equal(f"dr.hain.{fam.name}", "main formula with d = 2^g = Hain", dr.dr_main(fam, 2 ** fam.g).value,
                      lambda fam=fam: dr.dr_hain(fam).value)
        if fam.universal.relative:
            rec.equal(f"dr.sections.{fam.name}", "formula = sigma^* e", main,
                      lambda fam=fam: dr.dr_via_sections(fam).value)
        rec.equal(f"dr.codim.{fam.name}", "DR has codimension g", [fam.g], lambda main=main: main.codims())
    flag = lib.flagship_family()
    rec.equal("dr.flagship.value", "DR(P) = [origin of Ê]", lib.elliptic_dual().point(),
              lambda: dr.dr_main(flag, 2).value)
    rec.equal("dr.curve_over_surface.value", "DR = [b1 + b2 = 0]", lib.antidiagonal_class(),
              lambda: dr.dr_main(lib.curve_over_surface(), 2).value)
    for g in (2, 3):
        fam = lib.product_family(g)
        rec.equal(f"dr.product_family_g{g}.value", "DR(P) = [origin of Ê^g]", fam.base.point(),
                  lambda fam=fam: dr.dr_main(fam, dr.rank_for_family(fam)).value)
    rec.equal("dr.trivial_bundle", "c1(L) = 0 gives 0", flag.base.zero(),
              lambda: dr.dr_main(flag.with_bundle(flag.total.zero()), 2).value)


def suite_product(rec: _Recorder):
    for g1 in range(2, 7):
        for g2 in range(2, 7):
            expected = Fraction(1, 2 ** (g1 + g2) * (2 * g1 - 2) ** g2 * (2 * g2 - 2) ** g1)
            rec.equal(f"product.canonical.{g1}_{g2}", "binom(g1+g2, g1)(2g2-2)^g1 (2g1-2)^g2 expansion",
                      (True, expected), lambda g1=g1, g2=g2: dr.product_expansion_check(g1, g2))
    for g1 in range(0, 7):
        for g2 in range(0, 7):
            rec.equal(f"product.sections.{g1}_{g2}", "DR = (-1/2 pi_*(L^2 F))^g / g!",
                      (True, Fraction(1, 2 ** (g1 + g2))),
                      lambda g1=g1, g2=g2: dr.sections_expansion_check(g1, g2))
    rec.equal("product.constant.2_2", "1/256", Fraction(1, 256), lambda: dr.dr_product_constant(2, 2))


def suite_scaling(rec: _Recorder):
    for fam in lib.families():
        d = dr.rank_for_family(fam)
        for r in (0, 1, 2, 3, 5):
            rec.true(f"scaling.dr.{fam.name}.r{r}", "DR(L^r) = r^(2g) DR(L)",
                     lambda fam=fam, d=d, r=r: dr.dr_scaling_check(fam, d, r))
    for g in (1, 2):
        pair = lib.abelian_pair(g)
        e = pair.zero_class()
        for r in (2, 3, 5):
            rec.equal(f"scaling.model.g{g}.r{r}", "[r]^* e = r^(2g) e", e * r ** (2 * g),
                      lambda g=g, r=r, e=e: lib.jacobian_multiplication(g, r).pullback(e))
    sq = lib.elliptic_square()
    for r in (2, 3, 5):
        rec.equal(f"scaling.square.r{r}", "[1 x r]^* pt = r^2 pt", sq.ring.point() * r ** 2,
                  lambda r=r: sq.mult_r(r).pullback(sq.ring.point()))


_RUNNERS = {
    "ring": suite_ring,
    "geometry": suite_geometry,
    "fourier": suite_fourier,
    "poincare": suite_poincare,
    "dr": suite_dr,
    "product": suite_product,
    "scaling": suite_scaling,
}


def run_suite(name: str) -> SuiteReport:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    report = SuiteReport(name)
    start = time.perf_counter()
    _RUNNERS[name](_Recorder(report))
    report.duration = time.perf_counter() - start
    return report


def run(name: str = "all"):
    names = SUITES if name == "all" else (name,)
    return [run_suite(n) for n in names]
