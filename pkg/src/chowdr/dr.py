"""Double ramification cycle formulas and their cross-checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .abelian import polarization_rank
from .errors import (
    InvalidGenus,
    InvalidRank,
    NotAbelianFamily,
    NotACurveFamily,
    RingMismatch,
    UnsupportedModel,
)
from .geometry.family import FamilyModel, fiber_cF
from .geometry.morphism import Morphism
from .geometry.products import monomial, truncated_polynomial_ring
from .ring import GradedClass, RingModel, mul, power

FORMULAS = ("main", "abelian", "hain", "albanese", "product", "sections")


@dataclass(frozen=True)
class DrResult:
    value: GradedClass
    formula_used: str
    inputs_digest: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "formula": self.formula_used,
            "inputs": self.inputs_digest,
            "ring": self.value.ring.name,
            "value": str(self.value),
            "coefficients": self.value.to_json(),
        }


def _digest(family: FamilyModel, **extra):
    out = family.digest()
    out.update(extra)
    return out


def e_class(family: FamilyModel, cU=None, p1=None, p2=None) -> GradedClass:
    """``-p2_*(c1(U)^2 . p1^* c1(F)^(n-1))`` on the Jacobian model.

    Missing arguments are taken from ``family.universal``.
    """
    u = family.universal
    if cU is None or p1 is None or p2 is None:
        if u is None:
            raise UnsupportedModel(f"family {family.name!r} has no universal bundle model")
        cU = u.cU if cU is None else cU
        p1 = u.p1 if p1 is None else p1
        p2 = u.p2 if p2 is None else p2
    if cU.ring is not p1.source or p1.source is not p2.source:
        raise RingMismatch("c1(U), p1 and p2 must share the product model")
    cF = fiber_cF(family, p1.target)
    integrand = mul(power(cU, 2), power(p1.pullback(cF), family.n - 1))
    return -p2.pushforward(integrand)


def rank_for_family(family: FamilyModel) -> int:
    """``d`` read off from one fibre of the Jacobian via the Poincaré formula."""
    u = family.universal
    if u is None:
        raise UnsupportedModel(f"family {family.name!r} has no universal bundle model")
    e_fiber = u.jacobian_fiber_restrict.pullback(e_class(family))
    return polarization_rank(u.jacobian_fiber_restrict.source, e_fiber, family.g)


def _pi_star(family: FamilyModel, cL: GradedClass) -> GradedClass:
    """``pi_*(c1(L)^2 . c1(F)^(n-1))``."""
    return family.proj.pushforward(mul(power(cL, 2), power(family.cF, family.n - 1)))


def dr_main(family: FamilyModel, d: int) -> DrResult:
    if not isinstance(d, int) or isinstance(d, bool) or d <= 0:
        raise InvalidRank(f"rank d must be a positive integer, got {d!r}")
    g = family.g
    if g == 0:
        # Pic^0 is trivial: DR is the whole base, and the rank is forced to be 1
        return DrResult(family.base.unit, "main", _digest(family, d=d))
    x = -_pi_star(family, family.cL)
    value = power(x, g) * Fraction(1, d * factorial(g))
    return DrResult(value, "main", _digest(family, d=d))


def _abelian_shape(proj: Morphism, cL: GradedClass, g: int) -> GradedClass:
    return proj.pushforward(power(cL, 2 * g)) * Fraction((-1) ** g, factorial(2 * g))


def dr_abelian(family: FamilyModel, g=None) -> DrResult:
    if not family.abelian:
        raise NotAbelianFamily(f"family {family.name!r} is not declared abelian")
    g = family.g if g is None else g
    if g != family.n:
        raise NotAbelianFamily(f"family {family.name!r}: abelian fibres need g = n, got g={g}, n={family.n}")
    return DrResult(_abelian_shape(family.proj, family.cL, g), "abelian", _digest(family))


def dr_hain(family: FamilyModel) -> DrResult:
    if family.n != 1:
        raise NotACurveFamily(f"family {family.name!r} has relative dimension {family.n}, not 1")
    g = family.g
    x = family.proj.pushforward(power(family.cL, 2)) * Fraction(-1, 2)
    return DrResult(power(x, g) / factorial(g), "hain", _digest(family))


def dr_albanese(alb_model: RingModel, pi_bar: Morphism, cLbar: GradedClass, g: int) -> DrResult:
    if cLbar.ring is not alb_model or pi_bar.source is not alb_model:
        raise RingMismatch(f"Albanese data must live on {alb_model.name!r}")
    digest = {"model": alb_model.name, "base": pi_bar.target.name, "g": g}
    return DrResult(_abelian_shape(pi_bar, cLbar, g), "albanese", digest)


def dr_albanese_family(family: FamilyModel) -> DrResult:
    a = family.albanese
    if a is None:
        raise UnsupportedModel(f"family {family.name!r} has no Albanese model")
    return dr_albanese(a.model, a.pi_bar, a.cLbar, family.g)


def dr_via_sections(family: FamilyModel, d=None) -> DrResult:
    """``sigma^* e`` with ``e = E^g / (g! d)``: the definition, not a formula."""
    u = family.universal
    if u is None or u.sigma is None or not u.relative:
        raise UnsupportedModel(f"family {family.name!r} has no relative section model")
    d = rank_for_family(family) if d is None else d
    e = power(e_class(family), family.g) * Fraction(1, factorial(family.g) * d)
    return DrResult(u.sigma.pullback(e), "sections", _digest(family, d=d))


def dr_scaling_check(family: FamilyModel, d: int, r) -> bool:
    """``DR(L^r) == r^(2g) DR(L)``."""
    if r < 0:
        raise ValueError("scaling needs r >= 0")
    scaled = dr_main(family.with_bundle(family.cL * r), d).value
    return scaled == dr_main(family, d).value * Fraction(r) ** (2 * family.g)


# -- product of two curves --


def _check_genus(g1, g2, least):
    for g in (g1, g2):
        if not isinstance(g, int) or g < least:
            raise InvalidGenus(f"genus {g!r} not allowed here (need an integer >= {least})")


def _product_ring(g1, g2):
    # a_i stands for pi_{i*} L_i^2, which vanishes in powers above g_i
    return truncated_polynomial_ring([("a1", 1, g1 + 1), ("a2", 1, g2 + 1)], g1 + g2,
                                     name=f"product_g{g1}_g{g2}")


def _expand(g1, g2, deg1, deg2):
    """``(deg2 a1 + deg1 a2)^(g1+g2)`` in the truncated ring, and the lone monomial it should be."""
    ring = _product_ring(g1, g2)
    a1, a2 = monomial(ring, a1=1), monomial(ring, a2=1)
    lhs = power(a1 * deg2 + a2 * deg1, g1 + g2)
    return lhs, monomial(ring, a1=g1, a2=g2)


def _identified_constant(lhs, top, g1, g2):
    """Match ``c (-x)^g / g!`` against ``(-1/2 a1)^g1/g1! . (-1/2 a2)^g2/g2!``."""
    g = g1 + g2
    coeff = Fraction(lhs.coefficient(top.ring.symbol(next(iter(top.coefficients)))))
    return Fraction(factorial(g), 2 ** g * factorial(g1) * factorial(g2)) / coeff


def product_expansion_check(g1: int, g2: int):
    """Expand ``((2g2-2) a1 + (2g1-2) a2)^(g1+g2)`` with ``a_i^(g_i+1) = 0``.

    ``a_i`` stands for ``pi_i*(L_i^2)``.  Returns ``(ok, constant)``: ``ok``
    says only ``binom(g1+g2, g1)(2g2-2)^g1 (2g1-2)^g2 a1^g1 a2^g2`` survives,
    and ``constant`` is the factor in front of ``(-pi_*(L^2 . K))^g / g!``
    obtained by comparing with the product of the two curve formulas.
    """
    _check_genus(g1, g2, 2)
    lhs, top = _expand(g1, g2, 2 * g1 - 2, 2 * g2 - 2)
    coeff = comb(g1 + g2, g1) * (2 * g2 - 2) ** g1 * (2 * g1 - 2) ** g2
    return lhs == top * coeff, _identified_constant(lhs, top, g1, g2)


def sections_expansion_check(g1: int, g2: int):
    """Same as :func:`product_expansion_check` with ``F = p1^*[s1] + p2^*[s2]``
    (fibre degree one on each factor)."""
    _check_genus(g1, g2, 0)
    lhs, top = _expand(g1, g2, 1, 1)
    return lhs == top * comb(g1 + g2, g1), _identified_constant(lhs, top, g1, g2)


def dr_product_constant(g1: int, g2: int, variant: str = "canonical") -> Fraction:
    """Normalising constant of DR on a product of two curve families.

    ``canonical`` polarises with ``omega``, whose fibre degrees ``2g_i - 2``
    enter the rank; ``sections`` uses degree-one fibre classes.
    """
    if variant == "canonical":
        _check_genus(g1, g2, 2)
        return Fraction(1, 2 ** (g1 + g2) * (2 * g1 - 2) ** g2 * (2 * g2 - 2) ** g1)
    if variant == "sections":
        _check_genus(g1, g2, 0)
        return Fraction(1, 2 ** (g1 + g2))
    raise ValueError(f"unknown variant {variant!r}")
