"""Fibration packages: a family X -> S together with the data the DR formulas read."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

from ..errors import ValidationError
from ..ring import GradedClass, RingModel, integrate, mul, power
from .morphism import Morphism


@dataclass(frozen=True)
class UniversalBundle:
    """The universal line bundle on ``X x_S J`` (or on one fibre ``X_s x J_s``).

    ``relative`` is true when ``product`` models the whole fibre product over
    the base; otherwise everything lives over a point and ``p1`` lands in the
    family's fibre model.
    """

    product: RingModel
    p1: Morphism
    p2: Morphism
    cU: GradedClass
    zero: Morphism
    inversion: Morphism
    jacobian_fiber_restrict: Morphism
    sigma: Optional[Morphism] = None
    relative: bool = False

    @property
    def jacobian(self) -> RingModel:
        return self.p2.target


@dataclass(frozen=True)
class Albanese:
    model: RingModel
    pi_bar: Morphism
    cLbar: GradedClass


@dataclass(frozen=True)
class FamilyModel:
    name: str
    total: RingModel
    base: RingModel
    proj: Morphism
    n: int
    g: int
    cL: GradedClass
    cF: GradedClass
    fiber: RingModel
    fiber_restrict: Morphism
    abelian: bool = False
    universal: Optional[UniversalBundle] = None
    albanese: Optional[Albanese] = None

    def with_bundle(self, cL: GradedClass) -> "FamilyModel":
        return dataclasses.replace(self, cL=cL)

    def restrict_to_fiber(self, x: GradedClass) -> GradedClass:
        return self.fiber_restrict.pullback(x)

    def digest(self):
        return {
            "family": self.name,
            "n": self.n,
            "g": self.g,
            "total": self.total.name,
            "base": self.base.name,
        }


def _check(cond, msg):
    if not cond:
        raise ValidationError(msg)


def validate_family(f: FamilyModel) -> FamilyModel:
    """Structural checks plus the numerical shadows of the hypotheses.

    ``L`` must have degree zero on the fibre against ``F^(n-1)`` and ``F``
    must have positive top self-intersection on the fibre.
    """
    who = f"family {f.name!r}"
    _check(f.proj.source is f.total and f.proj.target is f.base, f"{who}: projection must map total -> base")
    _check(f.proj.rel_dim == f.n, f"{who}: projection has rel_dim {f.proj.rel_dim}, expected n = {f.n}")
    _check(f.n >= 1 and f.g >= 0, f"{who}: need n >= 1 and g >= 0")
    for label, c in (("L", f.cL), ("F", f.cF)):
        _check(c.ring is f.total, f"{who}: c1({label}) must live on the total space")
        _check(c.is_homogeneous(1), f"{who}: c1({label}) must have codimension 1")
    _check(f.fiber_restrict.source is f.fiber and f.fiber_restrict.target is f.total,
           f"{who}: fiber_restrict must map fiber -> total")
    _check(f.fiber.dimension == f.n, f"{who}: fiber has dimension {f.fiber.dimension}, expected {f.n}")
    lf = f.restrict_to_fiber(f.cL)
    ff = f.restrict_to_fiber(f.cF)
    _check(integrate(mul(lf, power(ff, f.n - 1))) == 0,
           f"{who}: L is not numerically trivial on the fibre")
    _check(integrate(power(ff, f.n)) > 0, f"{who}: F has non-positive degree on the fibre")
    u = f.universal
    if u is not None:
        _check(u.p1.source is u.product and u.p2.source is u.product, f"{who}: p1, p2 must start at the product")
        expected = f.total if u.relative else f.fiber
        _check(u.p1.target is expected, f"{who}: p1 must land in the {'total space' if u.relative else 'fibre'}")
        _check(u.cU.ring is u.product and u.cU.is_homogeneous(1), f"{who}: c1(U) must be a divisor on the product")
        _check(u.zero.target is u.jacobian, f"{who}: zero section must land in the Jacobian")
        _check(u.inversion.source is u.jacobian and u.inversion.target is u.jacobian,
               f"{who}: inversion must be an endomorphism of the Jacobian")
        _check(u.jacobian_fiber_restrict.target is u.jacobian
               and u.jacobian_fiber_restrict.source.dimension == f.g,
               f"{who}: Jacobian fibre must have dimension g = {f.g}")
        if u.sigma is not None:
            _check(u.sigma.target is u.jacobian and u.sigma.source is f.base,
                   f"{who}: sigma must be a section base -> Jacobian")
    if f.albanese is not None:
        a = f.albanese
        _check(a.pi_bar.source is a.model and a.pi_bar.target is f.base,
               f"{who}: Albanese structure map must land in the base")
        _check(a.cLbar.ring is a.model and a.cLbar.is_homogeneous(1),
               f"{who}: Albanese bundle must be a divisor on the Albanese model")
    return f


def fiber_cF(f: FamilyModel, ring: RingModel) -> GradedClass:
    """``c1(F)`` on ``ring``, which is either the total space or the fibre."""
    if ring is f.total:
        return f.cF
    if ring is f.fiber:
        return f.restrict_to_fiber(f.cF)
    raise ValidationError(f"family {f.name!r}: no c1(F) available on {ring.name!r}")
