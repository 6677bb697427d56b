"""Calculus on abelian schemes inside finite models.

Fourier transform, the zero-section identity, the Poincaré formula and
the symmetry/rigidification checks that the class ``E`` has to pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import NotPositiveInteger, RingMismatch
from .geometry.morphism import Morphism
from .ring import GradedClass, RingModel, exp_truncated, integrate, mul, power


@dataclass(frozen=True)
class AbelianModelPair:
    """``A x Â`` over a point together with its projections and zero sections."""

    product_model: RingModel
    p1: Morphism
    p2: Morphism
    poincare: GradedClass
    g: int
    zero_A: Morphism
    zero_dual: Morphism

    @property
    def a_model(self) -> RingModel:
        return self.p1.target

    @property
    def dual_model(self) -> RingModel:
        return self.p2.target

    def zero_class(self, side="dual") -> GradedClass:
        """Class of the origin on ``Â`` (or on ``A`` with ``side="A"``)."""
        sec = self.zero_dual if side == "dual" else self.zero_A
        return sec.pushforward(sec.source.unit)


def fourier(pair: AbelianModelPair, z: GradedClass) -> GradedClass:
    """``p2_*(exp(c1 P) . p1^* z)``."""
    if z.ring is not pair.a_model:
        raise RingMismatch(
            f"fourier expects a class on {pair.a_model.name!r}, got one on {z.ring.name!r}"
        )
    kernel = exp_truncated(pair.poincare)
    return pair.p2.pushforward(mul(kernel, pair.p1.pullback(z)))


def check_fourier_zero_section(pair: AbelianModelPair) -> bool:
    """``(-1)^g F([A]) == [origin of Â]``."""
    lhs = fourier(pair, pair.a_model.unit) * (-1) ** pair.g
    return lhs == pair.zero_class()


def poincare_formula_check(model: RingModel, E_class: GradedClass, g: int, d: int, zero_class=None) -> bool:
    """``E^g == g! d e`` and ``E^(g+1) == 0``.

    ``zero_class`` defaults to the point class of ``model``, which is the
    zero section when the base is a point.
    """
    if E_class.ring is not model:
        raise RingMismatch(f"class lives on {E_class.ring.name!r}, not on {model.name!r}")
    e = model.point() if zero_class is None else zero_class
    return power(E_class, g) == e * (factorial(g) * d) and power(E_class, g + 1).is_zero()


def polarization_rank(fiber_model: RingModel, E_fiber: GradedClass, g: int) -> int:
    """``deg(E^g) / g!`` on one fibre; refuses anything but a positive integer."""
    if E_fiber.ring is not fiber_model:
        raise RingMismatch(f"class lives on {E_fiber.ring.name!r}, not on {fiber_model.name!r}")
    d = Fraction(integrate(power(E_fiber, g))) / factorial(g)
    if d.denominator != 1 or d <= 0:
        raise NotPositiveInteger(f"fibre degree E^{g}/{g}! = {d} is not a positive integer")
    return int(d)


def check_symmetric(model: RingModel, E_class: GradedClass, inv: Morphism) -> bool:
    if inv.source is not model or inv.target is not model:
        raise RingMismatch(f"inversion {inv.name!r} is not an endomorphism of {model.name!r}")
    return inv.pullback(E_class) == E_class


def check_rigidified(model: RingModel, E_class: GradedClass, e_section: Morphism) -> bool:
    if e_section.target is not model:
        raise RingMismatch(f"section {e_section.name!r} does not land in {model.name!r}")
    return e_section.pullback(E_class).is_zero()
