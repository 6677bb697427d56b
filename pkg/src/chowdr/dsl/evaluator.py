"""Fold an expression tree into a class (or a rational for ``integrate``)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Optional

from ..errors import EvaluationError, NonNilpotentInput, UnboundName
from ..geometry.morphism import Morphism
from ..ring import GradedClass, RingModel, component, exp_truncated, integrate, power
from .ast import (
    C1,
    Add,
    ClassRef,
    Component,
    Exp,
    Integrate,
    Mul,
    Neg,
    Node,
    Pow,
    Pull,
    Push,
    RationalLit,
)
from .parser import parse


def _frozen(d):
    return MappingProxyType(dict(d or {}))


@dataclass(frozen=True)
class Env:
    """Names visible to an expression.

    Bare identifiers resolve to basis symbols of ``ring`` (when one is
    given) and then to named classes.
    """

    classes: MappingProxyType = field(default_factory=lambda: _frozen({}))
    bundles: MappingProxyType = field(default_factory=lambda: _frozen({}))
    morphisms: MappingProxyType = field(default_factory=lambda: _frozen({}))
    ring: Optional[RingModel] = None

    @classmethod
    def build(cls, classes=None, bundles=None, morphisms=None, ring=None):
        return cls(_frozen(classes), _frozen(bundles), _frozen(morphisms), ring)

    def with_ring(self, ring):
        return Env(self.classes, self.bundles, self.morphisms, ring)

    def lookup_class(self, name):
        if self.ring is not None and name in self.ring:
            return self.ring.basis_class(name)
        if name in self.classes:
            return self.classes[name]
        hint = " (it is a bundle; write c1(...))" if name in self.bundles else ""
        raise UnboundName(f"unbound name {name!r}{hint}")

    def lookup_bundle(self, name):
        try:
            return self.bundles[name]
        except KeyError:
            raise UnboundName(f"unbound bundle {name!r}") from None

    def lookup_morphism(self, name) -> Morphism:
        try:
            return self.morphisms[name]
        except KeyError:
            raise UnboundName(f"unbound morphism {name!r}") from None


def _located(node, exc):
    if getattr(exc, "_located", False) or node.pos is None:
        return exc
    line, col = node.pos
    new = type(exc)(f"{line}:{col}: {exc}")
    new._located = True
    return new


def _as_class(value, ring):
    if isinstance(value, GradedClass):
        return value
    return ring.scalar(value)


def evaluate(node: Node, env: Env):
    try:
        return _eval(node, env)
    except EvaluationError as exc:
        located = _located(node, exc)
        if located is exc:
            raise
        raise located from None


def _eval(node, env):
    if isinstance(node, RationalLit):
        return Fraction(node.value)
    if isinstance(node, ClassRef):
        return env.lookup_class(node.name)
    if isinstance(node, C1):
        return env.lookup_bundle(node.bundle)
    if isinstance(node, Add):
        return evaluate(node.left, env) + evaluate(node.right, env)
    if isinstance(node, Mul):
        return evaluate(node.left, env) * evaluate(node.right, env)
    if isinstance(node, Neg):
        return -evaluate(node.operand, env)
    if isinstance(node, Pow):
        base = evaluate(node.base, env)
        return power(base, node.exponent) if isinstance(base, GradedClass) else base ** node.exponent
    if isinstance(node, Exp):
        x = evaluate(node.operand, env)
        if isinstance(x, GradedClass):
            return exp_truncated(x)
        if x != 0:
            raise NonNilpotentInput(f"exp of the nonzero scalar {x} does not truncate")
        return Fraction(1)
    if isinstance(node, Push):
        f = env.lookup_morphism(node.morphism)
        return f.pushforward(_as_class(evaluate(node.operand, env), f.source))
    if isinstance(node, Pull):
        f = env.lookup_morphism(node.morphism)
        return f.pullback(_as_class(evaluate(node.operand, env), f.target))
    if isinstance(node, Integrate):
        x = evaluate(node.operand, env)
        if not isinstance(x, GradedClass):
            raise EvaluationError("integrate needs a class, not a bare number")
        return integrate(x)
    if isinstance(node, Component):
        x = evaluate(node.operand, env)
        if isinstance(x, GradedClass):
            return component(x, node.codim)
        return x if node.codim == 0 else Fraction(0)
    raise TypeError(f"not an expression node: {node!r}")


def eval_text(text: str, env: Env):
    return evaluate(parse(text), env)
