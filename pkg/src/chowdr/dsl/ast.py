"""Expression trees.  Source positions ride along but never affect equality."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

Pos = Optional[Tuple[int, int]]

# names that only appear as function heads
KEYWORDS = frozenset({"push", "pull", "exp", "c1", "integrate", "component"})


@dataclass(frozen=True)
class Node:
    pass


def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RationalLit(Node):
    value: Fraction
    pos: Pos = _pos()


@dataclass(frozen=True)
class ClassRef(Node):
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Neg(Node):
    operand: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class Exp(Node):
    operand: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class C1(Node):
    bundle: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Push(Node):
    morphism: str
    operand: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class Pull(Node):
    morphism: str
    operand: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class Integrate(Node):
    operand: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class Component(Node):
    operand: Node
    codim: int
    pos: Pos = _pos()


def walk(node):
    """Pre-order traversal."""
    yield node
    for child in children(node):
        yield from walk(child)


def children(node):
    if isinstance(node, (Add, Mul)):
        return (node.left, node.right)
    if isinstance(node, Pow):
        return (node.base,)
    if isinstance(node, (Neg, Exp, Push, Pull, Integrate, Component)):
        return (node.operand,)
    return ()
