"""Morphisms between ring models: pullback and pushforward as linear maps."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Mapping

from ..errors import (
    CompositionMismatch,
    DegreeMismatch,
    NotRingHomomorphism,
    ProjectionFormulaViolation,
    RingMismatch,
    ValidationError,
)
from ..ring import GradedClass, RingModel, as_rational, mul


class Morphism:
    """A map ``source -> target`` of spaces, seen through its two operators.

    ``pullback`` sends target classes to source classes preserving
    codimension; ``pushforward`` sends source classes to target classes,
    lowering codimension by ``rel_dim``.  Instances come from
    :func:`register_morphism` (or :func:`compose`/:func:`identity`), which
    validate the ring-homomorphism property and the projection formula on
    every pair of basis elements.
    """

    __slots__ = ("name", "source", "target", "rel_dim", "_pull", "_push")

    def __init__(self, name, source, target, rel_dim, pull, push):
        self.name = name
        self.source = source
        self.target = target
        self.rel_dim = rel_dim
        # dense over basis keys so that operator equality is dict equality
        self._pull = {k: {k2: c for k2, c in pull.get(k, {}).items() if c != 0} for k in target.keys()}
        self._push = {k: {k2: c for k2, c in push.get(k, {}).items() if c != 0} for k in source.keys()}

    def __repr__(self):
        return f"Morphism({self.name!r}: {self.source.name} -> {self.target.name}, rel_dim={self.rel_dim})"

    def pullback(self, x: GradedClass) -> GradedClass:
        if x.ring is not self.target:
            raise RingMismatch(
                f"pullback along {self.name!r} expects a class on {self.target.name!r}, got {x.ring.name!r}"
            )
        return _apply(self._pull, x, self.source)

    def pushforward(self, x: GradedClass) -> GradedClass:
        if x.ring is not self.source:
            raise RingMismatch(
                f"pushforward along {self.name!r} expects a class on {self.source.name!r}, got {x.ring.name!r}"
            )
        return _apply(self._push, x, self.target)

    def pull_table(self):
        """``{target symbol: class on source}`` for every target basis element."""
        return {self.target.symbol(k): self.pullback(GradedClass(self.target, {k: 1}))
                for k in self.target.keys()}

    def push_table(self):
        return {self.source.symbol(k): self.pushforward(GradedClass(self.source, {k: 1}))
                for k in self.source.keys()}

    def same_as(self, other: "Morphism") -> bool:
        """Equality of operators (names are ignored)."""
        return (
            self.source is other.source
            and self.target is other.target
            and self.rel_dim == other.rel_dim
            and self._pull == other._pull
            and self._push == other._push
        )

    def is_identity(self) -> bool:
        if self.source is not self.target or self.rel_dim != 0:
            return False
        keys = self.source.keys()
        return all(self._pull.get(k) == {k: 1} and self._push.get(k) == {k: 1} for k in keys)


def _apply(table, x, ring):
    out = defaultdict(int)
    for k, c in x._c.items():
        for k2, s in table.get(k, {}).items():
            out[k2] += c * s
    return GradedClass(ring, out)


def pullback(f: Morphism, x: GradedClass) -> GradedClass:
    return f.pullback(x)


def pushforward(f: Morphism, x: GradedClass) -> GradedClass:
    return f.pushforward(x)


def _table_from(spec, domain: RingModel, codomain: RingModel, which: str, name: str):
    """Turn ``{domain symbol: value}`` into ``{domain key: {codomain key: coeff}}``."""
    out = {}
    for sym, value in dict(spec).items():
        if sym not in domain:
            raise ValidationError(f"morphism {name!r}: {which} table names unknown symbol {sym!r} of {domain.name!r}")
        if isinstance(value, GradedClass):
            if value.ring is not codomain:
                raise ValidationError(
                    f"morphism {name!r}: {which} image of {sym} lives on {value.ring.name!r}, expected {codomain.name!r}"
                )
            image = dict(value._c)
        else:
            if isinstance(value, str):
                value = {value: 1}
            elif not isinstance(value, Mapping):
                value = {codomain.symbol((0, 0)): value} if value else {}
            image = {}
            for s, c in value.items():
                if s not in codomain:
                    raise ValidationError(
                        f"morphism {name!r}: {which} image of {sym} uses unknown symbol {s!r} of {codomain.name!r}"
                    )
                k = codomain.key(s)
                image[k] = image.get(k, 0) + as_rational(c)
        out[domain.key(sym)] = {k: c for k, c in image.items() if c != 0}
    return out


def register_morphism(name, source, target, pullback_table, pushforward_table, rel_dim) -> Morphism:
    """Build and validate a morphism ``source -> target``.

    ``pullback_table`` maps target symbols to classes (or symbol/mapping
    descriptions) on the source; ``pushforward_table`` maps source symbols to
    target classes.  Omitted entries are zero, except that the unit pulls
    back to the unit unless stated otherwise.
    """
    pull = _table_from(pullback_table, target, source, "pullback", name)
    push = _table_from(pushforward_table, source, target, "pushforward", name)
    unit = (0, 0)
    pull.setdefault(unit, {unit: 1})
    return _validated(Morphism(name, source, target, rel_dim, pull, push))


def _validated(f: Morphism) -> Morphism:
    src, tgt = f.source, f.target
    if f.rel_dim != src.dimension - tgt.dimension:
        raise DegreeMismatch(
            f"morphism {f.name!r}: rel_dim {f.rel_dim} but dim {src.name} - dim {tgt.name} = "
            f"{src.dimension - tgt.dimension}"
        )
    for k, image in f._pull.items():
        for k2 in image:
            if k2[0] != k[0]:
                raise DegreeMismatch(
                    f"morphism {f.name!r}: pullback of {tgt.symbol(k)} has a term {src.symbol(k2)} "
                    f"in codimension {k2[0]}, expected {k[0]}"
                )
    for k, image in f._push.items():
        for k2 in image:
            if k2[0] != k[0] - f.rel_dim:
                raise DegreeMismatch(
                    f"morphism {f.name!r}: pushforward of {src.symbol(k)} has a term {tgt.symbol(k2)} "
                    f"in codimension {k2[0]}, expected {k[0] - f.rel_dim}"
                )
    if f._pull.get((0, 0)) != {(0, 0): 1}:
        raise NotRingHomomorphism(f"morphism {f.name!r}: pullback does not preserve the unit")

    tkeys = tgt.keys()
    basis_t = {k: GradedClass(tgt, {k: 1}) for k in tkeys}
    pulled = {k: f.pullback(basis_t[k]) for k in tkeys}
    for i, a in enumerate(tkeys):
        for b in tkeys[i:]:
            if a[0] == 0 or b[0] == 0:
                continue
            lhs = f.pullback(mul(basis_t[a], basis_t[b]))
            rhs = mul(pulled[a], pulled[b])
            if lhs != rhs:
                raise NotRingHomomorphism(
                    f"morphism {f.name!r}: pullback is not multiplicative on the pair "
                    f"({tgt.symbol(a)}, {tgt.symbol(b)})"
                )
    skeys = src.keys()
    basis_s = {k: GradedClass(src, {k: 1}) for k in skeys}
    pushed = {k: f.pushforward(basis_s[k]) for k in skeys}
    for a in tkeys:
        for b in skeys:
            lhs = f.pushforward(mul(pulled[a], basis_s[b]))
            rhs = mul(basis_t[a], pushed[b])
            if lhs != rhs:
                raise ProjectionFormulaViolation(
                    f"morphism {f.name!r}: projection formula fails on the pair "
                    f"({tgt.symbol(a)}, {src.symbol(b)}): {lhs} != {rhs}"
                )
    return f


def validate_morphism(f: Morphism) -> Morphism:
    """Re-run the exhaustive checks (ring hom, projection formula, degrees)."""
    return _validated(f)


def identity(ring: RingModel, name=None) -> Morphism:
    table = {k: {k: 1} for k in ring.keys()}
    return Morphism(name or f"id_{ring.name}", ring, ring, 0, table, {k: dict(v) for k, v in table.items()})


def compose(f: Morphism, g: Morphism, name=None) -> Morphism:
    """``f`` after ``g``; requires ``g.target is f.source``."""
    if g.target is not f.source:
        raise CompositionMismatch(
            f"cannot compose {f.name!r} after {g.name!r}: {g.name} lands in {g.target.name!r}, "
            f"{f.name} starts at {f.source.name!r}"
        )
    pull = {}
    for k in f.target.keys():
        img = g.pullback(f.pullback(GradedClass(f.target, {k: 1})))
        pull[k] = dict(img._c)
    push = {}
    for k in g.source.keys():
        img = f.pushforward(g.pushforward(GradedClass(g.source, {k: 1})))
        push[k] = dict(img._c)
    h = Morphism(name or f"{f.name}.{g.name}", g.source, f.target, f.rel_dim + g.rel_dim, pull, push)
    return _validated(h)


def from_tables(name, source, target, rel_dim, pull, push, validate=True) -> Morphism:
    """Build from key-level tables (``{key: {key: coeff}}``); used by builders."""
    pull = {k: {k2: c for k2, c in v.items() if c != 0} for k, v in pull.items()}
    push = {k: {k2: c for k2, c in v.items() if c != 0} for k, v in push.items()}
    f = Morphism(name, source, target, rel_dim, pull, push)
    return _validated(f) if validate else f
