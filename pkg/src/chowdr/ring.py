"""Finite graded commutative algebras over the rationals.

A :class:`RingModel` is given by a basis in each codimension and a table of
structure constants.  Elements are :class:`GradedClass` instances: sparse
maps ``(codimension, index) -> rational`` with zero coefficients dropped.
Everything is exact; floats are rejected at the boundary.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from numbers import Rational
from types import MappingProxyType
from typing import Union

from .errors import (
    DuplicateBasisName,
    NonNilpotentInput,
    NoPointClass,
    RingMismatch,
    ValidationError,
)

Key = tuple  # (codimension, index within that codimension)
Scalar = Union[int, Fraction]


def as_rational(value) -> Scalar:
    """Coerce ``value`` to an exact rational (int when integral).

    Accepts ints, Fractions and strings such as ``"3"`` or ``"-3/4"``.
    Floats and decimal strings are refused.
    """
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise TypeError(f"inexact literal {value!r}; write rationals as p/q")
        q = Fraction(text)
        return q.numerator if q.denominator == 1 else q
    if isinstance(value, Rational):
        return as_rational(Fraction(value.numerator, value.denominator))
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class RingModel:
    """Numerical model of a Chow ring.

    Build instances with :func:`make_ring`; the constructor assumes its inputs
    are already canonical and validated.
    """

    __slots__ = (
        "name",
        "dimension",
        "basis",
        "point_class",
        "factors",
        "meta",
        "_index",
        "_table",
        "_unit",
    )

    def __init__(self, name, dimension, basis, table, point_class=None, factors=()):
        self.name = name
        self.dimension = dimension
        self.basis = basis
        self.point_class = point_class
        # ((label, RingModel), ...) when built as a tensor product
        self.factors = tuple(factors)
        # construction data used by builders (tensor decompositions, coordinates)
        self.meta = {}
        self._index = {
            sym: (k, i) for k, syms in enumerate(basis) for i, sym in enumerate(syms)
        }
        self._table = table
        self._unit = None

    def __repr__(self):
        return f"RingModel({self.name!r}, dim={self.dimension}, size={self.size})"

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.basis)

    def keys(self, codim=None):
        if codim is None:
            return [(k, i) for k, syms in enumerate(self.basis) for i in range(len(syms))]
        if not 0 <= codim <= self.dimension:
            return []
        return [(codim, i) for i in range(len(self.basis[codim]))]

    def symbol(self, key: Key) -> str:
        return self.basis[key[0]][key[1]]

    def key(self, symbol: str) -> Key:
        try:
            return self._index[symbol]
        except KeyError:
            raise KeyError(f"{symbol!r} is not a basis symbol of ring {self.name!r}") from None

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def codim(self, symbol: str) -> int:
        return self.key(symbol)[0]

    def structure_constants(self, k1: Key, k2: Key):
        """Product of two basis elements as a tuple of ``(key, coefficient)``."""
        return self._table.get((k1, k2), ())

    @property
    def unit(self) -> "GradedClass":
        if self._unit is None:
            self._unit = GradedClass(self, {(0, 0): 1})
        return self._unit

    def zero(self) -> "GradedClass":
        return GradedClass(self, {})

    def basis_class(self, symbol: str) -> "GradedClass":
        return GradedClass(self, {self.key(symbol): 1})

    def element(self, coeffs=None, **kw) -> "GradedClass":
        """Class from a ``{symbol: coefficient}`` mapping (or keyword args)."""
        data = dict(coeffs or {})
        data.update(kw)
        out = {}
        for sym, c in data.items():
            k = self.key(sym)
            out[k] = out.get(k, 0) + as_rational(c)
        return GradedClass(self, out)

    def scalar(self, q) -> "GradedClass":
        return GradedClass(self, {(0, 0): as_rational(q)})

    def point(self) -> "GradedClass":
        if self.point_class is None:
            raise NoPointClass(f"ring {self.name!r} has no designated point class")
        return self.basis_class(self.point_class)

    def product_entries(self):
        """Yield ``(sym1, sym2, {sym: coeff})`` for non-unit pairs with nonzero product.

        Pairs are ordered by basis key and only listed once (``sym1 <= sym2``).
        """
        for (k1, k2), value in sorted(self._table.items()):
            if k1 > k2 or k1 == (0, 0) or k2 == (0, 0) or not value:
                continue
            yield self.symbol(k1), self.symbol(k2), {self.symbol(k): c for k, c in value}


def _parse_value(ring_index, value, where):
    if isinstance(value, GradedClass):
        return {k: c for k, c in value._c.items()}
    if isinstance(value, str):
        value = {value: 1}
    elif not isinstance(value, Mapping):
        raise ValidationError(f"{where}: product value must be a symbol or a mapping")
    out = {}
    for sym, c in value.items():
        if sym not in ring_index:
            raise ValidationError(f"{where}: unknown basis symbol {sym!r}")
        c = as_rational(c)
        k = ring_index[sym]
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c != 0}


def make_ring(name, dimension, basis_spec, products=(), point_class=None, *, factors=()):
    """Validate a structure-constant table and return a :class:`RingModel`.

    ``basis_spec`` maps codimension to a list of symbols; codimension 0 must
    hold exactly the unit.  ``products`` is either a mapping
    ``(sym1, sym2) -> value`` or an iterable of ``(sym1, sym2, value)``
    triples, where a value is a symbol or a ``{symbol: coefficient}``
    mapping.  Pairs not listed multiply to zero; the unit law is implicit.

    The full invariant suite runs here: symmetry, unit law, grading,
    truncation above ``dimension`` and associativity on every basis triple.
    """
    if not isinstance(dimension, int) or dimension < 0:
        raise ValidationError(f"ring {name!r}: dimension must be a non-negative integer")
    spec = {int(k): list(v) for k, v in dict(basis_spec).items()}
    for k in spec:
        if not 0 <= k <= dimension:
            raise ValidationError(f"ring {name!r}: codimension {k} outside 0..{dimension}")
    if len(spec.get(0, ())) != 1:
        raise ValidationError(f"ring {name!r}: codimension 0 must contain exactly one symbol (the unit)")
    seen = set()
    for k in sorted(spec):
        for sym in spec[k]:
            if sym in seen:
                raise DuplicateBasisName(f"ring {name!r}: basis symbol {sym!r} declared twice")
            seen.add(sym)
    basis = tuple(tuple(sorted(spec.get(k, ()))) for k in range(dimension + 1))
    index = {sym: (k, i) for k, syms in enumerate(basis) for i, sym in enumerate(syms)}
    unit_key = (0, 0)

    if isinstance(products, Mapping):
        entries = [(a, b, v) for (a, b), v in products.items()]
    else:
        entries = list(products)

    given = {}
    for a, b, value in entries:
        where = f"ring {name!r}, product {a}*{b}"
        for sym in (a, b):
            if sym not in index:
                raise ValidationError(f"{where}: unknown basis symbol {sym!r}")
        ka, kb = index[a], index[b]
        val = _parse_value(index, value, where)
        for pair in ((ka, kb), (kb, ka)):
            if pair in given and given[pair] != val:
                raise ValidationError(
                    f"{where}: contradictory entries for the pair ({a}, {b})"
                )
        given[(ka, kb)] = val
        if ka != kb:
            given[(kb, ka)] = val

    table = {}
    for k in index.values():
        table[(unit_key, k)] = ((k, 1),)
        table[(k, unit_key)] = ((k, 1),)
    for (ka, kb), val in given.items():
        a, b = basis[ka[0]][ka[1]], basis[kb[0]][kb[1]]
        where = f"ring {name!r}, product {a}*{b}"
        if unit_key in (ka, kb):
            other = kb if ka == unit_key else ka
            if val != {other: 1}:
                raise ValidationError(f"{where}: violates the unit law")
            continue
        target = ka[0] + kb[0]
        for k in val:
            if k[0] != target:
                raise ValidationError(
                    f"{where}: term {basis[k[0]][k[1]]} has codimension {k[0]}, expected {target}"
                )
        if target > dimension and val:
            raise ValidationError(f"{where}: product above dimension {dimension} must vanish")
        table[(ka, kb)] = tuple(sorted((k, _norm(c)) for k, c in val.items()))

    if point_class is not None:
        if point_class not in index:
            raise ValidationError(f"ring {name!r}: unknown point class {point_class!r}")
        if index[point_class][0] != dimension:
            raise ValidationError(f"ring {name!r}: point class must have codimension {dimension}")

    ring = RingModel(name, dimension, basis, table, point_class, factors)
    _check_associative(ring)
    return ring


def _check_associative(ring: RingModel) -> None:
    dim = ring.dimension
    nonunit = [k for k in ring.keys() if k[0] > 0]

    def basis_prod(k1, k2):
        return dict(ring._table.get((k1, k2), ()))

    def times(vec, k):
        out = defaultdict(int)
        for k1, c1 in vec.items():
            if k1[0] + k[0] > dim:
                continue
            for k2, c2 in ring._table.get((k1, k), ()):
                out[k2] += c1 * c2
        return {kk: c for kk, c in out.items() if c != 0}

    for a, b, c in combinations_with_replacement(nonunit, 3):
        if a[0] + b[0] + c[0] > dim:
            continue
        ab_c = times(basis_prod(a, b), c)
        bc_a = times(basis_prod(b, c), a)
        if ab_c != bc_a:
            raise ValidationError(_assoc_msg(ring, a, b, c))
        if a != b and b != c:
            ac_b = times(basis_prod(a, c), b)
            if ab_c != ac_b:
                raise ValidationError(_assoc_msg(ring, a, b, c))


def _assoc_msg(ring, a, b, c):
    syms = ", ".join(ring.symbol(k) for k in (a, b, c))
    return f"ring {ring.name!r}: associativity fails on the triple ({syms})"


class GradedClass:
    """An element of a :class:`RingModel`; immutable."""

    __slots__ = ("ring", "_c")

    def __init__(self, ring: RingModel, coeffs):
        self.ring = ring
        self._c = {k: _norm(c) for k, c in coeffs.items() if c != 0}

    @property
    def coefficients(self):
        return MappingProxyType(self._c)

    def items(self):
        """``(key, coefficient)`` pairs in canonical basis order."""
        return sorted(self._c.items())

    def coefficient(self, symbol: str) -> Scalar:
        return self._c.get(self.ring.key(symbol), 0)

    def is_zero(self) -> bool:
        return not self._c

    def codims(self):
        return sorted({k[0] for k in self._c})

    def is_homogeneous(self, codim) -> bool:
        return all(k[0] == codim for k in self._c)

    def as_dict(self):
        return {self.ring.symbol(k): c for k, c in self.items()}

    def to_json(self):
        return [[self.ring.symbol(k), format_rational(c)] for k, c in self.items()]

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k, c in self.items():
            sym = self.ring.symbol(k)
            if k == (0, 0):
                term = format_rational(abs(c))
            elif abs(c) == 1:
                term = sym
            else:
                term = f"{format_rational(abs(c))}*{sym}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out

    def __repr__(self):
        return f"<{self.ring.name}: {self}>"

    def __eq__(self, other):
        if isinstance(other, GradedClass):
            return self.ring is other.ring and self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ring), frozenset(self._c.items())))

    def __add__(self, other):
        return add(self, _coerce(self.ring, other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, scalar_mul(-1, _coerce(self.ring, other)))

    def __rsub__(self, other):
        return add(_coerce(self.ring, other), scalar_mul(-1, self))

    def __neg__(self):
        return scalar_mul(-1, self)

    def __mul__(self, other):
        if isinstance(other, GradedClass):
            return mul(self, other)
        try:
            q = as_rational(other)
        except TypeError:
            return NotImplemented
        return scalar_mul(q, self)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return scalar_mul(Fraction(1) / Fraction(as_rational(other)), self)

    def __pow__(self, k):
        return power(self, k)


def _coerce(ring, value):
    if isinstance(value, GradedClass):
        return value
    return ring.scalar(value)


def _same_ring(x, y):
    if x.ring is not y.ring:
        raise RingMismatch(f"classes live on different rings: {x.ring.name!r} and {y.ring.name!r}")


def add(x: GradedClass, y: GradedClass) -> GradedClass:
    _same_ring(x, y)
    out = dict(x._c)
    for k, c in y._c.items():
        out[k] = out.get(k, 0) + c
    return GradedClass(x.ring, out)


def scalar_mul(q, x: GradedClass) -> GradedClass:
    q = as_rational(q)
    if q == 0:
        return GradedClass(x.ring, {})
    return GradedClass(x.ring, {k: c * q for k, c in x._c.items()})


def mul(x: GradedClass, y: GradedClass) -> GradedClass:
    _same_ring(x, y)
    ring = x.ring
    table = ring._table
    dim = ring.dimension
    out = defaultdict(int)
    for k1, c1 in x._c.items():
        for k2, c2 in y._c.items():
            if k1[0] + k2[0] > dim:
                continue
            c = c1 * c2
            for k, s in table.get((k1, k2), ()):
                out[k] += c * s
    return GradedClass(ring, out)


def power(x: GradedClass, k: int) -> GradedClass:
    if not isinstance(k, int) or k < 0:
        raise ValueError("exponent must be a non-negative integer")
    result = x.ring.unit
    base = x
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def exp_truncated(x: GradedClass) -> GradedClass:
    """``sum_i x^i / i!`` for a nilpotent (positive-codimension) class."""
    if (0, 0) in x._c:
        raise NonNilpotentInput(
            f"exp needs a class without codimension-0 part; got constant term {x._c[(0, 0)]}"
        )
    total = x.ring.unit
    term = x.ring.unit
    for i in range(1, x.ring.dimension + 1):
        term = mul(term, x)
        if term.is_zero():
            break
        total = add(total, scalar_mul(Fraction(1, factorial(i)), term))
    return total


def integrate(x: GradedClass) -> Scalar:
    ring = x.ring
    if ring.point_class is None:
        raise NoPointClass(f"ring {ring.name!r} has no designated point class")
    return x._c.get(ring.key(ring.point_class), 0)


def equal(x: GradedClass, y: GradedClass) -> bool:
    _same_ring(x, y)
    return x._c == y._c


def component(x: GradedClass, codim: int) -> GradedClass:
    return GradedClass(x.ring, {k: c for k, c in x._c.items() if k[0] == codim})


def linear_combination(ring: RingModel, terms: Iterable) -> GradedClass:
    """Sum of ``coefficient * class`` over ``(coefficient, class)`` pairs."""
    out = ring.zero()
    for q, cls in terms:
        out = add(out, scalar_mul(q, cls))
    return out
