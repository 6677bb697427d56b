"""Künneth products of ring models and truncated polynomial rings."""

from __future__ import annotations

from collections import defaultdict
from itertools import product as cartesian

from ..ring import GradedClass, RingModel, make_ring
from .morphism import Morphism, from_tables

UNIT = "one"


def _tensor_symbol(parts, labels, rings):
    pieces = [f"{sym}_{lab}" for sym, lab, r in zip(parts, labels, rings) if r.key(sym) != (0, 0)]
    return "__".join(pieces) if pieces else UNIT


def tensor_rings(rings, labels=None, name=None) -> RingModel:
    """Künneth product of several rings.

    Basis elements are tuples of factor basis elements; the symbol of a tuple
    joins its non-unit parts as ``sym_label`` with ``__``.  All modelled
    classes are even-degree, so products carry no signs.
    """
    rings = list(rings)
    labels = [str(i + 1) for i in range(len(rings))] if labels is None else [str(l) for l in labels]
    if len(labels) != len(rings):
        raise ValueError("one label per factor")
    name = name or "(" + "x".join(r.name for r in rings) + ")"
    dim = sum(r.dimension for r in rings)

    tuples = list(cartesian(*[r.keys() for r in rings]))
    sym_of = {}
    basis = defaultdict(list)
    for t in tuples:
        parts = [r.symbol(k) for r, k in zip(rings, t)]
        sym = _tensor_symbol(parts, labels, rings)
        sym_of[t] = sym
        basis[sum(k[0] for k in t)].append(sym)

    products = []
    for i, t1 in enumerate(tuples):
        c1 = sum(k[0] for k in t1)
        if c1 == 0:
            continue
        for t2 in tuples[i:]:
            c2 = sum(k[0] for k in t2)
            if c2 == 0 or c1 + c2 > dim:
                continue
            terms = [((), 1)]
            for r, a, b in zip(rings, t1, t2):
                factor = r.structure_constants(a, b)
                terms = [(kt + (k,), c * s) for kt, c in terms for k, s in factor]
                if not terms:
                    break
            if terms:
                value = {}
                for kt, c in terms:
                    sym = sym_of[kt]
                    value[sym] = value.get(sym, 0) + c
                products.append((sym_of[t1], sym_of[t2], value))

    point = None
    if all(r.point_class is not None for r in rings):
        point = sym_of[tuple(r.key(r.point_class) for r in rings)]
    ring = make_ring(name, dim, dict(basis), products, point, factors=tuple(zip(labels, rings)))
    ring.meta["tensor_index"] = {t: ring.key(s) for t, s in sym_of.items()}
    return ring


def _tensor_index(ring):
    try:
        return ring.meta["tensor_index"]
    except KeyError:
        raise ValueError(f"ring {ring.name!r} is not a tensor product") from None


def tensor_morphism(maps, source: RingModel, target: RingModel, name=None) -> Morphism:
    """``f_1 x ... x f_k`` between tensor rings built from the factor sources/targets."""
    maps = list(maps)
    s_idx, t_idx = _tensor_index(source), _tensor_index(target)
    if [r for _, r in source.factors] != [f.source for f in maps] or \
            [r for _, r in target.factors] != [f.target for f in maps]:
        raise ValueError("factor rings of source/target do not match the morphisms")

    def lift(tables, index_from, index_to):
        out = {}
        for t, key in index_from.items():
            terms = [((), 1)]
            for table, k in zip(tables, t):
                terms = [(kt + (k2,), c * s) for kt, c in terms for k2, s in table[k].items()]
                if not terms:
                    break
            image = defaultdict(int)
            for kt, c in terms:
                image[index_to[kt]] += c
            out[key] = dict(image)
        return out

    pull = lift([f._pull for f in maps], t_idx, s_idx)
    push = lift([f._push for f in maps], s_idx, t_idx)
    name = name or "x".join(f.name for f in maps)
    return from_tables(name, source, target, sum(f.rel_dim for f in maps), pull, push)


def tensor_product(r1: RingModel, r2: RingModel, labels=("1", "2"), name=None):
    """Künneth product of two rings with its two projections.

    Projections are only available when the other factor has a point class
    (needed for the pushforward of the fundamental class of the fibre).
    """
    ring = tensor_rings([r1, r2], labels, name)
    return ring, projection(ring, 0), projection(ring, 1)


def tensor_power(r: RingModel, k: int, name=None) -> RingModel:
    return tensor_rings([r] * k, None, name or f"{r.name}^{k}")


def projection(ring: RingModel, i: int, name=None) -> Morphism:
    """Projection of a tensor ring onto its ``i``-th factor."""
    index = _tensor_index(ring)
    factors = [r for _, r in ring.factors]
    target = factors[i]
    others = factors[:i] + factors[i + 1:]
    if any(r.point_class is None for r in others):
        raise ValueError("projection needs point classes on the other factors")
    other_points = [r.key(r.point_class) for r in others]
    units = [(0, 0)] * len(factors)
    pull = {}
    for k in target.keys():
        t = list(units)
        t[i] = k
        pull[k] = {index[tuple(t)]: 1}
    push = {}
    for t, key in index.items():
        rest = list(t[:i]) + list(t[i + 1:])
        push[key] = {t[i]: 1} if rest == other_points else {}
    label = ring.factors[i][0]
    rel = ring.dimension - target.dimension
    return from_tables(name or f"pr_{label}", ring, target, rel, pull, push)


def monomial_symbol(names, exps) -> str:
    parts = [n if e == 1 else f"{n}_pow{e}" for n, e in zip(names, exps) if e]
    return "__".join(parts) if parts else UNIT


def truncated_polynomial_ring(variables, ambient_dimension, name=None) -> RingModel:
    """``Q[a_1..a_k] / (a_i^{t_i})`` cut off above ``ambient_dimension``.

    ``variables`` is a list of ``(name, codim, truncation_exponent)``.  The
    basis is the monomials with exponents below their truncation and total
    codimension at most ``ambient_dimension``.  If a single monomial sits in
    the top codimension it becomes the point class.
    """
    variables = list(variables)
    for v, codim, t in variables:
        if t < 1 or codim < 1:
            raise ValueError(f"variable {v!r}: need codim >= 1 and truncation exponent >= 1")
    names = [v[0] for v in variables]
    codims = [v[1] for v in variables]
    exps_all = [e for e in cartesian(*[range(v[2]) for v in variables])
                if sum(c * x for c, x in zip(codims, e)) <= ambient_dimension]
    basis = defaultdict(list)
    sym = {}
    for e in exps_all:
        s = monomial_symbol(names, e)
        sym[e] = s
        basis[sum(c * x for c, x in zip(codims, e))].append(s)
    basis.setdefault(0, [UNIT])
    products = []
    for i, e1 in enumerate(exps_all):
        for e2 in exps_all[i:]:
            if not any(e1) or not any(e2):
                continue
            e = tuple(a + b for a, b in zip(e1, e2))
            if e in sym:
                products.append((sym[e1], sym[e2], sym[e]))
    top = basis.get(ambient_dimension, [])
    point = top[0] if len(top) == 1 else None
    name = name or "Q[" + ",".join(names) + "]/trunc"
    ring = make_ring(name, ambient_dimension, dict(basis), products, point)
    ring.meta["monomials"] = {s: e for e, s in sym.items()}
    ring.meta["variables"] = tuple(names)
    return ring


def monomial(ring: RingModel, **exps) -> GradedClass:
    """Basis monomial of a truncated polynomial ring (zero if truncated away)."""
    names = ring.meta["variables"]
    s = monomial_symbol(names, [exps.get(n, 0) for n in names])
    return ring.basis_class(s) if s in ring else ring.zero()
