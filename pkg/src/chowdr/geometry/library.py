"""Built-in models.

The elliptic square ``E x Ê`` (with ``Ê`` identified with ``E``) is written
out by hand: ``f1 = {pt} x Ê``, ``f2 = E x {pt}``, ``delta`` the diagonal,
``pt`` the point.  Larger relative models come from
:func:`~chowdr.geometry.coordinates.elliptic_power`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache

from ..errors import UnknownModel, UnsupportedModel
from ..ring import GradedClass, RingModel, make_ring
from .coordinates import (
    attach_coordinates,
    coordinates,
    diagonal,
    elliptic_power,
    linear_map,
    outer,
    point_pullback,
    poincare_form,
)
from ..abelian import AbelianModelPair
from .family import Albanese, FamilyModel, UniversalBundle, validate_family
from .morphism import Morphism, from_tables, identity, register_morphism
from .products import projection, tensor_morphism, tensor_rings

ELLIPTIC_SQUARE = "elliptic_square"


@lru_cache(maxsize=None)
def point() -> RingModel:
    return elliptic_power("point", 0, {})


def _curve(name, sym):
    ring = make_ring(name, 1, {0: ["one"], 1: [sym]}, (), sym)
    return attach_coordinates(ring, 1, {sym: ((1,),)})


@lru_cache(maxsize=None)
def elliptic() -> RingModel:
    return _curve("elliptic", "theta")


@lru_cache(maxsize=None)
def elliptic_dual() -> RingModel:
    return _curve("elliptic_dual", "theta_hat")


def elliptic_square_ring(name=ELLIPTIC_SQUARE) -> RingModel:
    ring = make_ring(
        name,
        2,
        {0: ["one"], 1: ["f1", "f2", "delta"], 2: ["pt"]},
        {
            ("f1", "f1"): {},
            ("f2", "f2"): {},
            ("delta", "delta"): {},
            ("f1", "f2"): "pt",
            ("f1", "delta"): "pt",
            ("f2", "delta"): "pt",
        },
        point_class="pt",
    )
    ring.meta["kind"] = ELLIPTIC_SQUARE
    return attach_coordinates(
        ring,
        2,
        {"f1": point_pullback(2, 0), "f2": point_pullback(2, 1), "delta": diagonal(2, 0, 1)},
        {"pt": (1, ("f1", "f2"))},
    )


def _mult_tables(r):
    """``[1 x r]`` on ``E x Ê``: pullback and pushforward tables."""
    pull = {
        "f1": "f1",
        "f2": {"f2": r * r},
        "delta": {"delta": r, "f1": 1 - r, "f2": r * r - r},
        "pt": {"pt": r * r},
    }
    push = {
        "one": {"one": r * r},
        "f1": {"f1": r * r},
        "f2": "f2",
        "delta": {"delta": r, "f1": r * r - r, "f2": 1 - r},
        "pt": "pt",
    }
    return pull, push


@dataclass(frozen=True)
class EllipticSquare:
    ring: RingModel
    morphisms: dict
    _mult: dict = field(default_factory=dict, compare=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, repr=False)

    def mult_r(self, r: int) -> Morphism:
        """``[1 x r]``: multiplication by ``r`` on the dual factor."""
        with self._lock:
            if r not in self._mult:
                pull, push = _mult_tables(r)
                self._mult[r] = register_morphism(f"mult_{r}", self.ring, self.ring, pull, push, 0)
            return self._mult[r]

    @property
    def poincare(self) -> GradedClass:
        return self.ring.element({"delta": 1, "f1": -1, "f2": -1})

    def __iter__(self):
        # ring, morphisms = elliptic_square()
        return iter((self.ring, {**self.morphisms, "mult_r": self.mult_r}))


@lru_cache(maxsize=None)
def elliptic_square() -> EllipticSquare:
    """``E x Ê`` with its projections, zero sections, diagonal, inversion and ``[1 x r]``."""
    ring = elliptic_square_ring()
    e, ed = elliptic(), elliptic_dual()
    m = {}
    m["p1"] = register_morphism(
        "p1", ring, e,
        {"theta": "f1"},
        {"f2": "one", "delta": "one", "pt": "theta"},
        1,
    )
    m["p2"] = register_morphism(
        "p2", ring, ed,
        {"theta_hat": "f2"},
        {"f1": "one", "delta": "one", "pt": "theta_hat"},
        1,
    )
    # e x id: Ê -> E x Ê
    m["e1"] = register_morphism(
        "e1", ed, ring,
        {"f2": "theta_hat", "delta": "theta_hat"},
        {"one": "f1", "theta_hat": "pt"},
        -1,
    )
    # id x e: E -> E x Ê
    m["e2"] = register_morphism(
        "e2", e, ring,
        {"f1": "theta", "delta": "theta"},
        {"one": "f2", "theta": "pt"},
        -1,
    )
    m["diag"] = register_morphism(
        "diag", e, ring,
        {"f1": "theta", "f2": "theta"},
        {"one": "delta", "theta": "pt"},
        -1,
    )
    sq = EllipticSquare(ring, m)
    m["inv"] = sq.mult_r(-1)
    return sq


def curve_multiplication(ring: RingModel, r: int) -> Morphism:
    """``[r]`` on an elliptic curve model (``elliptic`` or ``elliptic_dual``)."""
    sym = ring.point_class
    return register_morphism(
        f"mult_{r}", ring, ring, {sym: {sym: r * r}}, {"one": {"one": r * r}, sym: sym}, 0
    )


def point_section(target: RingModel, name="zero") -> Morphism:
    """Inclusion of a point (``point() -> target``) at the point class."""
    pt = point()
    return from_tables(
        name, pt, target, -target.dimension,
        {(0, 0): {(0, 0): 1}},
        {(0, 0): {target.key(target.point_class): 1}},
    )


def poincare_class(model: RingModel) -> GradedClass:
    """``c1`` of the Poincaré bundle on ``E x Ê`` or on a tensor power of it."""
    if model.meta.get("kind") == ELLIPTIC_SQUARE:
        return model.element({"delta": 1, "f1": -1, "f2": -1})
    if model.factors and all(r.meta.get("kind") == ELLIPTIC_SQUARE for _, r in model.factors):
        total = model.zero()
        for i, (_, r) in enumerate(model.factors):
            total = total + projection(model, i).pullback(poincare_class(r))
        return total
    raise UnsupportedModel(f"no Poincaré class on {model.name!r}")


@dataclass(frozen=True)
class TensorPower:
    g: int
    square: RingModel
    a: RingModel
    dual: RingModel
    p1: Morphism
    p2: Morphism
    fiber_incl: Morphism
    mult: dict


@lru_cache(maxsize=None)
def tensor_power_models(g: int) -> TensorPower:
    """``(E x Ê)^g``, ``E^g``, ``Ê^g`` and the product maps between them."""
    sq = elliptic_square()
    if g == 1:
        return TensorPower(1, sq.ring, elliptic(), elliptic_dual(), sq.morphisms["p1"],
                           sq.morphisms["p2"], sq.morphisms["e2"], {})
    square = tensor_rings([sq.ring] * g, name=f"elliptic_square_g{g}")
    a = tensor_rings([elliptic()] * g, name=f"elliptic_g{g}")
    dual = tensor_rings([elliptic_dual()] * g, name=f"jacobian_g{g}")
    p1 = tensor_morphism([sq.morphisms["p1"]] * g, square, a, name="p1")
    p2 = tensor_morphism([sq.morphisms["p2"]] * g, square, dual, name="p2")
    incl = tensor_morphism([sq.morphisms["e2"]] * g, a, square, name="e2")
    return TensorPower(g, square, a, dual, p1, p2, incl, {})


@lru_cache(maxsize=None)
def abelian_pair(g: int) -> AbelianModelPair:
    tp = tensor_power_models(g)
    return AbelianModelPair(
        tp.square, tp.p1, tp.p2, poincare_class(tp.square), g,
        point_section(tp.a, "zero_A"), point_section(tp.dual, "zero_dual"),
    )


@lru_cache(maxsize=None)
def jacobian_multiplication(g: int, r: int) -> Morphism:
    """``[r]`` on ``Ê^g``."""
    tp = tensor_power_models(g)
    base = curve_multiplication(elliptic_dual(), r)
    if g == 1:
        return base
    return tensor_morphism([base] * g, tp.dual, tp.dual, name=f"mult_{r}")


@lru_cache(maxsize=None)
def square_multiplication(g: int, r: int) -> Morphism:
    """``[1 x r]^g`` on ``(E x Ê)^g``."""
    sq = elliptic_square()
    if g == 1:
        return sq.mult_r(r)
    tp = tensor_power_models(g)
    return tensor_morphism([sq.mult_r(r)] * g, tp.square, tp.square, name=f"mult_{r}")


# -- families --


@lru_cache(maxsize=None)
def flagship_family() -> FamilyModel:
    """``X = E x Ê -> Ê`` with ``L`` the Poincaré bundle.

    ``L`` restricted to the fibre over ``s`` is the bundle ``s``, so it is
    trivial exactly over the origin of ``Ê``.  The universal data is modelled
    relatively on ``X x_S J = E x Ê_j x Ê_b`` (coordinates ``x, j, b``).
    """
    sq = elliptic_square()
    ring, m = sq.ring, sq.morphisms
    ed = elliptic_dual()
    universal = elliptic_power(
        "flagship_universal", 3,
        {
            "f_x": point_pullback(3, 0), "f_j": point_pullback(3, 1), "f_b": point_pullback(3, 2),
            "d_xj": diagonal(3, 0, 1), "d_xb": diagonal(3, 0, 2), "d_jb": diagonal(3, 1, 2),
        },
    )
    jac = elliptic_power(
        "flagship_jacobian", 2,
        {"f_j": point_pullback(2, 0), "f_b": point_pullback(2, 1), "d_jb": diagonal(2, 0, 1)},
    )
    ub = UniversalBundle(
        product=universal,
        p1=linear_map("p1", universal, ring, [[1, 0, 0], [0, 0, 1]]),
        p2=linear_map("p2", universal, jac, [[0, 1, 0], [0, 0, 1]]),
        cU=coordinates(universal).divisor(poincare_form(3, 0, 1)),
        zero=linear_map("zero", ed, jac, [[0], [1]]),
        inversion=linear_map("inv", jac, jac, [[-1, 0], [0, 1]]),
        jacobian_fiber_restrict=linear_map("jac_fiber", ed, jac, [[1], [0]]),
        sigma=linear_map("sigma", ed, jac, [[1], [1]]),
        relative=True,
    )
    fam = FamilyModel(
        name="flagship_family",
        total=ring,
        base=ed,
        proj=m["p2"],
        n=1,
        g=1,
        cL=sq.poincare,
        cF=ring.basis_class("f1"),
        fiber=elliptic(),
        fiber_restrict=m["e2"],
        abelian=True,
        universal=ub,
        albanese=Albanese(ring, m["p2"], sq.poincare),
    )
    return validate_family(fam)


@lru_cache(maxsize=None)
def curve_over_surface() -> FamilyModel:
    """``X = E x B -> B`` with ``B = E^2`` and ``L`` pulled back from ``E x Ê``
    along ``(x, b) -> (x, b1 + b2)``.

    ``L`` is fibrewise trivial exactly on the anti-diagonal ``b1 + b2 = 0``.
    """
    base = elliptic_power(
        "abelian_surface", 2,
        {"f_1": point_pullback(2, 0), "f_2": point_pullback(2, 1), "d_12": diagonal(2, 0, 1)},
    )
    total = elliptic_power(
        "cos_total", 3,
        {
            "f_x": point_pullback(3, 0), "f_1": point_pullback(3, 1), "f_2": point_pullback(3, 2),
            "d_x1": diagonal(3, 0, 1), "d_x2": diagonal(3, 0, 2), "d_12": diagonal(3, 1, 2),
        },
    )
    gens4 = {"f_x": 0, "f_j": 1, "f_1": 2, "f_2": 3}
    universal_gens = {name: point_pullback(4, i) for name, i in gens4.items()}
    order = ["x", "j", "1", "2"]
    for a in range(4):
        for b in range(a + 1, 4):
            universal_gens[f"d_{order[a]}{order[b]}"] = diagonal(4, a, b)
    universal = elliptic_power("cos_universal", 4, universal_gens)
    jac = elliptic_power(
        "cos_jacobian", 3,
        {
            "f_j": point_pullback(3, 0), "f_1": point_pullback(3, 1), "f_2": point_pullback(3, 2),
            "d_j1": diagonal(3, 0, 1), "d_j2": diagonal(3, 0, 2), "d_12": diagonal(3, 1, 2),
        },
    )
    u = (0, 1, 1)
    cl_form = tuple(
        tuple(-(int(a == 0) * u[b] + int(b == 0) * u[a]) for b in range(3)) for a in range(3)
    )
    cL = coordinates(total).divisor(cl_form)
    proj = linear_map("pi", total, base, [[0, 1, 0], [0, 0, 1]])
    ub = UniversalBundle(
        product=universal,
        p1=linear_map("p1", universal, total, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        p2=linear_map("p2", universal, jac, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        cU=coordinates(universal).divisor(poincare_form(4, 0, 1)),
        zero=linear_map("zero", base, jac, [[0, 0], [1, 0], [0, 1]]),
        inversion=linear_map("inv", jac, jac, [[-1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        jacobian_fiber_restrict=linear_map("jac_fiber", elliptic_dual(), jac, [[1], [0], [0]]),
        sigma=linear_map("sigma", base, jac, [[1, 1], [1, 0], [0, 1]]),
        relative=True,
    )
    fam = FamilyModel(
        name="curve_over_surface",
        total=total,
        base=base,
        proj=proj,
        n=1,
        g=1,
        cL=cL,
        cF=total.basis_class("f_x"),
        fiber=elliptic(),
        fiber_restrict=linear_map("fiber0", elliptic(), total, [[1], [0], [0]]),
        abelian=True,
        universal=ub,
        albanese=Albanese(total, proj, cL),
    )
    return validate_family(fam)


def antidiagonal_class() -> GradedClass:
    """Class of ``{b1 + b2 = 0}`` on the base of :func:`curve_over_surface`."""
    base = curve_over_surface().base
    return coordinates(base).divisor(outer((1, 1)))


@lru_cache(maxsize=None)
def product_family(g: int) -> FamilyModel:
    """``A x Â -> Â`` with ``A = E^g``, ``L`` the Poincaré bundle, ``F`` the product polarization.

    The universal data lives over one point of the base (``A x Â`` itself).
    """
    if g == 1:
        return flagship_family()
    tp = tensor_power_models(g)
    cL = poincare_class(tp.square)
    cF = tp.square.zero()
    theta = tp.a.zero()
    for i in range(g):
        cF = cF + projection(tp.square, i).pullback(elliptic_square().ring.basis_class("f1"))
        theta = theta + projection(tp.a, i).pullback(elliptic().basis_class("theta"))
    ub = UniversalBundle(
        product=tp.square,
        p1=tp.p1,
        p2=tp.p2,
        cU=cL,
        zero=point_section(tp.dual),
        inversion=jacobian_multiplication(g, -1),
        jacobian_fiber_restrict=identity(tp.dual, "jac_fiber"),
        relative=False,
    )
    fam = FamilyModel(
        name=f"flagship_family_g{g}",
        total=tp.square,
        base=tp.dual,
        proj=tp.p2,
        n=g,
        g=g,
        cL=cL,
        cF=cF,
        fiber=tp.a,
        fiber_restrict=tp.fiber_incl,
        abelian=True,
        universal=ub,
        albanese=Albanese(tp.square, tp.p2, cL),
    )
    return validate_family(fam)


# -- registry --


@dataclass(frozen=True)
class Library:
    rings: dict
    morphisms: dict
    families: dict
    descriptions: dict

    def ring(self, name) -> RingModel:
        try:
            return self.rings[name]
        except KeyError:
            raise UnknownModel(f"unknown model {name!r}") from None

    def family(self, name) -> FamilyModel:
        try:
            return self.families[name]
        except KeyError:
            raise UnknownModel(f"unknown family {name!r}") from None

    def names(self):
        return sorted(set(self.rings) | set(self.families))


_lock = threading.Lock()


def jacobian_structure_map(fam: FamilyModel) -> Morphism:
    """``J -> S`` for a relative universal model (drops the Jacobian coordinate)."""
    u = fam.universal
    if u is None or not u.relative:
        raise UnsupportedModel(f"family {fam.name!r} has no relative Jacobian")
    nj, ns = coordinates(u.jacobian).n, coordinates(fam.base).n
    matrix = [[1 if j == i + nj - ns else 0 for j in range(nj)] for i in range(ns)]
    return linear_map("pi_J", u.jacobian, fam.base, matrix)


def families():
    return [flagship_family(), curve_over_surface(), product_family(2), product_family(3)]


@lru_cache(maxsize=None)
def all_morphisms():
    """Every morphism the library builds, as ``(label, morphism)`` pairs."""
    sq = elliptic_square()
    out = [(f"{sq.ring.name}.{k}", f) for k, f in sorted(sq.morphisms.items())]
    for r in range(-3, 4):
        out.append((f"{sq.ring.name}.mult_{r}", sq.mult_r(r)))
    for g in (1, 2, 3):
        pair = abelian_pair(g)
        out.append((f"{pair.a_model.name}.zero", pair.zero_A))
        out.append((f"{pair.dual_model.name}.zero", pair.zero_dual))
        for r in (-1, 0, 2, 3, 5):
            if g < 3:
                out.append((f"{pair.dual_model.name}.mult_{r}", jacobian_multiplication(g, r)))
        if g > 1:
            tp = tensor_power_models(g)
            out += [(f"{tp.square.name}.p1", tp.p1), (f"{tp.square.name}.p2", tp.p2),
                    (f"{tp.square.name}.e2", tp.fiber_incl)]
    out.append(("elliptic_square_g2.mult_2", square_multiplication(2, 2)))
    for fam in families():
        roles = [("proj", fam.proj), ("fiber_restrict", fam.fiber_restrict)]
        u = fam.universal
        if u is not None:
            roles += [("p1", u.p1), ("p2", u.p2), ("zero", u.zero), ("inversion", u.inversion),
                      ("jacobian_fiber", u.jacobian_fiber_restrict), ("sigma", u.sigma)]
            if u.relative:
                roles.append(("pi_J", jacobian_structure_map(fam)))
        out += [(f"{fam.name}.{role}", f) for role, f in roles if f is not None]
    seen, unique = set(), []
    for label, f in out:
        if id(f) not in seen:
            seen.add(id(f))
            unique.append((label, f))
    return tuple(unique)


@lru_cache(maxsize=None)
def _build_library() -> Library:
    sq = elliptic_square()
    rings, morphisms, fams, desc = {}, {}, {}, {}

    def add_ring(r, text=""):
        rings.setdefault(r.name, r)
        if text or r.name not in desc:
            desc[r.name] = text

    add_ring(point(), "a point")
    add_ring(elliptic(), "elliptic curve E")
    add_ring(elliptic_dual(), "dual elliptic curve Ê (identified with E)")
    add_ring(sq.ring, "E x Ê: f1 = {pt} x Ê, f2 = E x {pt}, delta = diagonal")
    for g in (2, 3):
        tp = tensor_power_models(g)
        add_ring(tp.square, f"(E x Ê)^{g}")
        add_ring(tp.a, f"E^{g}")
        add_ring(tp.dual, f"Ê^{g}, the Jacobian of E^{g}")
    for fam, text in zip(families(), (
        "E x Ê -> Ê with L = Poincaré bundle (n = g = 1)",
        "E x E^2 -> E^2, L trivial on b1 + b2 = 0 (n = g = 1)",
        "(E x Ê)^2 -> Ê^2 with the Poincaré bundle (n = g = 2)",
        "(E x Ê)^3 -> Ê^3 with the Poincaré bundle (n = g = 3)",
    )):
        fams[fam.name] = fam
        desc[fam.name] = text
        for r in (fam.total, fam.base, fam.fiber):
            add_ring(r)
        if fam.universal is not None:
            add_ring(fam.universal.product)
            add_ring(fam.universal.jacobian)
    for label, f in all_morphisms():
        name = label.rsplit(".", 1)[1]
        for r in (f.source, f.target):
            if rings.get(r.name) is r:
                morphisms.setdefault(r.name, {}).setdefault(name, f)
    return Library(rings, morphisms, fams, desc)


def library() -> Library:
    with _lock:
        return _build_library()
