"""Write rings, morphisms and families back out as model-file text."""

from __future__ import annotations

from ..geometry.family import FamilyModel
from ..geometry.morphism import Morphism
from ..ring import GradedClass, RingModel

HEADER = "# generated from the built-in model library; regenerate with `python -m chowdr.dsl.dump`\n"


def class_text(x: GradedClass) -> str:
    return str(x)


def dump_ring(ring: RingModel) -> str:
    lines = [f"ring {ring.name} dim {ring.dimension} {{"]
    for k, syms in enumerate(ring.basis):
        if syms:
            lines.append(f"  basis {k}: {', '.join(syms)};")
    for a, b, value in ring.product_entries():
        lines.append(f"  product {a} * {b} = {class_text(GradedClass(ring, {ring.key(s): c for s, c in value.items()}))};")
    if ring.point_class is not None:
        lines.append(f"  point {ring.point_class};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_morphism(name: str, f: Morphism) -> str:
    lines = [f"morphism {name}: {f.source.name} -> {f.target.name} reldim {f.rel_dim} {{"]
    unit = f.target.symbol((0, 0))
    for sym, img in f.pull_table().items():
        if sym == unit and img == f.source.unit:
            continue
        if not img.is_zero():
            lines.append(f"  pull {sym} = {class_text(img)};")
    for sym, img in f.push_table().items():
        if not img.is_zero():
            lines.append(f"  push {sym} = {class_text(img)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


class Dumper:
    """Collects objects, names morphisms and bundles, and emits them in
    declaration order (rings, morphisms, bundles and classes, families)."""

    def __init__(self):
        self.rings = []
        self.morphisms = []  # (name, morphism)
        self.bundles = []  # (name, class)
        self.classes = []
        self.families = []
        self._names = set()

    def ring(self, r: RingModel):
        if all(r is not x for x in self.rings):
            if r.name in self._names:
                raise ValueError(f"two different rings are called {r.name!r}")
            self._names.add(r.name)
            self.rings.append(r)
        return r.name

    def morphism(self, f: Morphism, name: str):
        for n, g in self.morphisms:
            if g is f:
                return n
        if name in self._names:
            raise ValueError(f"name {name!r} already used")
        self.ring(f.source)
        self.ring(f.target)
        self._names.add(name)
        self.morphisms.append((name, f))
        return name

    def _named(self, table, x, name):
        for n, y in table:
            if y == x:
                return n
        if name in self._names:
            raise ValueError(f"name {name!r} already used")
        self.ring(x.ring)
        self._names.add(name)
        table.append((name, x))
        return name

    def bundle(self, x: GradedClass, name: str):
        return self._named(self.bundles, x, name)

    def named_class(self, x: GradedClass, name: str):
        return self._named(self.classes, x, name)

    def family(self, fam: FamilyModel, names=None):
        """Register a family; ``names`` overrides default morphism/bundle names by role."""
        n = {"proj": "pi", "fiber_restrict": "fiber_incl", "L": "L", "p1": "U_p1", "p2": "U_p2",
             "U": "U", "zero": "zero", "inversion": "inv_J", "jacobian_fiber": "jac_fiber",
             "sigma": "sigma", "albanese_map": "alb_pi", "albanese_L": "Lbar"}
        n.update(names or {})
        for r in (fam.total, fam.base, fam.fiber):
            self.ring(r)
        fields = {
            "proj": self.morphism(fam.proj, n["proj"]),
            "fiber_restrict": self.morphism(fam.fiber_restrict, n["fiber_restrict"]),
            "L": self.bundle(fam.cL, n["L"]),
        }
        u = fam.universal
        if u is not None:
            self.ring(u.product)
            for role, f in (("p1", u.p1), ("p2", u.p2), ("zero", u.zero), ("inversion", u.inversion),
                            ("jacobian_fiber", u.jacobian_fiber_restrict), ("sigma", u.sigma)):
                if f is not None:
                    fields[role] = self.morphism(f, n[role])
            fields["U"] = self.bundle(u.cU, n["U"])
        a = fam.albanese
        if a is not None:
            self.ring(a.model)
            fields["albanese_map"] = self.morphism(a.pi_bar, n["albanese_map"])
            fields["albanese_L"] = self.bundle(a.cLbar, n["albanese_L"])
        self.families.append((fam, fields))

    def text(self, header=HEADER) -> str:
        parts = [header] if header else []
        parts += [dump_ring(r) for r in self.rings]
        parts += [dump_morphism(name, f) for name, f in self.morphisms]
        decls = [f"bundle {name} on {x.ring.name} = {class_text(x)};\n" for name, x in self.bundles]
        decls += [f"class {name} on {x.ring.name} = {class_text(x)};\n" for name, x in self.classes]
        if decls:
            parts.append("".join(decls))
        parts += [self._family_text(f, fields) for f, fields in self.families]
        return "\n".join(parts)

    @staticmethod
    def _family_text(fam: FamilyModel, fields) -> str:
        lines = [
            f"family {fam.name} {{",
            f"  total {fam.total.name};",
            f"  base {fam.base.name};",
            f"  proj {fields['proj']};",
            f"  n {fam.n};",
            f"  g {fam.g};",
            f"  L = c1({fields['L']});",
            f"  F = {class_text(fam.cF)};",
            f"  fiber {fam.fiber.name};",
            f"  fiber_restrict {fields['fiber_restrict']};",
            f"  abelian {'true' if fam.abelian else 'false'};",
        ]
        u = fam.universal
        if u is not None:
            lines.append("  universal {")
            lines.append(f"    product {u.product.name};")
            lines.append(f"    p1 {fields['p1']};")
            lines.append(f"    p2 {fields['p2']};")
            lines.append(f"    U = c1({fields['U']});")
            lines.append(f"    zero {fields['zero']};")
            lines.append(f"    inversion {fields['inversion']};")
            lines.append(f"    jacobian_fiber {fields['jacobian_fiber']};")
            if u.sigma is not None:
                lines.append(f"    sigma {fields['sigma']};")
            lines.append(f"    relative {'true' if u.relative else 'false'};")
            lines.append("  }")
        if fam.albanese is not None:
            lines.append("  albanese {")
            lines.append(f"    model {fam.albanese.model.name};")
            lines.append(f"    map {fields['albanese_map']};")
            lines.append(f"    L = c1({fields['albanese_L']});")
            lines.append("  }")
        lines.append("}")
        return "\n".join(lines) + "\n"


def library_files() -> dict:
    """``{file name: text}`` for every shipped model file."""
    from ..dr import _product_ring
    from ..geometry import library as lib

    files = {}
    sq = lib.elliptic_square()
    m = sq.morphisms

    d = Dumper()
    for name in ("p1", "p2", "e1", "e2", "diag", "inv"):
        d.morphism(m[name], name)
    for r in (2, 3, 5):
        d.morphism(sq.mult_r(r), f"mult_{r}")
        d.morphism(lib.jacobian_multiplication(1, r), f"dual_mult_{r}")
    pair = lib.abelian_pair(1)
    d.morphism(pair.zero_A, "zero_A")
    d.morphism(pair.zero_dual, "zero_dual")
    d.bundle(sq.poincare, "P")
    files["elliptic_square.chow"] = d.text()

    d = Dumper()
    d.bundle(sq.poincare, "P")
    d.morphism(m["p1"], "p1")
    d.morphism(m["inv"], "inv")
    d.family(lib.flagship_family(), {"fiber_restrict": "e2"})
    files["flagship.chow"] = d.text()

    d = Dumper()
    d.family(lib.curve_over_surface())
    d.named_class(lib.antidiagonal_class(), "antidiagonal")
    files["curve_over_surface.chow"] = d.text()

    for g in (2, 3):
        d = Dumper()
        fam = lib.product_family(g)
        d.family(fam)
        pair = lib.abelian_pair(g)
        d.morphism(pair.zero_A, "zero_A")
        for r in (2, 3, 5):
            d.morphism(lib.jacobian_multiplication(g, r), f"jac_mult_{r}")
        files[f"flagship_g{g}.chow"] = d.text()

    d = Dumper()
    d.ring(_product_ring(2, 2))
    d.ring(_product_ring(2, 3))
    files["product_curves.chow"] = d.text()
    return files


def _main():
    from pathlib import Path

    out = Path(__file__).resolve().parent.parent / "data"
    out.mkdir(exist_ok=True)
    for name, text in library_files().items():
        (out / name).write_text(text, encoding="utf-8")
        print(out / name)


if __name__ == "__main__":
    _main()
