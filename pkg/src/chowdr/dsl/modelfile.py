"""Model files: rings, morphisms, classes, bundles and families as text.

A file is a sequence of declarations, each of which may only refer to names
declared above it::

    ring elliptic dim 1 { basis 0: one; basis 1: theta; point theta; }
    morphism p: E2 -> elliptic reldim 1 { pull theta = f1; push pt = theta; }
    class h on E2 = f1 + f2;
    bundle P on E2 = delta - f1 - f2;
    family fam {
      total E2; base elliptic; proj p; n 1; g 1;
      L = c1(P); F = f1;
      fiber elliptic; fiber_restrict incl;
      abelian true;
      universal { product U2; p1 q1; p2 q2; U = c1(P); zero z; inversion inv;
                  jacobian_fiber jf; sigma s; relative true; }
      albanese { model E2; map p; L = c1(P); }
    }

Table entries not written are zero (the unit always pulls back to the
unit).  Literals are exact: ``3`` or ``3/4``; decimals are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ChowError, DSLSyntaxError, ForwardReference, ModelFileError, ValidationError
from ..geometry.family import Albanese, FamilyModel, UniversalBundle, validate_family
from ..geometry.morphism import register_morphism
from ..ring import GradedClass, make_ring
from .ast import Add, C1, ClassRef, Mul, Neg, Pull, Push, RationalLit, walk
from .evaluator import Env, evaluate
from .lexer import EOF, IDENT, INT, tokenize
from .parser import ExprParser

DECLARATIONS = ("ring", "morphism", "class", "bundle", "family")


@dataclass
class ModelFile:
    rings: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    classes: dict = field(default_factory=dict)
    bundles: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)

    def env(self, ring=None, family=None) -> Env:
        """Evaluation environment; a family adds ``pi``, ``L`` and ``F`` unless
        the file already uses those names."""
        classes, bundles, morphisms = dict(self.classes), dict(self.bundles), dict(self.morphisms)
        if family is not None:
            fam = self.families[family] if isinstance(family, str) else family
            morphisms.setdefault("pi", fam.proj)
            bundles.setdefault("L", fam.cL)
            bundles.setdefault("F", fam.cF)
            ring = ring or fam.total
        return Env.build(classes, bundles, morphisms, ring)


def _relocate(exc, pos):
    """Re-raise a validation error with the declaration's location."""
    if isinstance(exc, (ModelFileError, DSLSyntaxError)) or pos is None:
        return exc
    line, col = pos
    new = type(exc)(f"{line}:{col}: {exc}")
    new.line, new.column = line, col
    return new


class _ModelParser(ExprParser):
    def __init__(self, text):
        super().__init__(tokenize(text))
        self.out = ModelFile()
        self.declared = self._prescan()
        self.kinds = {}

    def _prescan(self):
        """Top-level declaration names and their positions, for error reporting."""
        found = {}
        depth, prev = 0, None
        toks = self.tokens
        for i, t in enumerate(toks):
            if t.kind == "{":
                depth += 1
            elif t.kind == "}":
                depth -= 1
            elif (depth == 0 and t.kind == IDENT and t.value in DECLARATIONS
                  and prev in (None, ";", "}") and toks[i + 1].kind == IDENT):
                found.setdefault(toks[i + 1].value, (t.value, toks[i + 1].pos))
            prev = t.kind
        return found

    # -- name resolution --

    def _missing(self, name, kind, pos):
        later = self.declared.get(name)
        line, col = pos
        if later is not None and later[1] > pos:
            raise ForwardReference(
                f"{kind} {name!r} is used before its declaration at {later[1][0]}:{later[1][1]}", line, col
            )
        raise ModelFileError(f"unknown {kind} {name!r}", line, col)

    def _get(self, table, name, kind, pos):
        if name in table:
            return table[name]
        self._missing(name, kind, pos)

    def ring_ref(self):
        t = self.ident()
        return self._get(self.out.rings, t.value, "ring", t.pos)

    def morphism_ref(self):
        t = self.ident()
        return self._get(self.out.morphisms, t.value, "morphism", t.pos)

    def _claim(self, name, kind, pos):
        if name in self.kinds:
            raise ModelFileError(f"{name!r} is already declared as a {self.kinds[name]}", *pos)
        self.kinds[name] = kind

    # -- expressions bound to a ring --

    def class_expr(self, ring, what, codim=None):
        start = self.tok
        node = self.expr()
        for n in walk(node):
            if isinstance(n, ClassRef) and n.name not in self.out.classes and n.name not in ring:
                self._missing(n.name, "class", n.pos)
            elif isinstance(n, C1) and n.bundle not in self.out.bundles:
                self._missing(n.bundle, "bundle", n.pos)
            elif isinstance(n, (Push, Pull)) and n.morphism not in self.out.morphisms:
                self._missing(n.morphism, "morphism", n.pos)
        try:
            value = evaluate(node, self.out.env(ring=ring))
        except ChowError as exc:
            raise ModelFileError(f"{what}: {exc}", *start.pos) from None
        if not isinstance(value, GradedClass):
            value = ring.scalar(value)
        if value.ring is not ring:
            raise ModelFileError(f"{what}: value lives on {value.ring.name!r}, expected {ring.name!r}", *start.pos)
        if codim is not None and not value.is_homogeneous(codim):
            raise ModelFileError(f"{what}: expected a class of codimension {codim}", *start.pos)
        return value

    # -- statements --

    def end(self):
        self.expect(";")

    def word(self, value):
        return self.expect(IDENT, value)

    def boolean(self):
        t = self.expect(IDENT)
        if t.value not in ("true", "false"):
            raise DSLSyntaxError("expected a boolean", t.line, t.column, {"'true'", "'false'"})
        return t.value == "true"

    def signed_int(self):
        sign = -1 if self.at("-") and self.advance() else 1
        return sign * self.expect(INT).value

    def parse(self) -> ModelFile:
        while not self.at(EOF):
            t = self.tok
            if t.kind != IDENT or t.value not in DECLARATIONS:
                self.error({repr(d) for d in DECLARATIONS} | {EOF})
            getattr(self, f"decl_{t.value}")()
        return self.out

    def decl_ring(self):
        self.advance()
        name = self.ident()
        self._claim(name.value, "ring", name.pos)
        self.word("dim")
        dim = self.expect(INT).value
        self.expect("{")
        basis, products, point = {}, [], None
        entries = []
        while not self.at("}"):
            head = self.expect(IDENT)
            if head.value == "basis":
                k = self.expect(INT).value
                self.expect(":")
                syms = [self.ident().value]
                while self.at(","):
                    self.advance()
                    syms.append(self.ident().value)
                if k in basis:
                    raise ModelFileError(f"ring {name.value!r}: codimension {k} listed twice", *head.pos)
                basis[k] = syms
            elif head.value == "product":
                a = self.ident()
                self.expect("*")
                b = self.ident()
                self.expect("=")
                entries.append((a, b, self.tok.pos, self._capture_expr()))
            elif head.value == "point":
                point = self.ident().value
            else:
                raise DSLSyntaxError(f"unexpected {head.describe()}", head.line, head.column,
                                     {"'basis'", "'product'", "'point'", "'}'"})
            self.end()
        self.expect("}")
        symbols = {s for syms in basis.values() for s in syms}
        for a, b, pos, span in entries:
            sub = _Sub(self, span)
            products.append((a.value, b.value, sub.linear_expr(symbols, f"product {a.value}*{b.value}")))
        try:
            ring = make_ring(name.value, dim, basis, products, point)
        except ValidationError as exc:
            raise _relocate(exc, name.pos) from None
        self.out.rings[name.value] = ring

    def _capture_expr(self):
        """Skip over an expression up to the next ';' and return its token span."""
        start = self.i
        depth = 0
        while not (self.at(";") and depth == 0):
            if self.at(EOF) or (self.at("}") and depth == 0):
                self.error({"';'"})
            if self.at("("):
                depth += 1
            elif self.at(")"):
                depth -= 1
            self.advance()
        return (start, self.i)

    def decl_morphism(self):
        self.advance()
        name = self.ident()
        self._claim(name.value, "morphism", name.pos)
        self.expect(":")
        src = self.ring_ref()
        self.expect("->")
        tgt = self.ring_ref()
        self.word("reldim")
        rel = self.signed_int()
        self.expect("{")
        pull, push = {}, {}
        while not self.at("}"):
            head = self.expect(IDENT)
            if head.value not in ("pull", "push"):
                raise DSLSyntaxError(f"unexpected {head.describe()}", head.line, head.column,
                                     {"'pull'", "'push'", "'}'"})
            dom, cod, table = (tgt, src, pull) if head.value == "pull" else (src, tgt, push)
            sym = self.ident()
            if sym.value not in dom:
                raise ModelFileError(f"{sym.value!r} is not a basis symbol of {dom.name!r}", *sym.pos)
            self.expect("=")
            table[sym.value] = self.class_expr(cod, f"{head.value} {sym.value}")
            self.end()
        self.expect("}")
        try:
            f = register_morphism(name.value, src, tgt, pull, push, rel)
        except ValidationError as exc:
            raise _relocate(exc, name.pos) from None
        self.out.morphisms[name.value] = f

    def _named_class(self, kind, table, codim=None):
        self.advance()
        name = self.ident()
        self._claim(name.value, kind, name.pos)
        self.word("on")
        ring = self.ring_ref()
        self.expect("=")
        table[name.value] = self.class_expr(ring, f"{kind} {name.value}", codim)
        self.end()

    def decl_class(self):
        self._named_class("class", self.out.classes)

    def decl_bundle(self):
        self._named_class("bundle", self.out.bundles, codim=1)

    def decl_family(self):
        self.advance()
        name = self.ident()
        self._claim(name.value, "family", name.pos)
        self.expect("{")
        got = {}
        while not self.at("}"):
            head = self.expect(IDENT)
            key = head.value
            if key in got:
                raise ModelFileError(f"family field {key!r} given twice", *head.pos)
            if key in ("total", "base", "fiber"):
                got[key] = self.ring_ref()
            elif key in ("proj", "fiber_restrict"):
                got[key] = self.morphism_ref()
            elif key in ("n", "g"):
                got[key] = self.expect(INT).value
            elif key == "abelian":
                got[key] = self.boolean()
            elif key in ("L", "F"):
                self.expect("=")
                got[key] = self.class_expr(self._need(got, "total", head), f"family {key}", codim=1)
            elif key == "universal":
                got[key] = self._universal()
                continue
            elif key == "albanese":
                got[key] = self._albanese()
                continue
            else:
                raise DSLSyntaxError(f"unknown family field {key!r}", head.line, head.column)
            self.end()
        close = self.expect("}")
        required = ("total", "base", "proj", "n", "g", "L", "F", "fiber", "fiber_restrict")
        missing = [k for k in required if k not in got]
        if missing:
            raise ModelFileError(f"family {name.value!r} lacks {', '.join(missing)}", *close.pos)
        fam = FamilyModel(
            name=name.value, total=got["total"], base=got["base"], proj=got["proj"], n=got["n"], g=got["g"],
            cL=got["L"], cF=got["F"], fiber=got["fiber"], fiber_restrict=got["fiber_restrict"],
            abelian=got.get("abelian", False), universal=got.get("universal"), albanese=got.get("albanese"),
        )
        try:
            validate_family(fam)
        except ValidationError as exc:
            raise _relocate(exc, name.pos) from None
        self.out.families[name.value] = fam

    def _need(self, got, key, at):
        if key not in got:
            raise ModelFileError(f"field {key!r} must come before {at.value!r}", *at.pos)
        return got[key]

    def _universal(self):
        self.expect("{")
        got = {}
        while not self.at("}"):
            head = self.expect(IDENT)
            key = head.value
            if key == "product":
                got[key] = self.ring_ref()
            elif key in ("p1", "p2", "zero", "inversion", "jacobian_fiber", "sigma"):
                got[key] = self.morphism_ref()
            elif key == "U":
                self.expect("=")
                got[key] = self.class_expr(self._need(got, "product", head), "universal U", codim=1)
            elif key == "relative":
                got[key] = self.boolean()
            else:
                raise DSLSyntaxError(f"unknown universal field {key!r}", head.line, head.column)
            self.end()
        close = self.expect("}")
        missing = [k for k in ("product", "p1", "p2", "U", "zero", "inversion", "jacobian_fiber") if k not in got]
        if missing:
            raise ModelFileError(f"universal block lacks {', '.join(missing)}", *close.pos)
        return UniversalBundle(got["product"], got["p1"], got["p2"], got["U"], got["zero"], got["inversion"],
                               got["jacobian_fiber"], got.get("sigma"), got.get("relative", False))

    def _albanese(self):
        self.expect("{")
        got = {}
        while not self.at("}"):
            head = self.expect(IDENT)
            key = head.value
            if key == "model":
                got[key] = self.ring_ref()
            elif key == "map":
                got[key] = self.morphism_ref()
            elif key == "L":
                self.expect("=")
                got[key] = self.class_expr(self._need(got, "model", head), "albanese L", codim=1)
            else:
                raise DSLSyntaxError(f"unknown albanese field {key!r}", head.line, head.column)
            self.end()
        close = self.expect("}")
        missing = [k for k in ("model", "map", "L") if k not in got]
        if missing:
            raise ModelFileError(f"albanese block lacks {', '.join(missing)}", *close.pos)
        return Albanese(got["model"], got["map"], got["L"])


class _Sub(ExprParser):
    """Re-parse a captured token span as a standalone expression."""

    def __init__(self, owner, span):
        start, stop = span
        toks = owner.tokens[start:stop] + [owner.tokens[-1]]
        super().__init__(toks)

    def linear_expr(self, symbols, what):
        """Linear combination of basis symbols (used before the ring exists)."""
        start = self.tok
        node = self.expr()

        def fold(n):
            if isinstance(n, RationalLit):
                return Fraction(n.value)
            if isinstance(n, ClassRef):
                if n.name not in symbols:
                    raise ModelFileError(f"{what}: unknown basis symbol {n.name!r}", *n.pos)
                return {n.name: Fraction(1)}
            if isinstance(n, Neg):
                return _scale(fold(n.operand), -1)
            if isinstance(n, Add):
                a, b = fold(n.left), fold(n.right)
                if isinstance(a, Fraction) != isinstance(b, Fraction) and (a if isinstance(a, Fraction) else b):
                    raise ModelFileError(f"{what}: a number cannot be added to basis symbols", *n.pos)
                return _plus(a, b)
            if isinstance(n, Mul):
                a, b = fold(n.left), fold(n.right)
                if isinstance(a, Fraction):
                    return _scale(b, a)
                if isinstance(b, Fraction):
                    return _scale(a, b)
            raise ModelFileError(f"{what}: only linear combinations of basis symbols are allowed",
                                 *(n.pos or start.pos))

        self.finish()
        value = fold(node)
        if isinstance(value, Fraction):
            if value != 0:
                raise ModelFileError(f"{what}: a bare number is not a product value", *start.pos)
            return {}
        return {s: c for s, c in value.items() if c != 0}

    def finish(self):
        if not self.at(EOF):
            self.error({"';'"})


def _scale(v, q):
    if isinstance(v, Fraction):
        return v * q
    return {s: c * q for s, c in v.items()}


def _plus(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        return b if isinstance(a, Fraction) else a
    out = dict(a)
    for s, c in b.items():
        out[s] = out.get(s, 0) + c
    return out


def parse_model_file(text: str) -> ModelFile:
    return _ModelParser(text).parse()


def load_model_file(path) -> ModelFile:
    with open(path, encoding="utf-8") as fh:
        return parse_model_file(fh.read())
