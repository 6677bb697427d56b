"""Command-line entry point.

Exit codes: 0 success, 1 a verification check failed, 2 parse/validation
error, 3 evaluation error, 4 a formula precondition does not hold.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import dr as drmod
from .errors import (
    DSLSyntaxError,
    EvaluationError,
    PreconditionError,
    UnknownModel,
    ValidationError,
)
from .geometry.family import FamilyModel
from .ring import GradedClass, RingModel, format_rational

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_EVAL, EXIT_PRECONDITION = 0, 1, 2, 3, 4


def _use_color(stream) -> bool:
    flag = os.environ.get("CHOWDR_COLOR", "").strip().lower()
    if flag in ("0", "no", "never", "false", "off"):
        return False
    if flag in ("1", "yes", "always", "true", "on"):
        return True
    return hasattr(stream, "isatty") and stream.isatty()


def _paint(text, code, stream=None):
    return f"\x1b[{code}m{text}\x1b[0m" if _use_color(stream or sys.stdout) else text


def _dump_json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False))


def _value_json(value):
    if isinstance(value, GradedClass):
        return {"type": "class", "ring": value.ring.name, "value": str(value), "coefficients": value.to_json()}
    return {"type": "rational", "value": format_rational(value)}


def _load(path):
    from .dsl.modelfile import load_model_file

    try:
        return load_model_file(path)
    except OSError as exc:
        raise ValidationError(f"cannot read model file {path!r}: {exc.strerror}") from None


def _pick_family(mf, name):
    if name is None:
        return next(iter(mf.families.values())) if len(mf.families) == 1 else None
    try:
        return mf.families[name]
    except KeyError:
        raise UnknownModel(f"no family {name!r} in the model file") from None


# -- commands --


def cmd_eval(args):
    from .dsl.evaluator import eval_text

    mf = _load(args.model)
    fam = _pick_family(mf, args.family)
    ring = None
    if args.ring is not None:
        if args.ring not in mf.rings:
            raise UnknownModel(f"no ring {args.ring!r} in the model file")
        ring = mf.rings[args.ring]
    env = mf.env(ring=ring, family=fam)
    value = eval_text(args.expr, env)
    if args.json:
        out = {"expression": args.expr}
        out.update(_value_json(value))
        _dump_json(out)
    elif isinstance(value, GradedClass):
        print(value)
    else:
        print(format_rational(value))
    return EXIT_OK


def _is_point(value: GradedClass) -> bool:
    r = value.ring
    return r.point_class is not None and value == r.point()


def cmd_dr(args):
    mf = _load(args.model)
    fam = _pick_family(mf, args.family)
    if fam is None:
        raise UnknownModel("the model file declares several families; pick one with -f")
    if args.formula == "main":
        d = args.d
        if d is None:
            d = _rank(fam)
        result = drmod.dr_main(fam, d)
    elif args.formula == "abelian":
        result = drmod.dr_abelian(fam)
    elif args.formula == "hain":
        result = drmod.dr_hain(fam)
    elif args.formula == "albanese":
        result = drmod.dr_albanese_family(fam)
    else:
        result = drmod.dr_via_sections(fam, args.d)
    value = result.value
    if args.json:
        out = result.to_json()
        out["is_point_class"] = _is_point(value)
        _dump_json(out)
    else:
        print(f"family:  {fam.name} (n = {fam.n}, g = {fam.g})")
        print(f"formula: {result.formula_used}")
        if "d" in result.inputs_digest:
            print(f"d:       {result.inputs_digest['d']}")
        note = "  [pt]" if _is_point(value) else ""
        print(f"DR = {value}{note}")
    return EXIT_OK


def _rank(fam: FamilyModel) -> int:
    if fam.universal is None:
        raise PreconditionError(f"family {fam.name!r} has no universal bundle; pass the rank with -d")
    return drmod.rank_for_family(fam)


def cmd_verify(args):
    from .verify import run

    reports = run(args.suite)
    ok = all(r.passed for r in reports)
    if args.json:
        _dump_json({"status": "pass" if ok else "fail",
                    "suites": [r.to_json(timing=args.timing) for r in reports]})
    else:
        for r in reports:
            for c in r.checks:
                tag = _paint("PASS", "32") if c.passed else _paint("FAIL", "31")
                line = f"{tag} {c.id}  [{c.anchor}]"
                if not c.passed:
                    line += f"\n     expected {c.expected}\n     actual   {c.actual}"
                print(line)
            count = sum(c.passed for c in r.checks)
            timing = f" in {r.duration:.2f}s" if args.timing else ""
            print(f"-- {r.suite}: {count}/{len(r.checks)} passed{timing}")
        print(_paint("all checks passed", "32") if ok else _paint("verification FAILED", "31"))
    return EXIT_OK if ok else EXIT_FAIL


def _describe_ring(r: RingModel, morphisms, text):
    print(f"ring {r.name}  (dimension {r.dimension})")
    if text:
        print(f"  {text}")
    for k, syms in enumerate(r.basis):
        print(f"  codim {k}: {', '.join(syms)}")
    print(f"  point class: {r.point_class or '-'}")
    for name, f in sorted(morphisms.items()):
        print(f"  morphism {name}: {f.source.name} -> {f.target.name} (rel_dim {f.rel_dim})")
        for sym, img in f.pull_table().items():
            if not img.is_zero():
                print(f"    pull {sym} = {img}")
        for sym, img in f.push_table().items():
            if not img.is_zero():
                print(f"    push {sym} = {img}")


def _describe_family(f: FamilyModel, text):
    print(f"family {f.name}")
    if text:
        print(f"  {text}")
    print(f"  total {f.total.name}, base {f.base.name}, fiber {f.fiber.name}")
    print(f"  n = {f.n}, g = {f.g}, abelian = {str(f.abelian).lower()}")
    print(f"  c1(L) = {f.cL}")
    print(f"  c1(F) = {f.cF}")
    if f.universal is not None:
        u = f.universal
        print(f"  universal bundle on {u.product.name} ({'relative' if u.relative else 'one fibre'}): c1(U) = {u.cU}")


def cmd_models(args):
    from .geometry.library import library

    lib = library()
    if args.action == "list":
        for name in lib.names():
            obj = lib.families.get(name) or lib.rings[name]
            kind = "family" if name in lib.families else f"ring dim {obj.dimension}"
            desc = lib.descriptions.get(name, "")
            print(f"{name:24} {kind:12} {desc}".rstrip())
        return EXIT_OK
    if args.name is None:
        raise UnknownModel("describe needs a model name")
    if args.name in lib.families:
        _describe_family(lib.families[args.name], lib.descriptions.get(args.name))
    else:
        r = lib.ring(args.name)
        _describe_ring(r, lib.morphisms.get(r.name, {}), lib.descriptions.get(r.name))
    return EXIT_OK


# -- wiring --


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chowdr", description="Exact intersection theory on finite Chow-ring models.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate an expression against a model file")
    e.add_argument("-m", "--model", required=True, help="model file")
    e.add_argument("-e", "--expr", required=True, help="expression")
    e.add_argument("-f", "--family", help="bind pi, L, F from this family")
    e.add_argument("-r", "--ring", help="ring whose basis symbols are visible")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_eval)

    d = sub.add_parser("dr", help="compute a double ramification cycle")
    d.add_argument("-m", "--model", required=True)
    d.add_argument("-f", "--family")
    d.add_argument("--formula", choices=("main", "abelian", "hain", "albanese", "sections"), default="main")
    d.add_argument("-d", type=int, help="rank d (main formula); computed from the fibre when omitted")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_dr)

    v = sub.add_parser("verify", help="run the identity suites")
    v.add_argument("--suite", default="all",
                   choices=("all", "ring", "geometry", "fourier", "poincare", "dr", "product", "scaling"))
    v.add_argument("--json", action="store_true")
    v.add_argument("--timing", action="store_true", help="include wall-clock durations")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("models", help="list or describe built-in models")
    m.add_argument("action", nargs="?", choices=("list", "describe"), default="list")
    m.add_argument("name", nargs="?")
    m.set_defaults(func=cmd_models)
    return p


def _fail(code, exc):
    tag = _paint("error", "31", sys.stderr)
    print(f"{tag}: {type(exc).__name__}: {exc}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DSLSyntaxError, ValidationError) as exc:
        return _fail(EXIT_INPUT, exc)
    except EvaluationError as exc:
        return _fail(EXIT_EVAL, exc)
    except PreconditionError as exc:
        return _fail(EXIT_PRECONDITION, exc)


if __name__ == "__main__":
    sys.exit(main())
