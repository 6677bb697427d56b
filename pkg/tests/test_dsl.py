from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowdr.dsl import Env, eval_text, format_expr, parse, parse_model_file
from chowdr.dsl.ast import (
    C1,
    KEYWORDS,
    Add,
    ClassRef,
    Component,
    Exp,
    Integrate,
    Mul,
    Neg,
    Pow,
    Pull,
    Push,
    RationalLit,
)
from chowdr.dsl.lexer import EOF, IDENT, INT, RAT, tokenize
from chowdr.errors import (
    DSLSyntaxError,
    ForwardReference,
    ModelFileError,
    NonNilpotentInput,
    RingMismatch,
    UnboundName,
    ValidationError,
)
from chowdr.geometry.library import elliptic_square

# -- parser --


def test_precedence():
    a, b, c = ClassRef("a"), ClassRef("b"), ClassRef("c")
    assert parse("a + b * c") == Add(a, Mul(b, c))
    assert parse("a * b ^ 2") == Mul(a, Pow(b, 2))
    assert parse("-a ^ 2") == Neg(Pow(a, 2))
    assert parse("a ^ 2 ^ 3") == Pow(Pow(a, 2), 3)
    assert parse("a - b - c") == Add(Add(a, Neg(b)), Neg(c))
    assert parse("-a * b") == Mul(Neg(a), b)


def test_negative_literals_fold():
    assert parse("-1/2") == RationalLit(Fraction(-1, 2))
    assert parse("-2 ^ 2") == Neg(Pow(RationalLit(Fraction(2)), 2))
    assert parse("3/6") == RationalLit(Fraction(1, 2))


def test_calls():
    assert parse("push(pi, c1(L) ^ 2)") == Push("pi", Pow(C1("L"), 2))
    assert parse("pull(f, exp(x))") == Pull("f", Exp(ClassRef("x")))
    assert parse("component(integrate(x), 0)") == Component(Integrate(ClassRef("x")), 0)


def test_positions_ignored_by_equality_but_kept():
    node = parse("  a + b")
    assert node.left.pos == (1, 3)
    assert node == Add(ClassRef("a"), ClassRef("b"))


def test_comments_and_whitespace():
    assert parse("a # trailing\n + b") == Add(ClassRef("a"), ClassRef("b"))


@pytest.mark.parametrize("text,where", [
    ("c1(L ^", (1, 6)),
    ("a +", (1, 4)),
    ("(a", (1, 3)),
    ("a b", (1, 3)),
    ("push(pi)", (1, 8)),
    ("a ^ b", (1, 5)),
])
def test_syntax_errors_carry_position(text, where):
    with pytest.raises(DSLSyntaxError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == where


@pytest.mark.parametrize("text", ["0.5", "1/0", "a $ b", "exp = 1", "push(exp, a)"])
def test_rejected_input(text):
    with pytest.raises(DSLSyntaxError):
        parse(text)


def test_tokens():
    kinds = [t.kind for t in tokenize("push(p, 3/4 * x ^ 2)")]
    assert kinds == [IDENT, "(", IDENT, ",", RAT, "*", IDENT, "^", INT, ")", EOF]


# -- round trip --

names = st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True).filter(lambda s: s not in KEYWORDS)
lits = st.fractions(min_value=-50, max_value=50, max_denominator=9).map(RationalLit)


def _extend(children):
    return st.one_of(
        st.builds(Add, children, children),
        st.builds(Mul, children, children),
        st.builds(Pow, children, st.integers(0, 12)),
        st.builds(Neg, children),
        st.builds(Exp, children),
        st.builds(Push, names, children),
        st.builds(Pull, names, children),
        st.builds(Integrate, children),
        st.builds(Component, children, st.integers(0, 9)),
    )


asts = st.recursive(st.one_of(lits, st.builds(ClassRef, names), st.builds(C1, names)), _extend, max_leaves=12)


@settings(max_examples=1500, deadline=None)
@given(asts)
def test_round_trip(node):
    text = format_expr(node)
    assert parse(text) == node
    assert format_expr(parse(text)) == text


# -- evaluation --


@pytest.fixture
def env():
    sq = elliptic_square()
    return Env.build(
        bundles={"P": sq.poincare},
        morphisms=dict(sq.morphisms),
        ring=sq.ring,
    )


def test_eval_basics(env):
    ed = env.morphisms["p2"].target
    assert eval_text("push(p2, c1(P)^2)", env) == ed.point() * -2
    assert eval_text("integrate(c1(P)^2)", env) == -2
    assert eval_text("integrate(exp(c1(P)))", env) == -1
    assert eval_text("component(exp(c1(P)), 2)", env) == env.ring.point() * -1
    assert eval_text("2 * 3/4 - 1", env) == Fraction(1, 2)
    assert eval_text("pull(p2, 1)", env) == env.ring.unit


def test_eval_errors(env):
    with pytest.raises(UnboundName, match="1:1"):
        eval_text("nope + f1", env)
    with pytest.raises(UnboundName, match="bundle"):
        eval_text("P", env)
    with pytest.raises(RingMismatch):
        eval_text("push(p2, theta_hat)", env.with_ring(env.morphisms["p2"].target))
    with pytest.raises(NonNilpotentInput):
        eval_text("exp(1 + f1)", env)


# -- model files --

SMALL = """
ring P1 dim 1 { basis 0: one; basis 1: p; point p; }
ring pt dim 0 { basis 0: u; point u; }
morphism c: P1 -> pt reldim 1 { push p = u; }
class h on P1 = 3*p;
"""


def test_small_model_file():
    mf = parse_model_file(SMALL)
    env = mf.env(ring=mf.rings["P1"])
    assert eval_text("push(c, h)", env) == mf.rings["pt"].scalar(3)


def test_forward_reference():
    text = "class h on P1 = p;\nring P1 dim 1 { basis 0: one; basis 1: p; }\n"
    with pytest.raises(ForwardReference) as info:
        parse_model_file(text)
    assert info.value.line == 1


def test_duplicate_declaration():
    with pytest.raises(ModelFileError):
        parse_model_file(SMALL + "class h on P1 = p;\n")


def test_associativity_failure_in_file():
    text = """ring bad dim 3 {
      basis 0: one; basis 1: a, b; basis 2: c, bb; basis 3: t;
      product a * b = c; product b * b = bb; product a * bb = t;
    }"""
    with pytest.raises(ValidationError) as info:
        parse_model_file(text)
    assert "associat" in str(info.value)


def test_projection_formula_failure_in_file():
    text = """ring P1 dim 1 { basis 0: one; basis 1: p; point p; }
    morphism twice: P1 -> P1 reldim 0 { pull p = p; push one = one; push p = 2*p; }"""
    with pytest.raises(ValidationError):
        parse_model_file(text)


def test_decimal_in_file():
    with pytest.raises(DSLSyntaxError):
        parse_model_file("ring P1 dim 1 { basis 0: one; basis 1: p; }\nclass h on P1 = 0.5*p;")
