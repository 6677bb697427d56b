"""Expression grammar.

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | postfix
    postfix := atom ('^' INT)*
    atom    := NUMBER | IDENT | call | '(' expr ')'
    call    := push(IDENT, expr) | pull(IDENT, expr) | exp(expr) | c1(IDENT)
             | integrate(expr) | component(expr, INT)

``a - b`` is ``Add(a, Neg(b))``.  A minus sign directly in front of a number
that is not raised to a power is folded into the literal, so ``-1/2`` is a
single ``RationalLit``.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DSLSyntaxError
from .ast import (
    KEYWORDS,
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
from .lexer import EOF, IDENT, INT, RAT, tokenize

_ATOM_START = frozenset({INT, RAT, IDENT, "(", "-"})


class ExprParser:
    def __init__(self, tokens, i=0):
        self.tokens = tokens
        self.i = i

    # -- token helpers --

    @property
    def tok(self):
        return self.tokens[self.i]

    def peek(self, k=1):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self):
        t = self.tokens[self.i]
        if t.kind != EOF:
            self.i += 1
        return t

    def error(self, expected, message=None):
        t = self.tok
        msg = message or f"unexpected {t.describe()}"
        raise DSLSyntaxError(msg, t.line, t.column, expected)

    def expect(self, kind, value=None):
        t = self.tok
        if t.kind != kind or (value is not None and t.value != value):
            self.error({repr(value) if value is not None else (kind if kind in (IDENT, INT) else repr(kind))})
        return self.advance()

    def at(self, kind, value=None):
        t = self.tok
        return t.kind == kind and (value is None or t.value == value)

    def ident(self):
        t = self.expect(IDENT)
        if t.value in KEYWORDS:
            raise DSLSyntaxError(f"{t.value!r} is reserved", t.line, t.column, {IDENT})
        return t

    # -- grammar --

    def expr(self) -> Node:
        left = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance()
            right = self.term()
            if op.kind == "-":
                right = Neg(right, pos=op.pos)
            left = Add(left, right, pos=op.pos)
        return left

    def term(self) -> Node:
        left = self.unary()
        while self.at("*"):
            op = self.advance()
            left = Mul(left, self.unary(), pos=op.pos)
        return left

    def unary(self) -> Node:
        if self.at("-"):
            op = self.advance()
            if self.tok.kind in (INT, RAT) and self.peek().kind != "^":
                t = self.advance()
                return RationalLit(-Fraction(t.value), pos=op.pos)
            return Neg(self.unary(), pos=op.pos)
        return self.postfix()

    def postfix(self) -> Node:
        node = self.atom()
        while self.at("^"):
            op = self.advance()
            k = self.expect(INT)
            node = Pow(node, k.value, pos=op.pos)
        return node

    def atom(self) -> Node:
        t = self.tok
        if t.kind in (INT, RAT):
            self.advance()
            return RationalLit(Fraction(t.value), pos=t.pos)
        if t.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == IDENT:
            if t.value in KEYWORDS:
                return self.call()
            self.advance()
            return ClassRef(t.value, pos=t.pos)
        self.error({"number", IDENT, "'('", "'-'"})

    def call(self) -> Node:
        head = self.advance()
        name, pos = head.value, head.pos
        self.expect("(")
        if name in ("push", "pull"):
            m = self.ident().value
            self.expect(",")
            arg = self.expr()
            node = (Push if name == "push" else Pull)(m, arg, pos=pos)
        elif name == "c1":
            node = C1(self.ident().value, pos=pos)
        elif name == "component":
            arg = self.expr()
            self.expect(",")
            node = Component(arg, self.expect(INT).value, pos=pos)
        else:
            arg = self.expr()
            node = (Exp if name == "exp" else Integrate)(arg, pos=pos)
        self.expect(")")
        return node


def parse(text: str) -> Node:
    """Parse a whole expression; trailing tokens are an error."""
    p = ExprParser(tokenize(text))
    node = p.expr()
    if not p.at(EOF):
        p.error({"'+'", "'-'", "'*'", "'^'", EOF})
    return node


# -- printing --

_ADD, _MUL, _UNARY, _POW, _ATOM = range(1, 6)


def _lit(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt(node: Node):
    """Return ``(text, precedence level)``."""
    if isinstance(node, RationalLit):
        return _lit(node.value), (_UNARY if node.value < 0 else _ATOM)
    if isinstance(node, ClassRef):
        return node.name, _ATOM
    if isinstance(node, C1):
        return f"c1({node.bundle})", _ATOM
    if isinstance(node, (Push, Pull)):
        head = "push" if isinstance(node, Push) else "pull"
        return f"{head}({node.morphism}, {format_expr(node.operand)})", _ATOM
    if isinstance(node, Exp):
        return f"exp({format_expr(node.operand)})", _ATOM
    if isinstance(node, Integrate):
        return f"integrate({format_expr(node.operand)})", _ATOM
    if isinstance(node, Component):
        return f"component({format_expr(node.operand)}, {node.codim})", _ATOM
    if isinstance(node, Pow):
        return f"{_wrap(node.base, _POW)}^{node.exponent}", _POW
    if isinstance(node, Neg):
        inner = node.operand
        if isinstance(inner, RationalLit) and inner.value >= 0:
            # "-2" would read back as a literal
            return f"-({_lit(inner.value)})", _UNARY
        return "-" + _wrap(inner, _UNARY), _UNARY
    if isinstance(node, Mul):
        return f"{_wrap(node.left, _MUL)} * {_wrap(node.right, _UNARY)}", _MUL
    if isinstance(node, Add):
        left = _wrap(node.left, _ADD)
        if isinstance(node.right, Neg):
            return f"{left} - {_wrap(node.right.operand, _MUL)}", _ADD
        return f"{left} + {_wrap(node.right, _MUL)}", _ADD
    raise TypeError(f"not an expression node: {node!r}")


def _wrap(node, level):
    text, own = _fmt(node)
    return text if own >= level else f"({text})"


def format_expr(node: Node) -> str:
    return _fmt(node)[0]
