"""Tokenizer shared by expressions and model files."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DSLSyntaxError

IDENT = "identifier"
INT = "integer"
RAT = "rational"
EOF = "end of input"

_PUNCT = ("->", "(", ")", ",", "+", "-", "*", "^", "{", "}", ":", ";", "=")
_NUMBER = re.compile(r"\d+(?:/\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Token:
    kind: str
    value: object
    line: int
    column: int

    @property
    def pos(self):
        return (self.line, self.column)

    def describe(self):
        if self.kind == EOF:
            return EOF
        if self.kind in (IDENT, INT, RAT):
            return f"{self.kind} {self.value!s}"
        return repr(self.kind)


def tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            m = _NUMBER.match(text, i)
            end = m.end()
            nxt = text[end] if end < n else ""
            if nxt == "." or (nxt == "/" and "/" in m.group()):
                bad = "decimal literals are not allowed; write a fraction like 1/2" \
                    if nxt == "." else "malformed rational literal"
                raise DSLSyntaxError(bad, line, col + end - i)
            if nxt.isalpha() or nxt == "_":
                raise DSLSyntaxError("identifiers cannot start with a digit", line, col)
            raw = m.group()
            if "/" in raw:
                num, den = raw.split("/")
                if int(den) == 0:
                    raise DSLSyntaxError("zero denominator", line, col)
                tokens.append(Token(RAT, Fraction(int(num), int(den)), line, col))
            else:
                tokens.append(Token(INT, int(raw), line, col))
            col += end - i
            i = end
            continue
        if ch == ".":
            raise DSLSyntaxError("decimal literals are not allowed; write a fraction like 1/2", line, col)
        m = _IDENT.match(text, i)
        if m:
            tokens.append(Token(IDENT, m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token(p, p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise DSLSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token(EOF, None, line, col))
    return tokens
