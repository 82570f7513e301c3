"""
parse.py — text syntax for polynomials.

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('+' | '-') unary | power
    power := atom ('^' INT)?
    atom  := INT | NAME | '(' expr ')'

NAME matches [a-zA-Z][a-zA-Z0-9_]*. Division is only allowed by a nonzero
constant, which is how rational coefficients print (e.g. 3/2*x).
"""

from __future__ import annotations

import re
from typing import List, Optional, Sequence, Tuple

from ..errors import ParseError
from .poly import Poly

__all__ = ["parse_poly", "format_poly", "is_name"]

_NAME = r"[a-zA-Z][a-zA-Z0-9_]*"
_TOKEN = re.compile(rf"\s*(?:(\d+)|({_NAME})|(\S))")
_NAME_RE = re.compile(_NAME)


def is_name(s: str) -> bool:
    """True when s is a variable name the polynomial grammar accepts."""
    return isinstance(s, str) and _NAME_RE.fullmatch(s) is not None


def _locate(text: str, pos: int) -> Tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                line, col = _locate(text, m.start(3))
                raise ParseError(f"unexpected character {ch!r}", line, col, text)
            out.append(("op", ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, allowed: Optional[Sequence[str]]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allowed = set(allowed) if allowed is not None else None

    def fail(self, msg: str, pos: Optional[int] = None) -> ParseError:
        pos = self.toks[self.i][2] if pos is None else pos
        line, col = _locate(self.text, pos)
        return ParseError(msg, line, col, self.text)

    def peek(self) -> Tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> Tuple[str, str, int]:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expr(self) -> Poly:
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise self.fail("division is only allowed by a nonzero constant", pos)
                acc = acc / rhs.const_value()
        return acc

    def unary(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise self.fail("exponent must be a nonnegative integer", pos)
            base = base ** int(val)
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "int":
            return Poly.const(int(val))
        if kind == "name":
            if self.allowed is not None and val not in self.allowed:
                raise self.fail(f"unknown variable {val!r}", pos)
            return Poly.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            k2, v2, p2 = self.take()
            if (k2, v2) != ("op", ")"):
                raise self.fail("expected ')'", p2)
            return inner
        if kind == "end":
            raise self.fail("unexpected end of input", pos)
        raise self.fail(f"unexpected {val!r}", pos)


def parse_poly(text: str, vars: Optional[Sequence[str]] = None, strict: bool = False) -> Poly:
    """
    Parse `text`; the result lives in `vars` (plus any names used). With
    strict=True every name must already be in `vars`.
    """
    if not isinstance(text, str):
        raise ParseError(f"polynomial must be a string, got {type(text).__name__}")
    p = _Parser(text, vars if strict else None)
    if p.peek()[0] == "end":
        raise p.fail("empty polynomial")
    out = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise p.fail(f"unexpected {val!r}", pos)
    return out.embed(vars or ())


def format_poly(p: Poly) -> str:
    return str(p)
