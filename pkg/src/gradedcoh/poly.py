"""Parser for polynomial expressions over a presentation's generators.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := ['-'] factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

An expression may also be an equation ``lhs = rhs``; it then denotes
``lhs - rhs``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .gradedalg import AlgebraPresentation, Element, UnknownGenerator

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*^()=]))")


class PolySyntaxError(ValueError):
    def __init__(self, message: str, col: int, line: int | None = None):
        self.message = message
        self.col = col
        self.line = line
        where = f"line {line} col {col}" if line is not None else f"col {col}"
        super().__init__(f"syntax error at {where}: {message}")


class PolyUnknownGenerator(UnknownGenerator):
    def __init__(self, name: str, col: int, line: int | None = None):
        self.name = name
        self.col = col
        self.line = line
        where = f"line {line} col {col}" if line is not None else f"col {col}"
        super().__init__(f"unknown generator {name!r} at {where}")


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, alg: AlgebraPresentation, text: str):
        self.alg = alg
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str) -> None:
        t = self.take()
        if t.kind != "op" or t.text != op:
            raise PolySyntaxError(f"expected {op!r}", t.col)

    def parse(self) -> Element:
        if self.peek().kind == "end":
            raise PolySyntaxError("empty expression", self.peek().col)
        lhs = self.expr()
        t = self.peek()
        if t.kind == "op" and t.text == "=":
            self.take()
            rhs = self.expr()
            lhs = lhs - rhs
            t = self.peek()
        if t.kind != "end":
            raise PolySyntaxError(f"unexpected {t.text!r}", t.col)
        return lhs

    def expr(self) -> Element:
        acc = self.term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if t.text == "+" else acc - rhs
            else:
                return acc

    def term(self) -> Element:
        t = self.peek()
        neg = False
        if t.kind == "op" and t.text == "-":
            self.take()
            neg = True
        acc = self.factor()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.take()
            acc = acc * self.factor()
        return -acc if neg else acc

    def factor(self) -> Element:
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.take()
            e = self.take()
            if e.kind != "int":
                raise PolySyntaxError("exponent must be a nonnegative integer", e.col)
            return base ** int(e.text)
        return base

    def atom(self) -> Element:
        t = self.take()
        if t.kind == "int":
            return self.alg.scalar(int(t.text))
        if t.kind == "name":
            if t.text not in self.alg.index:
                raise PolyUnknownGenerator(t.text, t.col)
            return self.alg.gen(t.text)
        if t.kind == "op" and t.text == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if t.kind == "end":
            raise PolySyntaxError("unexpected end of expression", t.col)
        raise PolySyntaxError(f"unexpected {t.text!r}", t.col)


def parse_poly(alg: AlgebraPresentation, text: str) -> Element:
    return _Parser(alg, text).parse()
