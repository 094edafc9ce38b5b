"""Recursive-descent parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := unary ('^' integer)?
    unary  := '-'? atom
    atom   := 'z' | number | number 'i' | func '(' expr ')' | '(' expr ')'

Note that unary minus binds tighter than '^', so ``-z^2`` is ``(-z)^2``.
The bare identifier ``i`` is accepted as the imaginary unit.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from minsurf.analytic import expr as E
from minsurf.errors import EmptyExpressionError, ExprSyntaxError, UnknownIdentifierError

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class Token(NamedTuple):
    kind: str  # "num", "imag", "ident", "op", "end"
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER.match(src, i)
        if m:
            end = m.end()
            # "2i" is an imaginary literal only when 'i' is not the start of a longer identifier
            if end < n and src[end] == "i" and not (end + 1 < n and (src[end + 1].isalnum() or src[end + 1] == "_")):
                tokens.append(Token("imag", m.group(0), i))
                i = end + 1
            else:
                tokens.append(Token("num", m.group(0), i))
                i = end
            continue
        m = _IDENT.match(src, i)
        if m:
            tokens.append(Token("ident", m.group(0), i))
            i = m.end()
            continue
        if ch in "+-*/^()":
            tokens.append(Token("op", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.k]

    def _accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.k += 1
            return True
        return False

    def _expect(self, text: str) -> None:
        if not self._accept(text):
            self._fail(f"expected {text!r}")

    def _fail(self, what: str):
        tok = self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExprSyntaxError(f"{what}, found {found}", tok.pos)

    def parse(self) -> E.Expr:
        if self.tok.kind == "end":
            raise EmptyExpressionError()
        node = self.expr()
        if self.tok.kind != "end":
            self._fail("unexpected token")
        return node

    def expr(self) -> E.Expr:
        node = self.term()
        while True:
            if self._accept("+"):
                node = E.add(node, self.term())
            elif self._accept("-"):
                node = E.sub(node, self.term())
            else:
                return node

    def term(self) -> E.Expr:
        node = self.factor()
        while True:
            if self._accept("*"):
                node = E.mul(node, self.factor())
            elif self._accept("/"):
                node = E.div(node, self.factor())
            else:
                return node

    def factor(self) -> E.Expr:
        node = self.unary()
        if self._accept("^"):
            sign = -1 if self._accept("-") else 1
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                self._fail("expected integer exponent")
            self.k += 1
            node = E.power(node, sign * int(tok.text))
        return node

    def unary(self) -> E.Expr:
        if self._accept("-"):
            return E.neg(self.atom())
        return self.atom()

    def atom(self) -> E.Expr:
        tok = self.tok
        if tok.kind == "num":
            self.k += 1
            return E.Const(float(tok.text))
        if tok.kind == "imag":
            self.k += 1
            return E.Const(complex(0.0, float(tok.text)))
        if tok.kind == "ident":
            name = tok.text
            if name == "z":
                self.k += 1
                return E.Z
            if name == "i":
                self.k += 1
                return E.Const(1j)
            if name in E.FUNCTIONS:
                self.k += 1
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return E.func(name, arg)
            raise UnknownIdentifierError(name, tok.pos)
        if self._accept("("):
            node = self.expr()
            self._expect(")")
            return node
        self._fail("expected operand")


def parse_expr(src: str) -> E.Expr:
    """Parse ``src`` into an expression tree (constants are folded)."""
    return _Parser(src).parse()
