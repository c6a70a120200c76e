"""Pratt parser for the infix expression syntax.

Grammar: ``+ - * / ^`` (``**`` is accepted for ``^``), integer and decimal
literals, identifiers and calls to ``exp tanh erf E1 sqrt pow``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, NamedTuple

from .core import Expr, ExprError, _ATOM_BUILDERS, const, power, symbol


class ParseError(ExprError, ValueError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos


class Token(NamedTuple):
    kind: str
    value: str
    pos: int


_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
                       r"|(?P<op>\*\*|[-+*/^(),]))")

_BINARY = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY = 30


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError("unexpected character", len(text) - len(text[pos:].lstrip()), text)
        kind = m.lastgroup
        value = m.group(kind)
        if value == "**":
            value = "^"
        tokens.append(Token(kind, value, m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.next()
        if tok.value != value:
            raise ParseError(f"expected {value!r}, found {tok.value or 'end of input'!r}",
                             tok.pos, self.text)
        return tok

    def expression(self, rbp: int = 0) -> Expr:
        left = self.prefix(self.next())
        while True:
            tok = self.peek()
            lbp = _BINARY.get(tok.value, 0) if tok.kind == "op" else 0
            if lbp <= rbp:
                return left
            self.next()
            left = self.infix(tok, left)

    def prefix(self, tok: Token) -> Expr:
        if tok.kind == "num":
            return const(Fraction(tok.value))
        if tok.kind == "name":
            if self.peek().value == "(":
                return self.call(tok)
            return symbol(tok.value)
        if tok.value == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        if tok.value == "-":
            return -self.expression(_UNARY)
        if tok.value == "+":
            return self.expression(_UNARY)
        raise ParseError(f"unexpected {tok.value or 'end of input'!r}", tok.pos, self.text)

    def call(self, name: Token) -> Expr:
        builder = _ATOM_BUILDERS.get(name.value)
        if builder is None:
            raise ParseError(f"unknown function {name.value!r}", name.pos, self.text)
        self.expect("(")
        args = [self.expression()]
        while self.peek().value == ",":
            self.next()
            args.append(self.expression())
        self.expect(")")
        arity = 2 if name.value == "pow" else 1
        if len(args) != arity:
            raise ParseError(f"{name.value} takes {arity} argument(s)", name.pos, self.text)
        return builder(*args)

    def infix(self, tok: Token, left: Expr) -> Expr:
        op = tok.value
        if op == "^":
            # right associative
            right = self.expression(_BINARY["^"] - 1)
            if not right.is_constant():
                raise ParseError("exponent must be a number; use pow() for symbolic exponents",
                                 tok.pos, self.text)
            return power(left, right)
        right = self.expression(_BINARY[op])
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        try:
            return left / right
        except ZeroDivisionError:
            raise ParseError("division by zero", tok.pos, self.text) from None


def parse(text: str) -> Expr:
    """Parse infix text into a canonical :class:`Expr`."""
    p = _Parser(text)
    if p.peek().kind == "end":
        raise ParseError("empty expression", 0, text)
    e = p.expression()
    tok = p.peek()
    if tok.kind != "end":
        raise ParseError(f"unexpected {tok.value!r}", tok.pos, text)
    return e
