"""Tokenizer and recursive-descent parser shared by every text grammar.

The grammar is the usual arithmetic one::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' '-'? INTEGER)?
    atom   := INTEGER | 'E' '(' INTEGER ')' | NAME | '(' expr ')'

What the atoms and operators *mean* is supplied by an algebra object, so the
same parser builds cyclotomic scalars and free-algebra elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Protocol


class ParseError(ValueError):
    """Syntax error in an expression; ``position`` is a 0-based offset."""

    def __init__(self, message: str, text: str = "", position: int = 0):
        self.message = message
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    value: str
    pos: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(Token("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(Token("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", text, m.start(3))
            tokens.append(Token("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Algebra(Protocol):
    def number(self, n: int) -> Any: ...
    def root(self, n: int, pos: int) -> Any: ...
    def symbol(self, name: str, pos: int) -> Any: ...
    def add(self, a: Any, b: Any) -> Any: ...
    def sub(self, a: Any, b: Any) -> Any: ...
    def mul(self, a: Any, b: Any) -> Any: ...
    def div(self, a: Any, b: Any, pos: int) -> Any: ...
    def neg(self, a: Any) -> Any: ...
    def power(self, a: Any, k: int, pos: int) -> Any: ...


class _Parser:
    def __init__(self, text: str, algebra: Algebra):
        self.text = text
        self.alg = algebra
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.take()
        if tok.value != value or tok.kind == "end":
            raise ParseError(f"expected {value!r}", self.text, tok.pos)
        return tok

    def error(self, message: str, pos: int):
        return ParseError(message, self.text, pos)

    def parse(self):
        if self.peek().kind == "end":
            raise self.error("empty expression", 0)
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected {tok.value!r}", tok.pos)
        return value

    def expr(self):
        value = self.term()
        while self.peek().kind == "op" and self.peek().value in "+-":
            op = self.take().value
            rhs = self.term()
            value = self.alg.add(value, rhs) if op == "+" else self.alg.sub(value, rhs)
        return value

    def term(self):
        value = self.unary()
        while self.peek().kind == "op" and self.peek().value in "*/":
            tok = self.take()
            rhs = self.unary()
            if tok.value == "*":
                value = self.alg.mul(value, rhs)
            else:
                value = self.alg.div(value, rhs, tok.pos)
        return value

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.value == "-":
            self.take()
            return self.alg.neg(self.unary())
        if tok.kind == "op" and tok.value == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.value == "^":
            self.take()
            sign = 1
            if self.peek().kind == "op" and self.peek().value == "-":
                self.take()
                sign = -1
            exp_tok = self.take()
            if exp_tok.kind != "int":
                raise self.error("exponent must be an integer literal", exp_tok.pos)
            return self.alg.power(base, sign * int(exp_tok.value), tok.pos)
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return self.alg.number(int(tok.value))
        if tok.kind == "name":
            if tok.value == "E" and self.peek().value == "(":
                self.take()
                arg = self.take()
                if arg.kind != "int":
                    raise self.error("E(...) takes a positive integer", arg.pos)
                self.expect(")")
                n = int(arg.value)
                if n <= 0:
                    raise self.error("E(...) takes a positive integer", arg.pos)
                return self.alg.root(n, tok.pos)
            return self.alg.symbol(tok.value, tok.pos)
        if tok.kind == "op" and tok.value == "(":
            value = self.expr()
            self.expect(")")
            return value
        if tok.kind == "end":
            raise self.error("unexpected end of expression", tok.pos)
        raise self.error(f"unexpected {tok.value!r}", tok.pos)


def parse_with(text: str, algebra: Algebra):
    """Parse ``text`` and evaluate it in ``algebra``."""
    return _Parser(text, algebra).parse()


_ROOT_RE = re.compile(r"E\(\s*(\d+)\s*\)")


def root_orders(text: str) -> list[int]:
    """All n appearing as E(n) in ``text`` (used for the field-order pre-scan)."""
    return [int(m.group(1)) for m in _ROOT_RE.finditer(text)]
