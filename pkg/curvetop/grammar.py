# -*- coding: utf-8 -*-
"""
Parser for the polynomial text grammar shared by the library and the
CLI:

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' INTEGER)?
    atom   := NUMBER ('/' INTEGER)? | VARIABLE | '(' expr ')'

Multiplication must be written with ``*``; two atoms side by side are
rejected with the position of the second one.
"""

import re
from dataclasses import dataclass

from sympy import Rational

from curvetop.errors import ParseError
from curvetop.polynomial import MultiPoly, VARIABLES

_TOKEN = re.compile(r'(?P<number>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()])|(?P<space>\s+)')


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    """
    Split polynomial text into tokens, tracking 1-based positions.
    :param text: The polynomial text
    :return: Tokens followed by an ``end`` token
    """
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f'unexpected character {text[pos]!r}', line, pos - line_start + 1)
        kind = match.lastgroup
        if kind == 'space':
            for offset, char in enumerate(match.group(), start=pos):
                if char == '\n':
                    line += 1
                    line_start = offset + 1
        else:
            tokens.append(Token(kind, match.group(), line, pos - line_start + 1))
        pos = match.end()
    tokens.append(Token('end', '', line, pos - line_start + 1))
    return tokens


class _Parser:

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, kind: str, text: str | None = None) -> Token:
        token = self.current
        if token.kind != kind or (text is not None and token.text != text):
            wanted = text or kind
            raise ParseError(f'expected {wanted!r}, found {token.text or "end of input"!r}',
                             token.line, token.column)
        return self.advance()

    def at_op(self, *ops: str) -> bool:
        return self.current.kind == 'op' and self.current.text in ops

    def parse(self) -> MultiPoly:
        result = self.expr()
        token = self.current
        if token.kind != 'end':
            if token.kind in ('number', 'name') or token.text == '(':
                raise ParseError('implicit multiplication is not allowed, use *',
                                 token.line, token.column)
            raise ParseError(f'unexpected {token.text!r}', token.line, token.column)
        return result

    def expr(self) -> MultiPoly:
        result = self.term()
        while self.at_op('+', '-'):
            op = self.advance().text
            rhs = self.term()
            result = result + rhs if op == '+' else result - rhs
        return result

    def term(self) -> MultiPoly:
        result = self.unary()
        while self.at_op('*'):
            self.advance()
            result = result * self.unary()
        return result

    def unary(self) -> MultiPoly:
        if self.at_op('-'):
            self.advance()
            return -self.unary()
        if self.at_op('+'):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.at_op('^'):
            self.advance()
            exponent = self.expect('number')
            base = base ** int(exponent.text)
        return base

    def atom(self) -> MultiPoly:
        token = self.current
        if token.kind == 'number':
            self.advance()
            value = Rational(int(token.text))
            if self.at_op('/'):
                self.advance()
                denominator = self.expect('number')
                if int(denominator.text) == 0:
                    raise ParseError('zero denominator', denominator.line, denominator.column)
                value = Rational(int(token.text), int(denominator.text))
            return MultiPoly.constant(value)
        if token.kind == 'name':
            name = token.text.lower()
            if name not in VARIABLES:
                raise ParseError(f'unknown variable {token.text!r}', token.line, token.column)
            self.advance()
            return MultiPoly.variable(name)
        if self.at_op('('):
            self.advance()
            inner = self.expr()
            self.expect('op', ')')
            return inner
        raise ParseError(f'unexpected {token.text or "end of input"!r}', token.line, token.column)


def parse_polynomial(text: str) -> MultiPoly:
    """
    Parse polynomial text such as ``"x^2+y^2+z^2-1"``.
    :param text: The polynomial text
    :return: The polynomial, declared over the variables that occur
    """
    return _Parser(text).parse()
