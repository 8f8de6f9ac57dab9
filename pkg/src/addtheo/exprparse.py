"""Recursive-descent parser for rational expressions over declared symbols.

Accepts rational literals (`3`, `1/2`), the declared variable names, the
operators `+ - * / ^` and parentheses; `^` takes a non-negative integer
exponent.  The result is an exact fraction of two polynomials.  Positions are
tracked for error messages.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ExprSyntaxError
from .poly import MPoly

Q = Fraction

_OPS = set("+-*/^()")


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column


def _tokenize(text, line=1, column=1):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            column = 1
            i += 1
            continue
        if ch.isspace():
            column += 1
            i += 1
            continue
        if ch in _OPS:
            tokens.append(_Token(ch, ch, line, column))
            i += 1
            column += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", int(text[i:j]), line, column))
            column += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, column))
            column += j - i
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", line, column)
    tokens.append(_Token("end", None, line, column))
    return tokens


class _Frac:
    """Fraction of two MPoly values (no cancellation during parsing)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    def __add__(self, other):
        return _Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        return _Frac(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other):
        return _Frac(self.num * other.num, self.den * other.den)

    def __neg__(self):
        return _Frac(-self.num, self.den)

    def powi(self, k):
        return _Frac(self.num**k, self.den**k)


class _Parser:
    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.pos = 0
        self.variables = tuple(variables)

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok.kind != kind:
            raise ExprSyntaxError(
                f"expected {kind!r}, found {tok.value!r}", tok.line, tok.column
            )
        return tok

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(
                f"unexpected trailing input {tok.value!r}", tok.line, tok.column
            )
        return value

    def expr(self):
        value = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.advance()
            rhs = self.unary()
            if op.kind == "*":
                value = value * rhs
            else:
                if rhs.num.is_zero():
                    raise ExprSyntaxError("division by zero", op.line, op.column)
                value = _Frac(value.num * rhs.den, value.den * rhs.num)
        return value

    def unary(self):
        tok = self.peek()
        if tok.kind == "-":
            self.advance()
            return -self.unary()
        if tok.kind == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind == "^":
            self.advance()
            tok = self.advance()
            if tok.kind != "int":
                raise ExprSyntaxError(
                    "exponent must be a non-negative integer", tok.line, tok.column
                )
            return base.powi(tok.value)
        return base

    def atom(self):
        tok = self.advance()
        if tok.kind == "int":
            return _Frac(
                MPoly.const(self.variables, tok.value),
                MPoly.const(self.variables, 1),
            )
        if tok.kind == "name":
            if tok.value not in self.variables:
                allowed = ", ".join(self.variables)
                raise ExprSyntaxError(
                    f"unknown symbol {tok.value!r} (allowed: {allowed})",
                    tok.line,
                    tok.column,
                )
            return _Frac(
                MPoly.var(self.variables, tok.value),
                MPoly.const(self.variables, 1),
            )
        if tok.kind == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ExprSyntaxError(
            f"unexpected token {tok.value!r}", tok.line, tok.column
        )


def parse_fraction(text, variables, line=1, column=1):
    """Parse an expression into an exact (numerator, denominator) pair."""
    tokens = _tokenize(text, line, column)
    parser = _Parser(tokens, variables)
    value = parser.parse()
    if value.den.is_zero():
        raise ExprSyntaxError("division by zero", line, column)
    return value.num, value.den


def parse_polynomial(text, variables, line=1, column=1) -> MPoly:
    """Parse an expression that must reduce to a polynomial."""
    num, den = parse_fraction(text, variables, line, column)
    if not den.is_constant():
        raise ExprSyntaxError("expected a polynomial, found a denominator", line, column)
    return num * (1 / den.constant_value())
