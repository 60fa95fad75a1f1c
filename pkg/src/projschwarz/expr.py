"""Recursive-descent parser for scalar field expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' integer)?
    base   := number | 'x' index | '(' expr ')' | '-' base

Variables are ``x1 .. xn``. Unary minus binds tighter than ``^``, so
``-x1^2`` means ``(-x1)^2``; write ``-(x1^2)`` for the other reading.
Numbers are decimal literals; an exponent suffix (``1e-3``) is accepted too.

Parsed trees evaluate on floats or on :class:`~projschwarz.jet.Jet` values,
which is how expression-defined maps and fields produce exact derivatives.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import EvaluationError, JetError, ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<var>x\d+)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Num:
    value: float

    def evaluate(self, env):
        return self.value

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    index: int  # 0-based

    def evaluate(self, env):
        return env[self.index]

    def __str__(self):
        return f"x{self.index + 1}"


@dataclass(frozen=True)
class Neg:
    arg: object

    def evaluate(self, env):
        return -self.arg.evaluate(env)

    def __str__(self):
        return f"-({self.arg})"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def evaluate(self, env):
        a = self.left.evaluate(env)
        b = self.right.evaluate(env)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        try:
            if not hasattr(b, "coeffs") and b == 0:
                raise ZeroDivisionError
            return a / b
        except (ZeroDivisionError, JetError) as exc:
            raise EvaluationError(f"division by zero in ({self})") from exc

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Pow:
    arg: object
    exponent: int

    def evaluate(self, env):
        a = self.arg.evaluate(env)
        if self.exponent < 0:
            try:
                if not hasattr(a, "coeffs") and a == 0:
                    raise ZeroDivisionError
                return a**self.exponent
            except (ZeroDivisionError, JetError) as exc:
                raise EvaluationError(f"division by zero in ({self})") from exc
        return a**self.exponent

    def __str__(self):
        return f"({self.arg})^{self.exponent}"


class _Parser:
    def __init__(self, src, n):
        self.src = src
        self.n = n
        self.tokens = self._tokenize(src)
        self.pos = 0

    @staticmethod
    def _tokenize(src):
        tokens = []
        i = 0
        while i < len(src):
            if src[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(src, i)
            if not m or m.end() == i:
                raise ParseError(f"unexpected character {src[i]!r}", i)
            kind = m.lastgroup
            start = m.start(kind)
            tokens.append((kind, m.group(kind), start))
            i = m.end()
        tokens.append(("end", "", len(src)))
        return tokens

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text):
        kind, val, where = self.advance()
        if val != text:
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {text!r}, found {found}", where)

    def parse(self):
        tree = self.expr()
        kind, val, where = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", where)
        return tree

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        node = self.base()
        if self.peek()[1] == "^":
            self.advance()
            sign = 1
            if self.peek()[1] == "-":
                self.advance()
                sign = -1
            kind, val, where = self.advance()
            if kind != "num" or not val.isdigit():
                raise ParseError("exponent must be an integer literal", where)
            node = Pow(node, sign * int(val))
        return node

    def base(self):
        kind, val, where = self.advance()
        if kind == "num":
            return Num(float(val))
        if kind == "var":
            index = int(val[1:])
            if not 1 <= index <= self.n:
                raise ParseError(f"unknown variable {val!r} (dimension {self.n})", where)
            return Var(index - 1)
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if val == "-":
            return Neg(self.base())
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"expected a number, variable or '(', found {found}", where)


def parse(src, n):
    """Parse ``src`` into an expression tree over ``x1 .. xn``."""
    if not isinstance(src, str):
        raise ParseError(f"expression must be a string, got {type(src).__name__}")
    return _Parser(src, n).parse()


def parse_expression(src, n):
    """Parse ``src`` into a jet-evaluable scalar field on ``R^n``."""
    from .fields import ExprField

    return ExprField(parse(src, n), n, source=src)
