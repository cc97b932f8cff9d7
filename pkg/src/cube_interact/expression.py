"""Recursive-descent parser for closed arithmetic expressions in x1..xn.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | VAR | FUNC '(' expr (',' expr)* ')' | '(' expr ')'

``FUNC`` is one of min, max (two or more arguments), sqrt, exp, log (one).
The result is compiled to a function over ``(M, n)`` numpy arrays.
"""

from __future__ import annotations

import re
from collections.abc import Callable

import numpy as np

from .errors import InvalidArgument
from .model import BlackBox

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(.))")
_UNARY = {"sqrt": np.sqrt, "exp": np.exp, "log": np.log}
_VARIADIC = {"min": np.minimum, "max": np.maximum}

Node = Callable[[np.ndarray], np.ndarray]


class ExpressionError(InvalidArgument):
    pass


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.used = 0

    @staticmethod
    def _tokenize(text):
        out = []
        for m in _TOKEN.finditer(text):
            num, name, op = m.groups()
            if num is not None:
                out.append(("num", float(num)))
            elif name is not None:
                out.append(("name", name))
            elif op is not None and not op.isspace():
                out.append(("op", op))
        return out

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("end", None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise ExpressionError(f"expected {want!r} at token {self.pos} in {self.text!r}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        if self.peek()[0] != "end":
            raise ExpressionError(f"unexpected {self.peek()[1]!r} in {self.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            node = _bin(np.add if op == "+" else np.subtract, node, rhs)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            node = _bin(np.multiply if op == "*" else np.divide, node, rhs)
        return node

    def unary(self) -> Node:
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.unary()
            return lambda X: -inner(X)
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            return _bin(np.power, base, self.unary())
        return base

    def atom(self) -> Node:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return lambda X: np.full(len(X), val)
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        if kind == "name":
            self.take()
            m = re.fullmatch(r"x(\d+)", val)
            if m:
                i = int(m.group(1))
                if not 1 <= i <= self.n:
                    raise ExpressionError(f"variable {val} outside x1..x{self.n}")
                self.used |= 1 << (i - 1)
                return lambda X: X[:, i - 1]
            if val in _UNARY or val in _VARIADIC:
                return self.call(val)
            raise ExpressionError(f"unknown name {val!r}")
        raise ExpressionError(f"unexpected {val!r} in {self.text!r}")

    def call(self, name: str) -> Node:
        self.take("op", "(")
        args = [self.expr()]
        while self.peek() == ("op", ","):
            self.take()
            args.append(self.expr())
        self.take("op", ")")
        if name in _UNARY:
            if len(args) != 1:
                raise ExpressionError(f"{name} takes one argument")
            fn, (arg,) = _UNARY[name], args
            return lambda X: fn(arg(X))
        if len(args) < 2:
            raise ExpressionError(f"{name} takes at least two arguments")
        fn = _VARIADIC[name]

        def node(X):
            out = args[0](X)
            for a in args[1:]:
                out = fn(out, a(X))
            return out

        return node


def _bin(fn, a: Node, b: Node) -> Node:
    return lambda X: fn(a(X), b(X))


def parse_expression(text: str, n: int) -> tuple[Node, int]:
    """Compile ``text``; returns the vectorised evaluator and the mask of variables used."""
    parser = _Parser(text, n)
    node = parser.parse()
    return node, parser.used


def expression_spec(text: str, n: int, smooth: bool = False, lattice: bool = False) -> BlackBox:
    node, used = parse_expression(text, n)

    def fn(X):
        with np.errstate(all="ignore"):
            return node(np.asarray(X, dtype=float))

    return BlackBox(n, fn, smooth=smooth, vectorized=True, support=used, lattice=lattice, label=text)
