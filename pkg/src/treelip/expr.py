"""Closed-form radial expressions in the level variable ``n``.

Grammar (infix)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?            # right associative, binds tighter than unary minus
    atom   := NUMBER | 'n' | FUNC '(' args ')' | '(' expr ')'
    FUNC   := log | sqrt | floor | min | max

Expressions evaluate either vectorised in double precision (numpy) or at a
single level with mpmath, which the tail ladder uses for differences at
levels up to 2**50 where double precision cancels.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import mpmath
import numpy as np

MP_DPS = 80
MAX_LEVEL = 2**50


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


class ExprDomainError(ArithmeticError):
    def __init__(self, message: str, level: int | None = None):
        where = f" at n={level}" if level is not None else ""
        super().__init__(f"{message}{where}")
        self.level = level


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)"
                    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))")

_FUNCS = {"log": 1, "sqrt": 1, "floor": 1, "min": 2, "max": 2}


class Node:
    def np_eval(self, n: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def mp_eval(self, n):
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Node):
    value: float

    def np_eval(self, n):
        return np.full(n.shape, self.value, dtype=np.float64)

    def mp_eval(self, n):
        return mpmath.mpf(self.value)

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var(Node):
    def np_eval(self, n):
        return n.astype(np.float64)

    def mp_eval(self, n):
        return mpmath.mpf(n)

    def __str__(self):
        return "n"


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    def np_eval(self, n):
        return -self.arg.np_eval(n)

    def mp_eval(self, n):
        return -self.arg.mp_eval(n)

    def __str__(self):
        return f"(-{self.arg})"


def _bad_level(n: np.ndarray, mask: np.ndarray) -> int:
    return int(n[np.flatnonzero(mask)[0]])


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    def np_eval(self, n):
        a, b = self.left.np_eval(n), self.right.np_eval(n)
        with np.errstate(all="ignore"):
            if self.op == "+":
                out = a + b
            elif self.op == "-":
                out = a - b
            elif self.op == "*":
                out = a * b
            elif self.op == "/":
                zero = b == 0
                if zero.any():
                    raise ExprDomainError("division by zero", _bad_level(n, zero))
                out = a / b
            else:
                bad = (a < 0) & (b != np.floor(b))
                if bad.any():
                    raise ExprDomainError("negative base with fractional exponent", _bad_level(n, bad))
                bad = (a == 0) & (b < 0)
                if bad.any():
                    raise ExprDomainError("zero to a negative power", _bad_level(n, bad))
                out = np.power(a, b)
        bad = ~np.isfinite(out)
        if bad.any():
            raise ExprDomainError(f"non-finite result of '{self.op}'", _bad_level(n, bad))
        return out

    def mp_eval(self, n):
        a, b = self.left.mp_eval(n), self.right.mp_eval(n)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            if b == 0:
                raise ExprDomainError("division by zero", n)
            return a / b
        if a < 0 and b != mpmath.floor(b):
            raise ExprDomainError("negative base with fractional exponent", n)
        if a == 0 and b < 0:
            raise ExprDomainError("zero to a negative power", n)
        return mpmath.power(a, b)

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple[Node, ...]

    def np_eval(self, n):
        vals = [a.np_eval(n) for a in self.args]
        x = vals[0]
        if self.name == "log":
            bad = x <= 0
            if bad.any():
                raise ExprDomainError("log of a non-positive value", _bad_level(n, bad))
            return np.log(x)
        if self.name == "sqrt":
            bad = x < 0
            if bad.any():
                raise ExprDomainError("sqrt of a negative value", _bad_level(n, bad))
            return np.sqrt(x)
        if self.name == "floor":
            return np.floor(x)
        if self.name == "min":
            return np.minimum(x, vals[1])
        return np.maximum(x, vals[1])

    def mp_eval(self, n):
        vals = [a.mp_eval(n) for a in self.args]
        x = vals[0]
        if self.name == "log":
            if x <= 0:
                raise ExprDomainError("log of a non-positive value", n)
            return mpmath.log(x)
        if self.name == "sqrt":
            if x < 0:
                raise ExprDomainError("sqrt of a negative value", n)
            return mpmath.sqrt(x)
        if self.name == "floor":
            return mpmath.floor(x)
        if self.name == "min":
            return min(x, vals[1])
        return max(x, vals[1])

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.args))})"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
                raise ExprSyntaxError(f"unexpected character {text[col - 1]!r}", col)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.i = 0
        self.open_parens: list[int] = []

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def eof_error(self, what: str):
        col = self.open_parens[-1] if self.open_parens else len(self.text) + 1
        if self.open_parens:
            raise ExprSyntaxError(f"unclosed '(' (expected {what})", col)
        raise ExprSyntaxError(f"unexpected end of input (expected {what})", col)

    def take(self, value: str):
        tok = self.peek()
        if tok is None:
            self.eof_error(repr(value))
        if tok[1] != value:
            raise ExprSyntaxError(f"expected {value!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Node:
        if not self.tokens:
            raise ExprSyntaxError("empty expression", 1)
        node = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ExprSyntaxError(f"unexpected token {tok[1]!r}", tok[2])
        return node

    def expr(self) -> Node:
        node = self.term()
        while (tok := self.peek()) is not None and tok[1] in "+-" and tok[0] == "op":
            self.i += 1
            node = BinOp(tok[1], node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "*/":
            self.i += 1
            node = BinOp(tok[1], node, self.unary())
        return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            inner = self.unary()
            return Neg(inner) if tok[1] == "-" else inner
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[1] == "^":
            self.i += 1
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        tok = self.peek()
        if tok is None:
            self.eof_error("an operand")
        kind, text, col = tok
        self.i += 1
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text == "n":
                return Var()
            if text not in _FUNCS:
                raise ExprSyntaxError(f"unknown name {text!r}", col)
            paren = self.take("(")
            self.open_parens.append(paren[2])
            args = [self.expr()]
            while (t := self.peek()) is not None and t[1] == ",":
                self.i += 1
                args.append(self.expr())
            self.take(")")
            self.open_parens.pop()
            if len(args) != _FUNCS[text]:
                raise ExprSyntaxError(f"{text} takes {_FUNCS[text]} argument(s), got {len(args)}", col)
            return Call(text, tuple(args))
        if text == "(":
            self.open_parens.append(col)
            node = self.expr()
            self.take(")")
            self.open_parens.pop()
            return node
        raise ExprSyntaxError(f"unexpected token {text!r}", col)


@dataclass(frozen=True)
class RadialExpr:
    """Parsed expression; ``text`` is kept verbatim for round trips."""

    text: str
    root: Node

    def __call__(self, n) -> np.ndarray:
        arr = np.asarray(n, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() > MAX_LEVEL):
            raise ExprDomainError("levels must lie in [0, 2^50]")
        return self.root.np_eval(arr)

    def mp(self, n: int):
        with mpmath.workdps(MP_DPS):
            val = self.root.mp_eval(int(n))
            if not mpmath.isfinite(val):
                raise ExprDomainError("non-finite value", n)
            return +val


def parse_expr(text: str) -> RadialExpr:
    return RadialExpr(text, _Parser(text).parse())


def harmonic(n: np.ndarray) -> np.ndarray:
    """``H_n = sum_{j<=n} 1/j`` for a vector of levels (``H_0 = 0``)."""
    n = np.asarray(n, dtype=np.int64)
    top = int(n.max()) if n.size else 0
    table = np.concatenate(([0.0], np.cumsum(1.0 / np.arange(1, top + 1))))
    return table[n]

