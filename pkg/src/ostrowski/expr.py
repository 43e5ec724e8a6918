"""Tiny expression language in one variable ``x``.

Grammar::

    expr  := term (('+' | '-') term)*
    term  := factor (('*' | '/') factor)*
    factor:= ('-')? power
    power := atom ('^' factor)?
    atom  := number | 'x' | fname '(' expr ')' | '(' expr ')'
    fname := ln | exp | sin | cos | sqrt | abs

Trees are immutable dataclasses. :func:`evaluate` accepts a float or a numpy
array, so the same tree serves scalar calls and vectorised grid scans.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, OstrowskiError

FUNCTIONS = ("ln", "exp", "sin", "cos", "sqrt", "abs")


class ExprSyntaxError(OstrowskiError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class LexError(ExprSyntaxError):
    pass


class ParseError(ExprSyntaxError):
    pass


# ---------------------------------------------------------------- tokens

@dataclass(frozen=True)
class Token:
    kind: str  # number | identifier | operator | paren
    lexeme: str
    position: int


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<identifier>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<operator>[-+*/^])"
    r"|(?P<paren>[()])"
)


def tokenize(source: str) -> list[Token]:
    if not source or not source.strip():
        raise LexError("empty expression", 0)
    tokens = []
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise LexError(f"unexpected character {source[pos]!r}", pos)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group(), pos))
        pos = match.end()
    return tokens


# ------------------------------------------------------------------ nodes

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    # ``sign`` only ever comes out of differentiate(); the parser rejects it.
    name: str
    arg: "Node"


Node = Union[Const, Var, Neg, BinOp, Call]
X = Var()


def children(node: Node) -> tuple:
    if isinstance(node, (Const, Var)):
        return ()
    if isinstance(node, Neg):
        return (node.operand,)
    if isinstance(node, Call):
        return (node.arg,)
    return (node.left, node.right)


def depends_on_x(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    return any(depends_on_x(c) for c in children(node))


# ----------------------------------------------------------------- parser

class _Parser:
    def __init__(self, tokens: list[Token], end: int):
        self.tokens = tokens
        self.i = 0
        self.end = end

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def here(self) -> int:
        tok = self.peek()
        return tok.position if tok is not None else self.end

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end)
        self.i += 1
        return tok

    def accept(self, lexeme: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind in ("operator", "paren") and tok.lexeme == lexeme:
            self.i += 1
            return True
        return False

    def expect(self, lexeme: str) -> None:
        if not self.accept(lexeme):
            tok = self.peek()
            found = "end of input" if tok is None else repr(tok.lexeme)
            raise ParseError(f"expected {lexeme!r}, found {found}", self.here())

    def expr(self) -> Node:
        node = self.term()
        while True:
            tok = self.peek()
            if tok is not None and tok.lexeme in ("+", "-") and tok.kind == "operator":
                self.i += 1
                node = BinOp(tok.lexeme, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            tok = self.peek()
            if tok is not None and tok.lexeme in ("*", "/") and tok.kind == "operator":
                self.i += 1
                node = BinOp(tok.lexeme, node, self.factor())
            else:
                return node

    def factor(self) -> Node:
        if self.accept("-"):
            return Neg(self.power())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.accept("^"):
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> Node:
        pos = self.here()
        tok = self.take()
        if tok.kind == "number":
            return Const(float(tok.lexeme))
        if tok.kind == "identifier":
            if tok.lexeme == "x":
                return X
            if tok.lexeme not in FUNCTIONS:
                raise ParseError(f"unknown name {tok.lexeme!r}", pos)
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(tok.lexeme, arg)
        if tok.lexeme == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {tok.lexeme!r}", pos)


def parse(tokens: list[Token] | str) -> Node:
    """Parse a token list (or a source string) into a tree."""
    if isinstance(tokens, str):
        source = tokens
        tokens = tokenize(source)
        end = len(source)
    else:
        end = tokens[-1].position + len(tokens[-1].lexeme) if tokens else 0
    if not tokens:
        raise ParseError("empty expression", 0)
    parser = _Parser(tokens, end)
    node = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"unexpected {parser.peek().lexeme!r}", parser.here())
    return node


def to_source(node: Node) -> str:
    """Render a tree back to text; every compound node is parenthesised."""
    if isinstance(node, Const):
        text = repr(float(node.value))
        return f"(-{text[1:]})" if text.startswith("-") else text
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, Call):
        return f"{node.name}({to_source(node.arg)})"
    return f"({to_source(node.left)} {node.op} {to_source(node.right)})"


# -------------------------------------------------------------- evaluation

def _is_integral(v) -> bool:
    return bool(np.all(np.isfinite(v)) and np.all(v == np.round(v)))


def _fail(message: str, node: Node, where) -> DomainError:
    point = None
    if np.ndim(where) == 0:
        point = float(where)
    return DomainError(f"{message} in {to_source(node)}", node=node, point=point)


def _eval(node: Node, x):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    if isinstance(node, Call):
        u = _eval(node.arg, x)
        name = node.name
        if name == "ln":
            if np.any(u <= 0):
                raise _fail("logarithm of a non-positive value", node, x)
            return np.log(u)
        if name == "sqrt":
            if np.any(u < 0):
                raise _fail("square root of a negative value", node, x)
            return np.sqrt(u)
        if name == "exp":
            return np.exp(u)
        if name == "sin":
            return np.sin(u)
        if name == "cos":
            return np.cos(u)
        if name == "abs":
            return np.abs(u)
        if name == "sign":
            return np.sign(u)
        raise _fail(f"unknown function {name!r}", node, x)

    u = _eval(node.left, x)
    v = _eval(node.right, x)
    op = node.op
    if op == "+":
        return u + v
    if op == "-":
        return u - v
    if op == "*":
        return u * v
    if op == "/":
        if np.any(v == 0):
            raise _fail("division by zero", node, x)
        return u / v
    # power
    if _is_integral(v):
        if np.any((u == 0) & (v < 0)):
            raise _fail("zero raised to a negative power", node, x)
        return np.power(u, v)
    if np.any(u < 0) or np.any((u == 0) & (v <= 0)):
        raise _fail("non-integer power of a non-positive base", node, x)
    return np.power(u, v)


def evaluate(node: Node, x):
    """Evaluate ``node`` at ``x`` (float or numpy array).

    Raises :class:`DomainError` naming the sub-expression that left its
    domain. Scalars in give Python floats out.
    """
    scalar = np.ndim(x) == 0
    xv = float(x) if scalar else np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(node, xv)
    if scalar:
        return float(out)
    return np.broadcast_to(np.asarray(out, dtype=float), np.shape(xv)).copy()


# --------------------------------------------------------- differentiation

def _c(value: float) -> Const:
    return Const(float(value))


def _add(u: Node, v: Node) -> Node:
    if u == _c(0):
        return v
    if v == _c(0):
        return u
    if isinstance(u, Const) and isinstance(v, Const):
        return _c(u.value + v.value)
    return BinOp("+", u, v)


def _sub(u: Node, v: Node) -> Node:
    if v == _c(0):
        return u
    if u == _c(0):
        return _neg(v)
    if isinstance(u, Const) and isinstance(v, Const):
        return _c(u.value - v.value)
    return BinOp("-", u, v)


def _neg(u: Node) -> Node:
    if isinstance(u, Const):
        return _c(-u.value)
    if isinstance(u, Neg):
        return u.operand
    return Neg(u)


def _mul(u: Node, v: Node) -> Node:
    if u == _c(0) or v == _c(0):
        return _c(0)
    if u == _c(1):
        return v
    if v == _c(1):
        return u
    if isinstance(u, Const) and isinstance(v, Const):
        return _c(u.value * v.value)
    return BinOp("*", u, v)


def _div(u: Node, v: Node) -> Node:
    if u == _c(0):
        return _c(0)
    if v == _c(1):
        return u
    return BinOp("/", u, v)


def differentiate(node: Node) -> Node:
    """d/dx of ``node``. ``abs`` differentiates to ``sign(u)*u'`` with sign(0)=0."""
    if isinstance(node, Const):
        return _c(0)
    if isinstance(node, Var):
        return _c(1)
    if isinstance(node, Neg):
        return _neg(differentiate(node.operand))
    if isinstance(node, Call):
        u = node.arg
        du = differentiate(u)
        name = node.name
        if name == "ln":
            outer = _div(_c(1), u)
        elif name == "exp":
            outer = node
        elif name == "sin":
            outer = Call("cos", u)
        elif name == "cos":
            outer = _neg(Call("sin", u))
        elif name == "sqrt":
            outer = _div(_c(1), _mul(_c(2), node))
        elif name == "abs":
            outer = Call("sign", u)
        elif name == "sign":
            outer = _c(0)
        else:
            raise ValueError(f"cannot differentiate {name!r}")
        return _mul(outer, du)

    u, v = node.left, node.right
    du, dv = differentiate(u), differentiate(v)
    op = node.op
    if op == "+":
        return _add(du, dv)
    if op == "-":
        return _sub(du, dv)
    if op == "*":
        return _add(_mul(du, v), _mul(u, dv))
    if op == "/":
        return _div(_sub(_mul(du, v), _mul(u, dv)), BinOp("^", v, _c(2)))
    # power
    if not depends_on_x(v):
        if v == _c(0):
            return _c(0)
        return _mul(_mul(v, BinOp("^", u, _sub(v, _c(1)))), du)
    if not depends_on_x(u):
        return _mul(_mul(node, Call("ln", u)), dv)
    return _mul(node, _add(_mul(dv, Call("ln", u)), _div(_mul(v, du), u)))


def compile_source(source: str) -> Node:
    return parse(tokenize(source))
