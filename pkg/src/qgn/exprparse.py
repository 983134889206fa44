"""Recursive-descent parser and evaluator for residual expressions.

Grammar (whitespace is insignificant)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := primary ('^' factor)?
    primary := number | variable | func '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so
``-x1^2`` is ``-(x1^2)`` and ``2^-x1`` is ``2^(-x1)``. Variables are
``x1 .. xn`` (1-based); functions are exp, sin, cos, ln, sqrt, abs.
There is no implicit multiplication.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ExprSyntaxError, UnknownIdentifierError, VariableIndexError
from .model import ResidualProblem

FUNCTIONS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "ln": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call]


# --------------------------------------------------------------------------
# tokenizer
# --------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # number, ident, op, end
    text: str
    offset: int  # byte offset into the source


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    byte = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", byte)
        text = m.group()
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, text, byte))
        pos = m.end()
        byte += len(text.encode("utf-8"))
    tokens.append(Token("end", "", byte))
    return tokens


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

_PRIMARY_START = frozenset({"number", "variable", "function", "("})
_OPERAND_START = _PRIMARY_START | {"-"}


class _Parser:
    def __init__(self, source: str, n: int):
        self.tokens = tokenize(source)
        self.pos = 0
        self.n = n

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def accept(self, *ops: str) -> bool:
        if self.tok.kind == "op" and self.tok.text in ops:
            self.pos += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            raise ExprSyntaxError(self._found(), self.tok.offset, frozenset({op}))

    def _found(self) -> str:
        return "unexpected end of input" if self.tok.kind == "end" else f"unexpected {self.tok.text!r}"

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(self._found(), self.tok.offset, frozenset({"+", "-", "*", "/", "^", "end of input"}))
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.pos += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.pos += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.accept("-"):
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.accept("^"):
            return BinOp("^", base, self.factor())
        return base

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.pos += 1
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.pos += 1
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            m = re.fullmatch(r"x(\d+)", tok.text)
            if m is None:
                raise UnknownIdentifierError(tok.text, tok.offset)
            index = int(m.group(1))
            if not 1 <= index <= self.n:
                raise VariableIndexError(tok.text, self.n, tok.offset)
            return Var(index)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(self._found(), tok.offset, _OPERAND_START)


def parse(source: str, n: int) -> Expr:
    """Parse ``source`` into an AST over variables x1..xn."""
    return _Parser(source, n).parse()


# --------------------------------------------------------------------------
# evaluation and printing
# --------------------------------------------------------------------------

def _eval(node: Expr, x) -> np.float64:
    if isinstance(node, Num):
        return np.float64(node.value)
    if isinstance(node, Var):
        return np.float64(x[node.index - 1])
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](_eval(node.arg, x))
    a, b = _eval(node.left, x), _eval(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return np.power(a, b)


def evaluate(node: Expr, x: Sequence[float]) -> float:
    """Evaluate with IEEE semantics: division by zero and domain errors
    give inf/nan instead of raising."""
    with np.errstate(all="ignore"):
        return float(_eval(node, x))


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}
_ATOM = 5


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    return _ATOM


def to_source(node: Expr) -> str:
    """Render an AST as text that parses back to the same tree."""
    def wrap(child: Expr, parens: bool) -> str:
        s = to_source(child)
        return f"({s})" if parens else s

    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        return "-" + wrap(node.operand, _prec(node.operand) < _PREC["neg"])
    p = _PREC[node.op]
    if node.op == "^":
        left = wrap(node.left, _prec(node.left) < _ATOM)
        right = wrap(node.right, _prec(node.right) < _PREC["neg"])
        return f"{left}^{right}"
    left = wrap(node.left, _prec(node.left) < p)
    right = wrap(node.right, _prec(node.right) <= p)
    return f"{left} {node.op} {right}"


# --------------------------------------------------------------------------
# problems built from text
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ParsedProblem:
    n: int
    exprs: tuple[Expr, ...]
    name: str = "parsed"
    sources: tuple[str, ...] = ()
    x0: tuple[float, ...] | None = None

    @property
    def m(self) -> int:
        return len(self.exprs)

    @classmethod
    def from_sources(cls, sources: Sequence[str], n: int, name: str = "parsed", x0=None) -> "ParsedProblem":
        exprs = tuple(parse(s, n) for s in sources)
        return cls(n, exprs, name, tuple(sources), None if x0 is None else tuple(float(v) for v in x0))


def to_vector_field(p: ParsedProblem) -> ResidualProblem:
    """Wrap parsed expressions as a ResidualProblem (numeric q-Jacobian, no guard)."""
    exprs = p.exprs

    def residuals(x):
        return np.array([evaluate(e, x) for e in exprs])

    return ResidualProblem(
        name=p.name,
        n=p.n,
        m=p.m,
        residuals=residuals,
        x0=p.x0,
        description="; ".join(p.sources),
    )
