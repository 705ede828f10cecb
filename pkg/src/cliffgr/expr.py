"""Arithmetic expressions for metric components.

Grammar, loosest binding first::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := "-" unary | power
    power := atom ("^" unary)?          # right associative
    atom  := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

There is no implicit multiplication. Evaluation works on plain floats or on
jet arrays, so one parse serves both values and derivatives.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from . import jet

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "abs")
CONSTANTS = {"pi": math.pi}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


class ParseError(ValueError):
    """Syntax error at a byte offset, with the set of tokens that would fit."""

    def __init__(self, offset: int, expected: frozenset[str], text: str = ""):
        self.offset = offset
        self.expected = expected
        exp = ", ".join(sorted(expected))
        super().__init__(f"syntax error at offset {offset}: expected one of {exp}" + (f" in {text!r}" if text else ""))


class EvalDomainError(ValueError):
    """A function left its real domain; `span` locates the sub-expression."""

    def __init__(self, message: str, span: tuple[int, int], source: str = ""):
        self.span = span
        self.source = source
        where = source[span[0] : span[1]] if source else ""
        super().__init__(f"{message} at {span[0]}..{span[1]}" + (f" ({where!r})" if where else ""))


@dataclass(frozen=True)
class Node:
    span: tuple[int, int] = field(compare=False)


@dataclass(frozen=True)
class Num(Node):
    value: float = 0.0


@dataclass(frozen=True)
class Var(Node):
    name: str = ""


@dataclass(frozen=True)
class Neg(Node):
    arg: Node = None


@dataclass(frozen=True)
class BinOp(Node):
    op: str = "+"
    left: Node = None
    right: Node = None


@dataclass(frozen=True)
class Call(Node):
    func: str = ""
    arg: Node = None


@dataclass(frozen=True)
class Expr:
    """A parsed expression together with its source text."""

    root: Node
    source: str

    def __str__(self) -> str:
        return to_string(self.root)

    def variables(self) -> set[str]:
        return free_vars(self.root)

    def evaluate(self, env: Mapping[str, object]):
        return evaluate(self, env)


# ------------------------------------------------------------------ lexing


@dataclass
class _Tok:
    kind: str  # "num", "name", "op", "end"
    text: str
    start: int
    end: int


def _lex(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            toks.append(_Tok("end", "", len(src), len(src)))
            return toks
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(pos, frozenset({"number", "name", "operator"}), src)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind), m.end()))
        pos = m.end()


_ATOM_START = frozenset({"number", "name", "(", "-"})


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _lex(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _is(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def _fail(self, expected) -> ParseError:
        return ParseError(self.tok.start, frozenset(expected), self.src)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise self._fail({"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._is("+") or self._is("-"):
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            node = BinOp((node.span[0], rhs.span[1]), op, node, rhs)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self._is("*") or self._is("/"):
            op = self.tok.text
            self.i += 1
            rhs = self.unary()
            node = BinOp((node.span[0], rhs.span[1]), op, node, rhs)
        return node

    def unary(self) -> Node:
        if self._is("-"):
            start = self.tok.start
            self.i += 1
            arg = self.unary()
            return Neg((start, arg.span[1]), arg)
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self._is("^"):
            self.i += 1
            exp = self.unary()
            return BinOp((base.span[0], exp.span[1]), "^", base, exp)
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num((t.start, t.end), float(t.text))
        if t.kind == "name":
            self.i += 1
            if t.text in FUNCTIONS:
                if not self._is("("):
                    raise self._fail({"("})
                self.i += 1
                arg = self.expr()
                if not self._is(")"):
                    raise self._fail({")", "+", "-", "*", "/", "^"})
                end = self.tok.end
                self.i += 1
                return Call((t.start, end), t.text, arg)
            return Var((t.start, t.end), t.text)
        if self._is("("):
            start = t.start
            self.i += 1
            inner = self.expr()
            if not self._is(")"):
                raise self._fail({")", "+", "-", "*", "/", "^"})
            end = self.tok.end
            self.i += 1
            return _respan(inner, (start, end))
        raise self._fail(_ATOM_START)


def _respan(node: Node, span: tuple[int, int]) -> Node:
    """Widen a parenthesised node's span to include the brackets."""
    kw = {k: getattr(node, k) for k in node.__dataclass_fields__ if k != "span"}
    return type(node)(span, **kw)


def parse(src: str) -> Expr:
    return Expr(_Parser(src).parse(), src)


# ----------------------------------------------------------------- printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    return _PREC["atom"]


def _fmt_num(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def to_string(node: Node) -> str:
    """Print with the fewest parentheses that reparse to the same tree."""

    def wrap(child: Node, need: int) -> str:
        s = to_string(child)
        return f"({s})" if _prec(child) < need else s

    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_string(node.arg)})"
    if isinstance(node, Neg):
        return "-" + wrap(node.arg, _PREC["neg"])
    if isinstance(node, BinOp):
        if node.op in "+-":
            return f"{wrap(node.left, 1)} {node.op} {wrap(node.right, 2)}"
        if node.op in "*/":
            return f"{wrap(node.left, 2)}{node.op}{wrap(node.right, 3)}"
        return f"{wrap(node.left, 5)}^{wrap(node.right, 3)}"
    raise TypeError(f"unknown node {node!r}")


def free_vars(node: Node) -> set[str]:
    if isinstance(node, Var):
        return set() if node.name in CONSTANTS else {node.name}
    if isinstance(node, (Neg, Call)):
        return free_vars(node.arg)
    if isinstance(node, BinOp):
        return free_vars(node.left) | free_vars(node.right)
    return set()


def is_zero(e: Expr) -> bool:
    """True for a literal zero, possibly negated or parenthesised."""
    node = e.root
    while isinstance(node, Neg):
        node = node.arg
    return isinstance(node, Num) and node.value == 0.0


# --------------------------------------------------------------- evaluation

Value = Union[float, np.ndarray]

_JET_FUNCS = {
    "sin": jet.sin,
    "cos": jet.cos,
    "tan": jet.tan,
    "exp": jet.exp,
    "log": jet.log,
    "sqrt": jet.sqrt,
    "sinh": jet.sinh,
    "cosh": jet.cosh,
    "abs": jet.absolute,
}
_FLOAT_FUNCS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "abs": abs,
}


def _lead(v: Value) -> np.ndarray:
    """Point value(s); a batch of jets gives one value per batch entry."""
    return np.asarray(v, dtype=float) if np.ndim(v) == 0 else np.asarray(v)[..., 0]


def _check_domain(func: str, v: Value, node: Node, src: str) -> None:
    x = _lead(v)
    if func == "log":
        bad = x <= 0.0
    elif func == "sqrt":
        bad = x < 0.0
    elif func == "tan":
        bad = np.abs(np.cos(x)) < 1e-300
    else:
        return
    if np.any(bad):
        worst = float(np.asarray(x)[bad].flat[0]) if np.ndim(x) else float(x)
        raise EvalDomainError(f"{func} argument {worst!r} outside domain", node.span, src)


def _is_int(v: Value) -> bool:
    return np.ndim(v) == 0 and float(v) == int(v) and abs(v) <= 64


def _eval(node: Node, env: Mapping[str, Value], src: str) -> Value:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name in env:
            return env[node.name]
        if node.name in CONSTANTS:
            return CONSTANTS[node.name]
        raise EvalDomainError(f"unbound name {node.name!r}", node.span, src)
    if isinstance(node, Neg):
        return -_eval(node.arg, env, src)
    if isinstance(node, Call):
        v = _eval(node.arg, env, src)
        _check_domain(node.func, v, node.arg, src)
        try:
            if np.ndim(v) == 0:
                return _FLOAT_FUNCS[node.func](float(v))
            return _JET_FUNCS[node.func](v)
        except (jet.DomainError, ValueError) as exc:
            raise EvalDomainError(str(exc), node.arg.span, src) from None
    if isinstance(node, BinOp):
        a = _eval(node.left, env, src)
        b = _eval(node.right, env, src)
        if node.op == "+":
            return a + b if np.ndim(a) == 0 and np.ndim(b) == 0 else jet.add(a, b)
        if node.op == "-":
            return a - b if np.ndim(a) == 0 and np.ndim(b) == 0 else jet.sub(a, b)
        if node.op == "*":
            return a * b if np.ndim(a) == 0 and np.ndim(b) == 0 else jet.mul(a, b)
        if node.op == "/":
            if np.any(_lead(b) == 0.0):
                raise EvalDomainError("division by zero", node.right.span, src)
            if np.ndim(a) == 0 and np.ndim(b) == 0:
                return a / b
            return jet.div(a, b)
        # Power: integers by repeated multiplication, otherwise exp(e log b).
        if _is_int(b):
            n = int(b)
            if np.ndim(a) == 0:
                if a == 0.0 and n < 0:
                    raise EvalDomainError("zero to a negative power", node.left.span, src)
                return float(a) ** n
            if n < 0 and np.any(_lead(a) == 0.0):
                raise EvalDomainError("zero to a negative power", node.left.span, src)
            return jet.powi(a, n)
        if np.any(_lead(a) <= 0.0):
            raise EvalDomainError("real power of a non-positive base", node.left.span, src)
        if np.ndim(a) == 0 and np.ndim(b) == 0:
            return math.exp(b * math.log(a))
        la = math.log(a) if np.ndim(a) == 0 else jet.log(a)
        prod = la * b if np.ndim(la) == 0 else jet.mul(la, b)
        return math.exp(prod) if np.ndim(prod) == 0 else jet.exp(prod)
    raise TypeError(f"unknown node {node!r}")


def evaluate(e: Expr, env: Mapping[str, Value]) -> Value:
    """Evaluate with names bound to floats or jet arrays."""
    return _eval(e.root, env, e.source)


def eval_jet(e: Expr, env: Mapping[str, Value], order: int) -> np.ndarray:
    """Evaluate to a jet array of the given order, promoting constants."""
    v = evaluate(e, env)
    if np.ndim(v) == 0:
        return jet.constant(float(v), order)
    if jet.order_of(v) < order:
        raise ValueError("expression evaluated below the requested order")
    return jet.truncate(v, order)


__all__ = [
    "EvalDomainError",
    "Expr",
    "FUNCTIONS",
    "ParseError",
    "eval_jet",
    "evaluate",
    "free_vars",
    "is_zero",
    "parse",
    "to_string",
]
