"""Univariate real expressions in ``t``: parse, evaluate, differentiate, print.

Grammar (whitespace-insensitive)::

    expr   := term { ("+" | "-") term }
    term   := unary { ("*" | "/") unary }
    unary  := "-" unary | power
    power  := atom [ "^" unary ]              right-associative
    atom   := NUMBER | "t" | "x" | "pi" | "e" | FUNC "(" expr ")" | "(" expr ")"

Unary minus binds looser than ``^`` so ``-t^2`` is ``-(t^2)``, while an
exponent may itself carry a sign (``2^-3``).

Trees are immutable. :func:`evaluate` is the reference semantics (IEEE
propagation of nan/inf, never raises) and works on floats or numpy arrays.
:func:`compile_expr` produces a fast scalar callable with the same semantics.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import ParseError

__all__ = [
    "Const",
    "Var",
    "Unary",
    "Binary",
    "ExprNode",
    "FUNCTIONS",
    "parse",
    "evaluate",
    "compile_expr",
    "differentiate",
    "simplify",
    "to_text",
]

FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "atan")
_UNARY_OPS = ("neg",) + FUNCTIONS
_BINARY_OPS = ("add", "sub", "mul", "div", "pow")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Unary:
    op: str
    child: "ExprNode"

    def __post_init__(self):
        if self.op not in _UNARY_OPS:
            raise ValueError(f"unknown unary operator {self.op!r}")


@dataclass(frozen=True)
class Binary:
    op: str
    left: "ExprNode"
    right: "ExprNode"
    # set for pow nodes whose exponent is an integer-valued constant
    int_exponent: int | None = field(default=None, init=False, compare=False)

    def __post_init__(self):
        if self.op not in _BINARY_OPS:
            raise ValueError(f"unknown binary operator {self.op!r}")
        if self.op == "pow" and isinstance(self.right, Const):
            v = self.right.value
            if math.isfinite(v) and v == int(v):
                object.__setattr__(self, "int_exponent", int(v))


ExprNode = Union[Const, Var, Unary, Binary]

T = Var()
ZERO = Const(0.0)
ONE = Const(1.0)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d+)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(pos, f"unexpected character {source[pos]!r}")
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, value, pos = self.take()
        if value != text:
            found = "end of input" if kind == "end" else repr(value)
            raise ParseError(pos, f"expected {text!r}, found {found}")

    def expr(self) -> ExprNode:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = "add" if self.take()[1] == "+" else "sub"
            node = Binary(op, node, self.term())
        return node

    def term(self) -> ExprNode:
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = "mul" if self.take()[1] == "*" else "div"
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> ExprNode:
        if self.peek()[1] == "-":
            self.take()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> ExprNode:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return Binary("pow", base, self.unary())
        return base

    def atom(self) -> ExprNode:
        kind, value, pos = self.take()
        if kind == "num":
            v = float(value)
            if not math.isfinite(v):
                raise ParseError(pos, f"numeric literal {value!r} overflows")
            return Const(v)
        if kind == "name":
            if value in ("t", "x"):
                return T
            if value == "pi":
                return Const(math.pi)
            if value == "e":
                return Const(math.e)
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(value, arg)
            raise ParseError(pos, f"unknown name {value!r}")
        if value == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ParseError(pos, "unexpected end of input")
        raise ParseError(pos, f"unexpected token {value!r}")


def parse(source: str) -> ExprNode:
    """Parse *source* into an expression tree.

    Raises :class:`ParseError` on unknown tokens or names, unbalanced
    parentheses and trailing input.
    """
    if not source or not source.strip():
        raise ParseError(0, "empty expression")
    p = _Parser(source)
    node = p.expr()
    kind, value, pos = p.peek()
    if kind != "end":
        if value == ")":
            raise ParseError(pos, "unbalanced ')'")
        raise ParseError(pos, f"unexpected trailing input {value!r}")
    return node


# ---------------------------------------------------------------------------
# evaluation

_NP_UNARY = {
    "neg": np.negative,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
    "atan": np.arctan,
}
_NP_BINARY = {
    "add": np.add,
    "sub": np.subtract,
    "mul": np.multiply,
    "div": np.divide,
    "pow": np.power,
}


def _eval_np(e: ExprNode, t):
    if isinstance(e, Const):
        return np.float64(e.value)
    if isinstance(e, Var):
        return t
    if isinstance(e, Unary):
        return _NP_UNARY[e.op](_eval_np(e.child, t))
    return _NP_BINARY[e.op](_eval_np(e.left, t), _eval_np(e.right, t))


_MATH_UNARY = {
    "neg": operator.neg,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
    "atan": math.atan,
}
_MATH_BINARY = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
    "pow": math.pow,
}


def _eval_scalar(e: ExprNode, t: float) -> float:
    # same float operations as the compiled form; numpy only where math raises
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return t
    if isinstance(e, Unary):
        x = _eval_scalar(e.child, t)
        try:
            return _MATH_UNARY[e.op](x)
        except (ArithmeticError, ValueError):
            with np.errstate(all="ignore"):
                return float(_NP_UNARY[e.op](np.float64(x)))
    a = _eval_scalar(e.left, t)
    b = _eval_scalar(e.right, t)
    try:
        if e.int_exponent is not None:
            return a ** e.int_exponent
        return _MATH_BINARY[e.op](a, b)
    except (ArithmeticError, ValueError):
        with np.errstate(all="ignore"):
            return float(_NP_BINARY[e.op](np.float64(a), np.float64(b)))


def evaluate(e: ExprNode, t):
    """Evaluate *e* at *t* (a float or an array).

    Out-of-domain operations yield nan or inf instead of raising.
    """
    if np.ndim(t) == 0:
        return float(_eval_scalar(e, float(t)))
    with np.errstate(all="ignore"):
        out = _eval_np(e, np.asarray(t, dtype=float))
    return np.broadcast_to(out, np.shape(t)).astype(float)


_PY_UNARY = {
    "neg": "(-{})",
    "sin": "_m.sin({})",
    "cos": "_m.cos({})",
    "tan": "_m.tan({})",
    "exp": "_m.exp({})",
    "ln": "_m.log({})",
    "sqrt": "_m.sqrt({})",
    "atan": "_m.atan({})",
}
_PY_BINARY = {"add": "+", "sub": "-", "mul": "*", "div": "/"}


def _to_python(e: ExprNode) -> str:
    if isinstance(e, Const):
        return f"({e.value!r})"
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Unary):
        return _PY_UNARY[e.op].format(_to_python(e.child))
    left, right = _to_python(e.left), _to_python(e.right)
    if e.op == "pow":
        if e.int_exponent is not None:
            return f"({left}**{e.int_exponent})"
        return f"_m.pow({left}, {right})"
    return f"({left}{_PY_BINARY[e.op]}{right})"


def compile_expr(e: ExprNode) -> Callable[[float], float]:
    """Return a fast scalar callable equivalent to ``evaluate(e, t)``.

    Python's math module raises where IEEE arithmetic returns nan/inf; those
    points fall back to :func:`evaluate`. Results are bitwise identical to
    scalar :func:`evaluate`.
    """
    code = f"lambda t: {_to_python(e)}"
    fast = eval(code, {"_m": math, "__builtins__": {}})

    def fn(t: float) -> float:
        try:
            return float(fast(t))
        except (ArithmeticError, ValueError, TypeError):
            return evaluate(e, t)

    fn.__doc__ = to_text(e)
    return fn


# ---------------------------------------------------------------------------
# printing

_TEXT_BINARY = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}


def to_text(e: ExprNode) -> str:
    """Fully parenthesized text that :func:`parse` maps back to *e*'s value."""
    if isinstance(e, Const):
        text = repr(e.value)
        return f"({text})" if e.value < 0 or text.startswith("-") else text
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{to_text(e.child)})"
        return f"{e.op}({to_text(e.child)})"
    return f"({to_text(e.left)}{_TEXT_BINARY[e.op]}{to_text(e.right)})"


# ---------------------------------------------------------------------------
# simplification and differentiation


def _is_const(e: ExprNode, value: float | None = None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


def _fold(e: Unary | Binary) -> ExprNode:
    value = evaluate(e, 0.0)
    if math.isfinite(value):
        return Const(value)
    return e


def simplify(e: ExprNode) -> ExprNode:
    """Apply constant folding and the identities x+0, x*1, x*0, x^1, x^0.

    ``0^0`` is left as written. Folds producing non-finite values are skipped.
    """
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Unary):
        child = simplify(e.child)
        node = Unary(e.op, child)
        return _fold(node) if _is_const(child) else node

    left, right = simplify(e.left), simplify(e.right)
    op = e.op
    if op == "pow" and _is_const(left, 0.0) and _is_const(right, 0.0):
        return Binary(op, left, right)
    if _is_const(left) and _is_const(right):
        return _fold(Binary(op, left, right))
    if op == "add":
        if _is_const(left, 0.0):
            return right
        if _is_const(right, 0.0):
            return left
    elif op == "sub":
        if _is_const(right, 0.0):
            return left
    elif op == "mul":
        if _is_const(left, 0.0) or _is_const(right, 0.0):
            return ZERO
        if _is_const(left, 1.0):
            return right
        if _is_const(right, 1.0):
            return left
    elif op == "pow":
        if _is_const(right, 1.0):
            return left
        if _is_const(right, 0.0):
            return ONE
    return Binary(op, left, right)


def _d(e: ExprNode) -> ExprNode:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Unary):
        u = e.child
        du = _d(u)
        op = e.op
        if op == "neg":
            return Unary("neg", du)
        if op == "sin":
            outer = Unary("cos", u)
        elif op == "cos":
            outer = Unary("neg", Unary("sin", u))
        elif op == "tan":
            outer = Binary("div", ONE, Binary("pow", Unary("cos", u), Const(2.0)))
        elif op == "exp":
            outer = e
        elif op == "ln":
            return Binary("div", du, u)
        elif op == "sqrt":
            return Binary("div", du, Binary("mul", Const(2.0), e))
        else:  # atan
            return Binary("div", du, Binary("add", ONE, Binary("pow", u, Const(2.0))))
        return Binary("mul", outer, du)

    u, v = e.left, e.right
    du, dv = _d(u), _d(v)
    op = e.op
    if op in ("add", "sub"):
        return Binary(op, du, dv)
    if op == "mul":
        return Binary("add", Binary("mul", du, v), Binary("mul", u, dv))
    if op == "div":
        num = Binary("sub", Binary("mul", du, v), Binary("mul", u, dv))
        return Binary("div", num, Binary("pow", v, Const(2.0)))
    n = e.int_exponent
    if n is not None:
        power = Binary("pow", u, Const(float(n - 1)))
        return Binary("mul", Binary("mul", Const(float(n)), power), du)
    # u^v = exp(v ln u), valid for u > 0
    inner = Binary(
        "add",
        Binary("mul", dv, Unary("ln", u)),
        Binary("mul", v, Binary("div", du, u)),
    )
    return Binary("mul", e, inner)


def differentiate(e: ExprNode) -> ExprNode:
    """Exact symbolic derivative with respect to ``t``, simplified."""
    return simplify(_d(e))
