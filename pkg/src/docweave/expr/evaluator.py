"""Expression evaluation with IEEE-754 double semantics.

Python's ``math`` module raises on many inputs that IEEE doubles define
(``math.sqrt(-1)``, ``1.0/0.0``, ``math.pow`` overflow).  Widgets evaluate the
same formulas client side, where JavaScript follows the IEEE conventions, so
every primitive here is wrapped to produce the value JavaScript would: division
by zero gives a signed infinity, ``0/0`` gives NaN, ``sqrt``/``log`` of
out-of-domain inputs give NaN rather than raising, and comparisons involving
NaN are false.  ``round(x)`` is defined as ``floor(x + 0.5)`` in both runtimes.
"""

from __future__ import annotations

import math
from typing import Mapping

from .nodes import (
    ARITHMETIC_OPS,
    BOOLEAN_OPS,
    CONSTANTS,
    Binary,
    Bool,
    Call,
    Const,
    Expr,
    Num,
    Span,
    Unary,
    Var,
)

__all__ = [
    "Env",
    "EvalError",
    "KindMismatch",
    "UnboundVariable",
    "eval_expr",
    "kind_of",
]

Env = Mapping[str, "float | bool"]


class EvalError(ValueError):
    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span


class UnboundVariable(EvalError):
    def __init__(self, name: str, span: Span | None = None):
        super().__init__(f"unbound variable {name!r}", span)
        self.name = name


class KindMismatch(EvalError):
    """A boolean where a number was needed, or vice versa."""


# --- IEEE-754 primitives (matching JavaScript's Math.*) ---


def _div(a: float, b: float) -> float:
    if b != 0.0:
        return a / b
    if a != a or a == 0.0:
        return math.nan
    return math.copysign(1.0, b) * math.copysign(math.inf, a)


def _is_odd_integer(x: float) -> bool:
    return math.isfinite(x) and x == int(x) and int(x) % 2 != 0


def _pow(a: float, b: float) -> float:
    # Rule order follows ECMAScript Number::exponentiate.
    if b != b:
        return math.nan
    if b == 0.0:
        return 1.0
    if a != a:
        return math.nan
    if math.isinf(a):
        if a > 0:
            return math.inf if b > 0 else 0.0
        if b > 0:
            return -math.inf if _is_odd_integer(b) else math.inf
        return -0.0 if _is_odd_integer(b) else 0.0
    if a == 0.0:
        negative_zero = math.copysign(1.0, a) < 0
        if b > 0:
            return -0.0 if negative_zero and _is_odd_integer(b) else 0.0
        if negative_zero and _is_odd_integer(b):
            return -math.inf
        return math.inf
    if math.isinf(b):
        if abs(a) == 1.0:
            return math.nan
        if abs(a) > 1.0:
            return math.inf if b > 0 else 0.0
        return 0.0 if b > 0 else math.inf
    if a < 0 and b != int(b):
        return math.nan
    try:
        return math.pow(a, b)
    except OverflowError:
        sign = -1.0 if (a < 0 and _is_odd_integer(b)) else 1.0
        return math.copysign(math.inf, sign)


def _sqrt(x: float) -> float:
    if x < 0:
        return math.nan
    return math.sqrt(x)


def _log(x: float) -> float:
    if x != x:
        return math.nan
    if x == 0.0:
        return -math.inf
    if x < 0:
        return math.nan
    return math.log(x)


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _trig(fn):
    def wrapped(x: float) -> float:
        if not math.isfinite(x):
            return math.nan
        return fn(x)

    return wrapped


def _floor(x: float) -> float:
    if not math.isfinite(x):
        return x
    return float(math.floor(x))


def _round(x: float) -> float:
    # floor(x + 0.5): the one rounding rule both runtimes state explicitly.
    if not math.isfinite(x):
        return x
    return float(math.floor(x + 0.5))


def _min(a: float, b: float) -> float:
    if a != a or b != b:
        return math.nan
    return a if a < b else b


def _max(a: float, b: float) -> float:
    if a != a or b != b:
        return math.nan
    return a if a > b else b


_IMPLS = {
    "sin": _trig(math.sin),
    "cos": _trig(math.cos),
    "tan": _trig(math.tan),
    "sqrt": _sqrt,
    "abs": abs,
    "exp": _exp,
    "log": _log,
    "min": _min,
    "max": _max,
    "floor": _floor,
    "round": _round,
}


def _need_number(value: "float | bool", span: Span | None, what: str) -> float:
    if isinstance(value, bool):
        raise KindMismatch(f"{what} needs a number, got a boolean", span)
    return value


def _need_bool(value: "float | bool", span: Span | None, what: str) -> bool:
    if not isinstance(value, bool):
        raise KindMismatch(f"{what} needs a boolean, got a number", span)
    return value


def eval_expr(e: Expr, env: Env) -> "float | bool":
    """Evaluate ``e`` under ``env``.

    Raises :class:`UnboundVariable` for names missing from ``env`` and
    :class:`KindMismatch` when an operator receives the wrong kind of operand.
    Never raises on numeric edge cases: those produce NaN or infinities.
    """

    if isinstance(e, Num):
        return e.value
    if isinstance(e, Bool):
        return e.value
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Var):
        if e.name not in env:
            raise UnboundVariable(e.name, e.span)
        value = env[e.name]
        if isinstance(value, bool):
            return value
        if isinstance(value, (int, float)):
            return float(value)
        raise KindMismatch(f"variable {e.name!r} is bound to a non-scalar", e.span)
    if isinstance(e, Unary):
        value = eval_expr(e.operand, env)
        if e.op == "neg":
            return -_need_number(value, e.span, "negation")
        return not _need_bool(value, e.span, "'not'")
    if isinstance(e, Binary):
        left = eval_expr(e.left, env)
        right = eval_expr(e.right, env)
        op = e.op
        if op in ARITHMETIC_OPS:
            a = _need_number(left, e.span, f"{op!r}")
            b = _need_number(right, e.span, f"{op!r}")
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "/":
                return _div(a, b)
            return _pow(a, b)
        if op in BOOLEAN_OPS:
            a = _need_bool(left, e.span, f"{op!r}")
            b = _need_bool(right, e.span, f"{op!r}")
            return (a and b) if op == "and" else (a or b)
        if op in ("==", "!="):
            if isinstance(left, bool) != isinstance(right, bool):
                raise KindMismatch(f"{op!r} operands must have the same kind", e.span)
            return (left == right) if op == "==" else (left != right)
        a = _need_number(left, e.span, f"{op!r}")
        b = _need_number(right, e.span, f"{op!r}")
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        return a >= b
    if isinstance(e, Call):
        args = [
            _need_number(eval_expr(arg, env), arg.span, f"argument of {e.func}")
            for arg in e.args
        ]
        return _IMPLS[e.func](*args)
    raise TypeError(f"not an expression node: {e!r}")


def kind_of(e: Expr, var_kinds: Mapping[str, str]) -> str:
    """Infer ``"number"`` or ``"boolean"`` without evaluating.

    ``var_kinds`` maps each variable name to its kind.  Raises
    :class:`UnboundVariable` on undeclared names and :class:`KindMismatch` on
    ill-kinded trees.
    """

    if isinstance(e, Num):
        return "number"
    if isinstance(e, Bool):
        return "boolean"
    if isinstance(e, Const):
        return "number"
    if isinstance(e, Var):
        kind = var_kinds.get(e.name)
        if kind is None:
            raise UnboundVariable(e.name, e.span)
        return kind
    if isinstance(e, Unary):
        got = kind_of(e.operand, var_kinds)
        want = "number" if e.op == "neg" else "boolean"
        if got != want:
            raise KindMismatch(f"{e.op!r} needs a {want}, got a {got}", e.span)
        return want
    if isinstance(e, Binary):
        left = kind_of(e.left, var_kinds)
        right = kind_of(e.right, var_kinds)
        op = e.op
        if op in ARITHMETIC_OPS:
            want = "number"
        elif op in BOOLEAN_OPS:
            want = "boolean"
        elif op in ("==", "!="):
            if left != right:
                raise KindMismatch(f"{op!r} operands must have the same kind", e.span)
            return "boolean"
        else:  # < <= > >=
            want = "number"
        for got in (left, right):
            if got != want:
                raise KindMismatch(f"{op!r} needs {want}s, got a {got}", e.span)
        return "boolean" if op not in ARITHMETIC_OPS else "number"
    if isinstance(e, Call):
        for arg in e.args:
            got = kind_of(arg, var_kinds)
            if got != "number":
                raise KindMismatch(f"argument of {e.func} must be a number", arg.span)
        return "number"
    raise TypeError(f"not an expression node: {e!r}")
