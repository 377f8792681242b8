"""Compiling expressions to browser script code.

Expressions are emitted as fully parenthesized scalar code over a state
object ``S`` — no runtime expression parser ships with the widget.  The
emitted code must agree with the host evaluator bit for bit at double
precision, so the few places where the browser's builtins differ from the
host rules (NaN propagation in min/max, ``round`` as ``floor(x + 0.5)``) go
through small helper functions emitted alongside the widget runtime.

``format_fixed`` is the host-side mirror of ``Number.prototype.toFixed`` used
to pre-render label readouts into the initial markup.
"""

from __future__ import annotations

import decimal
import math

from ..expr import Binary, Bool, Call, Const, Expr, Num, Unary, Var
from ..expr.formatter import format_number

__all__ = ["JS_HELPERS", "format_fixed", "format_readout", "js_expr", "js_number"]

# NaN must propagate through min/max exactly as the host evaluator does;
# the browser's Math.min/Math.max disagree on -0 ties, so neither is used.
JS_HELPERS = """\
function __min(a, b) { return (a !== a || b !== b) ? NaN : (a < b ? a : b); }
function __max(a, b) { return (a !== a || b !== b) ? NaN : (a > b ? a : b); }
function __clamp(v, lo, hi) { return v < lo ? lo : (v > hi ? hi : v); }"""

_CONSTS = {"pi": "Math.PI", "e": "Math.E"}

_FUNCTIONS = {
    "sin": "Math.sin",
    "cos": "Math.cos",
    "tan": "Math.tan",
    "sqrt": "Math.sqrt",
    "abs": "Math.abs",
    "exp": "Math.exp",
    "log": "Math.log",
    "floor": "Math.floor",
}

_BINARY_OPS = {
    "+": "+",
    "-": "-",
    "*": "*",
    "/": "/",
    "<": "<",
    "<=": "<=",
    ">": ">",
    ">=": ">=",
    "==": "===",
    "!=": "!==",
    "and": "&&",
    "or": "||",
}


def js_number(value: float) -> str:
    """A script literal for ``value`` (shortest round-trip form)."""

    text = format_number(value)
    return f"({text})" if text.startswith("-") else text


def js_expr(tree: Expr, state: str = "S", local_names: "dict[str, str] | None" = None) -> str:
    """Script code computing ``tree`` over the state object ``state``.

    ``local_names`` maps variable names to plain script identifiers (used for
    plot variables and raw control values that live in function locals rather
    than the state object).
    """

    locals_ = local_names or {}

    def emit(node: Expr) -> str:
        if isinstance(node, Num):
            return js_number(node.value)
        if isinstance(node, Bool):
            return "true" if node.value else "false"
        if isinstance(node, Const):
            return _CONSTS[node.name]
        if isinstance(node, Var):
            if node.name in locals_:
                return locals_[node.name]
            return f'{state}["{node.name}"]'
        if isinstance(node, Unary):
            inner = emit(node.operand)
            return f"(-{inner})" if node.op == "neg" else f"(!{inner})"
        if isinstance(node, Binary):
            left, right = emit(node.left), emit(node.right)
            if node.op == "^":
                return f"Math.pow({left}, {right})"
            return f"({left} {_BINARY_OPS[node.op]} {right})"
        if isinstance(node, Call):
            args = ", ".join(emit(a) for a in node.args)
            if node.func == "round":
                return f"Math.floor({args} + 0.5)"
            if node.func in ("min", "max"):
                return f"__{node.func}({args})"
            return f"{_FUNCTIONS[node.func]}({args})"
        raise TypeError(f"unknown expression node {node!r}")

    return emit(tree)


def format_fixed(value: float, decimals: int) -> str:
    """What ``(value).toFixed(decimals)`` returns in the browser.

    Ties round half-up on the magnitude (of the exact binary value), the sign
    is dropped for negative zero, and values at or beyond 1e21 fall back to
    the plain shortest form, matching the ECMAScript algorithm.
    """

    if value != value:
        return "NaN"
    if value == math.inf:
        return "Infinity"
    if value == -math.inf:
        return "-Infinity"
    if abs(value) >= 1e21:
        return format_number(value)
    sign = "-" if value < 0 else ""
    quantum = decimal.Decimal(1).scaleb(-decimals)
    with decimal.localcontext() as ctx:
        ctx.prec = 60
        digits = decimal.Decimal(abs(value)).quantize(quantum, rounding=decimal.ROUND_HALF_UP)
    return sign + format(digits, "f")


def format_readout(value, decimals: int) -> str:
    """Initial text for a label placeholder: booleans as true/false."""

    if isinstance(value, bool):
        return "true" if value else "false"
    return format_fixed(value, decimals)
