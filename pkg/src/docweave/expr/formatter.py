"""Render expression trees back to source text with minimal parentheses.

``parse_expr(format_expr(t))`` is structurally equal to ``t`` for any tree the
parser can produce (number literals must be finite and non-negative; negative
values are spelled with a unary-minus node, as the parser builds them).
"""

from __future__ import annotations

import math

from .nodes import Binary, Bool, Call, Const, Expr, Num, Unary, Var

__all__ = ["format_expr", "format_number"]

# Binding strength, mirroring the parser's rule ladder.
_PREC_OR = 1
_PREC_AND = 2
_PREC_CMP = 3
_PREC_ADD = 4
_PREC_MUL = 5
_PREC_UNARY = 6
_PREC_POW = 7
_PREC_ATOM = 8

_BINARY_PREC = {
    "or": _PREC_OR,
    "and": _PREC_AND,
    "<": _PREC_CMP,
    "<=": _PREC_CMP,
    ">": _PREC_CMP,
    ">=": _PREC_CMP,
    "==": _PREC_CMP,
    "!=": _PREC_CMP,
    "+": _PREC_ADD,
    "-": _PREC_ADD,
    "*": _PREC_MUL,
    "/": _PREC_MUL,
    "^": _PREC_POW,
}


def format_number(value: float) -> str:
    """Shortest decimal spelling that parses back to the same double."""

    if not math.isfinite(value):
        raise ValueError(f"{value!r} has no source form")
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def format_expr(e: Expr) -> str:
    return _fmt(e, 0)


def _fmt(e: Expr, need: int) -> str:
    """Render ``e``; wrap in parens when its precedence is below ``need``."""

    if isinstance(e, Num):
        if e.value < 0:
            raise ValueError("negative literal has no source form; wrap it in a neg node")
        return format_number(e.value)
    if isinstance(e, Bool):
        return "true" if e.value else "false"
    if isinstance(e, (Const, Var)):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({','.join(_fmt(a, 0) for a in e.args)})"
    if isinstance(e, Unary):
        inner = _fmt(e.operand, _PREC_UNARY)
        text = f"-{inner}" if e.op == "neg" else f"not {inner}"
        return _wrap(text, _PREC_UNARY, need)
    if isinstance(e, Binary):
        prec = _BINARY_PREC[e.op]
        if e.op == "^":
            # left side parses at atom level, right side at unary level
            left = _fmt(e.left, _PREC_ATOM)
            right = _fmt(e.right, _PREC_UNARY)
        else:
            left = _fmt(e.left, prec)
            right = _fmt(e.right, prec + 1)
        gap = " " if e.op in ("and", "or") else ""
        text = f"{left}{gap}{e.op}{gap}{right}"
        return _wrap(text, prec, need)
    raise TypeError(f"not an expression node: {e!r}")


def _wrap(text: str, prec: int, need: int) -> str:
    return f"({text})" if prec < need else text
