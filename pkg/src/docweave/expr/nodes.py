"""Expression tree node types.

Trees are immutable values. Source spans are carried for error reporting but
deliberately excluded from equality so that a parsed tree compares equal to a
hand-built one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

Span = tuple[int, int]  # [start, end) character offsets into the source text


@dataclass(frozen=True)
class Num:
    value: float
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Bool:
    value: bool
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Const:
    """A named builtin constant (pi or e)."""

    name: str
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    """A reference to a state variable, possibly dotted (e.g. ``p.x``)."""

    name: str
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" | "not"
    operand: "Expr"
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str  # one of BINARY_OPS
    left: "Expr"
    right: "Expr"
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    func: str  # one of FUNCTIONS
    args: tuple["Expr", ...]
    span: Span | None = field(default=None, compare=False, repr=False)


Expr = Num | Bool | Const | Var | Unary | Binary | Call

CONSTANTS: dict[str, float] = {"pi": math.pi, "e": math.e}

# function name -> arity
FUNCTIONS: dict[str, int] = {
    "sin": 1,
    "cos": 1,
    "tan": 1,
    "sqrt": 1,
    "abs": 1,
    "exp": 1,
    "log": 1,
    "min": 2,
    "max": 2,
    "floor": 1,
    "round": 1,
}

ARITHMETIC_OPS = ("+", "-", "*", "/", "^")
COMPARISON_OPS = ("<", "<=", ">", ">=", "==", "!=")
BOOLEAN_OPS = ("and", "or")
BINARY_OPS = ARITHMETIC_OPS + COMPARISON_OPS + BOOLEAN_OPS

# Words that can never name a state variable.
RESERVED_WORDS = frozenset(CONSTANTS) | frozenset(FUNCTIONS) | {"and", "or", "not", "true", "false", "value"}

__all__ = [
    "ARITHMETIC_OPS",
    "BINARY_OPS",
    "BOOLEAN_OPS",
    "COMPARISON_OPS",
    "CONSTANTS",
    "FUNCTIONS",
    "RESERVED_WORDS",
    "Binary",
    "Bool",
    "Call",
    "Const",
    "Expr",
    "Num",
    "Span",
    "Unary",
    "Var",
]
