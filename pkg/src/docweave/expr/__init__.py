"""The expression language shared by formulas, bindings, and constraints."""

from .analysis import CycleError, dependency_order, free_vars
from .evaluator import Env, EvalError, KindMismatch, UnboundVariable, eval_expr, kind_of
from .formatter import format_expr, format_number
from .nodes import (
    ARITHMETIC_OPS,
    BINARY_OPS,
    BOOLEAN_OPS,
    COMPARISON_OPS,
    CONSTANTS,
    FUNCTIONS,
    RESERVED_WORDS,
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
from .parser import ExprError, parse_expr

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
    "CycleError",
    "Env",
    "EvalError",
    "Expr",
    "ExprError",
    "KindMismatch",
    "Num",
    "Span",
    "Unary",
    "UnboundVariable",
    "Var",
    "dependency_order",
    "eval_expr",
    "format_expr",
    "format_number",
    "free_vars",
    "kind_of",
    "parse_expr",
]
