"""Seeded random expression-tree generators for property tests."""

from __future__ import annotations

import random

from docweave.expr import Binary, Bool, Call, Const, Expr, Num, Unary, Var

_FUNCS1 = ["sin", "cos", "tan", "sqrt", "abs", "exp", "log", "floor", "round"]
_FUNCS2 = ["min", "max"]
_ARITH = ["+", "-", "*", "/", "^"]
_CMP = ["<", "<=", ">", ">=", "==", "!="]


def _literal(rng: random.Random) -> Num:
    r = rng.random()
    if r < 0.3:
        return Num(float(rng.randrange(0, 12)))
    if r < 0.4:
        return Num(float(f"{rng.uniform(0, 2):.2e}"))
    return Num(round(rng.uniform(0.0, 10.0), 4))


def numeric_tree(rng: random.Random, names: list[str], depth: int) -> Expr:
    """A well-kinded numeric expression of height <= depth."""

    if depth <= 0 or rng.random() < 0.22:
        r = rng.random()
        if r < 0.45 and names:
            return Var(rng.choice(names))
        if r < 0.6:
            return Const(rng.choice(["pi", "e"]))
        return _literal(rng)
    r = rng.random()
    if r < 0.55:
        op = rng.choice(_ARITH)
        return Binary(op, numeric_tree(rng, names, depth - 1), numeric_tree(rng, names, depth - 1))
    if r < 0.7:
        return Unary("neg", numeric_tree(rng, names, depth - 1))
    if r < 0.88:
        return Call(rng.choice(_FUNCS1), (numeric_tree(rng, names, depth - 1),))
    return Call(
        rng.choice(_FUNCS2),
        (numeric_tree(rng, names, depth - 1), numeric_tree(rng, names, depth - 1)),
    )


def boolean_tree(rng: random.Random, names: list[str], depth: int) -> Expr:
    """A well-kinded boolean expression of height <= depth."""

    if depth <= 0 or rng.random() < 0.2:
        return Bool(rng.random() < 0.5)
    r = rng.random()
    if r < 0.5:
        op = rng.choice(_CMP)
        return Binary(op, numeric_tree(rng, names, depth - 1), numeric_tree(rng, names, depth - 1))
    if r < 0.75:
        op = rng.choice(["and", "or"])
        return Binary(op, boolean_tree(rng, names, depth - 1), boolean_tree(rng, names, depth - 1))
    if r < 0.9:
        return Unary("not", boolean_tree(rng, names, depth - 1))
    return Binary(
        rng.choice(["==", "!="]),
        boolean_tree(rng, names, depth - 1),
        boolean_tree(rng, names, depth - 1),
    )


def any_tree(rng: random.Random, names: list[str], depth: int) -> Expr:
    if rng.random() < 0.5:
        return numeric_tree(rng, names, depth)
    return boolean_tree(rng, names, depth)
