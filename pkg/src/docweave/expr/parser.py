"""Recursive-descent parser for the expression language.

Grammar (loosest to tightest):

    or_expr   := and_expr  ("or"  and_expr)*
    and_expr  := cmp_expr  ("and" cmp_expr)*
    cmp_expr  := add_expr  (("<"|"<="|">"|">="|"=="|"!=") add_expr)*
    add_expr  := mul_expr  (("+"|"-") mul_expr)*
    mul_expr  := unary     (("*"|"/") unary)*
    unary     := ("-"|"not") unary | power
    power     := atom ("^" unary)?          -- right-associative
    atom      := NUMBER | "true" | "false" | NAME | NAME "(" args ")"
               | "(" or_expr ")"

There is no implicit multiplication: ``2pi`` is a syntax error, spell it
``2*pi``.  Identifiers may contain a single dot (``p.x``) to address the
components of a two-dimensional control.
"""

from __future__ import annotations

from dataclasses import dataclass

from .nodes import (
    CONSTANTS,
    FUNCTIONS,
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

__all__ = ["ExprError", "parse_expr"]

LEXICAL = "lexical"
SYNTAX = "syntax"
ARITY = "arity"


class ExprError(ValueError):
    """Parse failure with a category and a source span."""

    def __init__(self, message: str, span: Span, category: str):
        super().__init__(message)
        self.message = message
        self.span = span
        self.category = category

    def __str__(self) -> str:
        return f"{self.category} error at {self.span[0]}..{self.span[1]}: {self.message}"


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "name" | "op" | "end"
    text: str
    span: Span


_KEYWORDS = frozenset({"and", "or", "not", "true", "false"})
_TWO_CHAR_OPS = ("<=", ">=", "==", "!=")
_ONE_CHAR_OPS = "+-*/^<>(),"
_WHITESPACE = " \t\r\n"


def _is_name_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_name_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch in _WHITESPACE:
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and source[i].isdigit():
                i += 1
            if i < n and source[i] == "." and i + 1 < n and source[i + 1].isdigit():
                i += 1
                while i < n and source[i].isdigit():
                    i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            tokens.append(_Token("num", source[start:i], (start, i)))
            continue
        if _is_name_start(ch):
            start = i
            while i < n and _is_name_char(source[i]):
                i += 1
            # one optional dotted component: p.x
            if i < n and source[i] == "." and i + 1 < n and _is_name_start(source[i + 1]):
                i += 1
                while i < n and _is_name_char(source[i]):
                    i += 1
            tokens.append(_Token("name", source[start:i], (start, i)))
            continue
        two = source[i : i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(_Token("op", two, (i, i + 2)))
            i += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(_Token("op", ch, (i, i + 1)))
            i += 1
            continue
        raise ExprError(f"unexpected character {ch!r}", (i, i + 1), LEXICAL)
    tokens.append(_Token("end", "", (n, n)))
    return tokens


class _Parser:
    def __init__(self, source: str, tokens: list[_Token]):
        self.source = source
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_op(self, *texts: str) -> bool:
        return self.cur.kind == "op" and self.cur.text in texts

    def at_keyword(self, word: str) -> bool:
        return self.cur.kind == "name" and self.cur.text == word

    def expect_op(self, text: str, context: str) -> _Token:
        if not self.at_op(text):
            got = self.cur.text or "end of input"
            raise ExprError(f"expected {text!r} {context}, found {got!r}", self.cur.span, SYNTAX)
        return self.advance()

    # --- grammar rules, loosest binding first ---

    def or_expr(self) -> Expr:
        left = self.and_expr()
        while self.at_keyword("or"):
            self.advance()
            right = self.and_expr()
            left = Binary("or", left, right, span=_join(left, right))
        return left

    def and_expr(self) -> Expr:
        left = self.cmp_expr()
        while self.at_keyword("and"):
            self.advance()
            right = self.cmp_expr()
            left = Binary("and", left, right, span=_join(left, right))
        return left

    def cmp_expr(self) -> Expr:
        left = self.add_expr()
        while self.at_op("<", "<=", ">", ">=", "==", "!="):
            op = self.advance().text
            right = self.add_expr()
            left = Binary(op, left, right, span=_join(left, right))
        return left

    def add_expr(self) -> Expr:
        left = self.mul_expr()
        while self.at_op("+", "-"):
            op = self.advance().text
            right = self.mul_expr()
            left = Binary(op, left, right, span=_join(left, right))
        return left

    def mul_expr(self) -> Expr:
        left = self.unary()
        while self.at_op("*", "/"):
            op = self.advance().text
            right = self.unary()
            left = Binary(op, left, right, span=_join(left, right))
        return left

    def unary(self) -> Expr:
        if self.at_op("-"):
            tok = self.advance()
            operand = self.unary()
            return Unary("neg", operand, span=(tok.span[0], _end(operand)))
        if self.at_keyword("not"):
            tok = self.advance()
            operand = self.unary()
            return Unary("not", operand, span=(tok.span[0], _end(operand)))
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at_op("^"):
            self.advance()
            # exponent may carry its own unary minus: 2^-3
            exponent = self.unary()
            return Binary("^", base, exponent, span=_join(base, exponent))
        return base

    def atom(self) -> Expr:
        tok = self.cur
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text), span=tok.span)
        if tok.kind == "name":
            if tok.text == "true":
                self.advance()
                return Bool(True, span=tok.span)
            if tok.text == "false":
                self.advance()
                return Bool(False, span=tok.span)
            if tok.text in _KEYWORDS:
                raise ExprError(f"{tok.text!r} is not valid here", tok.span, SYNTAX)
            self.advance()
            if self.at_op("("):
                return self.call(tok)
            if tok.text in FUNCTIONS:
                raise ExprError(
                    f"{tok.text!r} is a function name; call it with parentheses", tok.span, SYNTAX
                )
            if tok.text in CONSTANTS:
                return Const(tok.text, span=tok.span)
            return Var(tok.text, span=tok.span)
        if self.at_op("("):
            self.advance()
            inner = self.or_expr()
            self.expect_op(")", "to close '('")
            return inner
        got = tok.text or "end of input"
        raise ExprError(f"expected a value, found {got!r}", tok.span, SYNTAX)

    def call(self, name: _Token) -> Expr:
        if name.text in CONSTANTS:
            raise ExprError(f"{name.text!r} is a constant, not a function", name.span, SYNTAX)
        if name.text not in FUNCTIONS:
            raise ExprError(f"unknown function {name.text!r}", name.span, SYNTAX)
        self.expect_op("(", "after function name")
        args: list[Expr] = []
        if not self.at_op(")"):
            args.append(self.or_expr())
            while self.at_op(","):
                self.advance()
                args.append(self.or_expr())
        rparen = self.expect_op(")", "to close the argument list")
        span = (name.span[0], rparen.span[1])
        want = FUNCTIONS[name.text]
        if len(args) != want:
            raise ExprError(
                f"{name.text} takes {want} argument{'s' if want != 1 else ''}, got {len(args)}",
                span,
                ARITY,
            )
        return Call(name.text, tuple(args), span=span)


def _end(node: Expr) -> int:
    return node.span[1] if node.span is not None else 0


def _join(left: Expr, right: Expr) -> Span | None:
    if left.span is None or right.span is None:
        return None
    return (left.span[0], right.span[1])


def parse_expr(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises :class:`ExprError` with category ``lexical``, ``syntax`` or
    ``arity`` and a character span on malformed input.
    """

    tokens = _lex(source)
    if tokens[0].kind == "end":
        raise ExprError("empty expression", (0, len(source)), SYNTAX)
    parser = _Parser(source, tokens)
    tree = parser.or_expr()
    trailing = parser.cur
    if trailing.kind != "end":
        if trailing.kind in ("num", "name") and trailing.text not in _KEYWORDS:
            raise ExprError(
                f"expected an operator before {trailing.text!r}"
                " (implicit multiplication is not supported; write '*')",
                trailing.span,
                SYNTAX,
            )
        raise ExprError(f"unexpected {trailing.text!r}", trailing.span, SYNTAX)
    return tree
