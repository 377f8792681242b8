"""Static analysis over expression trees: free variables and dependency order."""

from __future__ import annotations

from typing import Iterable, Sequence

from .nodes import Binary, Call, Expr, Unary, Var

__all__ = ["CycleError", "dependency_order", "free_vars"]


def free_vars(e: Expr) -> set[str]:
    """The set of variable names referenced by ``e`` (constants excluded)."""

    out: set[str] = set()
    _collect(e, out)
    return out


def _collect(e: Expr, out: set[str]) -> None:
    if isinstance(e, Var):
        out.add(e.name)
    elif isinstance(e, Unary):
        _collect(e.operand, out)
    elif isinstance(e, Binary):
        _collect(e.left, out)
        _collect(e.right, out)
    elif isinstance(e, Call):
        for arg in e.args:
            _collect(arg, out)


class CycleError(ValueError):
    """Raised when derived formulas reference each other circularly."""

    def __init__(self, path: Sequence[str]):
        self.path = tuple(path)
        super().__init__("dependency cycle " + " → ".join(self.path))


def dependency_order(formulas: Iterable[tuple[str, Expr]]) -> list[str]:
    """Order derived-variable names so each comes after everything it uses.

    ``formulas`` pairs each derived name with its parsed formula.  Names the
    formulas reference that are not themselves derived (controls, constants
    resolved earlier) impose no ordering.  Ties break by declaration order, so
    the result is deterministic.  Raises :class:`CycleError` with the full
    cycle path when no order exists.
    """

    names = [name for name, _ in formulas]
    position = {name: i for i, name in enumerate(names)}
    # deps[a] = derived names a's formula mentions, in declaration order
    deps: dict[str, list[str]] = {}
    for name, tree in formulas:
        used = free_vars(tree)
        deps[name] = sorted((u for u in used if u in position), key=position.__getitem__)

    order: list[str] = []
    placed: set[str] = set()
    remaining = list(names)
    while remaining:
        ready = [n for n in remaining if all(d in placed for d in deps[n])]
        if not ready:
            raise CycleError(_find_cycle(remaining, deps))
        nxt = ready[0]  # declaration order: `remaining` preserves it
        order.append(nxt)
        placed.add(nxt)
        remaining.remove(nxt)
    return order


def _find_cycle(remaining: Sequence[str], deps: dict[str, list[str]]) -> list[str]:
    # Every name left participates in or leads into a cycle; walk until a repeat.
    stuck = set(remaining)
    path = [remaining[0]]
    seen = {remaining[0]: 0}
    while True:
        nxt = next(d for d in deps[path[-1]] if d in stuck)
        if nxt in seen:
            return path[seen[nxt] :] + [nxt]
        seen[nxt] = len(path)
        path.append(nxt)
