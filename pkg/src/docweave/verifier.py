"""Static checking and numeric constraint verification for interaction specs.

``static_check`` proves a spec is internally coherent (names resolve, kinds
line up, no dependency cycles).  ``plan_sweep`` lays a deterministic sample
grid over the controllable state space, and ``verify_constraint`` evaluates
the constraint predicate — with its comparisons relaxed by the declared
tolerance — at every sample.  "The ratio stays at π regardless of r" becomes:
the relaxed predicate held at every grid point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product
from typing import Any, Mapping

from .docspec.model import InteractionSpec, bound_names, control_kinds
from .docspec.templates import TemplateError, template_expressions
from .expr import (
    Binary,
    Bool,
    Call,
    CycleError,
    Expr,
    ExprError,
    KindMismatch,
    Num,
    Unary,
    UnboundVariable,
    RESERVED_WORDS,
    Var,
    dependency_order,
    eval_expr,
    free_vars,
    kind_of,
    parse_expr,
)
from .report import CATEGORY_SEMANTIC, ReportCollector, ValidationReport

__all__ = [
    "DEFAULT_CAP",
    "DEFAULT_GRID_POINTS",
    "SweepPlan",
    "VariableSamples",
    "VerificationReport",
    "build_env",
    "initial_env",
    "boolean_kinded_vars",
    "plan_sweep",
    "relax_predicate",
    "static_check",
    "verify_constraint",
]

DEFAULT_GRID_POINTS = 11
DEFAULT_CAP = 10_000

_IDENTIFIER = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


# ---------------------------------------------------------------------------
# static checking
# ---------------------------------------------------------------------------


def _parse_into(collector: ReportCollector, source: str, path: str) -> Expr | None:
    try:
        return parse_expr(source)
    except ExprError as exc:
        collector.add(path, f"{exc.category} error: {exc.message}", CATEGORY_SEMANTIC)
        return None


def _check_refs(collector: ReportCollector, tree: Expr, declared: set[str], path: str) -> bool:
    ok = True
    for name in sorted(free_vars(tree) - declared):
        collector.add(path, f"undefined variable {name}", CATEGORY_SEMANTIC)
        ok = False
    return ok


def _derived_kinds(declared_kinds: dict[str, str], parsed: dict[str, Expr]) -> dict[str, str]:
    """Extend control kinds with inferred derived kinds, best effort."""

    kinds = dict(declared_kinds)
    pairs = [(name, tree) for name, tree in parsed.items()]
    try:
        order = dependency_order(pairs)
    except CycleError:
        order = [name for name, _ in pairs]
    for name in order:
        try:
            kinds[name] = kind_of(parsed[name], kinds)
        except (KindMismatch, UnboundVariable):
            continue
    return kinds


def static_check(spec: InteractionSpec) -> ValidationReport:
    """Every expression parses, every name resolves, kinds agree, no cycles.

    Paths in the report are JSON pointers relative to the interaction object.
    """

    out = ReportCollector()
    state = spec.state

    seen: dict[str, int] = {}
    for i, var in enumerate(state):
        path = f"/state/{i}/name"
        if not isinstance(var.name, str) or not _IDENTIFIER.match(var.name or ""):
            out.add(path, f"{var.name!r} is not a valid identifier", CATEGORY_SEMANTIC)
            continue
        if var.name in RESERVED_WORDS:
            out.add(path, f"{var.name!r} is a reserved word", CATEGORY_SEMANTIC)
        if var.name in seen:
            out.add(path, f"duplicate variable name {var.name!r}", CATEGORY_SEMANTIC)
        seen[var.name] = i

    declared = bound_names(state)
    declared_kinds = control_kinds(state)

    # derived formulas: parse, then resolve references
    parsed_derived: dict[str, Expr] = {}
    for i, var in enumerate(state):
        if var.kind != "derived":
            continue
        path = f"/state/{i}/formula"
        tree = _parse_into(out, var.formula, path)
        if tree is None:
            continue
        if _check_refs(out, tree, declared, path):
            parsed_derived[var.name] = tree

    try:
        dependency_order(list(parsed_derived.items()))
    except CycleError as exc:
        out.add("/state", str(exc), CATEGORY_SEMANTIC)

    kinds = _derived_kinds(declared_kinds, parsed_derived)
    for i, var in enumerate(state):
        if var.kind != "derived" or var.name not in parsed_derived:
            continue
        try:
            kind_of(parsed_derived[var.name], kinds)
        except KindMismatch as exc:
            out.add(f"/state/{i}/formula", f"kind error: {exc.message}", CATEGORY_SEMANTIC)
        except UnboundVariable:
            pass  # already reported, or depends on an unreported cycle member

    # render bindings
    for j, prim in enumerate(spec.render.primitives):
        base = f"/render/primitives/{j}"
        if prim.kind == "plot":
            _check_plot(out, prim, declared, kinds, base)
            continue
        if prim.kind == "label":
            _check_label(out, prim, declared, kinds, base)
            _check_binding(out, prim.x, declared, kinds, f"{base}/x")
            _check_binding(out, prim.y, declared, kinds, f"{base}/y")
            continue
        if prim.kind == "polyline":
            for k, (x, y) in enumerate(prim.points):
                _check_binding(out, x, declared, kinds, f"{base}/points/{k}/0")
                _check_binding(out, y, declared, kinds, f"{base}/points/{k}/1")
            continue
        for attr in _NUMERIC_ATTRS[prim.kind]:
            _check_binding(out, getattr(prim, attr), declared, kinds, f"{base}/{attr}")

    # transitions
    by_name = {var.name: var for var in state}
    seen_controls: set[str] = set()
    for k, rule in enumerate(spec.transitions):
        cpath = f"/transitions/{k}/control"
        var = by_name.get(rule.control)
        if var is None:
            out.add(cpath, f"unknown control {rule.control!r}", CATEGORY_SEMANTIC)
            continue
        if var.kind == "derived":
            out.add(cpath, "transition targets derived variable", CATEGORY_SEMANTIC)
            continue
        if rule.control in seen_controls:
            out.add(cpath, f"duplicate transition for {rule.control!r}", CATEGORY_SEMANTIC)
        seen_controls.add(rule.control)
        if rule.effect == "direct":
            continue
        epath = f"/transitions/{k}/effect"
        if var.kind in ("toggle", "drag"):
            out.add(epath, f"{var.kind} controls support only the direct effect", CATEGORY_SEMANTIC)
            continue
        tree = _parse_into(out, rule.effect, epath)
        if tree is None:
            continue
        extra = sorted(free_vars(tree) - {"value"})
        if extra:
            out.add(
                epath,
                "effect may reference only the raw control as 'value'"
                f" (found {', '.join(repr(n) for n in extra)})",
                CATEGORY_SEMANTIC,
            )
            continue
        try:
            if kind_of(tree, {"value": "number"}) != "number":
                out.add(epath, "effect must be number-valued", CATEGORY_SEMANTIC)
        except KindMismatch as exc:
            out.add(epath, f"kind error: {exc.message}", CATEGORY_SEMANTIC)

    # constraint
    if spec.constraint is None:
        if spec.transitions:
            out.add("/constraint", "interactive spec declares transitions but no constraint", CATEGORY_SEMANTIC)
    else:
        path = "/constraint/predicate"
        tree = _parse_into(out, spec.constraint.predicate, path)
        if tree is not None and _check_refs(out, tree, declared, path):
            try:
                if kind_of(tree, kinds) != "boolean":
                    out.add(path, "constraint must be boolean-valued", CATEGORY_SEMANTIC)
            except KindMismatch as exc:
                out.add(path, f"kind error: {exc.message}", CATEGORY_SEMANTIC)
            except UnboundVariable:
                pass  # a referenced derived variable failed its own checks

    return out.report()


_NUMERIC_ATTRS = {
    "circle": ("center_x", "center_y", "radius"),
    "rect": ("x", "y", "width", "height"),
    "line": ("x1", "y1", "x2", "y2"),
}


def _check_binding(
    collector: ReportCollector,
    value: "float | str",
    declared: set[str],
    kinds: Mapping[str, str],
    path: str,
) -> None:
    if not isinstance(value, str):
        return
    tree = _parse_into(collector, value, path)
    if tree is None:
        return
    if not _check_refs(collector, tree, declared, path):
        return
    try:
        if kind_of(tree, kinds) != "number":
            collector.add(path, "binding must be number-valued", CATEGORY_SEMANTIC)
    except KindMismatch as exc:
        collector.add(path, f"kind error: {exc.message}", CATEGORY_SEMANTIC)
    except UnboundVariable:
        pass


def _check_label(collector, prim, declared, kinds, base: str) -> None:
    path = f"{base}/text_template"
    try:
        sources = template_expressions(prim.text_template)
    except TemplateError as exc:
        collector.add(path, str(exc), CATEGORY_SEMANTIC)
        return
    for source in sources:
        tree = _parse_into(collector, source, path)
        if tree is None:
            continue
        if not _check_refs(collector, tree, declared, path):
            continue
        try:
            # numeric placeholders render to fixed decimals, boolean ones to
            # true/false; either kind is fine as long as it is consistent
            kind_of(tree, kinds)
        except KindMismatch as exc:
            collector.add(path, f"kind error in {source!r}: {exc.message}", CATEGORY_SEMANTIC)
        except UnboundVariable:
            pass


def _check_plot(collector, prim, declared, kinds, base: str) -> None:
    var_ok = True
    if not _IDENTIFIER.match(prim.var or ""):
        collector.add(f"{base}/var", f"{prim.var!r} is not a valid identifier", CATEGORY_SEMANTIC)
        var_ok = False
    elif prim.var in RESERVED_WORDS:
        collector.add(f"{base}/var", f"{prim.var!r} is a reserved word", CATEGORY_SEMANTIC)
        var_ok = False
    elif prim.var in declared:
        collector.add(
            f"{base}/var",
            f"plot variable {prim.var!r} shadows a state variable",
            CATEGORY_SEMANTIC,
        )
        var_ok = False
    if not (prim.x_min < prim.x_max):
        collector.add(base, "plot range must satisfy x_min < x_max", CATEGORY_SEMANTIC)
    path = f"{base}/expr"
    tree = _parse_into(collector, prim.expr, path)
    if tree is None or not var_ok:
        return
    if not _check_refs(collector, tree, declared | {prim.var}, path):
        return
    try:
        if kind_of(tree, {**kinds, prim.var: "number"}) != "number":
            collector.add(path, "plot expression must be number-valued", CATEGORY_SEMANTIC)
    except KindMismatch as exc:
        collector.add(path, f"kind error: {exc.message}", CATEGORY_SEMANTIC)
    except UnboundVariable:
        pass


# ---------------------------------------------------------------------------
# sweep planning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VariableSamples:
    name: str
    kind: str  # slider | dropdown | toggle | drag
    values: tuple  # floats; bools for toggles; (x, y) tuples for drags


@dataclass(frozen=True)
class SweepPlan:
    variables: tuple[VariableSamples, ...]
    total: int
    grid_points: int
    cap: int


def _spaced(lo: float, hi: float, g: int) -> list[float]:
    span = hi - lo
    xs = [lo + span * i / (g - 1) for i in range(g)]
    xs[-1] = hi
    return xs


def _slider_samples(var, g: int) -> tuple[float, ...]:
    xs = _spaced(var.min, var.max, g)
    if var.default not in xs:
        xs.append(var.default)
        xs.sort()
    return tuple(xs)


def _drag_samples(var, g: int) -> tuple[tuple[float, float], ...]:
    xs = _spaced(var.x_min, var.x_max, g)
    ys = _spaced(var.y_min, var.y_max, g)
    points = [(x, y) for x in xs for y in ys]
    if var.default not in points:
        points.append(var.default)
    points.sort()
    return tuple(points)


def _samples_for(var, g: int) -> tuple:
    if var.kind == "slider":
        return _slider_samples(var, g)
    if var.kind == "dropdown":
        return tuple(option.value for option in var.options)
    if var.kind == "toggle":
        return (False, True)
    return _drag_samples(var, g)


def plan_sweep(
    spec: InteractionSpec,
    grid_points: int = DEFAULT_GRID_POINTS,
    cap: int = DEFAULT_CAP,
) -> SweepPlan:
    """Deterministic sample grid over the controllable variables.

    Numeric grids start at ``grid_points`` per axis and are reduced uniformly
    (never below 3) until the total sample count fits under ``cap``.  Slider
    and drag grids always include their endpoints and the declared default.
    """

    controls = [var for var in spec.state if var.kind != "derived"]
    if not controls:
        return SweepPlan(variables=(), total=1, grid_points=grid_points, cap=cap)

    def plan_at(g: int) -> tuple[tuple[VariableSamples, ...], int]:
        variables = tuple(
            VariableSamples(var.name, var.kind, _samples_for(var, g)) for var in controls
        )
        total = math.prod(len(vs.values) for vs in variables)
        return variables, total

    chosen: "tuple[tuple[VariableSamples, ...], int] | None" = None
    for g in range(grid_points, 2, -1):
        variables, total = plan_at(g)
        chosen = (variables, total)
        if total <= cap:
            break
    variables, total = chosen if chosen is not None else plan_at(3)
    return SweepPlan(variables=variables, total=total, grid_points=grid_points, cap=cap)


# ---------------------------------------------------------------------------
# constraint verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    status: str  # verified | violated | degenerate | skipped-static
    samples_checked: int
    violations: tuple[tuple[dict, dict], ...]  # (env, predicate inputs)
    non_finite: tuple[tuple[dict, str, float], ...]  # (env, variable, value)

    @property
    def ok(self) -> bool:
        return self.status in ("verified", "skipped-static")

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "samples_checked": self.samples_checked,
            "violations": [
                {"env": _jsonable_env(env), "inputs": _jsonable_env(inputs)}
                for env, inputs in self.violations
            ],
            "non_finite": [
                {"env": _jsonable_env(env), "variable": name, "value": _jsonable_scalar(value)}
                for env, name, value in self.non_finite
            ],
        }


def _jsonable_scalar(value):
    if isinstance(value, bool):
        return value
    if math.isnan(value):
        return "NaN"
    if value == math.inf:
        return "Infinity"
    if value == -math.inf:
        return "-Infinity"
    return value


def _jsonable_env(env: Mapping[str, Any]) -> dict:
    return {name: _jsonable_scalar(value) for name, value in env.items()}


def relax_predicate(tree: Expr, tolerance: float, boolean_vars: set[str]) -> Expr:
    """Loosen every numeric comparison by ``tolerance``.

    ``a == b`` becomes ``abs(a-b) <= tol``; ``a != b`` becomes ``abs(a-b) > tol``;
    ``<``/``<=`` gain ``+ tol`` on the right; ``>``/``>=`` gain it on the left.
    Equality between boolean-kinded operands stays exact, and the transform
    recurses through ``and``/``or``/``not``.
    """

    if isinstance(tree, Binary):
        if tree.op in ("and", "or"):
            return Binary(
                tree.op,
                relax_predicate(tree.left, tolerance, boolean_vars),
                relax_predicate(tree.right, tolerance, boolean_vars),
            )
        if tree.op in ("==", "!="):
            if _is_boolean_kinded(tree.left, boolean_vars) or _is_boolean_kinded(
                tree.right, boolean_vars
            ):
                return tree
            gap = Call("abs", (Binary("-", tree.left, tree.right),))
            if tree.op == "==":
                return Binary("<=", gap, Num(tolerance))
            return Binary(">", gap, Num(tolerance))
        if tree.op in ("<", "<="):
            return Binary(tree.op, tree.left, Binary("+", tree.right, Num(tolerance)))
        if tree.op in (">", ">="):
            return Binary(tree.op, Binary("+", tree.left, Num(tolerance)), tree.right)
        return tree
    if isinstance(tree, Unary) and tree.op == "not":
        return Unary("not", relax_predicate(tree.operand, tolerance, boolean_vars))
    return tree


def _is_boolean_kinded(tree: Expr, boolean_vars: set[str]) -> bool:
    if isinstance(tree, Bool):
        return True
    if isinstance(tree, Var):
        return tree.name in boolean_vars
    if isinstance(tree, Unary):
        return tree.op == "not"
    if isinstance(tree, Binary):
        return tree.op in ("and", "or", "<", "<=", ">", ">=", "==", "!=")
    return False


def boolean_kinded_vars(spec: InteractionSpec) -> set[str]:
    """Names whose values are booleans: toggles plus boolean-valued deriveds."""

    kinds = control_kinds(spec.state)
    parsed = {
        var.name: parse_expr(var.formula) for var in spec.state if var.kind == "derived"
    }
    kinds = _derived_kinds(kinds, parsed)
    return {name for name, kind in kinds.items() if kind == "boolean"}


def _effect_trees(spec: InteractionSpec) -> dict[str, Expr]:
    return {
        rule.control: parse_expr(rule.effect)
        for rule in spec.transitions
        if rule.effect != "direct"
    }


def _derived_in_order(spec: InteractionSpec) -> list[tuple[str, Expr]]:
    parsed = {var.name: parse_expr(var.formula) for var in spec.state if var.kind == "derived"}
    order = dependency_order(list(parsed.items()))
    return [(name, parsed[name]) for name in order]


def build_env(
    spec: InteractionSpec,
    raws: Mapping[str, Any],
    effects: "Mapping[str, Expr] | None" = None,
    derived: "list[tuple[str, Expr]] | None" = None,
) -> dict:
    """State environment for one assignment of raw control values.

    ``raws`` maps each controllable name to its raw value ((x, y) tuple for
    drags).  Mapping effects are applied to raw values, then derived variables
    are evaluated in dependency order.  Requires a statically valid spec.
    """

    if effects is None:
        effects = _effect_trees(spec)
    if derived is None:
        derived = _derived_in_order(spec)
    env: dict = {}
    for var in spec.state:
        if var.kind == "derived":
            continue
        raw = raws[var.name]
        if var.kind == "drag":
            env[var.name + ".x"], env[var.name + ".y"] = float(raw[0]), float(raw[1])
        elif var.name in effects:
            env[var.name] = eval_expr(effects[var.name], {"value": raw})
        elif var.kind == "toggle":
            env[var.name] = bool(raw)
        else:
            env[var.name] = float(raw)
    for name, tree in derived:
        env[name] = eval_expr(tree, env)
    return env


def default_raws(spec: InteractionSpec) -> dict[str, Any]:
    """Raw control defaults as declared."""

    raws: dict[str, Any] = {}
    for var in spec.state:
        if var.kind == "derived":
            continue
        if var.kind == "dropdown":
            raws[var.name] = var.options[var.default_index].value
        else:
            raws[var.name] = var.default
    return raws


def initial_env(spec: InteractionSpec) -> dict:
    """The state environment at the declared defaults."""

    return build_env(spec, default_raws(spec))


def verify_constraint(spec: InteractionSpec, plan: SweepPlan) -> VerificationReport:
    """Check the constraint at every planned sample.

    Samples where any state value is non-finite are recorded as degenerate and
    excluded from the predicate; every other sample must satisfy the relaxed
    predicate for the spec to verify.
    """

    if spec.constraint is None:
        return VerificationReport("skipped-static", 0, (), ())

    effects = _effect_trees(spec)
    derived = _derived_in_order(spec)
    predicate = parse_expr(spec.constraint.predicate)
    relaxed = relax_predicate(
        predicate, spec.constraint.tolerance, boolean_kinded_vars(spec)
    )
    inputs_of = sorted(free_vars(predicate))

    violations: list[tuple[dict, dict]] = []
    non_finite: list[tuple[dict, str, float]] = []
    checked = 0
    names = [vs.name for vs in plan.variables]
    for combo in product(*[vs.values for vs in plan.variables]):
        checked += 1
        raws = dict(zip(names, combo))
        env = build_env(spec, raws, effects, derived)
        bad = [
            (name, value)
            for name, value in env.items()
            if not isinstance(value, bool) and not math.isfinite(value)
        ]
        if bad:
            for name, value in bad:
                non_finite.append((dict(env), name, value))
            continue
        if not eval_expr(relaxed, env):
            violations.append((dict(env), {n: env[n] for n in inputs_of}))

    if violations:
        status = "violated"
    elif non_finite:
        status = "degenerate"
    else:
        status = "verified"
    return VerificationReport(status, checked, tuple(violations), tuple(non_finite))
