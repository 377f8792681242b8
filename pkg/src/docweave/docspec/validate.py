"""Semantic validation of a built DocSpec.

The schema layer has already shaped the data; this layer checks the value
constraints (ranges, uniqueness, finiteness) and delegates per-interaction
expression checking to the verifier's static pass.  All violations are
collected, none raised.
"""

from __future__ import annotations

import math
import re

from ..report import CATEGORY_SEMANTIC, ReportCollector, ValidationReport
from .model import (
    CirclePrim,
    DocSpec,
    DragVar,
    DropdownVar,
    InteractionSpec,
    LabelPrim,
    LinePrim,
    PlotPrim,
    PolylinePrim,
    RectPrim,
    SliderVar,
    ToggleVar,
)

__all__ = ["validate_docspec"]

_UNIT_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_-]*$")


def _finite(out: ReportCollector, value, path: str, what: str) -> bool:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        out.add(path, f"{what} must be a number", CATEGORY_SEMANTIC)
        return False
    if not math.isfinite(value):
        out.add(path, f"{what} must be finite", CATEGORY_SEMANTIC)
        return False
    return True


def _check_text(out: ReportCollector, value, path: str, what: str) -> None:
    if not isinstance(value, str) or not value.strip():
        out.add(path, f"{what} must be non-empty", CATEGORY_SEMANTIC)


def _check_binding_literal(out: ReportCollector, value, path: str) -> None:
    if isinstance(value, str):
        return  # expression sources are checked by the static pass
    _finite(out, value, path, "literal binding")


def _check_variable(out: ReportCollector, var, path: str) -> None:
    if isinstance(var, SliderVar):
        ok = all(
            _finite(out, getattr(var, f), f"{path}/{f}", f) for f in ("min", "max", "step", "default")
        )
        if not ok:
            return
        if not var.min < var.max:
            out.add(path, "min < max violated", CATEGORY_SEMANTIC)
            return
        if var.step <= 0:
            out.add(f"{path}/step", "step must be positive", CATEGORY_SEMANTIC)
        if not (var.min <= var.default <= var.max):
            out.add(f"{path}/default", "default must lie within [min, max]", CATEGORY_SEMANTIC)
    elif isinstance(var, DropdownVar):
        if len(var.options) < 2:
            out.add(f"{path}/options", "dropdown needs at least 2 options", CATEGORY_SEMANTIC)
        for i, option in enumerate(var.options):
            _check_text(out, option.label, f"{path}/options/{i}/label", "option label")
            _finite(out, option.value, f"{path}/options/{i}/value", "option value")
        if not (
            isinstance(var.default_index, int)
            and not isinstance(var.default_index, bool)
            and 0 <= var.default_index < len(var.options)
        ):
            out.add(f"{path}/default_index", "default index out of range", CATEGORY_SEMANTIC)
    elif isinstance(var, ToggleVar):
        if not isinstance(var.default, bool):
            out.add(f"{path}/default", "toggle default must be a boolean", CATEGORY_SEMANTIC)
    elif isinstance(var, DragVar):
        ok = all(
            _finite(out, getattr(var, f), f"{path}/{f}", f)
            for f in ("x_min", "x_max", "y_min", "y_max")
        )
        ok = _finite(out, var.default[0], f"{path}/default/0", "default x") and ok
        ok = _finite(out, var.default[1], f"{path}/default/1", "default y") and ok
        if not ok:
            return
        if not var.x_min < var.x_max:
            out.add(path, "x_min < x_max violated", CATEGORY_SEMANTIC)
            return
        if not var.y_min < var.y_max:
            out.add(path, "y_min < y_max violated", CATEGORY_SEMANTIC)
            return
        x, y = var.default
        if not (var.x_min <= x <= var.x_max and var.y_min <= y <= var.y_max):
            out.add(f"{path}/default", "default point must lie inside the domain", CATEGORY_SEMANTIC)
    else:  # derived
        _check_text(out, var.formula, f"{path}/formula", "formula")


def _check_primitive(out: ReportCollector, prim, path: str) -> None:
    _check_text(out, prim.color, f"{path}/color", "color")
    if isinstance(prim, CirclePrim):
        for attr in ("center_x", "center_y", "radius"):
            _check_binding_literal(out, getattr(prim, attr), f"{path}/{attr}")
    elif isinstance(prim, (RectPrim, LinePrim)):
        attrs = ("x", "y", "width", "height") if isinstance(prim, RectPrim) else ("x1", "y1", "x2", "y2")
        for attr in attrs:
            _check_binding_literal(out, getattr(prim, attr), f"{path}/{attr}")
    elif isinstance(prim, PolylinePrim):
        if len(prim.points) < 2:
            out.add(f"{path}/points", "polyline needs at least 2 points", CATEGORY_SEMANTIC)
        for i, (x, y) in enumerate(prim.points):
            _check_binding_literal(out, x, f"{path}/points/{i}/0")
            _check_binding_literal(out, y, f"{path}/points/{i}/1")
    elif isinstance(prim, LabelPrim):
        _check_text(out, prim.text_template, f"{path}/text_template", "text template")
        for attr in ("x", "y"):
            _check_binding_literal(out, getattr(prim, attr), f"{path}/{attr}")
        if not isinstance(prim.decimals, int) or isinstance(prim.decimals, bool) or not (
            0 <= prim.decimals <= 12
        ):
            out.add(f"{path}/decimals", "decimals must be an integer in [0, 12]", CATEGORY_SEMANTIC)
    elif isinstance(prim, PlotPrim):
        _finite(out, prim.x_min, f"{path}/x_min", "x_min")
        _finite(out, prim.x_max, f"{path}/x_max", "x_max")


def _check_interaction(out: ReportCollector, interaction: InteractionSpec, path: str) -> None:
    for i, var in enumerate(interaction.state):
        _check_variable(out, var, f"{path}/state/{i}")
    for j, prim in enumerate(interaction.render.primitives):
        _check_primitive(out, prim, f"{path}/render/primitives/{j}")
    if interaction.constraint is not None:
        if _finite(out, interaction.constraint.tolerance, f"{path}/constraint/tolerance", "tolerance"):
            if interaction.constraint.tolerance <= 0:
                out.add(
                    f"{path}/constraint/tolerance", "tolerance must be positive", CATEGORY_SEMANTIC
                )

    from ..verifier import static_check

    out.extend(static_check(interaction).prefixed(path))


def validate_docspec(spec: DocSpec) -> ValidationReport:
    """Everything wrong with ``spec``, as data; an empty report means valid."""

    out = ReportCollector()
    _check_text(out, spec.topic, "/topic", "topic")
    if not isinstance(spec.spec_version, str) or spec.spec_version != "1.0":
        out.add("/spec_version", f"unsupported spec_version {spec.spec_version!r}", CATEGORY_SEMANTIC)
    if not spec.units:
        out.add("/units", "at least one knowledge unit is required", CATEGORY_SEMANTIC)
    seen_ids: set[str] = set()
    for i, unit in enumerate(spec.units):
        base = f"/units/{i}"
        if not isinstance(unit.id, str) or not _UNIT_ID.match(unit.id or ""):
            out.add(f"{base}/id", f"{unit.id!r} is not a valid unit id", CATEGORY_SEMANTIC)
        elif unit.id in seen_ids:
            out.add(f"{base}/id", f"duplicate unit id {unit.id!r}", CATEGORY_SEMANTIC)
        else:
            seen_ids.add(unit.id)
        _check_text(out, unit.summary, f"{base}/summary", "summary")
        _check_text(out, unit.text_description, f"{base}/text_description", "text description")
        _check_interaction(out, unit.interaction, f"{base}/interaction")
    return out.report()
