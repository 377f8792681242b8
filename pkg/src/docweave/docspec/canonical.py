"""Canonical on-disk format: UTF-8 JSON with stable key order and number spelling.

Serialization is byte-deterministic: keys appear in a fixed order, floats use
the shortest decimal that round-trips (integral values drop the ".0"), and the
document ends with a single newline.  ``parse_docspec`` checks three layers in
turn — JSON well-formedness, structural schema, semantic invariants — and
reports every violation it can find with a JSON-pointer path.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources
from typing import Any, Union

import jsonschema

from ..report import (
    CATEGORY_SCHEMA,
    CATEGORY_SYNTAX,
    ValidationReport,
    Violation,
)
from .model import (
    CirclePrim,
    Constraint,
    DerivedVar,
    DocSpec,
    DragVar,
    DropdownOption,
    DropdownVar,
    InteractionSpec,
    KnowledgeUnit,
    LabelPrim,
    LinePrim,
    PlotPrim,
    PolylinePrim,
    RectPrim,
    RenderPrimitive,
    RenderSpec,
    SliderVar,
    StateVariable,
    ToggleVar,
    TransitionRule,
)

__all__ = [
    "check_interaction_schema",
    "check_schema",
    "docspec_schema",
    "docspec_to_jsonable",
    "docspec_from_jsonable",
    "interaction_from_jsonable",
    "interaction_to_jsonable",
    "parse_docspec",
    "serialize_docspec",
]


@lru_cache(maxsize=1)
def docspec_schema() -> dict:
    """The published document schema, loaded from package data."""

    text = resources.files("docweave.data").joinpath("docspec.schema.json").read_text("utf-8")
    return json.loads(text)


def _num(value: float) -> Union[int, float]:
    """Canonical JSON spelling: integral floats become integers."""

    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if math.isfinite(value) and abs(value) < 2**53 and value == int(value):
        return int(value)
    return value


def _binding(value: "float | str") -> Any:
    if isinstance(value, str):
        return value
    return _num(value)


def _variable_to_jsonable(var: StateVariable) -> dict:
    if isinstance(var, SliderVar):
        return {
            "kind": "slider",
            "name": var.name,
            "min": _num(var.min),
            "max": _num(var.max),
            "step": _num(var.step),
            "default": _num(var.default),
        }
    if isinstance(var, DropdownVar):
        return {
            "kind": "dropdown",
            "name": var.name,
            "options": [{"label": o.label, "value": _num(o.value)} for o in var.options],
            "default_index": var.default_index,
        }
    if isinstance(var, ToggleVar):
        return {"kind": "toggle", "name": var.name, "default": var.default}
    if isinstance(var, DragVar):
        return {
            "kind": "drag",
            "name": var.name,
            "x_min": _num(var.x_min),
            "x_max": _num(var.x_max),
            "y_min": _num(var.y_min),
            "y_max": _num(var.y_max),
            "default": [_num(var.default[0]), _num(var.default[1])],
        }
    if isinstance(var, DerivedVar):
        return {"kind": "derived", "name": var.name, "formula": var.formula}
    raise TypeError(f"not a state variable: {var!r}")


def _primitive_to_jsonable(prim: RenderPrimitive) -> dict:
    if isinstance(prim, CirclePrim):
        return {
            "kind": "circle",
            "center_x": _binding(prim.center_x),
            "center_y": _binding(prim.center_y),
            "radius": _binding(prim.radius),
            "color": prim.color,
        }
    if isinstance(prim, RectPrim):
        return {
            "kind": "rect",
            "x": _binding(prim.x),
            "y": _binding(prim.y),
            "width": _binding(prim.width),
            "height": _binding(prim.height),
            "color": prim.color,
        }
    if isinstance(prim, LinePrim):
        return {
            "kind": "line",
            "x1": _binding(prim.x1),
            "y1": _binding(prim.y1),
            "x2": _binding(prim.x2),
            "y2": _binding(prim.y2),
            "color": prim.color,
        }
    if isinstance(prim, PolylinePrim):
        return {
            "kind": "polyline",
            "points": [[_binding(x), _binding(y)] for x, y in prim.points],
            "color": prim.color,
        }
    if isinstance(prim, LabelPrim):
        return {
            "kind": "label",
            "x": _binding(prim.x),
            "y": _binding(prim.y),
            "text_template": prim.text_template,
            "decimals": prim.decimals,
            "color": prim.color,
        }
    if isinstance(prim, PlotPrim):
        return {
            "kind": "plot",
            "var": prim.var,
            "expr": prim.expr,
            "x_min": _num(prim.x_min),
            "x_max": _num(prim.x_max),
            "color": prim.color,
        }
    raise TypeError(f"not a render primitive: {prim!r}")


def interaction_to_jsonable(ia: InteractionSpec) -> dict:
    """Plain dicts/lists for one interaction, keys in canonical order."""

    interaction: dict[str, Any] = {
        "state": [_variable_to_jsonable(v) for v in ia.state],
        "render": {"primitives": [_primitive_to_jsonable(p) for p in ia.render.primitives]},
        "transitions": [{"control": t.control, "effect": t.effect} for t in ia.transitions],
    }
    if ia.render.note is not None:
        interaction["render"]["note"] = ia.render.note
    if ia.constraint is not None:
        interaction["constraint"] = {
            "predicate": ia.constraint.predicate,
            "tolerance": _num(ia.constraint.tolerance),
            "description": ia.constraint.description,
        }
    return interaction


def docspec_to_jsonable(spec: DocSpec) -> dict:
    """Plain dicts/lists mirroring the canonical format, keys in canonical order."""

    units = [
        {
            "id": unit.id,
            "summary": unit.summary,
            "text_description": unit.text_description,
            "interaction": interaction_to_jsonable(unit.interaction),
        }
        for unit in spec.units
    ]
    return {"spec_version": spec.spec_version, "topic": spec.topic, "units": units}


def serialize_docspec(spec: DocSpec) -> str:
    return json.dumps(docspec_to_jsonable(spec), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _variable_from_jsonable(obj: dict) -> StateVariable:
    kind = obj["kind"]
    if kind == "slider":
        return SliderVar(
            name=obj["name"], min=obj["min"], max=obj["max"], step=obj["step"], default=obj["default"]
        )
    if kind == "dropdown":
        return DropdownVar(
            name=obj["name"],
            options=tuple(DropdownOption(o["label"], o["value"]) for o in obj["options"]),
            default_index=obj["default_index"],
        )
    if kind == "toggle":
        return ToggleVar(name=obj["name"], default=obj["default"])
    if kind == "drag":
        return DragVar(
            name=obj["name"],
            x_min=obj["x_min"],
            x_max=obj["x_max"],
            y_min=obj["y_min"],
            y_max=obj["y_max"],
            default=(obj["default"][0], obj["default"][1]),
        )
    return DerivedVar(name=obj["name"], formula=obj["formula"])


def _primitive_from_jsonable(obj: dict) -> RenderPrimitive:
    kind = obj["kind"]
    if kind == "circle":
        return CirclePrim(obj["center_x"], obj["center_y"], obj["radius"], obj["color"])
    if kind == "rect":
        return RectPrim(obj["x"], obj["y"], obj["width"], obj["height"], obj["color"])
    if kind == "line":
        return LinePrim(obj["x1"], obj["y1"], obj["x2"], obj["y2"], obj["color"])
    if kind == "polyline":
        return PolylinePrim(tuple((p[0], p[1]) for p in obj["points"]), obj["color"])
    if kind == "label":
        return LabelPrim(
            obj["x"], obj["y"], obj["text_template"], obj["color"], obj.get("decimals", 5)
        )
    return PlotPrim(obj["var"], obj["expr"], obj["x_min"], obj["x_max"], obj["color"])


def interaction_from_jsonable(ia: dict) -> InteractionSpec:
    """Build one typed interaction from schema-valid plain data."""

    constraint = None
    if "constraint" in ia:
        c = ia["constraint"]
        constraint = Constraint(
            predicate=c["predicate"],
            tolerance=c.get("tolerance", 1e-3),
            description=c.get("description", ""),
        )
    return InteractionSpec(
        state=tuple(_variable_from_jsonable(v) for v in ia["state"]),
        render=RenderSpec(
            primitives=tuple(_primitive_from_jsonable(p) for p in ia["render"]["primitives"]),
            note=ia["render"].get("note"),
        ),
        transitions=tuple(
            TransitionRule(t["control"], t.get("effect", "direct")) for t in ia["transitions"]
        ),
        constraint=constraint,
    )


def docspec_from_jsonable(obj: dict) -> DocSpec:
    """Build the typed model from schema-valid plain data."""

    units = [
        KnowledgeUnit(
            id=u["id"],
            summary=u["summary"],
            text_description=u["text_description"],
            interaction=interaction_from_jsonable(u["interaction"]),
        )
        for u in obj["units"]
    ]
    return DocSpec(topic=obj["topic"], units=tuple(units), spec_version=obj["spec_version"])


def _pointer(parts) -> str:
    return "/" + "/".join(str(p) for p in parts) if parts else ""


def _schema_report(schema: dict, obj: Any) -> ValidationReport:
    validator = jsonschema.Draft202012Validator(schema)
    violations = []
    for error in sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path)):
        violations.append(
            Violation(
                path=_pointer(error.absolute_path),
                message=error.message,
                category=CATEGORY_SCHEMA,
            )
        )
    return ValidationReport(tuple(violations))


def check_schema(obj: Any) -> ValidationReport:
    """Structural validation against the published schema."""

    return _schema_report(docspec_schema(), obj)


def check_interaction_schema(obj: Any) -> ValidationReport:
    """Structural validation of a bare interaction object."""

    full = docspec_schema()
    schema = {"$ref": "#/$defs/interaction", "$defs": full["$defs"]}
    return _schema_report(schema, obj)


def parse_docspec(source: str) -> "DocSpec | ValidationReport":
    """Parse canonical-format text; returns the spec or everything wrong with it."""

    from .validate import validate_docspec

    try:
        obj = json.loads(source, parse_constant=_reject_constant)
    except ValueError as exc:
        return ValidationReport(
            (Violation(path="", message=f"not well-formed: {exc}", category=CATEGORY_SYNTAX),)
        )
    schema_report = check_schema(obj)
    if not schema_report.ok:
        return schema_report
    spec = docspec_from_jsonable(obj)
    semantic_report = validate_docspec(spec)
    if not semantic_report.ok:
        return semantic_report
    return spec


def _reject_constant(name: str):
    raise ValueError(f"{name} is not allowed; numbers must be finite")
