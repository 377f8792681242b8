"""DocSpec model, canonical format, validation, and diffing."""

from .canonical import (
    check_interaction_schema,
    check_schema,
    docspec_from_jsonable,
    docspec_schema,
    docspec_to_jsonable,
    interaction_from_jsonable,
    interaction_to_jsonable,
    parse_docspec,
    serialize_docspec,
)
from .diff import (
    DiffApplyError,
    DocSpecDiff,
    FieldChange,
    UnitEdit,
    apply_diff,
    check_diff_schema,
    diff_docspec,
    diff_schema,
)
from .model import (
    SPEC_VERSION,
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
    bound_names,
    control_kinds,
)
from .templates import TemplateError, template_expressions, template_segments
from .validate import validate_docspec

__all__ = [
    "SPEC_VERSION",
    "CirclePrim",
    "Constraint",
    "DerivedVar",
    "DiffApplyError",
    "FieldChange",
    "UnitEdit",
    "DocSpec",
    "DocSpecDiff",
    "DragVar",
    "DropdownOption",
    "DropdownVar",
    "InteractionSpec",
    "KnowledgeUnit",
    "LabelPrim",
    "LinePrim",
    "PlotPrim",
    "PolylinePrim",
    "RectPrim",
    "RenderPrimitive",
    "RenderSpec",
    "SliderVar",
    "StateVariable",
    "TemplateError",
    "ToggleVar",
    "TransitionRule",
    "apply_diff",
    "bound_names",
    "check_diff_schema",
    "check_interaction_schema",
    "check_schema",
    "control_kinds",
    "diff_docspec",
    "diff_schema",
    "docspec_from_jsonable",
    "docspec_schema",
    "docspec_to_jsonable",
    "interaction_from_jsonable",
    "interaction_to_jsonable",
    "parse_docspec",
    "serialize_docspec",
    "template_expressions",
    "template_segments",
    "validate_docspec",
]
