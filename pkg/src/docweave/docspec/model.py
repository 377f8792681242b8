"""Data model for interactive-document specifications.

All types are immutable value objects.  Construction performs only numeric
coercion (ints become floats) so that invalid documents can still be built and
then *reported on* in full by the validation layer — nothing here raises on a
bad value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Union

__all__ = [
    "Constraint",
    "CirclePrim",
    "DocSpec",
    "DragVar",
    "DerivedVar",
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
    "ToggleVar",
    "TransitionRule",
    "SPEC_VERSION",
    "bound_names",
    "control_kinds",
]

SPEC_VERSION = "1.0"

# a render attribute is a numeric literal or an expression source string
Binding = Union[float, str]


def _coerce_floats(obj, *names: str) -> None:
    for name in names:
        value = getattr(obj, name)
        if isinstance(value, int) and not isinstance(value, bool):
            object.__setattr__(obj, name, float(value))


@dataclass(frozen=True)
class SliderVar:
    kind: ClassVar[str] = "slider"
    name: str
    min: float
    max: float
    step: float
    default: float

    def __post_init__(self):
        _coerce_floats(self, "min", "max", "step", "default")


@dataclass(frozen=True)
class DropdownOption:
    label: str
    value: float

    def __post_init__(self):
        _coerce_floats(self, "value")


@dataclass(frozen=True)
class DropdownVar:
    kind: ClassVar[str] = "dropdown"
    name: str
    options: tuple[DropdownOption, ...]
    default_index: int

    def __post_init__(self):
        object.__setattr__(self, "options", tuple(self.options))


@dataclass(frozen=True)
class ToggleVar:
    kind: ClassVar[str] = "toggle"
    name: str
    default: bool


@dataclass(frozen=True)
class DragVar:
    """A draggable point; binds the two scalars ``name.x`` and ``name.y``."""

    kind: ClassVar[str] = "drag"
    name: str
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    default: tuple[float, float]

    def __post_init__(self):
        _coerce_floats(self, "x_min", "x_max", "y_min", "y_max")
        x, y = self.default
        object.__setattr__(self, "default", (float(x), float(y)))


@dataclass(frozen=True)
class DerivedVar:
    kind: ClassVar[str] = "derived"
    name: str
    formula: str


StateVariable = Union[SliderVar, DropdownVar, ToggleVar, DragVar, DerivedVar]

CONTROL_KINDS = ("slider", "dropdown", "toggle", "drag")


@dataclass(frozen=True)
class CirclePrim:
    kind: ClassVar[str] = "circle"
    center_x: Binding
    center_y: Binding
    radius: Binding
    color: str


@dataclass(frozen=True)
class RectPrim:
    kind: ClassVar[str] = "rect"
    x: Binding
    y: Binding
    width: Binding
    height: Binding
    color: str


@dataclass(frozen=True)
class LinePrim:
    kind: ClassVar[str] = "line"
    x1: Binding
    y1: Binding
    x2: Binding
    y2: Binding
    color: str


@dataclass(frozen=True)
class PolylinePrim:
    kind: ClassVar[str] = "polyline"
    points: tuple[tuple[Binding, Binding], ...]
    color: str

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((x, y) for x, y in self.points))


@dataclass(frozen=True)
class LabelPrim:
    """Text whose ``{expression}`` placeholders are formatted to ``decimals`` places."""

    kind: ClassVar[str] = "label"
    x: Binding
    y: Binding
    text_template: str
    color: str
    decimals: int = 5


@dataclass(frozen=True)
class PlotPrim:
    """The graph of ``expr`` as ``var`` sweeps [x_min, x_max] in unit space."""

    kind: ClassVar[str] = "plot"
    var: str
    expr: str
    x_min: float
    x_max: float
    color: str

    def __post_init__(self):
        _coerce_floats(self, "x_min", "x_max")


RenderPrimitive = Union[CirclePrim, RectPrim, LinePrim, PolylinePrim, LabelPrim, PlotPrim]


@dataclass(frozen=True)
class RenderSpec:
    primitives: tuple[RenderPrimitive, ...]
    note: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))


@dataclass(frozen=True)
class TransitionRule:
    """``effect`` is ``"direct"`` or an expression over the raw control ``value``."""

    control: str
    effect: str = "direct"


@dataclass(frozen=True)
class Constraint:
    predicate: str
    tolerance: float = 1e-3
    description: str = ""

    def __post_init__(self):
        _coerce_floats(self, "tolerance")


@dataclass(frozen=True)
class InteractionSpec:
    state: tuple[StateVariable, ...]
    render: RenderSpec
    transitions: tuple[TransitionRule, ...] = ()
    constraint: Constraint | None = None

    def __post_init__(self):
        object.__setattr__(self, "state", tuple(self.state))
        object.__setattr__(self, "transitions", tuple(self.transitions))

    @property
    def is_static(self) -> bool:
        return not self.transitions


@dataclass(frozen=True)
class KnowledgeUnit:
    id: str
    summary: str
    text_description: str
    interaction: InteractionSpec


@dataclass(frozen=True)
class DocSpec:
    topic: str
    units: tuple[KnowledgeUnit, ...]
    spec_version: str = SPEC_VERSION

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))


def bound_names(state: "tuple[StateVariable, ...] | list[StateVariable]") -> set[str]:
    """Names an expression may reference: each variable's name, with drag
    variables contributing their two sub-scalars instead of the bare name."""

    names: set[str] = set()
    for var in state:
        if var.kind == "drag":
            names.add(var.name + ".x")
            names.add(var.name + ".y")
        else:
            names.add(var.name)
    return names


def control_kinds(state: "tuple[StateVariable, ...] | list[StateVariable]") -> dict[str, str]:
    """Expression kind ("number"/"boolean") of every non-derived binding."""

    kinds: dict[str, str] = {}
    for var in state:
        if var.kind == "drag":
            kinds[var.name + ".x"] = "number"
            kinds[var.name + ".y"] = "number"
        elif var.kind == "toggle":
            kinds[var.name] = "boolean"
        elif var.kind in ("slider", "dropdown"):
            kinds[var.name] = "number"
    return kinds
