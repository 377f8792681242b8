"""Random valid documents and small mutations for property tests.

Everything produced here passes ``validate_docspec``; the model tests assert
that once per seed so generator drift is caught early rather than silently
weakening the diff and sweep properties.
"""

from __future__ import annotations

import dataclasses
import random

from docweave.docspec import (
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
    RectPrim,
    RenderSpec,
    SliderVar,
    ToggleVar,
    TransitionRule,
)

# Single letters that are neither constants nor function names.
_NAMES = tuple("abcdghkmnqruvwxyz")

_TOPICS = (
    "Scaling and similarity",
    "Rates of change",
    "Distance and midpoints",
    "Angles around a circle",
    "Growth and decay",
)

_FORMULAS = (
    "{a} + {b}",
    "2*{a} - {b}/2",
    "sqrt(abs({a}))",
    "({a} + 1)^2",
    "min({a}, {b}) + 1",
    "abs({a} - {b})",
    "1/({a} - 1)",
)

_PREDICATES = (
    "{a} <= {b} + 100",
    "min({a}, {b}) <= max({a}, {b})",
    "{a} < {b}",
    "{a} + {b} == 4",
    "abs({a}) >= 0",
)


def _slider(rng: random.Random, name: str) -> SliderVar:
    lo = rng.choice((0.0, 0.5, 1.0, 2.0))
    hi = lo + rng.choice((1.0, 4.0, 8.0))
    default = lo + (hi - lo) * rng.choice((0.0, 0.25, 0.5, 1.0))
    return SliderVar(name=name, min=lo, max=hi, step=rng.choice((0.1, 0.5, 1.0)), default=default)


def _dropdown(rng: random.Random, name: str) -> DropdownVar:
    count = rng.randint(2, 4)
    options = tuple(DropdownOption(f"choice {i}", float(i + 1)) for i in range(count))
    return DropdownVar(name=name, options=options, default_index=rng.randrange(count))


def _drag(rng: random.Random, name: str) -> DragVar:
    return DragVar(
        name=name,
        x_min=0,
        x_max=10,
        y_min=0,
        y_max=rng.choice((5.0, 10.0)),
        default=(rng.choice((0.0, 2.0, 5.0)), rng.choice((0.0, 1.0, 4.0))),
    )


def make_controls(rng: random.Random, count: int) -> list:
    names = rng.sample(_NAMES, k=count)
    makers = {"slider": _slider, "dropdown": _dropdown, "drag": _drag}
    out = []
    for name in names:
        kind = rng.choice(("slider", "slider", "slider", "dropdown", "toggle", "drag"))
        if kind == "toggle":
            out.append(ToggleVar(name=name, default=rng.random() < 0.5))
        else:
            out.append(makers[kind](rng, name))
    return out


def numeric_names(variables) -> list[str]:
    """Names usable in numeric expressions, with drags split into .x/.y."""

    names: list[str] = []
    for var in variables:
        if var.kind in ("slider", "dropdown", "derived"):
            names.append(var.name)
        elif var.kind == "drag":
            names.extend((f"{var.name}.x", f"{var.name}.y"))
    return names


def _formula(rng: random.Random, pool: list[str]) -> str:
    return rng.choice(_FORMULAS).format(a=rng.choice(pool), b=rng.choice(pool))


def _predicate(rng: random.Random, pool: list[str], booleans: list[str]) -> str:
    if pool:
        return rng.choice(_PREDICATES).format(a=rng.choice(pool), b=rng.choice(pool))
    flag = rng.choice(booleans)
    return f"{flag} or not {flag}"


def _render(rng: random.Random, pool: list[str]) -> RenderSpec:
    prims: list = [RectPrim(x=0.5, y=0.5, width=9, height=9, color="#f5f5f5")]
    if pool:
        tracked = rng.choice(pool)
        prims.append(
            CirclePrim(
                center_x=f"min(max({tracked}, 0), 10)", center_y=5, radius=0.4, color="#1f77b4"
            )
        )
        prims.append(
            LabelPrim(
                x=5, y=9.2, text_template="value = {" + tracked + "}", color="#333333", decimals=2
            )
        )
    note = "One tracked value over a fixed backdrop." if rng.random() < 0.3 else None
    return RenderSpec(primitives=tuple(prims), note=note)


def make_interaction(
    rng: random.Random, max_controls: int = 3, max_derived: int = 2
) -> InteractionSpec:
    controls = make_controls(rng, rng.randint(1, max_controls))
    variables = list(controls)
    pool = numeric_names(controls)
    taken = {var.name for var in controls}
    for name in rng.sample([n for n in _NAMES if n not in taken], k=rng.randint(0, max_derived)):
        if not pool:
            break
        variables.append(DerivedVar(name=name, formula=_formula(rng, pool)))
        pool.append(name)
    transitions = tuple(
        TransitionRule(var.name, effect="value/2")
        if var.kind == "slider" and rng.random() < 0.25
        else TransitionRule(var.name)
        for var in controls
    )
    booleans = [var.name for var in controls if var.kind == "toggle"]
    constraint = Constraint(
        predicate=_predicate(rng, pool, booleans),
        tolerance=rng.choice((1e-3, 1e-2)),
        description="",
    )
    return InteractionSpec(
        state=tuple(variables),
        render=_render(rng, pool),
        transitions=transitions,
        constraint=constraint,
    )


def make_unit(rng: random.Random, uid: str) -> KnowledgeUnit:
    if rng.random() < 0.2:
        interaction = InteractionSpec(state=(), render=_render(rng, []))
    else:
        interaction = make_interaction(rng)
    return KnowledgeUnit(
        id=uid,
        summary=f"The one-sentence claim carried by {uid}.",
        text_description=(
            f"A short paragraph of prose for {uid}. It names the moving parts of the "
            "picture and says what to watch for."
        ),
        interaction=interaction,
    )


def make_spec(rng: random.Random, max_units: int = 4) -> DocSpec:
    units = tuple(make_unit(rng, f"unit-{i}") for i in range(rng.randint(1, max_units)))
    return DocSpec(topic=rng.choice(_TOPICS), units=units)


# ---------------------------------------------------------------------------
# mutations (each returns a new, still-valid document)
# ---------------------------------------------------------------------------


def _with_unit(spec: DocSpec, idx: int, unit: KnowledgeUnit) -> DocSpec:
    units = list(spec.units)
    units[idx] = unit
    return dataclasses.replace(spec, units=tuple(units))


def mutate_topic(rng: random.Random, spec: DocSpec) -> DocSpec:
    return dataclasses.replace(spec, topic=spec.topic + " (revised)")


def mutate_summary(rng: random.Random, spec: DocSpec) -> DocSpec:
    idx = rng.randrange(len(spec.units))
    unit = spec.units[idx]
    return _with_unit(spec, idx, dataclasses.replace(unit, summary=unit.summary + " Sharper."))


def mutate_slider_max(rng: random.Random, spec: DocSpec) -> DocSpec:
    targets = [
        (i, j)
        for i, unit in enumerate(spec.units)
        for j, var in enumerate(unit.interaction.state)
        if var.kind == "slider"
    ]
    if not targets:
        return spec
    i, j = rng.choice(targets)
    unit = spec.units[i]
    state = list(unit.interaction.state)
    state[j] = dataclasses.replace(state[j], max=state[j].max + 5)
    interaction = dataclasses.replace(unit.interaction, state=tuple(state))
    return _with_unit(spec, i, dataclasses.replace(unit, interaction=interaction))


def mutate_swap(rng: random.Random, spec: DocSpec) -> DocSpec:
    if len(spec.units) < 2:
        return spec
    i, j = rng.sample(range(len(spec.units)), 2)
    units = list(spec.units)
    units[i], units[j] = units[j], units[i]
    return dataclasses.replace(spec, units=tuple(units))


def mutate_remove(rng: random.Random, spec: DocSpec) -> DocSpec:
    if len(spec.units) < 2:
        return spec
    units = list(spec.units)
    del units[rng.randrange(len(units))]
    return dataclasses.replace(spec, units=tuple(units))


def mutate_add(rng: random.Random, spec: DocSpec) -> DocSpec:
    unit = make_unit(rng, f"extra-{rng.randrange(10**6)}")
    units = list(spec.units)
    units.insert(rng.randrange(len(units) + 1), unit)
    return dataclasses.replace(spec, units=tuple(units))


MUTATORS = (
    mutate_topic,
    mutate_summary,
    mutate_slider_max,
    mutate_swap,
    mutate_remove,
    mutate_add,
)


def mutate(rng: random.Random, spec: DocSpec, rounds: "int | None" = None) -> DocSpec:
    for _ in range(rounds if rounds is not None else rng.randint(1, 3)):
        spec = rng.choice(MUTATORS)(rng, spec)
    return spec
