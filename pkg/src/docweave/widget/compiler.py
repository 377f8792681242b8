"""Compiling an interaction spec into a self-contained HTML widget.

The fragment is one ``<div>`` holding a scoped style block, a 400×300 SVG
canvas, a column of controls, and one script.  Geometry lives in a unit
space of [0, 10] × [0, 10] mapped as ``x_px = 40·x``, ``y_px = 300 − 30·y``
(y grows upward), with horizontal lengths scaled by 40 and vertical lengths
and radii by 30.

The initial markup is rendered host-side at the spec defaults with the same
arithmetic the script uses, so what the browser first paints is exactly what
the script would recompute.  Everything the script touches hangs off a single
``window["__dw_<container_id>"]`` entry; nothing else leaks.
"""

from __future__ import annotations

import html as _html
import json
import math
import re
from dataclasses import dataclass

from ..docspec.templates import template_segments
from ..expr import Binary, Expr, Num, eval_expr, free_vars, kind_of, parse_expr
from ..expr.formatter import format_number
from ..verifier import _derived_in_order, _effect_trees, boolean_kinded_vars, initial_env
from .jscodegen import JS_HELPERS, format_readout, js_expr, js_number

__all__ = ["PLOT_SAMPLES", "WidgetError", "WidgetFragment", "compile_widget", "render_initial_state"]

WIDTH = 400
HEIGHT = 300
X_SCALE = 40.0
Y_SCALE = 30.0
PLOT_SAMPLES = 100
HANDLE_RADIUS = 8

_CONTAINER_ID = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")


class WidgetError(ValueError):
    """A spec or argument that the widget compiler cannot work with."""


@dataclass(frozen=True)
class WidgetFragment:
    """A compiled widget: the full fragment plus its parts and wiring map."""

    container_id: str
    html: str
    style: str
    script: str
    manifest: tuple[tuple[str, str], ...]

    def to_json(self) -> dict:
        return {
            "container_id": self.container_id,
            "html": self.html,
            "style": self.style,
            "script": self.script,
            "manifest": [list(entry) for entry in self.manifest],
        }


def render_initial_state(spec) -> dict:
    """State values at the declared defaults, with effects applied.

    Raises :class:`WidgetError` when any variable comes out non-finite, since
    such a widget would first paint NaN geometry.
    """

    env = initial_env(spec)
    for name, value in env.items():
        if not isinstance(value, bool) and not math.isfinite(value):
            raise WidgetError(f"non-finite at defaults: variable {name}")
    return env


def _px_x(u: float) -> float:
    return X_SCALE * u


def _px_y(u: float) -> float:
    return HEIGHT - Y_SCALE * u


def _px_w(u: float) -> float:
    return X_SCALE * u


def _px_h(u: float) -> float:
    return Y_SCALE * u


_AXES = {"x": ("__x", _px_x), "y": ("__y", _px_y), "w": ("__w", _px_w), "h": ("__h", _px_h)}


def _as_tree(binding) -> Expr:
    if isinstance(binding, str):
        return parse_expr(binding)
    return Num(float(binding))


def _js_string(text: str) -> str:
    # "</" must not appear verbatim inside an inline script element
    return json.dumps(text).replace("</", "<\\/")


class _Attr:
    """One SVG attribute: its pixel mapping and (possibly static) value."""

    def __init__(self, name: str, axis: str, binding):
        self.name = name
        self.axis = axis
        if isinstance(binding, str):
            binding = parse_expr(binding)
        if isinstance(binding, Expr):
            self.dynamic, self.tree, self.literal = True, binding, None
        else:
            self.dynamic, self.tree, self.literal = False, None, float(binding)

    def initial_px(self, env: dict) -> float:
        _, px = _AXES[self.axis]
        if self.dynamic:
            value = eval_expr(self.tree, env)
        else:
            value = self.literal
        out = px(value)
        if not math.isfinite(out):
            raise WidgetError(f"non-finite at defaults: attribute {self.name}")
        return out

    def js_update(self, element: str) -> str:
        wrap, _ = _AXES[self.axis]
        return f'{element}.setAttribute("{self.name}", String({wrap}({js_expr(self.tree)})));'


def _rect_y_binding(prim):
    # the SVG y attribute anchors the top edge: unit-space y + height
    if not isinstance(prim.y, str) and not isinstance(prim.height, str):
        return float(prim.y) + float(prim.height)
    return Binary("+", _as_tree(prim.y), _as_tree(prim.height))


def _prim_attrs(prim) -> list[_Attr]:
    if prim.kind == "circle":
        return [
            _Attr("cx", "x", prim.center_x),
            _Attr("cy", "y", prim.center_y),
            _Attr("r", "h", prim.radius),
        ]
    if prim.kind == "rect":
        return [
            _Attr("x", "x", prim.x),
            _Attr("y", "y", _rect_y_binding(prim)),
            _Attr("width", "w", prim.width),
            _Attr("height", "h", prim.height),
        ]
    if prim.kind == "line":
        return [
            _Attr("x1", "x", prim.x1),
            _Attr("y1", "y", prim.y1),
            _Attr("x2", "x", prim.x2),
            _Attr("y2", "y", prim.y2),
        ]
    if prim.kind == "label":
        return [_Attr("x", "x", prim.x), _Attr("y", "y", prim.y)]
    raise WidgetError(f"unsupported primitive kind {prim.kind!r}")


_fmt_px = format_number


def _style_block(cid: str) -> str:
    return "\n".join(
        [
            f"#{cid} {{ font-family: system-ui, sans-serif; max-width: 420px; }}",
            f"#{cid} svg {{ display: block; background: #fafafa; border: 1px solid #dddddd; }}",
            f"#{cid} .dw-controls {{ display: flex; flex-direction: column; gap: 6px; margin-top: 8px; }}",
            f"#{cid} .dw-row {{ display: flex; align-items: center; gap: 8px; }}",
            f"#{cid} .dw-row label {{ min-width: 60px; }}",
            f"#{cid} .dw-out {{ font-variant-numeric: tabular-nums; color: #333333; }}",
            f"#{cid} .dw-handle {{ cursor: grab; }}",
        ]
    )


class _Build:
    """Accumulates markup, script sections, and the manifest for one widget."""

    def __init__(self, spec, cid: str):
        self.spec = spec
        self.cid = cid
        self.env = render_initial_state(spec)
        self.svg_parts: list[str] = []
        self.control_rows: list[str] = []
        self.lookups: list[str] = []
        self.recompute: list[str] = []
        self.render: list[str] = []
        self.wiring: list[str] = []
        self.control_entries: list[tuple[str, str]] = []
        self.readout_entries: list[tuple[str, str]] = []
        self.needs_svg_ref = False

        bools = boolean_kinded_vars(spec)
        names = set(self.env)
        self.kinds = {n: ("boolean" if n in bools else "number") for n in names}
        self.derived_names = {v.name for v in spec.state if v.kind == "derived"}
        self.effects = _effect_trees(spec)

    # ---- primitives ------------------------------------------------------

    def emit_primitives(self) -> None:
        for j, prim in enumerate(self.spec.render.primitives):
            if prim.kind == "label":
                self._emit_label(j, prim)
            elif prim.kind == "plot":
                self._emit_plot(j, prim)
            elif prim.kind == "polyline":
                self._emit_polyline(j, prim)
            else:
                self._emit_shape(j, prim)

    def _element_var(self, j: int, eid: str) -> str:
        self.lookups.append(f'var __e{j} = document.getElementById("{eid}");')
        return f"__e{j}"

    def _emit_shape(self, j: int, prim) -> None:
        eid = f"{self.cid}-prim-{j}"
        attrs = _prim_attrs(prim)
        pieces = [f'id="{eid}"']
        for attr in attrs:
            pieces.append(f'{attr.name}="{_fmt_px(attr.initial_px(self.env))}"')
        color = _html.escape(prim.color, quote=True)
        if prim.kind == "line":
            pieces.append(f'stroke="{color}" stroke-width="2"')
        else:
            pieces.append(f'fill="{color}"')
        tag = {"circle": "circle", "rect": "rect", "line": "line"}[prim.kind]
        self.svg_parts.append(f"<{tag} {' '.join(pieces)}/>")
        dynamic = [a for a in attrs if a.dynamic]
        if dynamic:
            el = self._element_var(j, eid)
            for attr in dynamic:
                self.render.append(attr.js_update(el))

    def _emit_polyline(self, j: int, prim) -> None:
        eid = f"{self.cid}-prim-{j}"
        coords = [(_Attr("x", "x", x), _Attr("y", "y", y)) for x, y in prim.points]
        initial = " ".join(
            f"{_fmt_px(cx.initial_px(self.env))},{_fmt_px(cy.initial_px(self.env))}"
            for cx, cy in coords
        )
        color = _html.escape(prim.color, quote=True)
        self.svg_parts.append(
            f'<polyline id="{eid}" points="{initial}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        if any(cx.dynamic or cy.dynamic for cx, cy in coords):
            el = self._element_var(j, eid)
            points = ", ".join(
                f'__x({self._coord_js(cx)}) + "," + __y({self._coord_js(cy)})'
                for cx, cy in coords
            )
            self.render.append(f'{el}.setAttribute("points", [{points}].join(" "));')

    @staticmethod
    def _coord_js(attr: _Attr) -> str:
        return js_expr(attr.tree) if attr.dynamic else js_number(attr.literal)

    def _emit_label(self, j: int, prim) -> None:
        eid = f"{self.cid}-lbl-{j}"
        x_attr = _Attr("x", "x", prim.x)
        y_attr = _Attr("y", "y", prim.y)
        segments = template_segments(prim.text_template)

        initial_parts: list[str] = []
        js_parts: list[str] = []
        dynamic_text = False
        for kind, source in segments:
            if kind == "text":
                initial_parts.append(source)
                js_parts.append(_js_string(source))
                continue
            tree = parse_expr(source)
            value = eval_expr(tree, self.env)
            initial_parts.append(format_readout(value, prim.decimals))
            if kind_of(tree, self.kinds) == "boolean":
                js_parts.append(f'(({js_expr(tree)}) ? "true" : "false")')
            else:
                js_parts.append(f"({js_expr(tree)}).toFixed({prim.decimals})")
            dynamic_text = True
            for name in sorted(free_vars(tree) & self.derived_names):
                if all(entry[0] != name for entry in self.readout_entries):
                    self.readout_entries.append((name, eid))

        color = _html.escape(prim.color, quote=True)
        self.svg_parts.append(
            f'<text id="{eid}" x="{_fmt_px(x_attr.initial_px(self.env))}"'
            f' y="{_fmt_px(y_attr.initial_px(self.env))}"'
            f' fill="{color}" font-size="14" text-anchor="middle">'
            f"{_html.escape(''.join(initial_parts))}</text>"
        )
        if dynamic_text or x_attr.dynamic or y_attr.dynamic:
            el = self._element_var(j, eid)
            if dynamic_text:
                self.render.append(f"{el}.textContent = {' + '.join(js_parts)};")
            for attr in (x_attr, y_attr):
                if attr.dynamic:
                    self.render.append(attr.js_update(el))

    def _emit_plot(self, j: int, prim) -> None:
        eid = f"{self.cid}-prim-{j}"
        tree = parse_expr(prim.expr)
        span = prim.x_max - prim.x_min
        points: list[str] = []
        for i in range(PLOT_SAMPLES):
            t = prim.x_min + span * i / (PLOT_SAMPLES - 1)
            y = eval_expr(tree, {**self.env, prim.var: t})
            if isinstance(y, bool) or not math.isfinite(y):
                continue
            points.append(f"{_fmt_px(_px_x(t))},{_fmt_px(_px_y(y))}")
        color = _html.escape(prim.color, quote=True)
        self.svg_parts.append(
            f'<polyline id="{eid}" points="{" ".join(points)}"'
            f' fill="none" stroke="{color}" stroke-width="2"/>'
        )
        if free_vars(tree) - {prim.var}:
            el = self._element_var(j, eid)
            body = js_expr(tree, local_names={prim.var: f"__t{j}"})
            self.render.extend(
                [
                    f"var __pts{j} = [];",
                    f"for (var __i{j} = 0; __i{j} < {PLOT_SAMPLES}; __i{j}++) {{",
                    f"  var __t{j} = {js_number(prim.x_min)} + {js_number(span)} * __i{j} / {PLOT_SAMPLES - 1};",
                    f"  var __y{j} = {body};",
                    f'  if (isFinite(__y{j})) {{ __pts{j}.push(__x(__t{j}) + "," + __y(__y{j})); }}',
                    "}",
                    f'{el}.setAttribute("points", __pts{j}.join(" "));',
                ]
            )

    # ---- controls --------------------------------------------------------

    def emit_controls(self) -> None:
        controls = [v for v in self.spec.state if v.kind != "derived"]
        for i, var in enumerate(controls):
            cid_el = f"{self.cid}-ctl-{var.name}"
            self.control_entries.append((var.name, cid_el))
            {
                "slider": self._emit_slider,
                "dropdown": self._emit_dropdown,
                "toggle": self._emit_toggle,
                "drag": self._emit_drag,
            }[var.kind](i, var, cid_el)

    def _effect_js(self, name: str) -> str:
        tree = self.effects.get(name)
        if tree is None:
            return "value"
        return js_expr(tree, local_names={"value": "value"})

    def _emit_slider(self, i: int, var, eid: str) -> None:
        name = _html.escape(var.name)
        self.control_rows.append(
            f'<div class="dw-row"><label for="{eid}">{name}</label>'
            f'<input type="range" id="{eid}" min="{format_number(var.min)}"'
            f' max="{format_number(var.max)}" step="{format_number(var.step)}"'
            f' value="{format_number(var.default)}">'
            f'<span class="dw-out" id="{self.cid}-out-{var.name}">{format_number(var.default)}</span></div>'
        )
        self.lookups.append(f'var __c{i} = document.getElementById("{eid}");')
        self.lookups.append(
            f'var __o{i} = document.getElementById("{self.cid}-out-{var.name}");'
        )
        self.wiring.extend(
            [
                f'__c{i}.addEventListener("input", function () {{',
                f"  var value = parseFloat(__c{i}.value);",
                f"  __o{i}.textContent = __c{i}.value;",
                f'  S["{var.name}"] = {self._effect_js(var.name)};',
                "  __update();",
                "});",
            ]
        )

    def _emit_dropdown(self, i: int, var, eid: str) -> None:
        name = _html.escape(var.name)
        options = []
        for idx, option in enumerate(var.options):
            selected = " selected" if idx == var.default_index else ""
            options.append(
                f'<option value="{idx}"{selected}>{_html.escape(option.label)}</option>'
            )
        self.control_rows.append(
            f'<div class="dw-row"><label for="{eid}">{name}</label>'
            f'<select id="{eid}">{"".join(options)}</select></div>'
        )
        values = ", ".join(format_number(option.value) for option in var.options)
        self.lookups.append(f'var __c{i} = document.getElementById("{eid}");')
        self.lookups.append(f"var __v{i} = [{values}];")
        self.wiring.extend(
            [
                f'__c{i}.addEventListener("change", function () {{',
                f"  var value = __v{i}[__c{i}.selectedIndex];",
                f'  S["{var.name}"] = {self._effect_js(var.name)};',
                "  __update();",
                "});",
            ]
        )

    def _emit_toggle(self, i: int, var, eid: str) -> None:
        name = _html.escape(var.name)
        checked = " checked" if var.default else ""
        self.control_rows.append(
            f'<div class="dw-row"><label for="{eid}">{name}</label>'
            f'<input type="checkbox" id="{eid}"{checked}></div>'
        )
        self.lookups.append(f'var __c{i} = document.getElementById("{eid}");')
        self.wiring.extend(
            [
                f'__c{i}.addEventListener("change", function () {{',
                f'  S["{var.name}"] = __c{i}.checked;',
                "  __update();",
                "});",
            ]
        )

    def _emit_drag(self, i: int, var, eid: str) -> None:
        self.needs_svg_ref = True
        x0 = _px_x(self.env[f"{var.name}.x"])
        y0 = _px_y(self.env[f"{var.name}.y"])
        self.svg_parts.append(
            f'<circle id="{eid}" class="dw-handle" cx="{_fmt_px(x0)}" cy="{_fmt_px(y0)}"'
            f' r="{HANDLE_RADIUS}" fill="#444444"/>'
        )
        self.lookups.append(f'var __c{i} = document.getElementById("{eid}");')
        self.render.append(f'__c{i}.setAttribute("cx", String(__x(S["{var.name}.x"])));')
        self.render.append(f'__c{i}.setAttribute("cy", String(__y(S["{var.name}.y"])));')
        self.wiring.extend(
            [
                f"var __d{i} = false;",
                f'__c{i}.addEventListener("pointerdown", function (ev) {{',
                f"  __d{i} = true;",
                f"  __c{i}.setPointerCapture(ev.pointerId);",
                "  ev.preventDefault();",
                "});",
                f'__c{i}.addEventListener("pointermove", function (ev) {{',
                f"  if (!__d{i}) {{ return; }}",
                "  var box = __svg.getBoundingClientRect();",
                f"  var ux = (ev.clientX - box.left) * ({WIDTH} / box.width) / {js_number(X_SCALE)};",
                f"  var uy = ({HEIGHT} - (ev.clientY - box.top) * ({HEIGHT} / box.height)) / {js_number(Y_SCALE)};",
                f'  S["{var.name}.x"] = __clamp(ux, {js_number(var.x_min)}, {js_number(var.x_max)});',
                f'  S["{var.name}.y"] = __clamp(uy, {js_number(var.y_min)}, {js_number(var.y_max)});',
                "  __update();",
                "});",
                f'__c{i}.addEventListener("pointerup", function () {{ __d{i} = false; }});',
            ]
        )

    # ---- derived state ----------------------------------------------------

    def emit_recompute(self) -> None:
        for name, tree in _derived_in_order(self.spec):
            self.recompute.append(f'S["{name}"] = {js_expr(tree)};')

    # ---- assembly ----------------------------------------------------------

    def state_literal(self) -> str:
        parts = []
        for name, value in self.env.items():
            if isinstance(value, bool):
                text = "true" if value else "false"
            else:
                text = format_number(value)
            parts.append(f'"{name}": {text}')
        return "{" + ", ".join(parts) + "}"

    def script_text(self) -> str:
        lines = ["(function () {", '"use strict";', f"var S = {self.state_literal()};"]
        lines.append(JS_HELPERS)
        lines.append(f"function __x(u) {{ return {js_number(X_SCALE)} * u; }}")
        lines.append(
            f"function __y(u) {{ return {HEIGHT} - {js_number(Y_SCALE)} * u; }}"
        )
        lines.append(f"function __w(u) {{ return {js_number(X_SCALE)} * u; }}")
        lines.append(f"function __h(u) {{ return {js_number(Y_SCALE)} * u; }}")
        if self.needs_svg_ref:
            lines.append(f'var __svg = document.getElementById("{self.cid}-svg");')
        lines.extend(self.lookups)
        lines.append("function __recompute() {")
        lines.extend(f"  {line}" for line in self.recompute)
        lines.append("}")
        lines.append("function __render() {")
        lines.extend(f"  {line}" for line in self.render)
        lines.append("}")
        lines.append("function __update() { __recompute(); __render(); }")
        lines.extend(self.wiring)
        lines.append("__update();")
        lines.append(f'window["__dw_{self.cid}"] = {{ state: S, refresh: __update }};')
        lines.append("})();")
        return "\n".join(lines)

    def fragment(self) -> WidgetFragment:
        style = _style_block(self.cid)
        script = self.script_text()
        body = [f'<div id="{self.cid}" class="dw-widget">']
        body.append(f"<style>\n{style}\n</style>")
        body.append(
            f'<svg id="{self.cid}-svg" viewBox="0 0 {WIDTH} {HEIGHT}"'
            f' width="{WIDTH}" height="{HEIGHT}">'
        )
        body.extend(self.svg_parts)
        body.append("</svg>")
        if self.control_rows:
            body.append('<div class="dw-controls">')
            body.extend(self.control_rows)
            body.append("</div>")
        body.append(f"<script>\n{script}\n</script>")
        body.append("</div>")
        return WidgetFragment(
            container_id=self.cid,
            html="\n".join(body),
            style=style,
            script=script,
            manifest=tuple(self.control_entries) + tuple(self.readout_entries),
        )


def compile_widget(spec, container_id: str) -> WidgetFragment:
    """Compile a statically valid interaction spec into a widget fragment.

    ``container_id`` must look like a DOM identifier (letter first, then
    letters, digits, underscores, or dashes); it prefixes every element id and
    the one global the script claims.
    """

    if not _CONTAINER_ID.match(container_id):
        raise WidgetError(f"container_id {container_id!r} is not a valid identifier")
    build = _Build(spec, container_id)
    # primitives first so drag handles land on top of the drawing
    build.emit_primitives()
    build.emit_controls()
    build.emit_recompute()
    return build.fragment()
