"""Widget compiler: markup shape, script parity with the host, and the
fragment contract audit.

The numeric story is the load-bearing part: every expression compiled into a
widget must compute the same doubles in a browser engine that the host
computes when it verifies constraints or pre-renders markup.  The parity
tests here run the generated code under node and compare raw float bits;
only transcendental calls (and pow, which engines are allowed to
approximate) get a relative-error allowance.
"""

from __future__ import annotations

import json
import math
import pathlib
import random
import re
import shutil
import struct
import subprocess
from types import SimpleNamespace

import pytest

import gen_exprs
from docweave.docspec import parse_docspec
from docweave.docspec.model import (
    DerivedVar,
    InteractionSpec,
    LabelPrim,
    RenderSpec,
    SliderVar,
    ToggleVar,
)
from docweave.expr import Binary, Call, Expr, Unary, eval_expr, format_number, parse_expr
from docweave.htmlcheck import default_policy, validate_fragment
from docweave.widget import (
    WidgetError,
    compile_widget,
    format_fixed,
    js_expr,
    render_initial_state,
    validate_widget_contract,
)
from docweave.widget.jscodegen import JS_HELPERS

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "corpus"

NODE = shutil.which("node")
needs_node = pytest.mark.skipif(NODE is None, reason="node runtime not available")


def load_spec(name: str, unit: int = 0) -> InteractionSpec:
    doc = parse_docspec((CORPUS / f"{name}.docspec.json").read_text())
    return doc.units[unit].interaction


def corpus_units():
    for path in sorted(CORPUS.glob("*.docspec.json")):
        doc = parse_docspec(path.read_text())
        for k, unit in enumerate(doc.units):
            yield f"{path.stem}/{unit.id}", unit.interaction


def embedded_state(script: str) -> dict:
    match = re.search(r"var S = (\{.*?\});", script)
    assert match, "script must embed its initial state"
    return json.loads(match.group(1))


class _TagScan:
    """All (tag, attrs) pairs of a fragment, via the stdlib parser."""

    def __init__(self, source: str):
        from html.parser import HTMLParser

        tags: list[tuple[str, dict]] = []

        class Walk(HTMLParser):
            def handle_starttag(self, tag, attrs):
                tags.append((tag, dict(attrs)))

            handle_startendtag = handle_starttag

        walker = Walk(convert_charrefs=True)
        walker.feed(source)
        walker.close()
        self.tags = tags

    def named(self, tag: str) -> list[dict]:
        return [attrs for name, attrs in self.tags if name == tag]


# --- expression-to-script mapping (direct consequences of the operator table)


@pytest.mark.parametrize(
    "source,expected",
    [
        ("2*pi*r", '((2 * Math.PI) * S["r"])'),
        ("x^y", 'Math.pow(S["x"], S["y"])'),
        ("round(x)", 'Math.floor(S["x"] + 0.5)'),
        ("min(a, b)", '__min(S["a"], S["b"])'),
        ("max(a, b)", '__max(S["a"], S["b"])'),
        ("a and not b", '(S["a"] && (!S["b"]))'),
        ("a == b or a != c", '((S["a"] === S["b"]) || (S["a"] !== S["c"]))'),
        ("-x + e", '((-S["x"]) + Math.E)'),
        ("sqrt(p.x^2 + p.y^2)", 'Math.sqrt((Math.pow(S["p.x"], 2) + Math.pow(S["p.y"], 2)))'),
        ("floor(x / 2)", 'Math.floor((S["x"] / 2))'),
    ],
)
def test_expression_script_mapping(source, expected):
    assert js_expr(parse_expr(source)) == expected


def test_local_name_substitution():
    tree = parse_expr("value * pi / 180")
    assert js_expr(tree, local_names={"value": "value"}) == "((value * Math.PI) / 180)"
    tree = parse_expr("a * t")
    assert js_expr(tree, local_names={"t": "__t3"}) == '(S["a"] * __t3)'


# --- fixed-decimal formatting (host mirror of the script's readout calls)


@pytest.mark.parametrize(
    "value,decimals,expected",
    [
        (3.141592653589793, 5, "3.14159"),
        (2.0, 5, "2.00000"),
        (2.5, 0, "3"),
        (-2.5, 0, "-3"),
        (-0.004, 2, "-0.00"),
        (-0.0, 2, "0.00"),
        (0.5, 0, "1"),
        (1.25, 1, "1.3"),
        (math.nan, 3, "NaN"),
        (math.inf, 3, "Infinity"),
        (-math.inf, 3, "-Infinity"),
        (1e21, 2, "1e+21"),
    ],
)
def test_format_fixed(value, decimals, expected):
    assert format_fixed(value, decimals) == expected


def test_format_fixed_uses_exact_binary_value():
    # 1.005 is stored as 1.00499999999999989...; a decimal-string rounder
    # would give "1.01" and disagree with the script
    assert format_fixed(1.005, 2) == "1.00"
    assert format_fixed(8.04, 1) == "8.0"


# --- the circle/ratio reference widget ------------------------------------


@pytest.fixture(scope="module")
def pi_fragment():
    return compile_widget(load_spec("pi-ratio"), "w0")


def test_reference_widget_slider_attributes(pi_fragment):
    inputs = _TagScan(pi_fragment.html).named("input")
    assert len(inputs) == 1
    attrs = inputs[0]
    assert attrs["type"] == "range"
    assert attrs["min"] == "0.5"
    assert attrs["max"] == "5"
    assert attrs["value"] == "1"


def test_reference_widget_circle_radius_bound(pi_fragment):
    assert 'setAttribute("r", String(__h(S["r"])))' in pi_fragment.script


def test_reference_widget_has_three_readouts(pi_fragment):
    readouts = [name for name, eid in pi_fragment.manifest if "-lbl-" in eid]
    assert readouts == ["C", "D", "ratio"]


def test_reference_widget_ratio_shown_at_five_decimals(pi_fragment):
    assert "C / D = 3.14159<" in pi_fragment.html


def test_reference_widget_initial_state_values(pi_fragment):
    assert embedded_state(pi_fragment.script) == {
        "r": 1.0,
        "C": 6.283185307179586,
        "D": 2.0,
        "ratio": 3.141592653589793,
    }


def test_static_spec_compiles_to_inert_markup():
    frag = compile_widget(load_spec("static-axes"), "ax")
    scan = _TagScan(frag.html)
    assert scan.named("input") == []
    assert scan.named("select") == []
    assert "addEventListener" not in frag.script


def test_toggle_readout_flips_between_true_and_false():
    def build(default: bool):
        spec = InteractionSpec(
            state=(
                ToggleVar("x", default),
                DerivedVar("y", "x and true"),
            ),
            render=RenderSpec(
                primitives=(LabelPrim(5.0, 5.0, "y = {y}", "#333333"),)
            ),
        )
        return compile_widget(spec, "tg")

    on, off = build(True), build(False)
    assert ">y = true</text>" in on.html
    assert ">y = false</text>" in off.html
    assert '(S["y"]) ? "true" : "false"' in on.script
    checkbox = _TagScan(on.html).named("input")[0]
    assert checkbox["type"] == "checkbox"
    assert "checked" in checkbox
    assert "checked" not in _TagScan(off.html).named("input")[0]


def test_mapping_effect_compiled_into_slider_handler():
    frag = compile_widget(load_spec("unit-circle"), "uc")
    assert 'S["theta"] = ((value * Math.PI) / 180);' in frag.script


def test_dropdown_options_are_indices_with_value_table():
    frag = compile_widget(load_spec("monomial-curves"), "mc")
    options = _TagScan(frag.html).named("option")
    assert [o["value"] for o in options] == ["0", "1", "2"]
    assert [("selected" in o) for o in options] == [False, True, False]
    assert "= [1, 2, 3];" in frag.script
    assert "selectedIndex" in frag.script


def test_drag_widget_has_handle_and_pointer_wiring():
    spec = load_spec("drag-distance")
    frag = compile_widget(spec, "dd")
    handles = [
        attrs
        for attrs in _TagScan(frag.html).named("circle")
        if attrs.get("class") == "dw-handle"
    ]
    assert len(handles) == 1
    assert handles[0]["id"] == "dd-ctl-p"
    for event in ("pointerdown", "pointermove", "pointerup"):
        assert event in frag.script
    drag = next(v for v in spec.state if v.kind == "drag")
    clamp = f"__clamp(ux, {format_number(drag.x_min)}, {format_number(drag.x_max)})"
    assert clamp in frag.script


def test_plot_initial_polyline_spans_the_declared_range():
    frag = compile_widget(load_spec("parabola-width"), "pw")
    plots = [
        attrs
        for attrs in _TagScan(frag.html).named("polyline")
        if attrs.get("fill") == "none"
    ]
    assert plots, "plot must render as a polyline"
    points = plots[0]["points"].split()
    assert len(points) == 100
    first_x = float(points[0].split(",")[0])
    last_x = float(points[-1].split(",")[0])
    assert first_x == 0.0 and last_x == 400.0
    ys = [float(p.split(",")[1]) for p in points]
    assert all(math.isfinite(y) for y in ys)


# --- whole-corpus invariants ------------------------------------------------


CORPUS_PARAMS = [pytest.param(key, spec, id=key) for key, spec in corpus_units()]


@pytest.mark.parametrize("key,spec", CORPUS_PARAMS)
def test_corpus_widget_contract_is_clean(key, spec):
    frag = compile_widget(spec, "w")
    report = validate_widget_contract(frag, spec)
    assert report.ok, report.render()


def test_corpus_embedded_state_matches_host_initial_state():
    for key, spec in corpus_units():
        frag = compile_widget(spec, "w")
        assert embedded_state(frag.script) == render_initial_state(spec), key


def test_corpus_fragments_pass_default_policy():
    for key, spec in corpus_units():
        frag = compile_widget(spec, "w")
        report = validate_fragment(frag.html, default_policy())
        assert report.ok, (key, report.render())


def test_corpus_compile_is_deterministic():
    for key, spec in corpus_units():
        first = compile_widget(spec, "w")
        second = compile_widget(spec, "w")
        assert first == second, key
        assert first != compile_widget(spec, "w2")


def test_manifest_ids_exist_in_markup():
    for key, spec in corpus_units():
        frag = compile_widget(spec, "w")
        for name, eid in frag.manifest:
            assert f'id="{eid}"' in frag.html, (key, name, eid)


# --- compile-time errors ------------------------------------------------------


def test_invalid_container_id_rejected():
    spec = load_spec("pi-ratio")
    for bad in ("", "1w", "a b", "x;y"):
        with pytest.raises(WidgetError, match="not a valid identifier"):
            compile_widget(spec, bad)


def test_non_finite_defaults_name_the_variable():
    spec = InteractionSpec(
        state=(
            SliderVar("r", 0.0, 2.0, 0.1, 1.0),
            DerivedVar("w", "1/(r - 1)"),
        ),
        render=RenderSpec(primitives=(LabelPrim(2.0, 2.0, "w = {w}", "#333333"),)),
    )
    with pytest.raises(WidgetError, match="non-finite at defaults: variable w"):
        render_initial_state(spec)
    with pytest.raises(WidgetError, match="non-finite at defaults: variable w"):
        compile_widget(spec, "w")


def test_unsupported_primitive_kind_rejected():
    spec = InteractionSpec(
        state=(),
        render=RenderSpec(primitives=(SimpleNamespace(kind="sparkline"),)),
    )
    with pytest.raises(WidgetError, match="unsupported primitive kind 'sparkline'"):
        compile_widget(spec, "w")


# --- the contract audit on foreign markup -------------------------------------


def test_contract_reports_unreferenced_state_variable():
    spec = load_spec("pi-ratio")
    frag = compile_widget(spec, "w0")
    # rename every ratio token in the script so the identifier disappears
    broken = frag.html.replace('"ratio"', '"ratioX"')
    report = validate_widget_contract(broken, spec)
    assert any(v.message == "state variable ratio not referenced" for v in report)


def test_contract_reports_external_resource():
    spec = load_spec("pi-ratio")
    frag = compile_widget(spec, "w0")
    injected = frag.html.replace(
        "<script>", '<script src="https://cdn.example/lib.js"></script><script>', 1
    )
    report = validate_widget_contract(injected, spec)
    assert any(v.message == "external resource" for v in report)
    assert any("external URL" in v.message for v in report)


def test_contract_counts_controls_by_flavor():
    spec = load_spec("pi-ratio")
    frag = compile_widget(spec, "w0")
    gutted = re.sub(r"<input[^>]*>", "", frag.html)
    report = validate_widget_contract(gutted, spec)
    assert any(
        v.message == "expected 1 range input(s) for slider controls, found 0"
        for v in report
    )


def test_contract_requires_pointer_handlers_for_drags():
    spec = load_spec("drag-distance")
    frag = compile_widget(spec, "dd")
    silent = frag.html.replace("pointerdown", "pointerdwn")
    report = validate_widget_contract(silent, spec)
    assert any("pointer-drag handler" in v.message for v in report)


def test_contract_merges_fragment_policy_violations():
    spec = load_spec("pi-ratio")
    frag = compile_widget(spec, "w0")
    report = validate_widget_contract(frag.html + "<p>stray</p>", spec)
    assert any("exactly one root element" in v.message for v in report)


# --- bit-level parity with a real engine --------------------------------------

_APPROXIMATED = ("sin", "cos", "tan", "exp", "log")


def _uses_approximated(tree: Expr) -> bool:
    if isinstance(tree, Call):
        if tree.func in _APPROXIMATED:
            return True
        return any(_uses_approximated(a) for a in tree.args)
    if isinstance(tree, Binary):
        if tree.op == "^":
            return True
        return _uses_approximated(tree.left) or _uses_approximated(tree.right)
    if isinstance(tree, Unary):
        return _uses_approximated(tree.operand)
    return False


def _js_literal(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value != value:
        return "NaN"
    if value == math.inf:
        return "Infinity"
    if value == -math.inf:
        return "-Infinity"
    return repr(value)


_SPECIALS = [0.0, -0.0, 1.0, -1.0, 0.5, -2.5, 2.0, 1e-9, 1e9, math.pi, math.inf, -math.inf, math.nan]


def _random_env(rng: random.Random, names: list[str], bool_names: list[str]) -> dict:
    env: dict = {}
    for name in names:
        env[name] = rng.choice(_SPECIALS) if rng.random() < 0.3 else rng.uniform(-20, 20)
    for name in bool_names:
        env[name] = rng.random() < 0.5
    return env


def _run_node(tmp_path, source: str) -> list[str]:
    path = tmp_path / "parity.js"
    path.write_text(source)
    proc = subprocess.run(
        [NODE, str(path)], capture_output=True, text=True, timeout=120
    )
    assert proc.returncode == 0, proc.stderr
    return proc.stdout.splitlines()


_BITS_FN = """\
function bits(v) {
  var b = new DataView(new ArrayBuffer(8));
  b.setFloat64(0, v);
  var h = "";
  for (var i = 0; i < 8; i++) { h += b.getUint8(i).toString(16).padStart(2, "0"); }
  return h;
}"""


@needs_node
def test_numeric_parity_with_engine(tmp_path):
    rng = random.Random(411)
    names = ["a", "b", "c", "p.x"]
    cases = []
    for _ in range(150):
        tree = gen_exprs.numeric_tree(rng, names, rng.randrange(1, 5))
        env = _random_env(rng, names, [])
        cases.append((tree, env))

    lines = [JS_HELPERS, _BITS_FN, "var out = [];", "var S;"]
    for tree, env in cases:
        pairs = ", ".join(f'"{k}": {_js_literal(v)}' for k, v in env.items())
        lines.append("S = {" + pairs + "};")
        lines.append(f"out.push(bits({js_expr(tree)}));")
    lines.append('console.log(out.join("\\n"));')
    got = _run_node(tmp_path, "\n".join(lines))

    assert len(got) == len(cases)
    loose = 0
    for (tree, env), engine_hex in zip(cases, got):
        host = eval_expr(tree, env)
        engine = struct.unpack(">d", bytes.fromhex(engine_hex))[0]
        if struct.pack(">d", host) == bytes.fromhex(engine_hex):
            continue
        if host != host and engine != engine:
            continue  # NaN payloads and sign bits carry no meaning
        assert _uses_approximated(tree), (
            f"exact mismatch without approximated call: host={host!r} engine={engine!r}"
        )
        loose += 1
        if host != host or engine != engine:
            assert host != host and engine != engine
        else:
            scale = max(1.0, abs(host), abs(engine))
            assert abs(host - engine) <= 1e-12 * scale
    # the tolerance path must stay the exception, not the rule
    assert loose < len(cases) / 4


@needs_node
def test_boolean_parity_with_engine(tmp_path):
    rng = random.Random(1723)
    names = ["a", "b", "c"]
    bool_names = ["flip", "strict"]
    cases = []
    for _ in range(120):
        tree = gen_exprs.boolean_tree(rng, names, rng.randrange(1, 5))
        env = _random_env(rng, names, bool_names)
        cases.append((tree, env))

    lines = [JS_HELPERS, _BITS_FN, "var out = [];", "var S;"]
    for tree, env in cases:
        pairs = ", ".join(f'"{k}": {_js_literal(v)}' for k, v in env.items())
        lines.append("S = {" + pairs + "};")
        lines.append(f'out.push(({js_expr(tree)}) ? "true" : "false");')
    lines.append('console.log(out.join("\\n"));')
    got = _run_node(tmp_path, "\n".join(lines))

    assert len(got) == len(cases)
    mismatched = [
        (tree, env, text)
        for (tree, env), text in zip(cases, got)
        if _uses_approximated(tree) is False and (text == "true") != eval_expr(tree, env)
    ]
    assert not mismatched, mismatched[:3]


@needs_node
def test_to_fixed_parity_with_engine(tmp_path):
    rng = random.Random(97)
    values = list(_SPECIALS) + [rng.uniform(-1000, 1000) for _ in range(120)]
    values += [1.005, 2.675, 8.04, 0.125, -0.125, 1e20, 4.35, -4.35]
    cases = [(v, rng.randrange(0, 9)) for v in values]

    lines = ["var out = [];"]
    for value, decimals in cases:
        lines.append(f"out.push(({_js_literal(value)}).toFixed({decimals}));")
    lines.append('console.log(out.join("\\n"));')
    got = _run_node(tmp_path, "\n".join(lines))

    assert len(got) == len(cases)
    for (value, decimals), engine_text in zip(cases, got):
        assert format_fixed(value, decimals) == engine_text, (value, decimals)


@needs_node
def test_helper_tie_semantics_match_engine(tmp_path):
    checks = [
        ("__min(0, -0)", "min(0, -0)"),
        ("__min(-0, 0)", "min(-0, 0)"),
        ("__max(0, -0)", "max(0, -0)"),
        ("__min(NaN, 1)", "min(0/0, 1)"),
        ("__max(1, NaN)", "max(1, 0/0)"),
        ("Math.floor(-2.5 + 0.5)", "round(-2.5)"),
        ("Math.floor(2.5 + 0.5)", "round(2.5)"),
        ("Math.floor(0.49999999999999994 + 0.5)", "round(0.49999999999999994)"),
    ]
    lines = [JS_HELPERS, _BITS_FN, "var out = [];"]
    for js, _ in checks:
        lines.append(f"out.push(bits({js}));")
    lines.append('console.log(out.join("\\n"));')
    got = _run_node(tmp_path, "\n".join(lines))
    for (js, source), engine_hex in zip(checks, got):
        host = eval_expr(parse_expr(source), {})
        assert struct.pack(">d", host).hex() == engine_hex, (js, source, host)
