#!/usr/bin/env python3
"""Regenerate the scripted-provider fixture trees under fixtures/scripted/.

Each tree drives one hermetic pipeline scenario through
``ScriptedProvider.from_dir`` (layout ``<tree>/<stage>/<key>[.<n>].<ext>``):

  matrix-rank            clean three-unit run (also carries the naive page)
  matrix-rank-violation  same topic, unit 2's constraint planted false
  matrix-rank-textfail   unit 2's prose invalid on every attempt
  pi-session             single-unit session used by the service and editor
                         tests (execute, chat edit, naive arm)

Every artifact is checked against the library before it is written: specs
must parse and verify, prose must validate as fragments, pages as pages,
and widget fixtures must satisfy their own contract.  Run from the
repository root:

    python3 fixtures/make_scripted.py
"""

import json
import pathlib
import shutil
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from docweave.docspec import DocSpec, parse_docspec, serialize_docspec, validate_docspec
from docweave.htmlcheck import page_policy, validate_fragment, validate_page
from docweave.pipeline import fixture_key
from docweave.verifier import plan_sweep, verify_constraint
from docweave.widget import compile_widget, validate_widget_contract

ROOT = pathlib.Path(__file__).resolve().parent / "scripted"

RANK_TOPIC = "What is the rank of a matrix?"
PI_TOPIC = "What is π?"
CHAT_MESSAGE = "Widen the radius slider to 10"

RANK_SPEC = {
    "spec_version": "1.0",
    "topic": RANK_TOPIC,
    "units": [
        {
            "id": "column-scaling",
            "summary": "Scaling a column changes the matrix but not its rank.",
            "text_description": (
                "Introduce rank as the number of independent directions the "
                "columns span, using the diagonal matrix [[2, 0], [0, a]]. "
                "The reader scales the second column with a slider; the "
                "determinant 2a changes, yet both columns keep pointing in "
                "different directions, so the rank stays 2.\n\n"
                "Make the point that rank is about direction, not length."
            ),
            "interaction": {
                "state": [
                    {
                        "kind": "slider",
                        "name": "a",
                        "min": 0.5,
                        "max": 5,
                        "step": 0.1,
                        "default": 1,
                    },
                    {"kind": "derived", "name": "det", "formula": "2*a"},
                ],
                "render": {
                    "primitives": [
                        {
                            "kind": "line",
                            "x1": 2,
                            "y1": 2,
                            "x2": 6,
                            "y2": 2,
                            "color": "#1f77b4",
                        },
                        {
                            "kind": "line",
                            "x1": 2,
                            "y1": 2,
                            "x2": 2,
                            "y2": "2 + a",
                            "color": "#d62728",
                        },
                        {
                            "kind": "label",
                            "x": 6.5,
                            "y": 8.6,
                            "text_template": "a = {a}",
                            "decimals": 1,
                            "color": "#333333",
                        },
                        {
                            "kind": "label",
                            "x": 6.5,
                            "y": 7.8,
                            "text_template": "det = {det}",
                            "decimals": 1,
                            "color": "#333333",
                        },
                    ],
                    "note": "The two column vectors of diag(2, a); the red one stretches with a.",
                },
                "transitions": [{"control": "a", "effect": "direct"}],
                "constraint": {
                    "predicate": "det > 0",
                    "tolerance": 0.001,
                    "description": "A positive scale keeps the columns independent, so the determinant stays positive.",
                },
            },
        },
        {
            "id": "pivot-count",
            "summary": "Rank is the number of pivots left after elimination.",
            "text_description": (
                "Connect rank to Gaussian elimination: after reducing, each "
                "pivot marks an independent row. The reader picks between a "
                "two-pivot and a one-pivot echelon shape and watches the rank "
                "and nullity readouts trade off so their sum stays 2.\n\n"
                "Lean on the previous section: a pivot survives exactly when "
                "its column brings a new direction."
            ),
            "interaction": {
                "state": [
                    {
                        "kind": "dropdown",
                        "name": "pivots",
                        "options": [
                            {"label": "two pivots", "value": 2},
                            {"label": "one pivot", "value": 1},
                        ],
                        "default_index": 0,
                    },
                    {"kind": "derived", "name": "rank", "formula": "pivots"},
                    {"kind": "derived", "name": "nullity", "formula": "2 - rank"},
                ],
                "render": {
                    "primitives": [
                        {
                            "kind": "rect",
                            "x": 2,
                            "y": 6,
                            "width": 1,
                            "height": 1,
                            "color": "#1f77b4",
                        },
                        {
                            "kind": "rect",
                            "x": 4,
                            "y": 4.5,
                            "width": "rank - 1",
                            "height": 1,
                            "color": "#1f77b4",
                        },
                        {
                            "kind": "label",
                            "x": 5,
                            "y": 2.4,
                            "text_template": "rank = {rank}",
                            "decimals": 0,
                            "color": "#333333",
                        },
                        {
                            "kind": "label",
                            "x": 5,
                            "y": 1.4,
                            "text_template": "nullity = {nullity}",
                            "decimals": 0,
                            "color": "#333333",
                        },
                    ],
                    "note": "Pivot blocks in echelon position; the second block vanishes in the one-pivot case.",
                },
                "transitions": [{"control": "pivots", "effect": "direct"}],
                "constraint": {
                    "predicate": "rank + nullity == 2",
                    "tolerance": 1e-06,
                    "description": "Rank and nullity always account for every column between them.",
                },
            },
        },
        {
            "id": "independent-directions",
            "summary": "A second column adds rank only while it points somewhere new.",
            "text_description": (
                "Close with the geometric test: take a fixed first column and "
                "swing a second one by an angle t. The spanned parallelogram "
                "area 2·sin(t) shrinks as the columns align; as long as the "
                "angle is nonzero the area is positive and the rank is 2.\n\n"
                "Tie back to both earlier sections: scaling never killed a "
                "direction, alignment is what does."
            ),
            "interaction": {
                "state": [
                    {
                        "kind": "slider",
                        "name": "t",
                        "min": 0.2,
                        "max": 1.5,
                        "step": 0.05,
                        "default": 0.6,
                    },
                    {"kind": "derived", "name": "area", "formula": "2*sin(t)"},
                ],
                "render": {
                    "primitives": [
                        {
                            "kind": "line",
                            "x1": 2,
                            "y1": 2,
                            "x2": 6,
                            "y2": 2,
                            "color": "#1f77b4",
                        },
                        {
                            "kind": "line",
                            "x1": 2,
                            "y1": 2,
                            "x2": "2 + 2*cos(t)",
                            "y2": "2 + 2*sin(t)",
                            "color": "#d62728",
                        },
                        {
                            "kind": "label",
                            "x": 6.5,
                            "y": 8.6,
                            "text_template": "t = {t}",
                            "decimals": 2,
                            "color": "#333333",
                        },
                        {
                            "kind": "label",
                            "x": 6.5,
                            "y": 7.8,
                            "text_template": "area = {area}",
                            "decimals": 2,
                            "color": "#333333",
                        },
                    ],
                    "note": "Two unit-ish columns at angle t; their parallelogram area tracks sin(t).",
                },
                "transitions": [{"control": "t", "effect": "direct"}],
                "constraint": {
                    "predicate": "area > 0.1",
                    "tolerance": 0.001,
                    "description": "Within the shown angle range the columns never align, so the spanned area stays away from zero.",
                },
            },
        },
    ],
}

RANK_TEXTS = {
    "column-scaling": """<div>
<p>The <strong>rank</strong> of a matrix counts the independent directions its
columns span. Take the diagonal matrix with columns (2, 0) and (0, a): the
first column points along the horizontal axis, the second along the vertical
axis. Drag the slider and the second column stretches or shrinks — the
determinant 2a changes with it — but the two columns keep pointing in
genuinely different directions.</p>
<p>That is the whole point: <em>length is not rank</em>. As long as a stays
positive, no amount of scaling collapses the pair, and the rank remains 2.</p>
</div>
""",
    "pivot-count": """<div>
<p>Elimination makes the same idea mechanical. Reducing a matrix to echelon
form leaves a <strong>pivot</strong> in each row that contributes a new
direction — exactly the directions the previous section counted. The rank is
the number of pivots that survive.</p>
<p>Switch between the two echelon shapes: with two pivots the rank readout
shows 2 and the nullity 0; drop to one pivot and the rank falls to 1 while
the nullity rises to 1. However you choose, rank and nullity split the two
columns between them.</p>
</div>
""",
    "independent-directions": """<div>
<p>Scaling never destroyed rank, so what does? <strong>Alignment.</strong>
Keep one column fixed and swing a second column by an angle t. The two
columns span a parallelogram whose area is 2·sin(t): wide angles give a fat
parallelogram, and as t heads toward zero the shape flattens toward a line.</p>
<p>The area is the test. While t is nonzero the area is positive, the second
column still points somewhere new, and the rank is 2 — the moment the columns
align, one of them stops mattering, just as a lost pivot did above.</p>
</div>
""",
}

PI_SPEC_PATH = pathlib.Path(__file__).resolve().parent / "corpus" / "pi-ratio.docspec.json"

PI_TEXT = """<div>
<p>Every circle hides the same number. Its <strong>circumference</strong> C
is the distance around, its <strong>diameter</strong> D is the distance
across, and the quotient C / D refuses to move: make the circle tiny or
enormous and the two lengths grow in lockstep.</p>
<p>Drag the radius slider and watch the readouts. C changes, D changes, and
their ratio stays pinned at 3.14159… — that stubborn quotient is
<em>π</em>, not a decimal to memorise but a fact about circles.</p>
</div>
"""

# The one-shot baseline pages deliberately skip the planned structure: a
# heading, some prose, and a small hand-rolled interaction, nothing more.
NAIVE_RANK_PAGE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>What is the rank of a matrix?</title>
<style>
body { font-family: sans-serif; max-width: 640px; margin: 2em auto; }
</style>
</head>
<body>
<h1>What is the rank of a matrix?</h1>
<p>The rank of a matrix is the number of independent directions its columns
span. A 2×2 matrix has rank 2 when neither column is a multiple of the
other, rank 1 when they line up, and rank 0 only for the zero matrix.</p>
<p>Scale the second column of diag(2, a) below. The determinant changes, the
rank does not — until you push the scale all the way to zero.</p>
<p><input type="range" id="scale" min="0" max="4" step="0.1" value="1">
<span id="readout"></span></p>
<script>
(function () {
  "use strict";
  var slider = document.getElementById("scale");
  var readout = document.getElementById("readout");
  function update() {
    var a = Number(slider.value);
    var rank = a === 0 ? 1 : 2;
    readout.textContent = "a = " + a.toFixed(1) + ", det = " + (2 * a).toFixed(1) + ", rank = " + rank;
  }
  slider.addEventListener("input", update);
  update();
})();
</script>
</body>
</html>
"""

NAIVE_PI_PAGE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>What is π?</title>
<style>
body { font-family: sans-serif; max-width: 640px; margin: 2em auto; }
</style>
</head>
<body>
<h1>What is π?</h1>
<p>π is the ratio of any circle's circumference to its diameter. The circle
can be any size; the ratio cannot.</p>
<p><input type="range" id="radius" min="0.5" max="5" step="0.1" value="1">
<span id="readout"></span></p>
<script>
(function () {
  "use strict";
  var slider = document.getElementById("radius");
  var readout = document.getElementById("readout");
  function update() {
    var r = Number(slider.value);
    readout.textContent = "C = " + (2 * Math.PI * r).toFixed(3) + ", D = " + (2 * r).toFixed(3) + ", C/D = " + Math.PI.toFixed(5);
  }
  slider.addEventListener("input", update);
  update();
})();
</script>
</body>
</html>
"""

# Three distinct ways for prose to fail validation, one per retry.
BAD_TEXTS = [
    "<div><p>Pivots are the survivors of elimination.</div>\n",
    '<div><p onclick="count()">Pivots are the survivors of elimination.</p></div>\n',
    '<div><p><img src="https://example.com/pivots.png"> Pivots!</p></div>\n',
]

CHAT_DIFF = {
    "units": {
        "edited": [
            {
                "id": "pi-as-a-ratio",
                "changes": [
                    {"path": "/interaction/state/0/max", "to": 10, "from": 5}
                ],
            }
        ]
    }
}

COHERENCE_CLEAN = {"score": 5, "issues": []}
COHERENCE_VIOLATION = {
    "score": 4,
    "issues": [
        {
            "unit_id": "pivot-count",
            "note": "The section asserts rank 2 in the one-pivot case, contradicting the elimination it shows.",
        }
    ],
}
COHERENCE_PI = {"score": 5, "issues": []}


def _checked_spec(obj: dict) -> DocSpec:
    result = parse_docspec(json.dumps(obj))
    if not isinstance(result, DocSpec):
        raise SystemExit(f"fixture spec does not parse:\n{result.render()}")
    report = validate_docspec(result)
    if not report.ok:
        raise SystemExit(f"fixture spec does not validate:\n{report.render()}")
    return result


def _checked_fragment(name: str, text: str) -> str:
    report = validate_fragment(text)
    if not report.ok:
        raise SystemExit(f"fixture fragment {name} invalid:\n{report.render()}")
    return text


def _checked_page(name: str, text: str) -> str:
    report = validate_page(text, page_policy())
    if not report.ok:
        raise SystemExit(f"fixture page {name} invalid:\n{report.render()}")
    return text


def _checked_widget(unit, container_id: str) -> str:
    fragment = compile_widget(unit.interaction, container_id)
    report = validate_widget_contract(fragment, unit.interaction)
    if not report.ok:
        raise SystemExit(f"widget fixture {container_id} breaks contract:\n{report.render()}")
    return fragment.html + "\n"


def _expect_status(spec: DocSpec, expected: dict) -> None:
    for unit in spec.units:
        report = verify_constraint(unit.interaction, plan_sweep(unit.interaction))
        want = expected.get(unit.id, "verified")
        if report.status != want:
            raise SystemExit(
                f"unit {unit.id}: expected {want}, verifier says {report.status}"
            )


def _invalid_fragments() -> list:
    for i, text in enumerate(BAD_TEXTS, 1):
        if validate_fragment(text).ok:
            raise SystemExit(f"planted-invalid fragment {i} accidentally validates")
    return BAD_TEXTS


def _write_tree(tree: pathlib.Path, files: dict) -> None:
    if tree.exists():
        shutil.rmtree(tree)
    for rel, content in sorted(files.items()):
        path = tree / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")
    print(f"wrote {tree.relative_to(ROOT.parent)} ({len(files)} files)")


def main() -> None:
    rank_spec = _checked_spec(RANK_SPEC)
    _expect_status(rank_spec, {})

    violation_obj = json.loads(json.dumps(RANK_SPEC))
    constraint = violation_obj["units"][1]["interaction"]["constraint"]
    constraint["predicate"] = "rank == 2"
    constraint["description"] = "Planted: claims full rank even in the one-pivot case."
    violation_spec = _checked_spec(violation_obj)
    _expect_status(violation_spec, {"pivot-count": "violated"})

    pi_spec = _checked_spec(json.loads(PI_SPEC_PATH.read_text(encoding="utf-8")))
    _expect_status(pi_spec, {})

    rank_slug = fixture_key(RANK_TOPIC)
    pi_slug = fixture_key(PI_TOPIC)

    texts = {
        f"text/{unit_id}.html": _checked_fragment(unit_id, text)
        for unit_id, text in RANK_TEXTS.items()
    }
    widgets = {
        f"widget/{unit.id}.html": _checked_widget(unit, f"dw-{unit.id}")
        for unit in rank_spec.units
    }

    clean = dict(texts)
    clean.update(widgets)
    clean[f"plan/{rank_slug}.json"] = serialize_docspec(rank_spec)
    clean["coherence/coherence.json"] = json.dumps(COHERENCE_CLEAN) + "\n"
    clean[f"naive/{rank_slug}.html"] = _checked_page("naive-rank", NAIVE_RANK_PAGE)
    _write_tree(ROOT / "matrix-rank", clean)

    violation = dict(texts)
    violation.update(
        {
            f"widget/{unit.id}.html": _checked_widget(unit, f"dw-{unit.id}")
            for unit in violation_spec.units
        }
    )
    violation[f"plan/{rank_slug}.json"] = serialize_docspec(violation_spec)
    violation["coherence/coherence.json"] = json.dumps(COHERENCE_VIOLATION) + "\n"
    _write_tree(ROOT / "matrix-rank-violation", violation)

    bad = _invalid_fragments()
    textfail = {
        f"plan/{rank_slug}.json": serialize_docspec(rank_spec),
        "text/column-scaling.html": texts["text/column-scaling.html"],
        "widget/column-scaling.html": widgets["widget/column-scaling.html"],
    }
    for i, text in enumerate(bad, 1):
        textfail[f"text/pivot-count.{i}.html"] = text
    _write_tree(ROOT / "matrix-rank-textfail", textfail)

    pi_unit = pi_spec.units[0]
    pi_tree = {
        f"plan/{pi_slug}.json": serialize_docspec(pi_spec),
        f"text/{pi_unit.id}.html": _checked_fragment(pi_unit.id, PI_TEXT),
        f"widget/{pi_unit.id}.html": _checked_widget(pi_unit, f"dw-{pi_unit.id}"),
        "coherence/coherence.json": json.dumps(COHERENCE_PI) + "\n",
        f"naive/{pi_slug}.html": _checked_page("naive-pi", NAIVE_PI_PAGE),
        f"chat/{fixture_key(CHAT_MESSAGE)}.json": json.dumps(CHAT_DIFF, indent=2) + "\n",
    }
    _write_tree(ROOT / "pi-session", pi_tree)


if __name__ == "__main__":
    main()
