"""Evaluation of an assembled document: completeness, constraints, coherence.

Completeness (every unit present with fragments that still validate) and
constraint verification (the interaction invariant holds across the sweep)
gate the verdict.  Coherence comes from a provider judging the extracted
prose and is advisory only: it can add issue notes but never flips a passing
verdict, because a subjective score should not block an otherwise sound
document.  Errors are data — this module raises nothing for bad content.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..htmlcheck import extract_text, validate_fragment
from ..verifier import plan_sweep, verify_constraint
from ..widget import validate_widget_contract
from .prompts import render_prompt
from .stages import PipelineConfig

__all__ = [
    "CoherenceIssue",
    "EvaluationReport",
    "UnitCompleteness",
    "evaluate",
]


@dataclass(frozen=True)
class CoherenceIssue:
    unit_id: str  # empty string for document-level notes
    note: str

    def to_json(self) -> dict:
        return {"unit_id": self.unit_id, "note": self.note}


@dataclass(frozen=True)
class UnitCompleteness:
    unit_id: str
    ok: bool
    text_ok: bool
    widget_ok: bool
    notes: tuple = ()

    def to_json(self) -> dict:
        return {
            "unit_id": self.unit_id,
            "ok": self.ok,
            "text_ok": self.text_ok,
            "widget_ok": self.widget_ok,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class EvaluationReport:
    verdict: str  # "pass" | "fail"
    coherence_score: "int | None"
    coherence_issues: tuple
    completeness: tuple
    constraints: tuple  # of (unit_id, VerificationReport)
    directives: tuple  # of (unit_id, stage)

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "coherence_score": self.coherence_score,
            "coherence_issues": [issue.to_json() for issue in self.coherence_issues],
            "completeness": [unit.to_json() for unit in self.completeness],
            "constraints": [
                {"unit_id": unit_id, "report": report.to_json()}
                for unit_id, report in self.constraints
            ],
            "directives": [
                {"unit_id": unit_id, "stage": stage} for unit_id, stage in self.directives
            ],
        }


def _check_unit(spec_unit, generated, policy) -> UnitCompleteness:
    notes = []
    text_ok = widget_ok = True
    if generated is None:
        return UnitCompleteness(spec_unit.id, False, False, False, ("unit not generated",))
    if generated.status != "ok":
        notes.append(f"generation status {generated.status!r}")
        text_ok = widget_ok = False
    if generated.text_fragment is None:
        text_ok = False
        notes.append("text fragment missing")
    elif text_ok:
        report = validate_fragment(generated.text_fragment, policy)
        if not report.ok:
            text_ok = False
            notes.extend(f"text: {v.path}: {v.message}" for v in report.violations)
    if generated.widget_fragment is None:
        widget_ok = False
        notes.append("widget fragment missing")
    elif widget_ok:
        report = validate_widget_contract(
            generated.widget_fragment, spec_unit.interaction, policy
        )
        if not report.ok:
            widget_ok = False
            notes.extend(f"widget: {v.path}: {v.message}" for v in report.violations)
    ok = text_ok and widget_ok
    return UnitCompleteness(spec_unit.id, ok, text_ok, widget_ok, tuple(notes))


def _sections_text(spec, by_id) -> str:
    parts = []
    for unit in spec.units:
        generated = by_id.get(unit.id)
        text = generated.text_fragment if generated is not None else None
        prose = extract_text(text) if text else "(missing)"
        parts.append(f"[{unit.id}]\n{prose}")
    return "\n\n".join(parts)


def _parse_coherence(text: str) -> "tuple[int | None, list[CoherenceIssue], str | None]":
    """Returns (score, issues, problem).  problem is None when usable."""

    try:
        obj = json.loads(text)
    except ValueError as exc:
        return None, [], f"not valid JSON ({exc})"
    if not isinstance(obj, dict):
        return None, [], "not a JSON object"
    score = obj.get("score")
    if isinstance(score, bool) or not isinstance(score, int) or not 1 <= score <= 5:
        return None, [], f"score must be an integer in [1, 5], got {score!r}"
    issues = []
    raw_issues = obj.get("issues", [])
    if not isinstance(raw_issues, list):
        return None, [], "issues must be a list"
    for item in raw_issues:
        if not isinstance(item, dict):
            return None, [], "each issue must be an object"
        issues.append(
            CoherenceIssue(str(item.get("unit_id", "")), str(item.get("note", "")))
        )
    return score, issues, None


def evaluate(
    document,
    units,
    spec,
    provider=None,
    config: "PipelineConfig | None" = None,
) -> EvaluationReport:
    """Judge an assembled document against its spec.

    ``units`` are the GeneratedUnit records from execution; the fragments are
    re-validated here rather than trusted, so the report stands on its own.
    """

    config = config or PipelineConfig()
    policy = config.fragment_policy
    by_id = {unit.unit_id: unit for unit in units}

    completeness = tuple(
        _check_unit(spec_unit, by_id.get(spec_unit.id), policy) for spec_unit in spec.units
    )

    constraints = []
    for spec_unit in spec.units:
        plan = plan_sweep(spec_unit.interaction, config.grid_points, config.cap)
        constraints.append((spec_unit.id, verify_constraint(spec_unit.interaction, plan)))
    constraints = tuple(constraints)

    coherence_score = None
    coherence_issues: list[CoherenceIssue] = []
    if provider is None:
        coherence_issues.append(CoherenceIssue("", "coherence skipped: no provider"))
    else:
        prompt = render_prompt(
            "evaluator_coherence",
            topic=spec.topic,
            sections=_sections_text(spec, by_id),
        )
        response = provider.complete(prompt, stage="coherence", key="coherence")
        coherence_score, issues, problem = _parse_coherence(response)
        if problem is not None:
            coherence_issues.append(CoherenceIssue("", f"coherence response unusable: {problem}"))
        else:
            coherence_issues.extend(issues)

    violated = {unit_id for unit_id, report in constraints if report.status == "violated"}
    directives = []
    for unit in completeness:
        if not unit.text_ok:
            directives.append((unit.unit_id, "text"))
        if not unit.widget_ok or unit.unit_id in violated:
            directives.append((unit.unit_id, "widget"))

    failed = any(not unit.ok for unit in completeness) or bool(violated)
    return EvaluationReport(
        verdict="fail" if failed else "pass",
        coherence_score=coherence_score,
        coherence_issues=tuple(coherence_issues),
        completeness=completeness,
        constraints=constraints,
        directives=tuple(directives),
    )
