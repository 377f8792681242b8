"""Single-call baseline and the two-arm comparison harness.

The naive arm asks the provider for a complete HTML page in one shot and
validates only that it is a well-formed, self-contained page — no spec, no
constraint verification, no per-unit structure.  The comparison harness runs
that arm and the full planned pipeline on the same topic and returns both
artifacts side by side so they can be judged against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..docspec import DocSpec, docspec_to_jsonable
from ..htmlcheck import page_policy, validate_page
from ..report import ValidationReport
from .assemble import Document
from .evaluate import EvaluationReport, evaluate
from .prompts import render_prompt
from .providers import Provider, ProviderSet
from .stages import PipelineConfig, StageFailed, _with_feedback, execute, plan

__all__ = ["ComparisonResult", "run_comparison", "run_naive"]


def run_naive(
    topic: str,
    provider: Provider,
    config: "PipelineConfig | None" = None,
) -> Document:
    """Topic → one-shot page, retried up to k times on validation failure."""

    if not topic.strip():
        raise ValueError("topic must be non-empty")
    config = config or PipelineConfig()
    prompt = render_prompt("naive", topic=topic)
    reports: list[ValidationReport] = []
    for attempt in range(1, config.max_attempts + 1):
        response = provider.complete(prompt, stage="naive", key=topic)
        report = validate_page(response, page_policy())
        if report.ok:
            return Document(
                title=topic,
                html=response,
                unit_ids=(),
                metadata={
                    "generator": "docweave",
                    "mode": "naive",
                    "topic": topic,
                    "attempts": attempt,
                },
                mode="naive",
            )
        reports.append(report)
        prompt = _with_feedback(prompt, report)
    raise StageFailed(topic, "naive", reports)


@dataclass(frozen=True)
class ComparisonResult:
    """Both arms of a comparison run over one topic.

    The naive arm carries only its page; the pipeline arm carries the spec it
    planned, the assembled page, the per-unit generation records, and the
    evaluation — the asymmetry is the point.
    """

    topic: str
    naive: Document
    spec: DocSpec
    pipeline: Document
    units: tuple
    evaluation: EvaluationReport

    def to_json(self) -> dict:
        return {
            "topic": self.topic,
            "naive": {"document": self.naive.to_json()},
            "pipeline": {
                "docspec": docspec_to_jsonable(self.spec),
                "document": self.pipeline.to_json(),
                "units": [unit.to_json() for unit in self.units],
                "evaluation": self.evaluation.to_json(),
            },
        }


def run_comparison(
    topic: str,
    providers: ProviderSet,
    config: "PipelineConfig | None" = None,
) -> ComparisonResult:
    config = config or PipelineConfig()
    naive_doc = run_naive(topic, providers.naive, config)
    spec = plan(topic, providers.planner, config)
    document, units = execute(spec, providers, config)
    evaluation = evaluate(document, units, spec, providers.evaluator, config)
    return ComparisonResult(
        topic=topic,
        naive=naive_doc,
        spec=spec,
        pipeline=document,
        units=tuple(units),
        evaluation=evaluation,
    )
