"""Planner and Executor stages with bounded retry.

The planner turns a topic into a validated document spec.  The executor
walks the spec's units twice: prose first, sequentially, so each section is
written with the extracted text of its predecessors in the prompt; widgets
second, fanned out across a small thread pool, since each widget depends only
on its own interaction spec.  Every provider response is validated before it
is accepted, failed attempts feed the validation report back into the next
prompt, and no stage ever calls its provider more than ``max_attempts``
times per unit.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..docspec import DocSpec, docspec_schema, interaction_to_jsonable, parse_docspec
from ..htmlcheck import FragmentPolicy, default_policy, extract_text, validate_fragment
from ..report import ValidationReport
from ..widget import compile_widget, validate_widget_contract
from .assemble import Document, build_document
from .prompts import render_prompt
from .providers import Provider, ProviderSet

__all__ = [
    "ExecutionFailed",
    "GeneratedUnit",
    "NO_CONTEXT_MARKER",
    "PipelineConfig",
    "PipelineError",
    "PlanFailed",
    "StageFailed",
    "execute",
    "execute_unit_text",
    "execute_unit_widget",
    "plan",
]

NO_CONTEXT_MARKER = "(no prior sections)"

_FEEDBACK_HEADER = "The previous attempt failed validation:"


class PipelineError(RuntimeError):
    pass


class PlanFailed(PipelineError):
    def __init__(self, topic: str, reports: "list[ValidationReport]"):
        self.topic = topic
        self.reports = list(reports)
        super().__init__(
            f"planning failed for topic {topic!r} after {len(self.reports)} attempt(s)"
        )


class StageFailed(PipelineError):
    def __init__(self, unit_id: str, stage: str, reports: "list[ValidationReport]"):
        self.unit_id = unit_id
        self.stage = stage
        self.reports = list(reports)
        super().__init__(
            f"{stage} stage failed for unit {unit_id!r} after {len(self.reports)} attempt(s)"
        )


class ExecutionFailed(PipelineError):
    def __init__(self, cause: StageFailed, completed: "list[GeneratedUnit]"):
        self.unit_id = cause.unit_id
        self.cause = cause
        self.completed = list(completed)
        super().__init__(f"execution failed at unit {cause.unit_id!r}: {cause}")


@dataclass(frozen=True)
class PipelineConfig:
    max_attempts: int = 3
    sequential_text: bool = True
    widget_mode: str = "llm"  # "llm" | "deterministic"
    grid_points: int = 11
    cap: int = 10_000
    container_prefix: str = "dw"
    widget_workers: int = 4
    policy: "FragmentPolicy | None" = None

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")
        if self.widget_mode not in ("llm", "deterministic"):
            raise ValueError("widget_mode must be 'llm' or 'deterministic'")

    @property
    def fragment_policy(self) -> FragmentPolicy:
        return self.policy if self.policy is not None else default_policy()


@dataclass(frozen=True)
class GeneratedUnit:
    unit_id: str
    text_fragment: "str | None"
    widget_fragment: "str | None"
    attempts_text: int
    attempts_widget: int
    status: str  # "ok" | "failed"
    used_fallback: bool = False
    failures: tuple = ()

    def to_json(self) -> dict:
        return {
            "unit_id": self.unit_id,
            "status": self.status,
            "attempts_text": self.attempts_text,
            "attempts_widget": self.attempts_widget,
            "used_fallback": self.used_fallback,
            "failures": list(self.failures),
        }


def _with_feedback(prompt: str, report: ValidationReport) -> str:
    return f"{prompt}\n\n{_FEEDBACK_HEADER}\n{report.render()}"


def plan(topic: str, provider: Provider, config: "PipelineConfig | None" = None) -> DocSpec:
    """Topic → validated DocSpec, re-prompting with feedback up to k times."""

    if not topic.strip():
        raise ValueError("topic must be non-empty")
    config = config or PipelineConfig()
    schema_text = json.dumps(docspec_schema(), sort_keys=True, indent=2)
    prompt = render_prompt("planner", topic=topic, schema=schema_text)
    reports: list[ValidationReport] = []
    for _ in range(config.max_attempts):
        response = provider.complete(prompt, stage="plan", key=topic, schema=docspec_schema())
        result = parse_docspec(response)
        if isinstance(result, DocSpec):
            return result
        reports.append(result)
        prompt = _with_feedback(prompt, result)
    raise PlanFailed(topic, reports)


def execute_unit_text(
    unit,
    context: str,
    provider: Provider,
    config: PipelineConfig,
    topic: str = "",
) -> tuple[str, int]:
    """One unit's prose fragment plus the attempt count that produced it."""

    prompt = render_prompt(
        "executor_text",
        topic=topic,
        unit_id=unit.id,
        summary=unit.summary,
        description=unit.text_description,
        context=context if context.strip() else NO_CONTEXT_MARKER,
    )
    reports: list[ValidationReport] = []
    for attempt in range(1, config.max_attempts + 1):
        response = provider.complete(prompt, stage="text", key=unit.id)
        report = validate_fragment(response, config.fragment_policy)
        if report.ok:
            return response, attempt
        reports.append(report)
        prompt = _with_feedback(prompt, report)
    raise StageFailed(unit.id, "text", reports)


@dataclass(frozen=True)
class _WidgetResult:
    fragment: str
    attempts: int
    used_fallback: bool


def execute_unit_widget(
    unit,
    provider: "Provider | None",
    config: PipelineConfig,
    mode: "str | None" = None,
) -> _WidgetResult:
    """One unit's widget fragment.

    In deterministic mode the compiler is the generator.  In llm mode the
    provider gets up to k attempts, each audited by the widget contract; on
    exhaustion the compiler takes over and the fallback is recorded — a
    widget stage never fails terminally.
    """

    mode = mode or config.widget_mode
    container_id = f"{config.container_prefix}-{unit.id}"
    if mode == "deterministic":
        fragment = compile_widget(unit.interaction, container_id)
        return _WidgetResult(fragment.html, 0, False)
    if mode != "llm":
        raise ValueError(f"unknown widget mode {mode!r}")
    if provider is None:
        raise ValueError("llm widget mode needs a provider")

    interaction_json = json.dumps(
        interaction_to_jsonable(unit.interaction), sort_keys=True, indent=2
    )
    prompt = render_prompt(
        "executor_widget", interaction=interaction_json, container_id=container_id
    )
    for attempt in range(1, config.max_attempts + 1):
        response = provider.complete(prompt, stage="widget", key=unit.id)
        report = validate_widget_contract(response, unit.interaction, config.fragment_policy)
        if report.ok:
            return _WidgetResult(response, attempt, False)
        prompt = _with_feedback(prompt, report)
    fragment = compile_widget(unit.interaction, container_id)
    return _WidgetResult(fragment.html, config.max_attempts, True)


def _noop_progress(unit_id: str, stage: str, state: str) -> None:
    pass


def execute(
    spec: DocSpec,
    providers: ProviderSet,
    config: "PipelineConfig | None" = None,
    progress=None,
) -> tuple[Document, list[GeneratedUnit]]:
    """Run both executor stages over every unit and assemble the page.

    Text is sequential in unit order (each prompt carries its predecessors'
    extracted text); widget generation fans out as soon as a unit's text is
    done and everything joins before assembly, so section order always equals
    unit order.
    """

    config = config or PipelineConfig()
    progress = progress or _noop_progress

    texts: dict[str, tuple[str, int]] = {}
    widget_futures: dict[str, object] = {}
    completed: list[GeneratedUnit] = []

    def finish_widgets() -> dict[str, _WidgetResult]:
        return {unit_id: future.result() for unit_id, future in widget_futures.items()}

    with ThreadPoolExecutor(max_workers=max(1, config.widget_workers)) as pool:
        def submit_widget(unit) -> None:
            progress(unit.id, "widget", "start")
            widget_futures[unit.id] = pool.submit(
                execute_unit_widget, unit, providers.widget, config
            )

        def run_text(unit, context: str) -> None:
            progress(unit.id, "text", "start")
            try:
                texts[unit.id] = execute_unit_text(
                    unit, context, providers.text, config, topic=spec.topic
                )
            except StageFailed as failure:
                progress(unit.id, "text", "failed")
                widgets = finish_widgets()
                for done in spec.units:
                    if done.id in texts and done.id in widgets:
                        completed.append(
                            _generated(done.id, texts[done.id], widgets[done.id])
                        )
                raise ExecutionFailed(failure, completed) from failure
            progress(unit.id, "text", "done")

        if config.sequential_text:
            context_parts: list[str] = []
            for unit in spec.units:
                run_text(unit, "\n\n".join(context_parts))
                context_parts.append(extract_text(texts[unit.id][0]))
                submit_widget(unit)
        else:
            for unit in spec.units:
                run_text(unit, "")
                submit_widget(unit)

        widgets = finish_widgets()

    units_out = [_generated(unit.id, texts[unit.id], widgets[unit.id]) for unit in spec.units]
    for unit in units_out:
        progress(unit.unit_id, "widget", "done")
    document = build_document(spec, units_out, config)
    return document, units_out


def _generated(unit_id: str, text: tuple[str, int], widget: _WidgetResult) -> GeneratedUnit:
    return GeneratedUnit(
        unit_id=unit_id,
        text_fragment=text[0],
        widget_fragment=widget.fragment,
        attempts_text=text[1],
        attempts_widget=widget.attempts,
        status="ok",
        used_fallback=widget.used_fallback,
    )
