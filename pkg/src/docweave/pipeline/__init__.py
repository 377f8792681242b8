"""Planner → Executor → Evaluator pipeline over pluggable text providers."""

from .assemble import AssemblyError, Document, build_document
from .evaluate import CoherenceIssue, EvaluationReport, UnitCompleteness, evaluate
from .naive import ComparisonResult, run_comparison, run_naive
from .prompts import render_prompt, template_fields
from .providers import (
    FAULT_TEXT,
    FixtureExhausted,
    HttpProvider,
    Provider,
    ProviderError,
    ProviderSet,
    RecordedCall,
    ScriptedProvider,
    fixture_key,
)
from .stages import (
    NO_CONTEXT_MARKER,
    ExecutionFailed,
    GeneratedUnit,
    PipelineConfig,
    PipelineError,
    PlanFailed,
    StageFailed,
    execute,
    execute_unit_text,
    execute_unit_widget,
    plan,
)

__all__ = [
    "AssemblyError",
    "CoherenceIssue",
    "ComparisonResult",
    "Document",
    "EvaluationReport",
    "ExecutionFailed",
    "FAULT_TEXT",
    "FixtureExhausted",
    "GeneratedUnit",
    "HttpProvider",
    "NO_CONTEXT_MARKER",
    "PipelineConfig",
    "PipelineError",
    "PlanFailed",
    "Provider",
    "ProviderError",
    "ProviderSet",
    "RecordedCall",
    "ScriptedProvider",
    "StageFailed",
    "UnitCompleteness",
    "build_document",
    "evaluate",
    "execute",
    "execute_unit_text",
    "execute_unit_widget",
    "fixture_key",
    "plan",
    "render_prompt",
    "run_comparison",
    "run_naive",
    "template_fields",
]
