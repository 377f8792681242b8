"""Planner/Executor/Evaluator orchestration over scripted providers."""

from __future__ import annotations

import json
import pathlib
import re
import threading

import pytest

from docweave.docspec import DocSpec, KnowledgeUnit, parse_docspec
from docweave.htmlcheck import extract_text, page_policy, validate_page
from docweave.pipeline import (
    FAULT_TEXT,
    AssemblyError,
    ExecutionFailed,
    FixtureExhausted,
    GeneratedUnit,
    NO_CONTEXT_MARKER,
    PipelineConfig,
    PlanFailed,
    ProviderError,
    ProviderSet,
    ScriptedProvider,
    StageFailed,
    build_document,
    evaluate,
    execute,
    execute_unit_text,
    execute_unit_widget,
    fixture_key,
    plan,
    render_prompt,
    run_comparison,
    run_naive,
    template_fields,
)
from docweave.widget import compile_widget

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"
SCRIPTED = FIXTURES / "scripted"
CORPUS = FIXTURES / "corpus"

RANK_TOPIC = "What is the rank of a matrix?"
RANK_UNITS = ("column-scaling", "pivot-count", "independent-directions")

VALID_FRAGMENT = "<div><p>A perfectly ordinary paragraph.</p></div>"
VALID_PAGE = (
    "<!DOCTYPE html>\n<html><head><title>t</title></head>"
    "<body><p>hello</p></body></html>"
)


def corpus_spec(name: str) -> DocSpec:
    spec = parse_docspec((CORPUS / name).read_text(encoding="utf-8"))
    assert isinstance(spec, DocSpec)
    return spec


def rank_provider(tree: str = "matrix-rank", **kwargs) -> ScriptedProvider:
    return ScriptedProvider.from_dir(SCRIPTED / tree, **kwargs)


def run_rank(tree: str = "matrix-rank", config: PipelineConfig | None = None):
    provider = rank_provider(tree)
    providers = ProviderSet.uniform(provider)
    config = config or PipelineConfig()
    spec = plan(RANK_TOPIC, providers.planner, config)
    document, units = execute(spec, providers, config)
    return document, units, spec, providers, provider, config


# ---------------------------------------------------------------------------
# providers
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "raw, slug",
    [
        (RANK_TOPIC, "what-is-the-rank-of-a-matrix"),
        ("Widen the radius slider to 10", "widen-the-radius-slider-to-10"),
        ("pivot-count", "pivot-count"),
        ("a_b-c", "a_b-c"),
        ("  spaced   out  ", "spaced-out"),
        ("", "default"),
        ("π", "default"),
    ],
)
def test_fixture_key_slugs(raw, slug):
    assert fixture_key(raw) == slug


def test_scripted_provider_replays_in_order_and_audits():
    provider = ScriptedProvider({("text", "u"): ["one", "two"]})
    assert provider.complete("p1", stage="text", key="u") == "one"
    assert provider.complete("p2", stage="text", key="u", schema={"type": "object"}) == "two"
    assert [c.prompt for c in provider.calls] == ["p1", "p2"]
    assert [c.schema_constrained for c in provider.calls] == [False, True]
    assert provider.calls_for("text", "u") == 2


def test_scripted_provider_exhaustion_raises():
    provider = ScriptedProvider({("text", "u"): ["only"]})
    provider.complete("p", stage="text", key="u")
    with pytest.raises(FixtureExhausted, match="no scripted response left"):
        provider.complete("p", stage="text", key="u")


def test_unknown_slot_raises_not_silently_falls_back():
    provider = ScriptedProvider({})
    with pytest.raises(FixtureExhausted):
        provider.complete("p", stage="text", key="missing")


def test_fault_schedule_interleaves_without_consuming():
    provider = ScriptedProvider(
        {("text", "u"): ["real"]}, fault_schedule={("text", "u"): [1, 3]}
    )
    assert provider.complete("p", stage="text", key="u") == FAULT_TEXT
    assert provider.complete("p", stage="text", key="u") == "real"
    assert provider.complete("p", stage="text", key="u") == FAULT_TEXT
    assert provider.calls_for("text", "u") == 3


def test_from_dir_orders_numbered_fixtures(tmp_path):
    (tmp_path / "text").mkdir()
    (tmp_path / "text" / "u.2.html").write_text("second", encoding="utf-8")
    (tmp_path / "text" / "u.1.html").write_text("first", encoding="utf-8")
    provider = ScriptedProvider.from_dir(tmp_path)
    assert provider.complete("p", stage="text", key="u") == "first"
    assert provider.complete("p", stage="text", key="u") == "second"


def test_from_dir_rejects_duplicate_order(tmp_path):
    (tmp_path / "text").mkdir()
    (tmp_path / "text" / "u.1.html").write_text("a", encoding="utf-8")
    (tmp_path / "text" / "u.1.json").write_text("b", encoding="utf-8")
    with pytest.raises(ProviderError, match="duplicate fixture order"):
        ScriptedProvider.from_dir(tmp_path)


def test_from_dir_missing_root_raises():
    with pytest.raises(ProviderError, match="does not exist"):
        ScriptedProvider.from_dir(SCRIPTED / "no-such-tree")


def test_scripted_provider_is_thread_safe():
    slots = {("widget", f"u{i}"): [f"r{i}-{j}" for j in range(20)] for i in range(8)}
    provider = ScriptedProvider(slots)

    def worker(i: int) -> None:
        for _ in range(20):
            provider.complete("p", stage="widget", key=f"u{i}")

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(provider.calls) == 160
    for i in range(8):
        assert provider.calls_for("widget", f"u{i}") == 20


# ---------------------------------------------------------------------------
# prompt templates
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name, fields",
    [
        ("planner", {"topic", "schema"}),
        ("executor_text", {"topic", "unit_id", "summary", "description", "context"}),
        ("executor_widget", {"interaction", "container_id"}),
        ("evaluator_coherence", {"topic", "sections"}),
        ("naive", {"topic"}),
        ("chat_edit", {"spec", "message", "schema"}),
    ],
)
def test_template_fields(name, fields):
    assert template_fields(name) == frozenset(fields)


def test_render_prompt_embeds_values_verbatim():
    text = render_prompt("naive", topic="Why is the sky blue?")
    assert "Why is the sky blue?" in text


def test_render_prompt_rejects_missing_and_extra_fields():
    with pytest.raises(ValueError, match="missing"):
        render_prompt("planner", topic="t")
    with pytest.raises(ValueError, match="extra: extra"):
        render_prompt("naive", topic="t", extra="x")


def test_render_prompt_unknown_template():
    with pytest.raises(KeyError):
        render_prompt("no_such_template")


# ---------------------------------------------------------------------------
# planner
# ---------------------------------------------------------------------------


def test_plan_returns_validated_spec_from_fixture():
    provider = rank_provider()
    spec = plan(RANK_TOPIC, provider)
    assert isinstance(spec, DocSpec)
    assert tuple(u.id for u in spec.units) == RANK_UNITS
    assert provider.calls_for("plan") == 1
    assert provider.calls[0].schema_constrained


def test_plan_retries_with_feedback_then_succeeds():
    provider = rank_provider(fault_schedule={("plan", RANK_TOPIC): [1]})
    spec = plan(RANK_TOPIC, provider)
    assert isinstance(spec, DocSpec)
    assert provider.calls_for("plan") == 2
    retry_prompt = provider.calls[1].prompt
    assert "failed validation" in retry_prompt
    assert retry_prompt.startswith(provider.calls[0].prompt)


def test_plan_exhaustion_carries_all_reports():
    provider = rank_provider(fault_schedule={("plan", RANK_TOPIC): [1, 2, 3]})
    with pytest.raises(PlanFailed) as exc:
        plan(RANK_TOPIC, provider)
    assert len(exc.value.reports) == 3
    assert provider.calls_for("plan") == 3


def test_plan_rejects_empty_topic():
    with pytest.raises(ValueError, match="non-empty"):
        plan("   ", rank_provider())


# ---------------------------------------------------------------------------
# executor: text stage
# ---------------------------------------------------------------------------


def unit_of(spec: DocSpec, unit_id: str) -> KnowledgeUnit:
    return next(u for u in spec.units if u.id == unit_id)


def test_text_stage_happy_path():
    spec = corpus_spec("pi-ratio.docspec.json")
    provider = ScriptedProvider({("text", "pi-as-a-ratio"): [VALID_FRAGMENT]})
    fragment, attempts = execute_unit_text(
        spec.units[0], "", provider, PipelineConfig(), topic=spec.topic
    )
    assert fragment == VALID_FRAGMENT
    assert attempts == 1
    assert NO_CONTEXT_MARKER in provider.calls[0].prompt


def test_text_stage_feeds_report_back_on_retry():
    spec = corpus_spec("pi-ratio.docspec.json")
    provider = ScriptedProvider(
        {("text", "pi-as-a-ratio"): ["<p>unclosed", VALID_FRAGMENT]}
    )
    fragment, attempts = execute_unit_text(
        spec.units[0], "", provider, PipelineConfig(), topic=spec.topic
    )
    assert attempts == 2
    assert "unclosed tag p" in provider.calls[1].prompt


def test_text_stage_exhaustion_raises_stage_failed():
    spec = corpus_spec("pi-ratio.docspec.json")
    provider = ScriptedProvider(
        {("text", "pi-as-a-ratio"): ["<p>a", "<p>b", "<p>c"]}
    )
    with pytest.raises(StageFailed) as exc:
        execute_unit_text(spec.units[0], "", provider, PipelineConfig(), topic=spec.topic)
    assert exc.value.unit_id == "pi-as-a-ratio"
    assert exc.value.stage == "text"
    assert len(exc.value.reports) == 3
    assert provider.calls_for("text") == 3


def test_text_stage_passes_context_verbatim():
    spec = corpus_spec("pi-ratio.docspec.json")
    provider = ScriptedProvider({("text", "pi-as-a-ratio"): [VALID_FRAGMENT]})
    execute_unit_text(
        spec.units[0], "Previously: circles.", provider, PipelineConfig(), topic=spec.topic
    )
    prompt = provider.calls[0].prompt
    assert "Previously: circles." in prompt
    assert NO_CONTEXT_MARKER not in prompt


# ---------------------------------------------------------------------------
# executor: widget stage
# ---------------------------------------------------------------------------


def test_widget_stage_deterministic_equals_compiler():
    spec = corpus_spec("pi-ratio.docspec.json")
    config = PipelineConfig(widget_mode="deterministic")
    result = execute_unit_widget(spec.units[0], None, config)
    compiled = compile_widget(spec.units[0].interaction, "dw-pi-as-a-ratio")
    assert result.fragment == compiled.html
    assert result.attempts == 0
    assert not result.used_fallback


def test_widget_stage_accepts_valid_llm_fragment():
    spec = corpus_spec("pi-ratio.docspec.json")
    good = compile_widget(spec.units[0].interaction, "dw-pi-as-a-ratio").html
    provider = ScriptedProvider({("widget", "pi-as-a-ratio"): [good]})
    result = execute_unit_widget(spec.units[0], provider, PipelineConfig())
    assert result.fragment == good
    assert result.attempts == 1
    assert not result.used_fallback


def test_widget_stage_falls_back_to_compiler_on_exhaustion():
    spec = corpus_spec("pi-ratio.docspec.json")
    provider = ScriptedProvider({}, fault_schedule={("widget", "pi-as-a-ratio"): [1, 2, 3]})
    result = execute_unit_widget(spec.units[0], provider, PipelineConfig())
    compiled = compile_widget(spec.units[0].interaction, "dw-pi-as-a-ratio")
    assert result.fragment == compiled.html
    assert result.attempts == 3
    assert result.used_fallback
    assert provider.calls_for("widget") == 3


def test_widget_stage_retry_prompt_names_the_defect():
    spec = corpus_spec("pi-ratio.docspec.json")
    good = compile_widget(spec.units[0].interaction, "dw-pi-as-a-ratio").html
    provider = ScriptedProvider({("widget", "pi-as-a-ratio"): ["<div>empty</div>", good]})
    result = execute_unit_widget(spec.units[0], provider, PipelineConfig())
    assert result.attempts == 2
    assert "range input" in provider.calls[1].prompt


def test_widget_stage_guards_modes():
    spec = corpus_spec("pi-ratio.docspec.json")
    with pytest.raises(ValueError, match="provider"):
        execute_unit_widget(spec.units[0], None, PipelineConfig())
    with pytest.raises(ValueError, match="unknown widget mode"):
        execute_unit_widget(spec.units[0], None, PipelineConfig(), mode="psychic")


def test_config_rejects_bad_values():
    with pytest.raises(ValueError, match="at least 1"):
        PipelineConfig(max_attempts=0)
    with pytest.raises(ValueError, match="widget_mode"):
        PipelineConfig(widget_mode="naive")


# ---------------------------------------------------------------------------
# execute: full and failure runs
# ---------------------------------------------------------------------------


def test_full_run_generates_every_unit_in_order():
    document, units, spec, _, provider, _ = run_rank()
    assert document.unit_ids == RANK_UNITS
    assert [u.unit_id for u in units] == list(RANK_UNITS)
    assert all(u.status == "ok" for u in units)
    section_ids = re.findall(r'<section id="unit-([a-z-]+)"', document.html)
    assert tuple(section_ids) == RANK_UNITS
    assert provider.calls_for("plan") == 1
    assert provider.calls_for("text") == 3
    assert provider.calls_for("widget") == 3


def test_full_run_is_byte_deterministic():
    first = run_rank()[0]
    second = run_rank()[0]
    assert first.html == second.html


def test_attempt_counts_match_provider_audit():
    _, units, _, _, provider, _ = run_rank()
    for unit in units:
        assert unit.attempts_text == provider.calls_for("text", unit.unit_id) == 1
        assert unit.attempts_widget == provider.calls_for("widget", unit.unit_id) == 1


def test_text_prompts_accumulate_prior_sections():
    _, units, _, _, provider, _ = run_rank()
    text_calls = [c for c in provider.calls if c.stage == "text"]
    assert [c.key for c in text_calls] == list(RANK_UNITS)
    assert NO_CONTEXT_MARKER in text_calls[0].prompt
    first_prose = extract_text(units[0].text_fragment)
    assert first_prose.split("\n")[0] in text_calls[1].prompt
    assert NO_CONTEXT_MARKER not in text_calls[2].prompt


def test_deterministic_mode_makes_no_widget_calls():
    _, units, _, _, provider, _ = run_rank(
        config=PipelineConfig(widget_mode="deterministic")
    )
    assert provider.calls_for("widget") == 0
    assert all(u.attempts_widget == 0 for u in units)
    assert all(u.widget_fragment for u in units)


def test_text_exhaustion_fails_execution_naming_the_unit():
    provider = rank_provider("matrix-rank-textfail")
    providers = ProviderSet.uniform(provider)
    config = PipelineConfig(widget_mode="deterministic")
    spec = plan(RANK_TOPIC, providers.planner, config)
    with pytest.raises(ExecutionFailed) as exc:
        execute(spec, providers, config)
    assert exc.value.unit_id == "pivot-count"
    assert [u.unit_id for u in exc.value.completed] == ["column-scaling"]
    assert len(exc.value.cause.reports) == 3
    assert provider.calls_for("text", "pivot-count") == 3
    assert provider.calls_for("text", "independent-directions") == 0


def test_retry_feedback_cites_each_prior_defect():
    provider = rank_provider("matrix-rank-textfail")
    providers = ProviderSet.uniform(provider)
    config = PipelineConfig(widget_mode="deterministic")
    spec = plan(RANK_TOPIC, providers.planner, config)
    with pytest.raises(ExecutionFailed):
        execute(spec, providers, config)
    prompts = [c.prompt for c in provider.calls if c.key == "pivot-count"]
    assert "mismatched closing tag" in prompts[1]
    assert "forbidden attribute onclick" in prompts[2]


def test_static_unit_yields_inert_widget_section():
    spec = corpus_spec("static-axes.docspec.json")
    provider = ScriptedProvider({("text", "axes"): [VALID_FRAGMENT]})
    providers = ProviderSet.uniform(provider)
    document, units = execute(
        spec, providers, PipelineConfig(widget_mode="deterministic")
    )
    widget = units[0].widget_fragment
    assert "<input" not in widget
    assert "addEventListener" not in widget
    assert document.unit_ids == ("axes",)


def test_document_metadata_records_run():
    document, units, _, _, _, config = run_rank()
    match = re.search(
        r'<script type="application/json" id="doc-meta">(.*?)</script>',
        document.html,
        re.S,
    )
    assert match
    metadata = json.loads(match.group(1).replace("<\\/", "</"))
    assert metadata["topic"] == RANK_TOPIC
    assert metadata["config"]["max_attempts"] == config.max_attempts
    assert [u["unit_id"] for u in metadata["units"]] == list(RANK_UNITS)
    assert all(u["attempts_text"] == 1 for u in metadata["units"])


def test_progress_callback_sees_every_unit():
    events = []
    provider = rank_provider()
    providers = ProviderSet.uniform(provider)
    config = PipelineConfig()
    spec = plan(RANK_TOPIC, providers.planner, config)
    execute(spec, providers, config, progress=lambda u, s, st: events.append((u, s, st)))
    for unit_id in RANK_UNITS:
        assert (unit_id, "text", "done") in events
        assert (unit_id, "widget", "done") in events


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def generated(unit, fragment=VALID_FRAGMENT) -> GeneratedUnit:
    widget = compile_widget(unit.interaction, f"dw-{unit.id}").html
    return GeneratedUnit(
        unit_id=unit.id,
        text_fragment=fragment,
        widget_fragment=widget,
        attempts_text=1,
        attempts_widget=0,
        status="ok",
    )


def test_assembled_page_passes_page_validation():
    document, *_ = run_rank()
    assert validate_page(document.html, page_policy()).ok


def test_assembly_escapes_topic_and_summaries():
    base = corpus_spec("pi-ratio.docspec.json")
    spicy_unit = KnowledgeUnit(
        id=base.units[0].id,
        summary="a < b & c",
        text_description=base.units[0].text_description,
        interaction=base.units[0].interaction,
    )
    spec = DocSpec(topic="Tags <em> & friends", units=(spicy_unit,))
    document = build_document(spec, [generated(spicy_unit)])
    assert "<title>Tags &lt;em&gt; &amp; friends</title>" in document.html
    assert "<h2>a &lt; b &amp; c</h2>" in document.html
    assert validate_page(document.html, page_policy()).ok


def test_assembly_rejects_missing_extra_and_duplicate_units():
    spec = corpus_spec("pi-ratio.docspec.json")
    unit = spec.units[0]
    ok = generated(unit)
    with pytest.raises(AssemblyError, match="missing generated unit"):
        build_document(spec, [])
    with pytest.raises(AssemblyError, match="duplicate generated unit"):
        build_document(spec, [ok, ok])
    stray = GeneratedUnit("ghost", VALID_FRAGMENT, ok.widget_fragment, 1, 0, "ok")
    with pytest.raises(AssemblyError, match="not in spec"):
        build_document(spec, [ok, stray])


def test_assembly_rejects_failed_units():
    spec = corpus_spec("pi-ratio.docspec.json")
    broken = GeneratedUnit(spec.units[0].id, None, None, 3, 0, "failed")
    with pytest.raises(AssemblyError, match="not ok"):
        build_document(spec, [broken])


# ---------------------------------------------------------------------------
# evaluator
# ---------------------------------------------------------------------------


def test_clean_run_evaluates_to_pass():
    document, units, spec, providers, _, config = run_rank()
    report = evaluate(document, units, spec, providers.evaluator, config)
    assert report.verdict == "pass"
    assert report.ok
    assert report.coherence_score == 5
    assert report.directives == ()
    assert all(unit.ok for unit in report.completeness)
    assert {status.status for _, status in report.constraints} <= {"verified", "skipped-static"}


def test_planted_violation_fails_verdict_with_widget_directive():
    document, units, spec, providers, _, config = run_rank("matrix-rank-violation")
    report = evaluate(document, units, spec, providers.evaluator, config)
    assert report.verdict == "fail"
    assert ("pivot-count", "widget") in report.directives
    statuses = {unit_id: r.status for unit_id, r in report.constraints}
    assert statuses["pivot-count"] == "violated"
    assert statuses["column-scaling"] == "verified"
    assert all(unit.ok for unit in report.completeness)


def test_tampered_fragment_fails_completeness():
    document, units, spec, providers, _, config = run_rank()
    tampered = list(units)
    broken = GeneratedUnit(
        unit_id=tampered[1].unit_id,
        text_fragment="<p>no closing tag",
        widget_fragment=tampered[1].widget_fragment,
        attempts_text=1,
        attempts_widget=1,
        status="ok",
    )
    tampered[1] = broken
    report = evaluate(document, tampered, spec, providers.evaluator, config)
    assert report.verdict == "fail"
    assert ("pivot-count", "text") in report.directives
    against = {unit.unit_id: unit for unit in report.completeness}
    assert not against["pivot-count"].text_ok
    assert against["pivot-count"].widget_ok
    assert against["column-scaling"].ok


def test_coherence_is_advisory_only():
    document, units, spec, _, _, config = run_rank()
    critic = ScriptedProvider(
        {
            ("coherence", "coherence"): [
                json.dumps(
                    {
                        "score": 2,
                        "issues": [
                            {"unit_id": "pivot-count", "note": "repeats the intro"}
                        ],
                    }
                )
            ]
        }
    )
    report = evaluate(document, units, spec, critic, config)
    assert report.verdict == "pass"
    assert report.coherence_score == 2
    assert report.coherence_issues[0].unit_id == "pivot-count"
    assert report.directives == ()


@pytest.mark.parametrize(
    "response, reason",
    [
        ("not json at all", "not valid JSON"),
        ('["a", "list"]', "not a JSON object"),
        ('{"score": 6, "issues": []}', "score must be an integer"),
        ('{"score": 0}', "score must be an integer"),
        ('{"score": true}', "score must be an integer"),
        ('{"score": 3, "issues": {"not": "a list"}}', "issues must be a list"),
    ],
)
def test_unusable_coherence_is_noted_not_fatal(response, reason):
    document, units, spec, _, _, config = run_rank()
    critic = ScriptedProvider({("coherence", "coherence"): [response]})
    report = evaluate(document, units, spec, critic, config)
    assert report.verdict == "pass"
    assert report.coherence_score is None
    assert any(reason in issue.note for issue in report.coherence_issues)


def test_evaluate_without_provider_skips_coherence():
    document, units, spec, _, _, config = run_rank()
    report = evaluate(document, units, spec, None, config)
    assert report.verdict == "pass"
    assert report.coherence_score is None
    assert any("no provider" in issue.note for issue in report.coherence_issues)


def test_evaluation_report_round_trips_to_json():
    document, units, spec, providers, _, config = run_rank("matrix-rank-violation")
    report = evaluate(document, units, spec, providers.evaluator, config)
    payload = json.loads(json.dumps(report.to_json()))
    assert payload["verdict"] == "fail"
    assert payload["directives"] == [{"unit_id": "pivot-count", "stage": "widget"}]
    assert payload["constraints"][1]["report"]["status"] == "violated"


# ---------------------------------------------------------------------------
# naive arm and the comparison harness
# ---------------------------------------------------------------------------


def test_run_naive_wraps_valid_page():
    provider = rank_provider()
    document = run_naive(RANK_TOPIC, provider)
    assert document.mode == "naive"
    assert document.unit_ids == ()
    assert document.metadata["attempts"] == 1
    assert validate_page(document.html, page_policy()).ok
    assert provider.calls_for("naive") == 1


def test_run_naive_retries_then_fails():
    provider = ScriptedProvider(
        {}, fault_schedule={("naive", RANK_TOPIC): [1, 2, 3]}
    )
    with pytest.raises(StageFailed) as exc:
        run_naive(RANK_TOPIC, provider)
    assert exc.value.stage == "naive"
    assert len(exc.value.reports) == 3


def test_run_naive_recovers_after_one_bad_page():
    provider = ScriptedProvider(
        {("naive", RANK_TOPIC): [VALID_PAGE]},
        fault_schedule={("naive", RANK_TOPIC): [1]},
    )
    document = run_naive(RANK_TOPIC, provider)
    assert document.metadata["attempts"] == 2


def test_comparison_emits_asymmetric_artifacts():
    provider = rank_provider()
    result = run_comparison(RANK_TOPIC, ProviderSet.uniform(provider))
    payload = result.to_json()
    assert set(payload["naive"].keys()) == {"document"}
    assert set(payload["pipeline"].keys()) == {"docspec", "document", "units", "evaluation"}
    assert payload["naive"]["document"]["mode"] == "naive"
    assert payload["pipeline"]["docspec"]["topic"] == RANK_TOPIC
    assert payload["pipeline"]["evaluation"]["verdict"] == "pass"
    assert provider.calls_for("naive") == 1
    assert provider.calls_for("plan") == 1
