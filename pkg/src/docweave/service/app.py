"""HTTP surface for the Topic→Spec→Doc workflow.

Sessions are created from a topic, planned asynchronously, edited by humans
or by accepted chat diffs (every change an immutable revision), executed
into a document, and evaluated.  All state lives in the file-backed store,
so the service can be killed and restarted without losing anything; jobs in
flight at the time of death come back as failed-but-restartable.

Validation failures are structured data everywhere: a 422 body carries the
same ``ValidationReport`` JSON the library produces, so clients can anchor
errors to fields.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse

from ..docspec import (
    DiffApplyError,
    DocSpec,
    DocSpecDiff,
    apply_diff,
    check_diff_schema,
    check_interaction_schema,
    diff_docspec,
    diff_schema,
    docspec_to_jsonable,
    interaction_from_jsonable,
    parse_docspec,
    serialize_docspec,
    validate_docspec,
)
from ..pipeline import (
    GeneratedUnit,
    PipelineConfig,
    ProviderSet,
    ScriptedProvider,
    build_document,
    evaluate,
    execute,
    execute_unit_text,
    execute_unit_widget,
    plan,
    render_prompt,
)
from ..htmlcheck import extract_text
from ..report import ValidationReport, Violation
from ..verifier import static_check
from ..widget import WidgetError, compile_widget
from .jobs import JobActive, JobManager
from .store import NotReady, RevisionConflict, SessionStore, UnknownSession

__all__ = ["ServiceConfig", "create_app"]


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: "str | Path" = "docweave-data"
    providers: "ProviderSet | None" = None
    widget_mode: str = "llm"
    max_attempts: int = 3
    grid_points: int = 11
    cap: int = 10_000
    container_prefix: str = "dw"
    cors: bool = False
    job_workers: int = 2
    log_transcripts: bool = False
    clock: "object" = field(default=time.time, repr=False)

    def pipeline_config(self, widget_mode: "str | None" = None) -> PipelineConfig:
        return PipelineConfig(
            max_attempts=self.max_attempts,
            widget_mode=widget_mode or self.widget_mode,
            grid_points=self.grid_points,
            cap=self.cap,
            container_prefix=self.container_prefix,
        )

    @classmethod
    def from_env(cls, env=None) -> "ServiceConfig":
        env = os.environ if env is None else env
        providers = None
        fixtures = env.get("DOCWEAVE_FIXTURES")
        if fixtures:
            providers = ProviderSet.uniform(ScriptedProvider.from_dir(fixtures))
        else:
            endpoint = env.get("DOCWEAVE_PROVIDER_URL")
            model = env.get("DOCWEAVE_PROVIDER_MODEL")
            if endpoint and model:
                from ..pipeline import HttpProvider

                providers = ProviderSet.uniform(
                    HttpProvider(
                        endpoint,
                        model,
                        api_key_env=env.get("DOCWEAVE_PROVIDER_API_KEY_ENV", "DOCWEAVE_API_KEY"),
                    )
                )
        return cls(
            data_dir=env.get("DOCWEAVE_DATA_DIR", "docweave-data"),
            providers=providers,
            widget_mode=env.get("DOCWEAVE_WIDGET_MODE", "llm"),
            max_attempts=int(env.get("DOCWEAVE_MAX_ATTEMPTS", "3")),
            grid_points=int(env.get("DOCWEAVE_GRID_POINTS", "11")),
            cap=int(env.get("DOCWEAVE_CAP", "10000")),
            cors=env.get("DOCWEAVE_CORS", "").lower() in ("1", "true", "yes"),
            job_workers=int(env.get("DOCWEAVE_JOB_WORKERS", "2")),
            log_transcripts=env.get("DOCWEAVE_TRANSCRIPTS", "").lower() in ("1", "true", "yes"),
        )


class ApiError(Exception):
    def __init__(self, status: int, message: str, **extra):
        self.status = status
        self.payload = {"error": message, **extra}
        super().__init__(message)


def _field_error(status: int, path: str, message: str) -> ApiError:
    report = ValidationReport((Violation(path=path, message=message, category="schema"),))
    return ApiError(status, "validation failed", report=report.to_json())


def _report_error(report: ValidationReport) -> ApiError:
    return ApiError(422, "validation failed", report=report.to_json())


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _unit_payload(unit: GeneratedUnit) -> dict:
    payload = unit.to_json()
    payload["text_fragment"] = unit.text_fragment
    payload["widget_fragment"] = unit.widget_fragment
    return payload


def _unit_from_payload(payload: dict) -> GeneratedUnit:
    return GeneratedUnit(
        unit_id=payload["unit_id"],
        text_fragment=payload.get("text_fragment"),
        widget_fragment=payload.get("widget_fragment"),
        attempts_text=payload.get("attempts_text", 0),
        attempts_widget=payload.get("attempts_widget", 0),
        status=payload.get("status", "ok"),
        used_fallback=payload.get("used_fallback", False),
    )


def _describe_diff(diff: DocSpecDiff) -> str:
    parts = []
    if diff.changes:
        parts.append(f"{len(diff.changes)} document field change(s)")
    if diff.added:
        parts.append(f"{len(diff.added)} unit(s) added")
    if diff.removed:
        parts.append(f"{len(diff.removed)} unit(s) removed")
    for edit in diff.edited:
        fields = ", ".join(change.path for change in edit.changes)
        parts.append(f"unit {edit.id}: {fields}")
    if diff.order is not None:
        parts.append("units reordered")
    return "; ".join(parts) if parts else "no changes"


def _parse_if_match(value: "str | None") -> "int | None":
    if value is None:
        return None
    token = value.strip().strip('"')
    if not token.isdigit():
        raise ApiError(400, f"If-Match must be a revision number, got {value!r}")
    return int(token)


def create_app(config: "ServiceConfig | None" = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    store = SessionStore(config.data_dir, clock=config.clock)
    jobs = JobManager(store, config.job_workers)
    jobs.recover()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        jobs.shutdown()  # drain in-flight jobs so their state lands on disk

    app = FastAPI(title="docweave", docs_url=None, redoc_url=None, lifespan=lifespan)
    app.state.store = store
    app.state.jobs = jobs
    app.state.config = config

    if config.cors:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
            expose_headers=["ETag", "X-Revision", "X-Mode"],
        )

    # -- error translation ----------------------------------------------------

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.payload)

    @app.exception_handler(UnknownSession)
    async def _unknown(request: Request, exc: UnknownSession):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(RevisionConflict)
    async def _conflict(request: Request, exc: RevisionConflict):
        return JSONResponse(
            status_code=409,
            content={
                "error": "revision conflict",
                "expected": exc.expected,
                "current": exc.current,
            },
        )

    @app.exception_handler(NotReady)
    async def _not_ready(request: Request, exc: NotReady):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(JobActive)
    async def _busy(request: Request, exc: JobActive):
        return JSONResponse(
            status_code=409,
            content={"error": "job in progress", "job_id": exc.job_id},
        )

    @app.exception_handler(RequestValidationError)
    async def _malformed(request: Request, exc: RequestValidationError):
        violations = [
            {
                "path": "/" + "/".join(str(part) for part in err["loc"][1:]),
                "message": err["msg"],
                "category": "schema",
            }
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=422,
            content={
                "error": "validation failed",
                "report": {"ok": False, "violations": violations},
            },
        )

    # -- helpers over state -----------------------------------------------------

    def providers() -> ProviderSet:
        if config.providers is None:
            raise ApiError(503, "no provider configured")
        return config.providers

    def latest_spec(session_id: str):
        revision = store.latest_revision(session_id)
        if revision is None:
            raise NotReady(f"session {session_id} has no spec revision yet")
        return revision

    def save_transcript(session_id: str, name: str, start: int) -> None:
        if not config.log_transcripts:
            return
        provider = getattr(providers(), "planner", None)
        calls = getattr(provider, "calls", None)
        if calls is None:
            return
        recorded = [
            {"stage": c.stage, "key": c.key, "schema_constrained": c.schema_constrained}
            for c in calls[start:]
        ]
        store.save_transcript(session_id, name, recorded)

    def call_count() -> int:
        provider = getattr(config.providers, "planner", None)
        calls = getattr(provider, "calls", None)
        return len(calls) if calls is not None else 0

    def persist_run(session_id: str, revision_number: int, mode: str, document, units) -> None:
        store.save_units(session_id, [_unit_payload(u) for u in units])
        store.save_document(
            session_id,
            document.html,
            {
                "revision": revision_number,
                "mode": mode,
                "sha256": _sha256(document.html),
                "unit_ids": list(document.unit_ids),
            },
        )

    # -- meta ---------------------------------------------------------------

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "sessions": len(store.session_ids())}

    # -- sessions -----------------------------------------------------------

    def session_view(session_id: str) -> dict:
        record = store.load_session(session_id)
        document = store.load_document(session_id)
        return {
            "id": record["id"],
            "topic": record["topic"],
            "created": record["created"],
            "updated": record["updated"],
            "job": record.get("job"),
            "revisions": [r.meta() for r in store.revisions(session_id)],
            "document": document[1] if document else None,
            "evaluation": store.load_evaluation(session_id),
            "chat": [
                {k: turn[k] for k in ("turn", "message", "status", "accepted") if k in turn}
                for turn in store.chat_turns(session_id)
            ],
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: dict) -> dict:
        topic = body.get("topic")
        if not isinstance(topic, str) or not topic.strip():
            raise _field_error(422, "/topic", "topic must be a non-empty string")
        provider_set = providers()
        record = store.create_session(topic.strip())
        session_id = record["id"]
        pcfg = config.pipeline_config()
        start = call_count()

        def work(job: dict):
            spec = plan(topic.strip(), provider_set.planner, pcfg)
            with store.lock(session_id):
                revision = store.append_revision(session_id, spec, "planner")
            save_transcript(session_id, job["id"], start)
            return {"revision": revision.number}

        job = jobs.submit(session_id, "plan", work)
        return {"id": session_id, "topic": record["topic"], "job": job}

    @app.get("/sessions")
    def list_sessions() -> dict:
        summaries = []
        for session_id in store.session_ids():
            record = store.load_session(session_id)
            summaries.append(
                {
                    "id": record["id"],
                    "topic": record["topic"],
                    "created": record["created"],
                    "updated": record["updated"],
                    "revisions": store.revision_count(session_id),
                    "job": record.get("job"),
                }
            )
        return {"sessions": summaries}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return session_view(session_id)

    # -- docspec ------------------------------------------------------------

    @app.get("/sessions/{session_id}/docspec")
    def get_docspec(session_id: str, rev: "int | None" = None):
        if rev is not None:
            revision = store.load_revision(session_id, rev)
        else:
            revision = latest_spec(session_id)
        payload = revision.meta()
        payload["spec"] = docspec_to_jsonable(revision.spec)
        return JSONResponse(content=payload, headers={"ETag": f'"{revision.number}"'})

    @app.put("/sessions/{session_id}/docspec")
    def put_docspec(
        session_id: str,
        body: dict,
        if_match: "str | None" = Header(default=None),
    ):
        store.load_session(session_id)  # 404 before validation
        expected = _parse_if_match(if_match)
        result = parse_docspec(json.dumps(body))
        if not isinstance(result, DocSpec):
            raise _report_error(result)
        with store.lock(session_id):
            previous = store.latest_revision(session_id)
            revision = store.append_revision(session_id, result, "human", expected=expected)
        diff = diff_docspec(previous.spec, result) if previous else None
        return JSONResponse(
            content={
                "revision": revision.number,
                "origin": revision.origin,
                "diff": diff.to_json() if diff else None,
            },
            headers={"ETag": f'"{revision.number}"'},
        )

    # -- execution ------------------------------------------------------------

    @app.post("/sessions/{session_id}/execute", status_code=202)
    def execute_session(session_id: str, body: "dict | None" = None) -> dict:
        body = body or {}
        provider_set = providers()
        mode = body.get("mode", config.widget_mode)
        if mode not in ("llm", "deterministic"):
            raise _field_error(422, "/mode", "mode must be 'llm' or 'deterministic'")
        revision = latest_spec(session_id)
        spec = revision.spec
        pcfg = config.pipeline_config(widget_mode=mode)

        requested = body.get("units")
        if requested is not None:
            if not isinstance(requested, list) or not all(
                isinstance(u, str) for u in requested
            ):
                raise _field_error(422, "/units", "units must be a list of unit ids")
            known = {unit.id for unit in spec.units}
            unknown = [u for u in requested if u not in known]
            if unknown:
                raise _field_error(
                    422, "/units", f"unknown unit id(s): {', '.join(sorted(unknown))}"
                )
            stored = store.load_units(session_id)
            if stored is None:
                raise NotReady(
                    f"session {session_id} has no prior execution to reuse for a partial run"
                )

        start = call_count()

        def full_work(job: dict):
            document, units = execute(
                spec, provider_set, pcfg, progress=jobs.progress_hook(session_id, job["id"])
            )
            with store.lock(session_id):
                persist_run(session_id, revision.number, mode, document, units)
            save_transcript(session_id, job["id"], start)
            return {"revision": revision.number, "partial": False}

        def partial_work(job: dict):
            progress = jobs.progress_hook(session_id, job["id"])
            kept = {u["unit_id"]: _unit_from_payload(u) for u in store.load_units(session_id)}
            rerun = set(requested)
            merged = []
            context_parts: list[str] = []
            for unit in spec.units:
                if unit.id in rerun:
                    progress(unit.id, "text", "start")
                    fragment, attempts = execute_unit_text(
                        unit,
                        "\n\n".join(context_parts),
                        provider_set.text,
                        pcfg,
                        topic=spec.topic,
                    )
                    progress(unit.id, "text", "done")
                    progress(unit.id, "widget", "start")
                    widget = execute_unit_widget(unit, provider_set.widget, pcfg)
                    progress(unit.id, "widget", "done")
                    generated = GeneratedUnit(
                        unit_id=unit.id,
                        text_fragment=fragment,
                        widget_fragment=widget.fragment,
                        attempts_text=attempts,
                        attempts_widget=widget.attempts,
                        status="ok",
                        used_fallback=widget.used_fallback,
                    )
                elif unit.id in kept:
                    generated = kept[unit.id]
                else:
                    raise NotReady(
                        f"no stored fragments for unit {unit.id}; run a full execution"
                    )
                merged.append(generated)
                context_parts.append(extract_text(generated.text_fragment or ""))
            document = build_document(spec, merged, pcfg)
            with store.lock(session_id):
                persist_run(session_id, revision.number, mode, document, merged)
            save_transcript(session_id, job["id"], start)
            return {"revision": revision.number, "partial": True, "units": sorted(rerun)}

        work = full_work if requested is None else partial_work
        job = jobs.submit(session_id, "execute", work)
        return {"job": job}

    @app.get("/sessions/{session_id}/document")
    def get_document(session_id: str):
        loaded = store.load_document(session_id)
        if loaded is None:
            raise NotReady(f"session {session_id} has no document yet")
        html, meta = loaded
        return HTMLResponse(
            content=html,
            headers={
                "X-Revision": str(meta.get("revision", "")),
                "X-Mode": str(meta.get("mode", "")),
            },
        )

    # -- evaluation -----------------------------------------------------------

    @app.post("/sessions/{session_id}/evaluate")
    def evaluate_session(session_id: str) -> dict:
        loaded = store.load_document(session_id)
        if loaded is None:
            raise NotReady(f"session {session_id} has no document to evaluate")
        html, meta = loaded
        digest = _sha256(html)
        cached = store.load_evaluation(session_id)
        if cached is not None and cached.get("document_sha256") == digest:
            return cached
        revision = store.load_revision(session_id, meta["revision"])
        stored_units = store.load_units(session_id) or []
        units = [_unit_from_payload(u) for u in stored_units]
        evaluator = config.providers.evaluator if config.providers else None
        report = evaluate(html, units, revision.spec, evaluator, config.pipeline_config())
        payload = {
            "revision": meta["revision"],
            "document_sha256": digest,
            "verdict": report.verdict,
            "report": report.to_json(),
        }
        with store.lock(session_id):
            store.save_evaluation(session_id, payload)
        return payload

    # -- chat ---------------------------------------------------------------

    @app.post("/sessions/{session_id}/chat")
    def chat(session_id: str, body: dict) -> dict:
        message = body.get("message")
        if not isinstance(message, str) or not message.strip():
            raise _field_error(422, "/message", "message must be a non-empty string")
        provider_set = providers()
        revision = latest_spec(session_id)
        prompt = render_prompt(
            "chat_edit",
            spec=serialize_docspec(revision.spec),
            message=message.strip(),
            schema=json.dumps(diff_schema(), sort_keys=True, indent=2),
        )
        response = provider_set.chat.complete(
            prompt, stage="chat", key=message.strip(), schema=diff_schema()
        )

        turn = {
            "message": message.strip(),
            "base_revision": revision.number,
            "accepted": False,
        }
        report = None
        diff = None
        try:
            obj = json.loads(response)
        except ValueError as exc:
            report = ValidationReport(
                (Violation(path="", message=f"not well-formed: {exc}", category="syntax"),)
            )
        if report is None:
            schema_report = check_diff_schema(obj)
            if not schema_report.ok:
                report = schema_report
        if report is None:
            diff = DocSpecDiff.from_json(obj)
            try:
                edited = apply_diff(revision.spec, diff)
            except DiffApplyError as exc:
                report = ValidationReport(
                    (Violation(path="", message=str(exc), category="semantic"),)
                )
            else:
                candidate = validate_docspec(edited)
                if not candidate.ok:
                    report = candidate

        if report is not None:
            turn.update(
                {
                    "status": "rejected",
                    "diff": diff.to_json() if diff else None,
                    "response": None if diff else response,
                    "report": report.to_json(),
                }
            )
        else:
            turn.update(
                {
                    "status": "proposed",
                    "diff": diff.to_json(),
                    "explanation": _describe_diff(diff),
                    "report": None,
                }
            )
        with store.lock(session_id):
            record = store.append_chat(session_id, turn)
        return {"turn": record}

    @app.post("/sessions/{session_id}/chat/{turn}/accept")
    def accept_chat(session_id: str, turn: int) -> dict:
        record = store.load_chat(session_id, turn)
        if record.get("accepted"):
            raise ApiError(409, f"chat turn {turn} is already accepted")
        if record.get("status") != "proposed":
            raise ApiError(409, f"chat turn {turn} is not acceptable (status {record.get('status')!r})")
        diff = DocSpecDiff.from_json(record["diff"])
        with store.lock(session_id):
            revision = latest_spec(session_id)
            try:
                edited = apply_diff(revision.spec, diff)
            except DiffApplyError as exc:
                report = ValidationReport(
                    (Violation(path="", message=str(exc), category="semantic"),)
                )
                store.update_chat(session_id, turn, status="rejected", report=report.to_json())
                raise _report_error(report) from exc
            candidate = validate_docspec(edited)
            if not candidate.ok:
                store.update_chat(session_id, turn, status="rejected", report=candidate.to_json())
                raise _report_error(candidate)
            new_revision = store.append_revision(session_id, edited, "chat")
            store.update_chat(
                session_id, turn, accepted=True, status="accepted", revision=new_revision.number
            )
        return {
            "revision": new_revision.number,
            "origin": "chat",
            "turn": turn,
            "diff": record["diff"],
        }

    # -- stateless tools ----------------------------------------------------

    @app.post("/validate")
    def validate_endpoint(body: dict) -> dict:
        result = parse_docspec(json.dumps(body))
        if isinstance(result, DocSpec):
            return {"ok": True, "report": ValidationReport().to_json()}
        return {"ok": False, "report": result.to_json()}

    @app.post("/compile")
    def compile_endpoint(body: dict) -> dict:
        interaction_obj = body.get("interaction")
        if interaction_obj is None:
            raise _field_error(422, "/interaction", "interaction object is required")
        container_id = body.get("container_id", "preview")
        if not isinstance(container_id, str):
            raise _field_error(422, "/container_id", "container_id must be a string")
        schema_report = check_interaction_schema(interaction_obj)
        if not schema_report.ok:
            raise _report_error(schema_report)
        interaction = interaction_from_jsonable(interaction_obj)
        static = static_check(interaction)
        if not static.ok:
            raise _report_error(static)
        try:
            fragment = compile_widget(interaction, container_id)
        except WidgetError as exc:
            raise _report_error(
                ValidationReport((Violation(path="", message=str(exc), category="semantic"),))
            ) from exc
        return fragment.to_json()

    return app
