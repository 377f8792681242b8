"""In-process job runner: one active job per session, state in the store.

A job is a closure run on a small worker pool.  Its lifecycle
(queued → running → done | failed) is persisted through
:meth:`SessionStore.set_job` on every change, so clients can poll the
session record and a restart can see exactly what was in flight.  Jobs
interrupted by a crash are marked failed-but-restartable during
:meth:`JobManager.recover`.
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import Future, ThreadPoolExecutor

from ..pipeline import ExecutionFailed, PipelineError, PlanFailed, ProviderError, StageFailed
from .store import SessionStore

__all__ = ["JobActive", "JobError", "JobManager"]


class JobError(RuntimeError):
    pass


class JobActive(JobError):
    def __init__(self, session_id: str, job_id: str):
        self.session_id = session_id
        self.job_id = job_id
        super().__init__(f"session {session_id} already has active job {job_id}")


def _failure_payload(exc: BaseException) -> dict:
    if isinstance(exc, PlanFailed):
        return {
            "error": "plan failed",
            "topic": exc.topic,
            "reports": [r.to_json() for r in exc.reports],
        }
    if isinstance(exc, ExecutionFailed):
        return {
            "error": "execution failed",
            "unit_id": exc.unit_id,
            "stage": exc.cause.stage,
            "reports": [r.to_json() for r in exc.cause.reports],
            "completed": [u.unit_id for u in exc.completed],
        }
    if isinstance(exc, StageFailed):
        return {
            "error": "stage failed",
            "unit_id": exc.unit_id,
            "stage": exc.stage,
            "reports": [r.to_json() for r in exc.reports],
        }
    if isinstance(exc, (PipelineError, ProviderError)):
        return {"error": "pipeline error", "message": str(exc)}
    return {"error": "internal error", "message": f"{type(exc).__name__}: {exc}"}


class JobManager:
    def __init__(self, store: SessionStore, workers: int = 2) -> None:
        self._store = store
        self._pool = ThreadPoolExecutor(max_workers=max(1, workers), thread_name_prefix="job")
        self._futures: dict[str, Future] = {}
        self._guard = threading.Lock()
        self._counter = itertools.count(1)

    def recover(self) -> list[str]:
        """Mark jobs that were alive when the process died as restartable."""

        interrupted = []
        for session_id in self._store.session_ids():
            record = self._store.load_session(session_id)
            job = record.get("job")
            if job and job.get("status") in ("queued", "running"):
                job = dict(job)
                job["status"] = "failed"
                job["restartable"] = True
                job["error"] = {
                    "error": "interrupted",
                    "message": "service restarted while the job was active",
                }
                self._store.set_job(session_id, job)
                interrupted.append(session_id)
        return interrupted

    def active_job(self, session_id: str) -> "dict | None":
        record = self._store.load_session(session_id)
        job = record.get("job")
        if job and job.get("status") in ("queued", "running"):
            return job
        return None

    def submit(self, session_id: str, kind: str, work) -> dict:
        """Queue ``work`` as the session's job.

        ``work`` is called with the job record (for its id, so it can report
        progress) and may return a dict merged into the final job record —
        result pointers like the revision an execution used.
        """

        with self._guard:
            active = self.active_job(session_id)
            if active is not None:
                raise JobActive(session_id, active["id"])
            job = {
                "id": f"{kind}-{next(self._counter)}",
                "kind": kind,
                "status": "queued",
                "progress": {},
                "error": None,
            }
            self._store.set_job(session_id, job)
            self._futures[session_id] = self._pool.submit(self._run, session_id, job, work)
        return job

    def _patch(self, session_id: str, job_id: str, **fields) -> None:
        with self._store.lock(session_id):
            record = self._store.load_session(session_id)
            job = record.get("job")
            if not job or job.get("id") != job_id:
                return
            job = dict(job)
            job.update(fields)
            self._store.set_job(session_id, job)

    def progress_hook(self, session_id: str, job_id: str):
        """Per-unit stage progress writer compatible with pipeline ``progress``."""

        def progress(unit_id: str, stage: str, state: str) -> None:
            with self._store.lock(session_id):
                record = self._store.load_session(session_id)
                job = record.get("job")
                if not job or job.get("id") != job_id:
                    return
                job = dict(job)
                per_unit = dict(job.get("progress") or {})
                stages = dict(per_unit.get(unit_id) or {})
                stages[stage] = state
                per_unit[unit_id] = stages
                job["progress"] = per_unit
                self._store.set_job(session_id, job)

        return progress

    def _run(self, session_id: str, job: dict, work) -> None:
        self._patch(session_id, job["id"], status="running")
        try:
            result = work(job)
        except BaseException as exc:  # noqa: BLE001 — failures become job state
            self._patch(session_id, job["id"], status="failed", error=_failure_payload(exc))
            return
        extra = result if isinstance(result, dict) else {}
        self._patch(session_id, job["id"], status="done", **extra)

    def join(self, session_id: str, timeout: "float | None" = 10.0) -> dict:
        """Wait for the session's current job to settle; returns the job record."""

        future = self._futures.get(session_id)
        if future is not None:
            future.result(timeout=timeout)
        record = self._store.load_session(session_id)
        return record.get("job") or {}

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True)
