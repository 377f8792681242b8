"""Durable editing sessions over HTTP: store, background jobs, FastAPI app."""

from .app import ServiceConfig, create_app
from .jobs import JobActive, JobError, JobManager
from .store import (
    NotReady,
    Revision,
    RevisionConflict,
    SessionStore,
    StoreError,
    UnknownSession,
)

__all__ = [
    "JobActive",
    "JobError",
    "JobManager",
    "NotReady",
    "Revision",
    "RevisionConflict",
    "ServiceConfig",
    "SessionStore",
    "StoreError",
    "UnknownSession",
    "create_app",
]
