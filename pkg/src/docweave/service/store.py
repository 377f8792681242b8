"""File-backed session persistence.

One directory per session under the store root:

    <root>/<session_id>/
        session.json            topic, timestamps, current job state
        revisions/000001.json   append-only spec revisions, origin inside
        units.json              per-unit fragments from the last execution
        document.html           assembled page, byte-exact
        document.json           which revision and mode produced the page
        evaluation.json         last evaluation plus the document hash it judged
        chat/000001.json        chat turns
        transcripts/<name>.json provider call transcripts (optional)

Everything readable after a restart lives in these files; nothing is held
only in memory.  Writes go through a temp file and ``os.replace`` so a crash
never leaves a half-written record, and callers mutate a session only while
holding its lock (:meth:`SessionStore.lock`).
"""

from __future__ import annotations

import json
import os
import re
import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path

from ..docspec import DocSpec, docspec_from_jsonable, docspec_to_jsonable

__all__ = [
    "NotReady",
    "Revision",
    "RevisionConflict",
    "SessionStore",
    "StoreError",
    "UnknownSession",
]

ORIGINS = ("planner", "human", "chat")

_SESSION_ID = re.compile(r"^[a-f0-9]{12}$")


class StoreError(RuntimeError):
    pass


class UnknownSession(StoreError):
    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"no session {session_id!r}")


class RevisionConflict(StoreError):
    def __init__(self, expected: int, current: int):
        self.expected = expected
        self.current = current
        super().__init__(f"expected revision {expected}, store is at {current}")


class NotReady(StoreError):
    """The session exists but lacks the artifact the caller asked for."""


@dataclass(frozen=True)
class Revision:
    number: int
    origin: str
    created: float
    spec: DocSpec

    def meta(self) -> dict:
        return {"revision": self.number, "origin": self.origin, "created": self.created}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class SessionStore:
    def __init__(self, root: "str | Path", clock=time.time) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._clock = clock
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- locking ------------------------------------------------------------

    def lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    # -- paths and raw I/O ----------------------------------------------------

    def _dir(self, session_id: str) -> Path:
        # Session ids are path components; reject anything that isn't ours
        # before it touches the filesystem.
        if not _SESSION_ID.fullmatch(session_id):
            raise UnknownSession(session_id)
        return self.root / session_id

    def _require(self, session_id: str) -> Path:
        path = self._dir(session_id)
        if not (path / "session.json").is_file():
            raise UnknownSession(session_id)
        return path

    @staticmethod
    def _write(path: Path, text: str) -> None:
        tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)

    # -- sessions -------------------------------------------------------------

    def create_session(self, topic: str) -> dict:
        session_id = uuid.uuid4().hex[:12]
        now = self._clock()
        record = {
            "id": session_id,
            "topic": topic,
            "created": now,
            "updated": now,
            "job": None,
        }
        path = self._dir(session_id)
        (path / "revisions").mkdir(parents=True)
        (path / "chat").mkdir()
        self._write(path / "session.json", _dump(record))
        return record

    def session_ids(self) -> list[str]:
        return sorted(
            p.name
            for p in self.root.iterdir()
            if p.is_dir() and (p / "session.json").is_file()
        )

    def load_session(self, session_id: str) -> dict:
        path = self._require(session_id)
        return json.loads((path / "session.json").read_text(encoding="utf-8"))

    def update_session(self, session_id: str, **fields) -> dict:
        path = self._require(session_id)
        record = self.load_session(session_id)
        record.update(fields)
        record["updated"] = self._clock()
        self._write(path / "session.json", _dump(record))
        return record

    def set_job(self, session_id: str, job: "dict | None") -> dict:
        return self.update_session(session_id, job=job)

    # -- revisions ------------------------------------------------------------

    def _revision_files(self, session_id: str) -> list[Path]:
        return sorted((self._require(session_id) / "revisions").glob("*.json"))

    def revision_count(self, session_id: str) -> int:
        return len(self._revision_files(session_id))

    def append_revision(
        self,
        session_id: str,
        spec: DocSpec,
        origin: str,
        expected: "int | None" = None,
    ) -> Revision:
        if origin not in ORIGINS:
            raise ValueError(f"unknown revision origin {origin!r}")
        path = self._require(session_id)
        current = self.revision_count(session_id)
        if expected is not None and expected != current:
            raise RevisionConflict(expected, current)
        number = current + 1
        revision = Revision(number, origin, self._clock(), spec)
        payload = {
            "revision": number,
            "origin": origin,
            "created": revision.created,
            "spec": docspec_to_jsonable(spec),
        }
        self._write(path / "revisions" / f"{number:06d}.json", _dump(payload))
        self.update_session(session_id)  # bump the updated stamp
        return revision

    def _load_revision_file(self, file: Path) -> Revision:
        payload = json.loads(file.read_text(encoding="utf-8"))
        return Revision(
            number=payload["revision"],
            origin=payload["origin"],
            created=payload["created"],
            spec=docspec_from_jsonable(payload["spec"]),
        )

    def revisions(self, session_id: str) -> list[Revision]:
        return [self._load_revision_file(f) for f in self._revision_files(session_id)]

    def load_revision(self, session_id: str, number: int) -> Revision:
        file = self._require(session_id) / "revisions" / f"{number:06d}.json"
        if not file.is_file():
            raise NotReady(f"session {session_id} has no revision {number}")
        return self._load_revision_file(file)

    def latest_revision(self, session_id: str) -> "Revision | None":
        files = self._revision_files(session_id)
        return self._load_revision_file(files[-1]) if files else None

    # -- execution artifacts ----------------------------------------------------

    def save_units(self, session_id: str, units: list) -> None:
        path = self._require(session_id)
        self._write(path / "units.json", _dump({"units": units}))

    def load_units(self, session_id: str) -> "list | None":
        file = self._require(session_id) / "units.json"
        if not file.is_file():
            return None
        return json.loads(file.read_text(encoding="utf-8"))["units"]

    def save_document(self, session_id: str, html: str, meta: dict) -> None:
        path = self._require(session_id)
        self._write(path / "document.html", html)
        self._write(path / "document.json", _dump(meta))

    def load_document(self, session_id: str) -> "tuple[str, dict] | None":
        path = self._require(session_id)
        html = path / "document.html"
        meta = path / "document.json"
        if not (html.is_file() and meta.is_file()):
            return None
        return (
            html.read_text(encoding="utf-8"),
            json.loads(meta.read_text(encoding="utf-8")),
        )

    def save_evaluation(self, session_id: str, payload: dict) -> None:
        path = self._require(session_id)
        self._write(path / "evaluation.json", _dump(payload))

    def load_evaluation(self, session_id: str) -> "dict | None":
        file = self._require(session_id) / "evaluation.json"
        if not file.is_file():
            return None
        return json.loads(file.read_text(encoding="utf-8"))

    # -- chat -----------------------------------------------------------------

    def _chat_files(self, session_id: str) -> list[Path]:
        return sorted((self._require(session_id) / "chat").glob("*.json"))

    def append_chat(self, session_id: str, turn: dict) -> dict:
        path = self._require(session_id)
        number = len(self._chat_files(session_id)) + 1
        record = dict(turn)
        record["turn"] = number
        record["created"] = self._clock()
        self._write(path / "chat" / f"{number:06d}.json", _dump(record))
        return record

    def load_chat(self, session_id: str, number: int) -> dict:
        file = self._require(session_id) / "chat" / f"{number:06d}.json"
        if not file.is_file():
            raise NotReady(f"session {session_id} has no chat turn {number}")
        return json.loads(file.read_text(encoding="utf-8"))

    def update_chat(self, session_id: str, number: int, **fields) -> dict:
        record = self.load_chat(session_id, number)
        record.update(fields)
        path = self._require(session_id) / "chat" / f"{number:06d}.json"
        self._write(path, _dump(record))
        return record

    def chat_turns(self, session_id: str) -> list[dict]:
        return [
            json.loads(f.read_text(encoding="utf-8")) for f in self._chat_files(session_id)
        ]

    # -- transcripts ------------------------------------------------------------

    def save_transcript(self, session_id: str, name: str, calls: list) -> None:
        path = self._require(session_id) / "transcripts"
        path.mkdir(exist_ok=True)
        self._write(path / f"{name}.json", _dump({"calls": calls}))
