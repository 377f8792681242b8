"""Text-generation providers behind the pipeline stages.

A provider is anything with ``complete(prompt, *, stage, key, schema=None)``.
The ``stage``/``key`` pair identifies what is being asked for ("text" for
unit ``circle-area``, say) so that scripted providers can be driven from
fixture files and transcripts can be audited.  A schema argument asks the
provider to constrain its output; callers re-validate regardless, so a
provider that ignores it is merely wasteful, not wrong.
"""

from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol, Sequence, runtime_checkable

__all__ = [
    "FAULT_TEXT",
    "FixtureExhausted",
    "HttpProvider",
    "Provider",
    "ProviderError",
    "ProviderSet",
    "RecordedCall",
    "ScriptedProvider",
    "fixture_key",
]


class ProviderError(RuntimeError):
    """The provider could not produce a response."""


class FixtureExhausted(ProviderError):
    """A scripted provider ran out of canned responses — a fixture bug."""


@runtime_checkable
class Provider(Protocol):
    name: str
    deterministic: bool

    def complete(self, prompt: str, *, stage: str, key: str, schema: dict | None = None) -> str:
        ...


def fixture_key(key: str) -> str:
    """Filesystem-safe form of a fixture key (topics can be whole sentences)."""

    slug = re.sub(r"[^A-Za-z0-9_-]+", "-", key.strip().lower()).strip("-")
    return slug or "default"


@dataclass(frozen=True)
class RecordedCall:
    stage: str
    key: str
    prompt: str
    schema_constrained: bool


# Deliberately unparseable as JSON, as a fragment, and as a page.
FAULT_TEXT = "<<scripted fault>>"


class ScriptedProvider:
    """Deterministic provider that replays canned responses in order.

    ``fixtures`` maps ``(stage, key)`` to an ordered list of responses,
    consumed one per call.  ``fault_schedule`` maps ``(stage, key)`` to the
    attempt numbers (1-based) on which the provider returns :data:`FAULT_TEXT`
    instead of consuming a response — the cheap way to script "invalid on
    attempt 1, valid on attempt 2".  Running out of responses raises; silence
    would hide fixture bugs.
    """

    name = "scripted"
    deterministic = True

    def __init__(
        self,
        fixtures: Mapping[tuple[str, str], Sequence[str]],
        fault_schedule: Mapping[tuple[str, str], Sequence[int]] | None = None,
    ) -> None:
        self._responses = {
            (stage, fixture_key(key)): list(texts) for (stage, key), texts in fixtures.items()
        }
        self._faults = {
            (stage, fixture_key(key)): frozenset(attempts)
            for (stage, key), attempts in (fault_schedule or {}).items()
        }
        self._attempts: dict[tuple[str, str], int] = {}
        self._consumed: dict[tuple[str, str], int] = {}
        self.calls: list[RecordedCall] = []
        self._lock = threading.Lock()

    def complete(self, prompt: str, *, stage: str, key: str, schema: dict | None = None) -> str:
        slot = (stage, fixture_key(key))
        with self._lock:
            self.calls.append(RecordedCall(stage, slot[1], prompt, schema is not None))
            attempt = self._attempts.get(slot, 0) + 1
            self._attempts[slot] = attempt
            if attempt in self._faults.get(slot, frozenset()):
                return FAULT_TEXT
            queue = self._responses.get(slot)
            index = self._consumed.get(slot, 0)
            if queue is None or index >= len(queue):
                raise FixtureExhausted(
                    f"no scripted response left for stage {stage!r} key {slot[1]!r}"
                    f" (call {attempt})"
                )
            self._consumed[slot] = index + 1
            return queue[index]

    def calls_for(self, stage: str | None = None, key: str | None = None) -> int:
        slug = None if key is None else fixture_key(key)
        return sum(
            1
            for call in self.calls
            if (stage is None or call.stage == stage) and (slug is None or call.key == slug)
        )

    @classmethod
    def from_dir(
        cls,
        root: "str | Path",
        fault_schedule: Mapping[tuple[str, str], Sequence[int]] | None = None,
    ) -> "ScriptedProvider":
        """Load a fixture tree: ``<root>/<stage>/<key>[.<n>].<ext>``.

        The optional ``.<n>`` component orders multiple responses for the
        same key (1-based); without it a file is the sole response.
        """

        root = Path(root)
        if not root.is_dir():
            raise ProviderError(f"fixture directory {root} does not exist")
        ordered: dict[tuple[str, str], list[tuple[int, str]]] = {}
        for stage_dir in sorted(p for p in root.iterdir() if p.is_dir()):
            for file in sorted(p for p in stage_dir.iterdir() if p.is_file()):
                stem = file.stem
                match = re.fullmatch(r"(.+)\.(\d+)", stem)
                key, order = (match.group(1), int(match.group(2))) if match else (stem, 1)
                slot = (stage_dir.name, key)
                entries = ordered.setdefault(slot, [])
                if any(existing == order for existing, _ in entries):
                    raise ProviderError(f"duplicate fixture order {order} for {slot}")
                entries.append((order, file.read_text(encoding="utf-8")))
        fixtures = {
            slot: [text for _, text in sorted(entries)] for slot, entries in ordered.items()
        }
        return cls(fixtures, fault_schedule)


class HttpProvider:
    """Provider speaking a minimal JSON completion API over HTTP.

    The request is ``POST endpoint`` with ``{"model", "prompt", "stage",
    "key", "schema"?}``; the response must be a JSON object with a ``text``
    field.  The credential is read from the environment at call time so a
    long-lived provider picks up rotations.
    """

    deterministic = False

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = "DOCWEAVE_API_KEY",
        timeout: float = 60.0,
        transport=None,
    ) -> None:
        import httpx

        self.endpoint = endpoint
        self.model = model
        self.api_key_env = api_key_env
        self.name = f"http:{model}"
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def complete(self, prompt: str, *, stage: str, key: str, schema: dict | None = None) -> str:
        payload: dict = {"model": self.model, "prompt": prompt, "stage": stage, "key": key}
        if schema is not None:
            payload["schema"] = schema
        headers = {}
        credential = os.environ.get(self.api_key_env, "")
        if credential:
            headers["authorization"] = f"Bearer {credential}"
        try:
            response = self._client.post(self.endpoint, json=payload, headers=headers)
            response.raise_for_status()
            data = response.json()
        except Exception as exc:
            raise ProviderError(f"provider request failed: {exc}") from exc
        text = data.get("text") if isinstance(data, dict) else None
        if not isinstance(text, str):
            raise ProviderError("provider response has no text field")
        return text

    def close(self) -> None:
        self._client.close()


@dataclass(frozen=True)
class ProviderSet:
    """One provider per pipeline stage."""

    planner: Provider
    text: Provider
    widget: Provider
    evaluator: Provider
    naive: Provider
    chat: Provider

    @classmethod
    def uniform(cls, provider: Provider) -> "ProviderSet":
        return cls(provider, provider, provider, provider, provider, provider)
