"""Structural diffs between two documents, keyed by unit id.

A diff records document-level field changes, removed/added/edited units, and
the final unit order.  Applying a diff to the old document reproduces the new
one exactly, which makes both human edits and model-proposed edits auditable
and replayable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any

from .canonical import _schema_report, check_schema, docspec_from_jsonable, docspec_to_jsonable
from .model import DocSpec
from ..report import ValidationReport

__all__ = [
    "DiffApplyError",
    "DocSpecDiff",
    "FieldChange",
    "apply_diff",
    "check_diff_schema",
    "diff_docspec",
    "diff_schema",
]


@lru_cache(maxsize=1)
def diff_schema() -> dict:
    text = resources.files("docweave.data").joinpath("diff.schema.json").read_text("utf-8")
    return json.loads(text)


def check_diff_schema(obj: Any) -> ValidationReport:
    """Structural validation of a bare diff object."""

    return _schema_report(diff_schema(), obj)


class DiffApplyError(ValueError):
    pass


@dataclass(frozen=True)
class FieldChange:
    path: str  # JSON pointer, document-relative or unit-relative
    to: Any
    # `from` is a keyword; store as from_value, serialize as "from"
    from_value: Any = None
    has_from: bool = True


@dataclass(frozen=True)
class UnitEdit:
    id: str
    changes: tuple[FieldChange, ...]


@dataclass(frozen=True)
class DocSpecDiff:
    changes: tuple[FieldChange, ...] = ()  # document-level scalar fields (topic)
    removed: tuple[str, ...] = ()  # unit ids
    added: tuple[dict, ...] = ()  # full unit objects, canonical-jsonable form
    edited: tuple[UnitEdit, ...] = ()
    order: "tuple[str, ...] | None" = None  # final id order; None = implied

    @property
    def is_empty(self) -> bool:
        return not (self.changes or self.removed or self.added or self.edited or self.order)

    def to_json(self) -> dict:
        out: dict[str, Any] = {}
        if self.changes:
            out["changes"] = [_change_to_json(c) for c in self.changes]
        units: dict[str, Any] = {}
        if self.removed:
            units["removed"] = list(self.removed)
        if self.added:
            units["added"] = [json.loads(json.dumps(u)) for u in self.added]
        if self.edited:
            units["edited"] = [
                {"id": e.id, "changes": [_change_to_json(c) for c in e.changes]}
                for e in self.edited
            ]
        if self.order is not None:
            units["order"] = list(self.order)
        if units:
            out["units"] = units
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "DocSpecDiff":
        changes = tuple(_change_from_json(c) for c in obj.get("changes", ()))
        units = obj.get("units", {})
        return cls(
            changes=changes,
            removed=tuple(units.get("removed", ())),
            added=tuple(units.get("added", ())),
            edited=tuple(
                UnitEdit(e["id"], tuple(_change_from_json(c) for c in e["changes"]))
                for e in units.get("edited", ())
            ),
            order=tuple(units["order"]) if "order" in units else None,
        )


def _change_to_json(change: FieldChange) -> dict:
    out: dict[str, Any] = {"path": change.path, "to": change.to}
    if change.has_from:
        out["from"] = change.from_value
    return out


def _change_from_json(obj: dict) -> FieldChange:
    return FieldChange(
        path=obj["path"],
        to=obj["to"],
        from_value=obj.get("from"),
        has_from="from" in obj,
    )


# ---------------------------------------------------------------------------
# computing diffs
# ---------------------------------------------------------------------------


def _walk_changes(old: Any, new: Any, path: str, out: list[FieldChange]) -> None:
    """Leaf-level changes turning ``old`` into ``new``.

    Recurses through dicts with identical key sets and lists of equal length;
    anything else that differs is replaced wholesale at its path.
    """

    if old == new:
        return
    if isinstance(old, dict) and isinstance(new, dict) and set(old) == set(new):
        for key in old:
            _walk_changes(old[key], new[key], f"{path}/{key}", out)
        return
    if isinstance(old, list) and isinstance(new, list) and len(old) == len(new):
        for i, (a, b) in enumerate(zip(old, new)):
            _walk_changes(a, b, f"{path}/{i}", out)
        return
    out.append(FieldChange(path=path, to=new, from_value=old))


def diff_docspec(old: DocSpec, new: DocSpec) -> DocSpecDiff:
    """The edit taking ``old`` to ``new``; empty when they are equal."""

    old_json = docspec_to_jsonable(old)
    new_json = docspec_to_jsonable(new)

    doc_changes: list[FieldChange] = []
    _walk_changes(old_json["topic"], new_json["topic"], "/topic", doc_changes)

    old_units = {u["id"]: u for u in old_json["units"]}
    new_units = {u["id"]: u for u in new_json["units"]}
    old_order = [u["id"] for u in old_json["units"]]
    new_order = [u["id"] for u in new_json["units"]]

    removed = tuple(uid for uid in old_order if uid not in new_units)
    added = tuple(new_units[uid] for uid in new_order if uid not in old_units)
    edited = []
    for uid in new_order:
        if uid not in old_units:
            continue
        unit_changes: list[FieldChange] = []
        _walk_changes(old_units[uid], new_units[uid], "", unit_changes)
        if unit_changes:
            edited.append(UnitEdit(uid, tuple(unit_changes)))

    # order is implied when the surviving old units keep their relative order
    # and additions land at the end, in added order
    implied = [uid for uid in old_order if uid in new_units]
    implied += [uid for uid in new_order if uid not in old_units]
    order = None if implied == new_order else tuple(new_order)

    return DocSpecDiff(
        changes=tuple(doc_changes),
        removed=removed,
        added=added,
        edited=tuple(edited),
        order=order,
    )


# ---------------------------------------------------------------------------
# applying diffs
# ---------------------------------------------------------------------------


def _set_pointer(obj: Any, path: str, value: Any, expected: Any, check: bool) -> None:
    if not path.startswith("/"):
        raise DiffApplyError(f"bad pointer {path!r}")
    parts = path[1:].split("/")
    target = obj
    for raw in parts[:-1]:
        target = _step(target, raw, path)
    leaf = parts[-1]
    current = _step(target, leaf, path)
    if check and current != expected:
        raise DiffApplyError(
            f"value at {path!r} is {current!r}, expected {expected!r}"
        )
    if isinstance(target, list):
        target[int(leaf)] = value
    else:
        target[leaf] = value


def _step(container: Any, raw: str, path: str) -> Any:
    if isinstance(container, list):
        try:
            index = int(raw)
        except ValueError:
            raise DiffApplyError(f"non-numeric list index in {path!r}") from None
        if not 0 <= index < len(container):
            raise DiffApplyError(f"index out of range in {path!r}")
        return container[index]
    if isinstance(container, dict):
        if raw not in container:
            raise DiffApplyError(f"no field {raw!r} along {path!r}")
        return container[raw]
    raise DiffApplyError(f"cannot traverse scalar at {path!r}")


def apply_diff(old: DocSpec, diff: DocSpecDiff) -> DocSpec:
    """Replay ``diff`` on ``old``.

    Raises :class:`DiffApplyError` when the diff does not fit the document
    (unknown ids, dangling paths, or mismatched ``from`` values).
    """

    doc = docspec_to_jsonable(old)

    for change in diff.changes:
        _set_pointer(doc, change.path, change.to, change.from_value, change.has_from)

    units = {u["id"]: u for u in doc["units"]}
    order = [u["id"] for u in doc["units"]]

    for uid in diff.removed:
        if uid not in units:
            raise DiffApplyError(f"cannot remove unknown unit {uid!r}")
        del units[uid]
        order.remove(uid)

    for edit in diff.edited:
        if edit.id not in units:
            raise DiffApplyError(f"cannot edit unknown unit {edit.id!r}")
        for change in edit.changes:
            _set_pointer(units[edit.id], change.path, change.to, change.from_value, change.has_from)

    for unit in diff.added:
        uid = unit.get("id")
        if not isinstance(uid, str) or not uid:
            raise DiffApplyError("added unit is missing an id")
        if uid in units:
            raise DiffApplyError(f"added unit id {uid!r} already exists")
        units[uid] = json.loads(json.dumps(unit))
        order.append(uid)

    if diff.order is not None:
        if sorted(diff.order) != sorted(order):
            raise DiffApplyError("order must be a permutation of the resulting unit ids")
        order = list(diff.order)

    doc["units"] = [units[uid] for uid in order]
    shape = check_schema(doc)
    if not shape.ok:
        raise DiffApplyError(f"diff produced a malformed document: {shape.render()}")
    return docspec_from_jsonable(doc)
