"""Structural diffs: computing, serializing, and replaying document edits."""

from __future__ import annotations

import dataclasses
import json
import pathlib
import random

import jsonschema
import pytest

import gen_specs
from docweave.docspec import (
    DiffApplyError,
    DocSpec,
    DocSpecDiff,
    FieldChange,
    apply_diff,
    diff_docspec,
    diff_schema,
    parse_docspec,
)

CORPUS = pathlib.Path(__file__).resolve().parents[1] / "fixtures" / "corpus"


def pi_spec() -> DocSpec:
    return parse_docspec((CORPUS / "pi-ratio.docspec.json").read_text(encoding="utf-8"))


def two_unit_spec() -> DocSpec:
    rng = random.Random(41)
    return DocSpec(
        topic="Two ideas in sequence",
        units=(gen_specs.make_unit(rng, "first"), gen_specs.make_unit(rng, "second")),
    )


def with_slider_max(spec: DocSpec, new_max: float) -> DocSpec:
    slider = spec.units[0].interaction.state[0]
    state = (dataclasses.replace(slider, max=new_max),) + spec.units[0].interaction.state[1:]
    interaction = dataclasses.replace(spec.units[0].interaction, state=state)
    unit = dataclasses.replace(spec.units[0], interaction=interaction)
    return dataclasses.replace(spec, units=(unit,) + spec.units[1:])


def test_identity_diff_is_empty():
    spec = pi_spec()
    diff = diff_docspec(spec, spec)
    assert diff.is_empty
    assert diff.to_json() == {}
    assert apply_diff(spec, diff) == spec


def test_swapping_two_units_yields_one_reorder_entry():
    old = two_unit_spec()
    new = dataclasses.replace(old, units=(old.units[1], old.units[0]))
    diff = diff_docspec(old, new)
    assert not diff.changes and not diff.removed and not diff.added and not diff.edited
    assert diff.order == ("second", "first")
    assert diff.to_json() == {"units": {"order": ["second", "first"]}}
    assert apply_diff(old, diff) == new


def test_raising_a_slider_max_is_one_field_change():
    old = pi_spec()
    new = with_slider_max(old, 10)
    diff = diff_docspec(old, new)
    assert not diff.changes and not diff.removed and not diff.added and diff.order is None
    (edit,) = diff.edited
    assert edit.id == "pi-as-a-ratio"
    (change,) = edit.changes
    assert change.path == "/interaction/state/0/max"
    assert change.to == 10
    assert change.from_value == 5
    assert apply_diff(old, diff) == new


def test_topic_change_is_document_level():
    old = pi_spec()
    new = dataclasses.replace(old, topic="What π measures")
    diff = diff_docspec(old, new)
    assert diff.changes == (
        FieldChange(path="/topic", to="What π measures", from_value="What is π?"),
    )
    assert not diff.edited
    assert apply_diff(old, diff) == new


def test_added_unit_at_end_needs_no_order_entry():
    old = two_unit_spec()
    extra = gen_specs.make_unit(random.Random(42), "third")
    new = dataclasses.replace(old, units=old.units + (extra,))
    diff = diff_docspec(old, new)
    assert diff.order is None
    assert [u["id"] for u in diff.added] == ["third"]
    assert apply_diff(old, diff) == new


def test_added_unit_in_front_sets_order():
    old = two_unit_spec()
    extra = gen_specs.make_unit(random.Random(42), "third")
    new = dataclasses.replace(old, units=(extra,) + old.units)
    diff = diff_docspec(old, new)
    assert diff.order == ("third", "first", "second")
    assert apply_diff(old, diff) == new


def test_removal_keeps_surviving_order_implied():
    old = two_unit_spec()
    new = dataclasses.replace(old, units=(old.units[1],))
    diff = diff_docspec(old, new)
    assert diff.removed == ("first",)
    assert diff.order is None
    assert apply_diff(old, diff) == new


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def test_diff_json_matches_schema_and_round_trips():
    rng = random.Random(9)
    validator = jsonschema.Draft202012Validator(diff_schema())
    for _ in range(30):
        old = gen_specs.make_spec(rng)
        new = gen_specs.mutate(rng, old)
        diff = diff_docspec(old, new)
        payload = json.loads(json.dumps(diff.to_json()))
        validator.validate(payload)
        assert DocSpecDiff.from_json(payload) == diff


def test_field_change_without_from_is_unchecked():
    old = pi_spec()
    diff = DocSpecDiff(changes=(FieldChange(path="/topic", to="New topic", has_from=False),))
    payload = diff.to_json()
    assert "from" not in payload["changes"][0]
    assert apply_diff(old, DocSpecDiff.from_json(payload)).topic == "New topic"


# ---------------------------------------------------------------------------
# replay soundness
# ---------------------------------------------------------------------------


def test_apply_reproduces_target_on_mutated_pairs():
    rng = random.Random(3)
    for _ in range(60):
        old = gen_specs.make_spec(rng)
        new = gen_specs.mutate(rng, old)
        diff = diff_docspec(old, new)
        assert apply_diff(old, diff) == new
        replayed = DocSpecDiff.from_json(json.loads(json.dumps(diff.to_json())))
        assert apply_diff(old, replayed) == new


def test_apply_reproduces_target_on_independent_pairs():
    rng = random.Random(5)
    for _ in range(25):
        old = gen_specs.make_spec(rng)
        new = gen_specs.make_spec(rng)
        assert apply_diff(old, diff_docspec(old, new)) == new


# ---------------------------------------------------------------------------
# misfit diffs
# ---------------------------------------------------------------------------


def test_stale_from_value_is_rejected():
    old = pi_spec()
    diff = diff_docspec(old, with_slider_max(old, 10))
    (edit,) = diff.edited
    stale = DocSpecDiff(
        edited=(
            dataclasses.replace(
                edit, changes=(dataclasses.replace(edit.changes[0], from_value=4),)
            ),
        )
    )
    with pytest.raises(DiffApplyError, match="expected"):
        apply_diff(old, stale)


def test_removing_unknown_unit_is_rejected():
    with pytest.raises(DiffApplyError, match="unknown unit"):
        apply_diff(pi_spec(), DocSpecDiff(removed=("ghost",)))


def test_editing_unknown_unit_is_rejected():
    edit = dataclasses.replace(diff_docspec(pi_spec(), with_slider_max(pi_spec(), 10)).edited[0], id="ghost")
    with pytest.raises(DiffApplyError, match="unknown unit"):
        apply_diff(pi_spec(), DocSpecDiff(edited=(edit,)))


def test_adding_duplicate_id_is_rejected():
    old = pi_spec()
    from docweave.docspec import docspec_to_jsonable

    unit = docspec_to_jsonable(old)["units"][0]
    with pytest.raises(DiffApplyError, match="already exists"):
        apply_diff(old, DocSpecDiff(added=(unit,)))


def test_order_must_be_a_permutation():
    with pytest.raises(DiffApplyError, match="permutation"):
        apply_diff(pi_spec(), DocSpecDiff(order=("pi-as-a-ratio", "ghost")))


def test_dangling_edit_path_is_rejected():
    edit = DocSpecDiff(
        edited=(
            dataclasses.replace(
                diff_docspec(pi_spec(), with_slider_max(pi_spec(), 10)).edited[0],
                changes=(FieldChange(path="/interaction/state/9/max", to=10, has_from=False),),
            ),
        )
    )
    with pytest.raises(DiffApplyError, match="out of range"):
        apply_diff(pi_spec(), edit)


def test_shape_breaking_edit_is_rejected():
    old = pi_spec()
    edit = DocSpecDiff(
        edited=(
            dataclasses.replace(
                diff_docspec(old, with_slider_max(old, 10)).edited[0],
                changes=(FieldChange(path="/interaction/state/0/max", to="high", has_from=False),),
            ),
        )
    )
    with pytest.raises(DiffApplyError, match="malformed"):
        apply_diff(old, edit)
