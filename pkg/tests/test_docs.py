"""Published docs stay truthful: the schema file and grammar tables never drift."""

from __future__ import annotations

import json
import pathlib

from docweave.docspec import docspec_schema
from docweave.expr import CONSTANTS, FUNCTIONS

DOCS = pathlib.Path(__file__).resolve().parents[1] / "docs"


def test_published_schema_equals_the_library_schema():
    published = json.loads((DOCS / "docspec.schema.json").read_text(encoding="utf-8"))
    assert published == docspec_schema()


def test_grammar_doc_names_every_function_and_constant():
    text = (DOCS / "expression-grammar.md").read_text(encoding="utf-8")
    for name in FUNCTIONS:
        assert f"`{name}(" in text, f"function {name} missing from the grammar doc"
    for name in CONSTANTS:
        assert f"`{name}`" in text, f"constant {name} missing from the grammar doc"
    assert "right-associative" in text
    assert "implicit multiplication" in text


def test_format_doc_states_the_extension_and_version():
    text = (DOCS / "docspec-format.md").read_text(encoding="utf-8")
    assert ".docspec.json" in text
    assert '"1.0"' in text
    assert "docspec.schema.json" in text
