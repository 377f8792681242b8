"""Prompt templates, shipped as data files and rendered strictly.

Templates live in ``docweave/data/prompts/*.md`` and use ``$field``
placeholders.  Rendering is strict both ways: a missing field and an unused
field are both errors, so templates and call sites cannot drift apart
silently.
"""

from __future__ import annotations

import string
from functools import lru_cache
from importlib import resources

__all__ = ["render_prompt", "template_fields"]


@lru_cache(maxsize=None)
def _template_text(name: str) -> str:
    path = resources.files("docweave.data") / "prompts" / f"{name}.md"
    try:
        return path.read_text("utf-8")
    except FileNotFoundError:
        raise KeyError(f"no prompt template named {name!r}") from None


def template_fields(name: str) -> frozenset:
    """The placeholder names a template expects."""

    text = _template_text(name)
    return frozenset(
        m.group("named") or m.group("braced")
        for m in string.Template.pattern.finditer(text)
        if m.group("named") or m.group("braced")
    )


def render_prompt(name: str, **fields: str) -> str:
    expected = template_fields(name)
    given = frozenset(fields)
    if given != expected:
        missing = ", ".join(sorted(expected - given)) or "none"
        extra = ", ".join(sorted(given - expected)) or "none"
        raise ValueError(
            f"prompt {name!r} fields do not match template (missing: {missing}; extra: {extra})"
        )
    return string.Template(_template_text(name)).substitute(fields)
