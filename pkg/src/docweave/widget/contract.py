"""Checking a widget fragment against the spec it claims to realize.

This is a census, not a simulation: the fragment must be well formed under
the fragment policy, carry exactly one interactive element per control of the
right flavor, mention every state variable somewhere in its script, and pull
in no external resources.  It deliberately knows nothing about how the
fragment was produced, so it can audit generated markup from any source.
"""

from __future__ import annotations

import re
from html.parser import HTMLParser

from ..htmlcheck import FragmentPolicy, default_policy, validate_fragment
from ..report import CATEGORY_SEMANTIC, ReportCollector, ValidationReport

__all__ = ["validate_widget_contract"]

_IDENT_TOKEN = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_EXTERNAL = re.compile(rb"https?://", re.IGNORECASE)

_CONTROL_LABELS = {
    "slider": "range input",
    "dropdown": "select element",
    "toggle": "checkbox input",
}


class _Census(HTMLParser):
    """Counts interactive elements and gathers script text."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.ranges = 0
        self.checkboxes = 0
        self.selects = 0
        self.scripts: list[str] = []
        self._in_script = False

    def handle_starttag(self, tag, attrs):
        if tag == "script":
            self._in_script = True
        elif tag == "select":
            self.selects += 1
        elif tag == "input":
            kind = dict(attrs).get("type")
            if kind == "range":
                self.ranges += 1
            elif kind == "checkbox":
                self.checkboxes += 1

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)
        if tag == "script":
            self._in_script = False

    def handle_endtag(self, tag):
        if tag == "script":
            self._in_script = False

    def handle_data(self, data):
        if self._in_script:
            self.scripts.append(data)


def _census(source: str) -> _Census:
    walker = _Census()
    walker.feed(source)
    walker.close()
    return walker


def validate_widget_contract(source, spec, policy: FragmentPolicy | None = None) -> ValidationReport:
    """Audit fragment ``source`` (text or WidgetFragment) against ``spec``."""

    if hasattr(source, "html"):
        source = source.html
    collector = ReportCollector()
    collector.extend(validate_fragment(source, policy or default_policy()))

    for match in _EXTERNAL.finditer(source.encode("utf-8")):
        collector.add("", "external resource", CATEGORY_SEMANTIC, offset=match.start())

    walker = _census(source)
    script_text = "\n".join(walker.scripts)
    tokens = set(_IDENT_TOKEN.findall(script_text))
    pointer_hooks = script_text.count("pointerdown")

    counts = {"slider": 0, "dropdown": 0, "toggle": 0, "drag": 0}
    for var in spec.state:
        if var.kind in counts:
            counts[var.kind] += 1

    found = {
        "slider": walker.ranges,
        "dropdown": walker.selects,
        "toggle": walker.checkboxes,
    }
    for kind, label in _CONTROL_LABELS.items():
        if found[kind] != counts[kind]:
            collector.add(
                "",
                f"expected {counts[kind]} {label}(s) for {kind} controls, found {found[kind]}",
                CATEGORY_SEMANTIC,
            )
    if pointer_hooks < counts["drag"]:
        collector.add(
            "",
            f"expected {counts['drag']} pointer-drag handler(s) for drag controls,"
            f" found {pointer_hooks}",
            CATEGORY_SEMANTIC,
        )

    for var in spec.state:
        if var.name not in tokens:
            collector.add(
                "", f"state variable {var.name} not referenced", CATEGORY_SEMANTIC
            )

    return collector.report()
