"""Assembly of validated fragments into a standalone HTML page.

The assembled page is deliberately boring: a fixed scaffold, one section per
knowledge unit in spec order, a shared stylesheet, and a machine-readable
metadata block in the footer.  Nothing here depends on wall-clock time or
any other ambient state, so the same inputs always produce the same bytes.
"""

from __future__ import annotations

import html as html_mod
import json
from dataclasses import dataclass

from ..htmlcheck import page_policy, validate_page

__all__ = ["AssemblyError", "Document", "PAGE_CSS", "build_document"]


class AssemblyError(ValueError):
    pass


PAGE_CSS = """\
body { margin: 0; font-family: Georgia, 'Times New Roman', serif; color: #222222; background: #ffffff; }
main.doc { max-width: 720px; margin: 0 auto; padding: 24px 16px 48px; }
main.doc > h1 { font-size: 1.6em; border-bottom: 2px solid #222222; padding-bottom: 8px; }
section.doc-unit { margin: 32px 0; }
section.doc-unit > h2 { font-size: 1.2em; }
.doc-widget { margin-top: 12px; }
footer.doc-meta { margin-top: 48px; border-top: 1px solid #cccccc; color: #777777; font-size: 0.85em; }"""


@dataclass(frozen=True)
class Document:
    """A finished HTML page plus enough structure to audit it."""

    title: str
    html: str
    unit_ids: tuple
    metadata: dict
    mode: str = "pipeline"  # "pipeline" | "naive"

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "mode": self.mode,
            "unit_ids": list(self.unit_ids),
            "metadata": self.metadata,
            "html": self.html,
        }


def _escape(text: str) -> str:
    return html_mod.escape(text)


def _metadata_script(metadata: dict) -> str:
    payload = json.dumps(metadata, sort_keys=True).replace("</", "<\\/")
    return f'<script type="application/json" id="doc-meta">{payload}</script>'


def _config_jsonable(config) -> dict:
    if config is None:
        return {}
    fields = (
        "max_attempts",
        "sequential_text",
        "widget_mode",
        "grid_points",
        "cap",
        "container_prefix",
    )
    return {name: getattr(config, name) for name in fields if hasattr(config, name)}


def build_document(spec, units, config=None) -> Document:
    """Spec + generated units → one standalone page, re-validated on the way out.

    ``units`` must cover the spec's unit ids exactly (no misses, no strays,
    no duplicates); sections are emitted in spec order regardless of the
    order ``units`` arrived in.
    """

    by_id = {}
    for unit in units:
        if unit.unit_id in by_id:
            raise AssemblyError(f"duplicate generated unit {unit.unit_id!r}")
        by_id[unit.unit_id] = unit
    spec_ids = [unit.id for unit in spec.units]
    missing = [uid for uid in spec_ids if uid not in by_id]
    if missing:
        raise AssemblyError(f"missing generated unit(s): {', '.join(missing)}")
    stray = [uid for uid in by_id if uid not in set(spec_ids)]
    if stray:
        raise AssemblyError(f"generated unit(s) not in spec: {', '.join(stray)}")

    sections = []
    for spec_unit in spec.units:
        generated = by_id[spec_unit.id]
        if generated.status != "ok":
            raise AssemblyError(f"unit {spec_unit.id!r} is not ok: {generated.status}")
        if not generated.text_fragment or not generated.widget_fragment:
            raise AssemblyError(f"unit {spec_unit.id!r} is missing a fragment")
        sections.append(
            f'<section id="unit-{spec_unit.id}" class="doc-unit">\n'
            f"<h2>{_escape(spec_unit.summary)}</h2>\n"
            f'<div class="doc-text">\n{generated.text_fragment}\n</div>\n'
            f'<div class="doc-widget">\n{generated.widget_fragment}\n</div>\n'
            f"</section>"
        )

    metadata = {
        "generator": "docweave",
        "mode": "pipeline",
        "topic": spec.topic,
        "spec_version": spec.spec_version,
        "config": _config_jsonable(config),
        "units": [unit.to_json() for unit in units],
    }

    title = _escape(spec.topic)
    body = "\n".join(sections)
    page = (
        "<!DOCTYPE html>\n"
        '<html lang="en">\n'
        "<head>\n"
        '<meta charset="utf-8">\n'
        '<meta name="viewport" content="width=device-width, initial-scale=1">\n'
        f"<title>{title}</title>\n"
        f"<style>\n{PAGE_CSS}\n</style>\n"
        "</head>\n"
        "<body>\n"
        '<main class="doc">\n'
        f"<h1>{title}</h1>\n"
        f"{body}\n"
        '<footer class="doc-meta">\n'
        "<p>Generated by docweave.</p>\n"
        f"{_metadata_script(metadata)}\n"
        "</footer>\n"
        "</main>\n"
        "</body>\n"
        "</html>\n"
    )

    report = validate_page(page, page_policy())
    if not report.ok:
        raise AssemblyError(f"assembled page failed validation:\n{report.render()}")

    return Document(
        title=spec.topic,
        html=page,
        unit_ids=tuple(spec_ids),
        metadata=metadata,
        mode="pipeline",
    )
