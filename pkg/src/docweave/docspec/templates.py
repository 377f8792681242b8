"""Label text templates: literal text with ``{expression}`` placeholders.

``"ratio = {C/D}"`` renders the current value of ``C/D`` to the label's
decimal-places setting.  Braces do not nest and have no escape form.
"""

from __future__ import annotations

__all__ = ["TemplateError", "template_expressions", "template_segments"]


class TemplateError(ValueError):
    pass


def template_segments(template: str) -> list[tuple[str, str]]:
    """Split into ("text", literal) and ("expr", source) segments, in order."""

    segments: list[tuple[str, str]] = []
    rest = template
    while rest:
        open_at = rest.find("{")
        close_at = rest.find("}")
        if open_at == -1:
            if close_at != -1:
                raise TemplateError("unmatched '}' in template")
            segments.append(("text", rest))
            break
        if close_at != -1 and close_at < open_at:
            raise TemplateError("unmatched '}' in template")
        if open_at > 0:
            segments.append(("text", rest[:open_at]))
        close_at = rest.find("}", open_at)
        if close_at == -1:
            raise TemplateError("unmatched '{' in template")
        source = rest[open_at + 1 : close_at]
        if "{" in source:
            raise TemplateError("nested '{' in template")
        if not source.strip():
            raise TemplateError("empty placeholder in template")
        segments.append(("expr", source))
        rest = rest[close_at + 1 :]
    return segments


def template_expressions(template: str) -> list[str]:
    """Just the placeholder expression sources, in order of appearance."""

    return [text for kind, text in template_segments(template) if kind == "expr"]
