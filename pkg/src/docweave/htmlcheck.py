"""Policy-driven validation of HTML fragments.

Generated markup is gated before it enters a document: a fragment must be
strictly well-formed (balanced tags with the usual void-element exceptions),
have exactly one root element, use only allowlisted tags, carry no
event-handler attributes, and reference no external URLs.  Violations are
data, anchored to byte offsets in the source.  ``extract_text`` recovers the
prose content of a fragment for coherence review.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from html.parser import HTMLParser
from importlib import resources

from .report import (
    CATEGORY_SEMANTIC,
    CATEGORY_SYNTAX,
    ReportCollector,
    ValidationReport,
)

__all__ = [
    "FragmentPolicy",
    "VOID_ELEMENTS",
    "default_policy",
    "extract_text",
    "page_policy",
    "validate_fragment",
    "validate_page",
]

# HTML elements that never take a closing tag.
VOID_ELEMENTS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)

# Elements whose boundaries separate paragraphs in extracted text.  <br> is
# treated the same way so line-broken prose stays readable.
_BLOCK_ELEMENTS = frozenset(
    (
        "article blockquote br div figcaption figure footer h1 h2 h3 h4 h5 h6 "
        "header hr li ol p pre section table td th tr ul"
    ).split()
)

_EXTERNAL_URL = re.compile(r"^\s*(?:https?:)?//", re.IGNORECASE)
_SCRIPTING_URL = re.compile(r"^\s*javascript:", re.IGNORECASE)
_URL_ATTRIBUTES = ("src", "href", "xlink:href")


@dataclass(frozen=True)
class FragmentPolicy:
    """What a fragment may contain.

    ``allowed_tags`` of ``None`` accepts any tag name; the shipped default
    allows structural and text markup, svg drawing elements, form controls,
    and one script/style block each.
    """

    allowed_tags: "frozenset[str] | None"
    forbidden_attributes: frozenset = frozenset()
    forbidden_attribute_prefixes: tuple = ("on",)
    allow_external_urls: bool = False

    @classmethod
    def from_json(cls, obj: dict) -> "FragmentPolicy":
        tags = obj.get("allowed_tags")
        return cls(
            allowed_tags=None if tags is None else frozenset(t.lower() for t in tags),
            forbidden_attributes=frozenset(
                a.lower() for a in obj.get("forbidden_attributes", ())
            ),
            forbidden_attribute_prefixes=tuple(
                p.lower() for p in obj.get("forbidden_attribute_prefixes", ("on",))
            ),
            allow_external_urls=bool(obj.get("allow_external_urls", False)),
        )

    def to_json(self) -> dict:
        return {
            "allowed_tags": None if self.allowed_tags is None else sorted(self.allowed_tags),
            "forbidden_attributes": sorted(self.forbidden_attributes),
            "forbidden_attribute_prefixes": list(self.forbidden_attribute_prefixes),
            "allow_external_urls": self.allow_external_urls,
        }


@lru_cache(maxsize=1)
def default_policy() -> FragmentPolicy:
    text = resources.files("docweave.data").joinpath("default_policy.json").read_text("utf-8")
    return FragmentPolicy.from_json(json.loads(text))


# Standalone pages additionally need document scaffolding elements.
_PAGE_TAGS = frozenset(
    "html head body title meta link main section article aside nav header footer".split()
)


@lru_cache(maxsize=1)
def page_policy() -> FragmentPolicy:
    base = default_policy()
    allowed = None if base.allowed_tags is None else base.allowed_tags | _PAGE_TAGS
    return FragmentPolicy(
        allowed_tags=allowed,
        forbidden_attributes=base.forbidden_attributes,
        forbidden_attribute_prefixes=base.forbidden_attribute_prefixes,
        allow_external_urls=base.allow_external_urls,
    )


class _Offsets:
    """Byte offsets for (line, column) positions reported by the parser."""

    def __init__(self, source: str) -> None:
        self._lines = source.split("\n")
        starts = [0]
        for line in self._lines[:-1]:
            starts.append(starts[-1] + len(line.encode("utf-8")) + 1)
        self._starts = starts

    def at(self, lineno: int, column: int) -> int:
        line = self._lines[lineno - 1]
        return self._starts[lineno - 1] + len(line[:column].encode("utf-8"))


class _FragmentScanner(HTMLParser):
    def __init__(self, policy: FragmentPolicy, offsets: _Offsets, out: ReportCollector):
        super().__init__(convert_charrefs=True)
        self.policy = policy
        self.offsets = offsets
        self.out = out
        self.stack: list[tuple[str, int]] = []  # (tag, byte offset of start)
        self.roots = 0
        self.root_tags: list[str] = []

    # -- helpers ----------------------------------------------------------

    def _offset(self) -> int:
        return self.offsets.at(*self.getpos())

    def _syntax(self, message: str) -> None:
        self.out.add("", message, CATEGORY_SYNTAX, self._offset())

    def _policy(self, message: str) -> None:
        self.out.add("", message, CATEGORY_SEMANTIC, self._offset())

    def _check_tag(self, tag: str, attrs) -> None:
        if self.policy.allowed_tags is not None and tag not in self.policy.allowed_tags:
            self._policy(f"tag {tag!r} is not allowed")
        for name, value in attrs:
            name = name.lower()
            if name in self.policy.forbidden_attributes or any(
                name.startswith(p) for p in self.policy.forbidden_attribute_prefixes
            ):
                self._policy(f"forbidden attribute {name}")
            if name in _URL_ATTRIBUTES and isinstance(value, str):
                if _SCRIPTING_URL.match(value):
                    self._policy(f"scripting URL in {name}")
                elif not self.policy.allow_external_urls and _EXTERNAL_URL.match(value):
                    self._policy(f"external URL in {name}")

    def _enter(self, tag: str) -> None:
        if not self.stack:
            self.roots += 1
            self.root_tags.append(tag)

    # -- parser callbacks --------------------------------------------------

    def handle_starttag(self, tag, attrs):
        self._check_tag(tag, attrs)
        self._enter(tag)
        if tag not in VOID_ELEMENTS:
            self.stack.append((tag, self._offset()))

    def handle_startendtag(self, tag, attrs):
        self._check_tag(tag, attrs)
        self._enter(tag)

    def handle_endtag(self, tag):
        if tag in VOID_ELEMENTS:
            self._syntax(f"void element {tag} cannot be closed")
            return
        if not self.stack:
            self._syntax(f"unexpected closing tag {tag}")
            return
        if self.stack[-1][0] == tag:
            self.stack.pop()
            return
        if tag not in (name for name, _ in self.stack):
            self._syntax(f"unexpected closing tag {tag}")
            return
        # an enclosing element is being closed while inner ones are still
        # open; name the innermost tag whose closure went missing
        self._syntax(f"mismatched closing tag {self.stack[-1][0]}")
        while self.stack and self.stack.pop()[0] != tag:
            pass

    def handle_data(self, data):
        if not self.stack and data.strip():
            self._syntax("text outside the root element")

    def handle_decl(self, decl):
        self._syntax("declarations are not allowed in a fragment")

    def handle_pi(self, data):
        self._syntax("processing instructions are not allowed in a fragment")


def validate_fragment(source: str, policy: "FragmentPolicy | None" = None) -> ValidationReport:
    """Everything wrong with the fragment under ``policy`` (default shipped)."""

    if policy is None:
        policy = default_policy()
    out = ReportCollector()
    offsets = _Offsets(source)
    scanner = _FragmentScanner(policy, offsets, out)
    scanner.feed(source)
    scanner.close()
    for tag, offset in scanner.stack:
        out.add("", f"unclosed tag {tag}", CATEGORY_SYNTAX, offset)
    if scanner.roots != 1:
        out.add(
            "",
            f"fragment must have exactly one root element (found {scanner.roots})",
            CATEGORY_SYNTAX,
            0,
        )
    return out.report()


class _PageScanner(_FragmentScanner):
    """Like the fragment scanner, but tolerates one leading html doctype."""

    def __init__(self, policy, offsets, out):
        super().__init__(policy, offsets, out)
        self.doctype_seen = False

    def handle_decl(self, decl):
        if (
            not self.doctype_seen
            and self.roots == 0
            and not self.stack
            and re.fullmatch(r"doctype\s+html", decl.strip(), re.IGNORECASE)
        ):
            self.doctype_seen = True
            return
        self._syntax("unexpected declaration")


def validate_page(source: str, policy: "FragmentPolicy | None" = None) -> ValidationReport:
    """Everything wrong with a standalone page under ``policy``.

    A page is a fragment whose single root element is ``<html>``, optionally
    preceded by an html doctype.
    """

    if policy is None:
        policy = page_policy()
    out = ReportCollector()
    scanner = _PageScanner(policy, _Offsets(source), out)
    scanner.feed(source)
    scanner.close()
    for tag, offset in scanner.stack:
        out.add("", f"unclosed tag {tag}", CATEGORY_SYNTAX, offset)
    if scanner.roots != 1:
        out.add(
            "",
            f"page must have exactly one root element (found {scanner.roots})",
            CATEGORY_SYNTAX,
            0,
        )
    elif scanner.root_tags[0] != "html":
        out.add("", "page root element must be html", CATEGORY_SYNTAX, 0)
    return out.report()


class _TextExtractor(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.paragraphs: list[str] = []
        self.parts: list[str] = []
        self.skip_depth = 0

    def _flush(self) -> None:
        text = re.sub(r"\s+", " ", "".join(self.parts)).strip()
        self.parts = []
        if text:
            self.paragraphs.append(text)

    def handle_starttag(self, tag, attrs):
        if tag in ("script", "style"):
            self.skip_depth += 1
        elif tag in _BLOCK_ELEMENTS:
            self._flush()

    def handle_endtag(self, tag):
        if tag in ("script", "style"):
            self.skip_depth = max(0, self.skip_depth - 1)
        elif tag in _BLOCK_ELEMENTS:
            self._flush()

    def handle_data(self, data):
        if not self.skip_depth:
            self.parts.append(data)


def extract_text(source: str) -> str:
    """Prose content of a fragment: block elements become paragraph breaks."""

    extractor = _TextExtractor()
    extractor.feed(source)
    extractor.close()
    extractor._flush()
    return "\n\n".join(extractor.paragraphs)
