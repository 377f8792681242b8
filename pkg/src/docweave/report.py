"""Violation records and validation reports shared across the package.

Errors discovered by validators are data, not exceptions: a report collects
every violation found, each anchored to a JSON-pointer-style path (for
structured documents) or a byte offset (for markup fragments).
"""

from __future__ import annotations

from dataclasses import dataclass, field

CATEGORY_SYNTAX = "syntax"
CATEGORY_SCHEMA = "schema"
CATEGORY_SEMANTIC = "semantic"


@dataclass(frozen=True)
class Violation:
    path: str
    message: str
    category: str = CATEGORY_SEMANTIC
    offset: int | None = None

    def to_json(self) -> dict:
        data: dict = {"path": self.path, "message": self.message, "category": self.category}
        if self.offset is not None:
            data["offset"] = self.offset
        return data

    def __str__(self) -> str:
        where = self.path if self.path else (f"offset {self.offset}" if self.offset is not None else "")
        return f"[{self.category}] {where}: {self.message}" if where else f"[{self.category}] {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.violations + other.violations)

    def prefixed(self, prefix: str) -> "ValidationReport":
        """Return a copy with `prefix` prepended to every violation path."""
        return ValidationReport(
            tuple(
                Violation(prefix + v.path, v.message, v.category, v.offset)
                for v in self.violations
            )
        )

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}

    def render(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


class ReportCollector:
    """Mutable accumulator used while walking a structure."""

    def __init__(self) -> None:
        self._violations: list[Violation] = []

    def add(self, path: str, message: str, category: str = CATEGORY_SEMANTIC, offset: int | None = None) -> None:
        self._violations.append(Violation(path, message, category, offset))

    def extend(self, report: ValidationReport, prefix: str = "") -> None:
        for v in report.violations:
            self._violations.append(Violation(prefix + v.path, v.message, v.category, v.offset))

    @property
    def ok(self) -> bool:
        return not self._violations

    def report(self) -> ValidationReport:
        return ValidationReport(tuple(self._violations))


__all__ = [
    "CATEGORY_SCHEMA",
    "CATEGORY_SEMANTIC",
    "CATEGORY_SYNTAX",
    "ReportCollector",
    "ValidationReport",
    "Violation",
]
