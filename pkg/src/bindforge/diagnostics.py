"""Diagnostics shared by every stage of the generator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

ERROR = "error"
WARNING = "warning"
NOTE = "note"

_SEVERITY_ORDER = {ERROR: 0, WARNING: 1, NOTE: 2}


@dataclass(frozen=True)
class Span:
    line: int
    column: int
    offset: int = 0
    length: int = 0

    def __str__(self):
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    id: str
    message: str
    span: Optional[Span] = None

    def render(self, filename: str = "<input>") -> str:
        where = f"{filename}:{self.span}" if self.span else filename
        return f"{where}: {self.severity}: [{self.id}] {self.message}"


class BindforgeError(Exception):
    """Raised when a stage cannot continue; carries the diagnostics so far."""

    def __init__(self, diagnostics: Iterable[Diagnostic]):
        self.diagnostics = list(diagnostics)
        first = next((d for d in self.diagnostics if d.severity == ERROR), None)
        super().__init__(first.message if first else "bindforge failed")


@dataclass
class DiagnosticBag:
    items: list = field(default_factory=list)

    def error(self, id, message, span=None):
        self.items.append(Diagnostic(ERROR, id, message, span))

    def warning(self, id, message, span=None):
        self.items.append(Diagnostic(WARNING, id, message, span))

    def note(self, id, message, span=None):
        self.items.append(Diagnostic(NOTE, id, message, span))

    def extend(self, diags):
        self.items.extend(diags)

    @property
    def has_errors(self) -> bool:
        return any(d.severity == ERROR for d in self.items)

    def with_id(self, id):
        return [d for d in self.items if d.id == id]

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


def sort_key(diag: Diagnostic):
    span = diag.span or Span(0, 0)
    return (span.line, span.column, _SEVERITY_ORDER[diag.severity], diag.id)
