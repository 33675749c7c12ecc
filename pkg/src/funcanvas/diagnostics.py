"""Positioned diagnostics shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning" | "info"
    code: str
    message: str
    line: int
    col: int
    suggestion: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "line": self.line,
            "col": self.col,
        }
        if self.suggestion is not None:
            out["suggestion"] = self.suggestion
        return out

    def render(self) -> str:
        text = f"{self.line}:{self.col}: {self.severity}[{self.code}] {self.message}"
        if self.suggestion is not None:
            text += f" (did you mean '{self.suggestion}'?)"
        return text


def error(code: str, message: str, pos: tuple[int, int], suggestion: str | None = None) -> Diagnostic:
    return Diagnostic("error", code, message, pos[0], pos[1], suggestion)


def warning(code: str, message: str, pos: tuple[int, int]) -> Diagnostic:
    return Diagnostic("warning", code, message, pos[0], pos[1])


def info(code: str, message: str, pos: tuple[int, int]) -> Diagnostic:
    return Diagnostic("info", code, message, pos[0], pos[1])


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diagnostics)


class SourceError(Exception):
    """Raised by stages that cannot proceed; carries the collected diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.render() for d in diagnostics))
        self.diagnostics = diagnostics
