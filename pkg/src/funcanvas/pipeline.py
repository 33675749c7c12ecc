"""One front door for the whole pipeline: parse, resolve, check, run, render.

Both the command line and the playground service funnel through
``compile_source`` so they cannot drift apart.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from typing import Optional

from .analysis import SymbolTable, check_types, dependency_graph, resolve
from .diagnostics import Diagnostic, error, has_errors
from .evaluator import DEFAULT_FUEL, Interpreter
from .lint import LintReport, RubricRule, lint_program
from .render import Animation, Drawing, Viewport, classify_program, render_frames, render_svg
from .syntax import SyntaxTree, parse_source
from .values import EvalError

MODES = ("check", "draw", "animate")
DEFAULT_FPS = 10.0
DEFAULT_DURATION = 2.0


def source_digest(source: str) -> str:
    return hashlib.sha256(source.encode("utf-8")).hexdigest()[:12]


@dataclass
class CompileOutcome:
    ok: bool
    diagnostics: list[Diagnostic] = field(default_factory=list)
    svg: Optional[str] = None
    frames: Optional[list[str]] = None
    lint: Optional[LintReport] = None

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok, "diagnostics": [d.to_json() for d in self.diagnostics]}
        if self.svg is not None:
            out["svg"] = self.svg
        if self.frames is not None:
            out["frames"] = self.frames
        if self.lint is not None:
            out["lint"] = self.lint.to_json()
        return out


def analyze_source(source: str, require_entry: bool = True
                   ) -> tuple[SyntaxTree, Optional[SymbolTable], list[Diagnostic]]:
    """Parse, resolve and type-check; diagnostics collect across stages."""
    try:
        tree, diags = parse_source(source)
        if has_errors(diags):
            return tree, None, diags
        table, resolve_diags = resolve(tree, require_entry=require_entry)
        diags = diags + resolve_diags
        if has_errors(diags):
            return tree, table, diags
        diags = diags + check_types(tree, table, require_entry=require_entry)
        return tree, table, diags
    except RecursionError:
        return SyntaxTree([]), None, [error(
            "nesting-too-deep", "the program nests expressions too deeply to analyze", (1, 1))]


def _eval_error_diagnostic(exc: EvalError) -> Diagnostic:
    message = exc.message
    if exc.frames:
        chain = " > ".join(f"{name} ({p[0]}:{p[1]})" for name, p in exc.frames)
        message += f"; call stack: {chain}"
    return error(exc.kind, message, exc.pos or (1, 1))


def compile_source(source: str, mode: str = "draw", fuel: int = DEFAULT_FUEL,
                   fps: Optional[float] = None, duration: Optional[float] = None,
                   viewport: Optional[Viewport] = None,
                   rubric_rules: Optional[list[RubricRule]] = None,
                   time_limit: Optional[float] = None) -> CompileOutcome:
    if mode not in MODES:
        return CompileOutcome(False, [error("invalid-request", f"unknown mode '{mode}'", (1, 1))])
    viewport = viewport or Viewport()
    deadline = time.monotonic() + time_limit if time_limit is not None else None
    digest = source_digest(source)

    tree, table, diags = analyze_source(source)
    if has_errors(diags):
        return CompileOutcome(False, diags)
    assert table is not None

    if mode == "check":
        _, dep_diags = dependency_graph(table)
        report = lint_program(tree, table, rubric_rules)
        return CompileOutcome(True, diags + dep_diags, lint=report)

    try:
        interp = Interpreter(table, fuel=fuel, deadline=deadline)
        program = classify_program(interp.evaluate(), interp)
        if mode == "draw":
            if isinstance(program, Animation):
                return CompileOutcome(False, diags + [error(
                    "mode-mismatch", "this program is an animation; run it in animate mode", (1, 1))])
            assert isinstance(program, Drawing)
            svg = render_svg(program.picture, viewport, source_hash=digest)
            return CompileOutcome(True, diags, svg=svg)
        if isinstance(program, Drawing):
            return CompileOutcome(False, diags + [error(
                "mode-mismatch", "this program is a still drawing; run it in draw mode", (1, 1))])
        assert isinstance(program, Animation)
        frames = render_frames(program, fps if fps is not None else DEFAULT_FPS,
                               duration if duration is not None else DEFAULT_DURATION,
                               viewport, source_hash=digest, deadline=deadline)
        return CompileOutcome(True, diags, frames=frames)
    except EvalError as exc:
        return CompileOutcome(False, diags + [_eval_error_diagnostic(exc)])
    except RecursionError:
        return CompileOutcome(False, diags + [error(
            "fuel-exhausted", "evaluation nested too deeply and was stopped", (1, 1))])
