"""An equational graphics language for students.

Programs are lists of ``head = body`` equations; `program` is the entry
point, pictures compose with ``&``, and animations are functions of time.
This package provides the parser, checker, call-by-need evaluator, SVG
renderer, rubric linter, command line and playground service.
"""

from .analysis import SymbolTable, check_types, dependency_graph, resolve, suggest
from .diagnostics import Diagnostic, has_errors
from .evaluator import DEFAULT_FUEL, Interpreter, evaluate
from .lint import LintReport, RubricRule, default_rules, lint_program, load_rubric
from .pipeline import CompileOutcome, analyze_source, compile_source, source_digest
from .render import (Animation, Drawing, Viewport, classify_program,
                     render_frames, render_svg)
from .syntax import SyntaxTree, parse, parse_source, print_tree, tokenize, trees_equal
from .values import EvalError

__version__ = "0.1.0"

__all__ = [
    "Animation", "CompileOutcome", "DEFAULT_FUEL", "Diagnostic", "Drawing",
    "EvalError", "Interpreter", "LintReport", "RubricRule", "SymbolTable",
    "SyntaxTree", "Viewport", "analyze_source", "check_types", "classify_program",
    "compile_source", "default_rules", "dependency_graph", "evaluate",
    "has_errors", "lint_program", "load_rubric", "parse", "parse_source",
    "print_tree", "render_frames", "render_svg", "resolve", "source_digest",
    "suggest", "tokenize", "trees_equal", "__version__",
]
