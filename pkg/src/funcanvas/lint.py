"""Rubric linter: static checks over typed programs, scored in tiers.

The built-in profile encodes the analog-clock grading sheet: magic numbers,
duplicated bodies, nested picture layers, local definitions, naming and
indentation style, and double-counted range endpoints.  Point values and
rule parameters load from a JSON rubric so teachers can retarget them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from . import typetags as tt
from .analysis import ENTRY_POINT, SymbolTable
from .syntax import (BinOp, Call, Definition, Expr, Ident, Neg, Num,
                     SyntaxTree, TupleLit, children)

TIERS = ("high", "mid", "low", "minimal")
DEFAULT_POINTS = {"high": 4, "mid": 3, "low": 2, "minimal": 1}


@dataclass
class RubricRule:
    id: str
    description: str
    points: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_POINTS))
    params: dict = field(default_factory=dict)


@dataclass
class LintFinding:
    rule_id: str
    tier: str
    positions: list[tuple[int, int]]
    explanation: str

    def to_json(self) -> dict:
        return {
            "rule": self.rule_id,
            "tier": self.tier,
            "positions": [{"line": line, "col": col} for line, col in self.positions],
            "explanation": self.explanation,
        }


@dataclass
class RuleResult:
    rule: RubricRule
    tier: str
    points: int
    findings: list[LintFinding]


@dataclass
class LintReport:
    results: list[RuleResult]
    notes: list[str]

    @property
    def total(self) -> int:
        return sum(r.points for r in self.results)

    @property
    def findings(self) -> list[LintFinding]:
        return [f for r in self.results for f in r.findings]

    def to_json(self) -> dict:
        return {
            "rules": [
                {
                    "id": r.rule.id,
                    "description": r.rule.description,
                    "tier": r.tier,
                    "points": r.points,
                    "findings": [f.to_json() for f in r.findings],
                }
                for r in self.results
            ],
            "notes": list(self.notes),
            "total": self.total,
        }

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            lines.append(f"{r.rule.id} [{r.tier}, {r.points} pts] {r.rule.description}")
            for f in r.findings:
                spots = ", ".join(f"{line}:{col}" for line, col in f.positions)
                lines.append(f"    {f.explanation} ({spots})")
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(f"total: {self.total}")
        return "\n".join(lines)


def default_rules() -> list[RubricRule]:
    return [
        RubricRule("R1", "expressions with named values instead of magic numbers",
                   params={"exempt": [0, 1, -1, 2], "min_occurrences": 3}),
        RubricRule("R2", "shared helpers instead of duplicated bodies",
                   params={"min_nodes": 4}),
        RubricRule("R3", "picture built from nested named layers",
                   params={"min_depth": 3}),
        RubricRule("R4", "local definitions structure the code"),
        RubricRule("R5", "naming and indentation follow house style",
                   params={"min_name_length": 3}),
        RubricRule("R6", "ranges handled without double-counted endpoints"),
    ]


def load_rubric(text_or_obj) -> list[RubricRule]:
    """Merge a JSON rubric ([{id, points, params}]) over the default profile."""
    data = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    rules = {r.id: r for r in default_rules()}
    for entry in data:
        rule = rules.get(entry.get("id"))
        if rule is None:
            continue
        for tier, value in entry.get("points", {}).items():
            if tier in TIERS:
                rule.points[tier] = int(value)
        rule.params.update(entry.get("params", {}))
    return list(rules.values())


def _all_definitions(tree: SyntaxTree):
    stack = list(tree.definitions)
    while stack:
        d = stack.pop(0)
        yield d
        stack = d.where_locals + stack


def _clause_exprs(d: Definition) -> list[Expr]:
    return [d.body] if d.guard is None else [d.guard, d.body]


def _node_count(expr: Expr) -> int:
    return 1 + sum(_node_count(c) for c in children(expr))


def lint_program(tree: SyntaxTree, table: SymbolTable,
                 rules: Optional[list[RubricRule]] = None) -> LintReport:
    rules = rules if rules is not None else default_rules()
    notes: list[str] = []
    results = []
    detectors = {"R1": _rule_magic_numbers, "R2": _rule_duplication, "R3": _rule_layering,
                 "R4": _rule_locals, "R5": _rule_naming, "R6": _rule_ranges}
    for rule in rules:
        detector = detectors.get(rule.id)
        if detector is None:
            notes.append(f"no detector for rule '{rule.id}'; skipped")
            continue
        tier, findings, rule_notes = detector(tree, table, rule)
        notes.extend(rule_notes)
        results.append(RuleResult(rule, tier, rule.points[tier], findings))
    return LintReport(results, notes)


# --- R1: magic numbers ---


def _collect_literals(expr: Expr, acc: list[tuple[float, tuple[int, int]]]) -> None:
    if isinstance(expr, Num):
        acc.append((expr.value, expr.pos))
        return
    if isinstance(expr, Neg) and isinstance(expr.operand, Num):
        acc.append((-expr.operand.value, expr.pos))
        return
    if isinstance(expr, TupleLit):
        # Direct coordinate literals are data, not magic numbers.
        for item in expr.items:
            if isinstance(item, Num) or (isinstance(item, Neg) and isinstance(item.operand, Num)):
                continue
            _collect_literals(item, acc)
        return
    for child in children(expr):
        _collect_literals(child, acc)


def _rule_magic_numbers(tree: SyntaxTree, table: SymbolTable, rule: RubricRule):
    exempt = {float(v) for v in rule.params.get("exempt", [0, 1, -1, 2])}
    minimum = int(rule.params.get("min_occurrences", 3))
    occurrences: dict[float, list[tuple[int, int]]] = {}
    for d in _all_definitions(tree):
        for expr in _clause_exprs(d):
            is_named_constant = expr is d.body and (
                isinstance(expr, Num) or (isinstance(expr, Neg) and isinstance(expr.operand, Num))
            )
            if is_named_constant:
                continue
            found: list[tuple[float, tuple[int, int]]] = []
            _collect_literals(expr, found)
            for value, pos in found:
                if value not in exempt:
                    occurrences.setdefault(value, []).append(pos)
    findings = []
    for value in sorted(occurrences):
        positions = sorted(occurrences[value])
        if len(positions) >= minimum:
            findings.append(LintFinding(
                rule.id, "low", positions,
                f"the number {value:g} appears {len(positions)} times; name it once instead"))
    return ("low" if findings else "high"), findings, []


# --- R2: duplicated bodies ---


def _shape_key(expr: Expr) -> str:
    if isinstance(expr, Num):
        return "N"
    if isinstance(expr, Ident):
        return expr.name
    if isinstance(expr, Call):
        return expr.name + "(" + ",".join(_shape_key(a) for a in expr.args) + ")"
    if isinstance(expr, BinOp):
        return f"({_shape_key(expr.left)}{expr.op}{_shape_key(expr.right)})"
    parts = ",".join(_shape_key(c) for c in children(expr))
    return f"{type(expr).__name__}[{parts}]"


def _rule_duplication(tree: SyntaxTree, table: SymbolTable, rule: RubricRule):
    min_nodes = int(rule.params.get("min_nodes", 4))
    groups: dict[str, list[Definition]] = {}
    for d in _all_definitions(tree):
        if _node_count(d.body) < min_nodes:
            continue
        groups.setdefault(_shape_key(d.body), []).append(d)
    findings = []
    for key in sorted(groups, key=lambda k: groups[k][0].pos):
        group = groups[key]
        names = sorted({d.name for d in group})
        if len(names) < 2:
            continue  # guard clauses of one head vary on purpose
        findings.append(LintFinding(
            rule.id, "low", sorted(d.pos for d in group),
            "bodies of " + ", ".join(f"'{n}'" for n in names)
            + " are identical except for number values; one helper function can cover them"))
    return ("low" if findings else "high"), findings, []


# --- R3: nested layers ---


def _is_picture_def(table: SymbolTable, name: str) -> bool:
    entry = table.entries.get(name)
    if entry is None or entry.kind != "user" or entry.type is None:
        return False
    t = tt.prune(entry.type)
    if isinstance(t, tt.TFunction):
        t = tt.prune(t.result)
    return isinstance(t, tt.TCon) and t.name == "Picture"


def _rule_layering(tree: SyntaxTree, table: SymbolTable, rule: RubricRule):
    min_depth = int(rule.params.get("min_depth", 3))
    if ENTRY_POINT not in table.clauses:
        return "low", [], ["R3 skipped: no 'program' definition to measure layers from"]
    memo: dict[str, int] = {}

    def depth(name: str, on_path: frozenset[str]) -> int:
        if name in memo:
            return memo[name]
        deps = [d for d in table.dependencies.get(name, [])
                if d not in on_path and _is_picture_def(table, d)]
        value = 1 + max((depth(d, on_path | {name}) for d in deps), default=0)
        memo[name] = value
        return value

    layers = max((depth(d, frozenset({ENTRY_POINT}))
                  for d in table.dependencies.get(ENTRY_POINT, [])
                  if _is_picture_def(table, d)), default=0)
    tier = "high" if layers >= min_depth else "low"
    pos = table.entries[ENTRY_POINT].pos or (1, 1)
    finding = LintFinding(rule.id, tier, [pos],
                          f"'program' groups its picture into {layers} named layer(s)")
    return tier, [finding], []


# --- R4: local definitions ---


def _rule_locals(tree: SyntaxTree, table: SymbolTable, rule: RubricRule):
    spots = sorted(d.pos for d in tree.definitions if d.where_locals)
    if spots:
        return "high", [LintFinding(rule.id, "high", spots, "definitions use 'where' locals")], []
    return "low", [LintFinding(rule.id, "low", [(1, 1)], "no local definitions; everything is global")], []


# --- R5: naming and indentation ---

_NAME_RE = re.compile(r"^[a-z][a-zA-Z0-9]*$")


def _rule_naming(tree: SyntaxTree, table: SymbolTable, rule: RubricRule):
    min_len = int(rule.params.get("min_name_length", 3))
    findings = []
    for d in _all_definitions(tree):
        if not _NAME_RE.match(d.name):
            findings.append(LintFinding(rule.id, "low", [d.pos],
                                        f"'{d.name}' is not a lowerCamelCase word"))
        elif len(d.name) < min_len:
            findings.append(LintFinding(rule.id, "low", [d.pos],
                                        f"'{d.name}' is too short to describe what it names"))
        for p in d.params:
            if not _NAME_RE.match(p.name):
                findings.append(LintFinding(rule.id, "low", [p.pos],
                                            f"parameter '{p.name}' is not a lowerCamelCase word"))
    for d in tree.definitions:
        if len(set(d.indents)) > 1:
            findings.append(LintFinding(
                rule.id, "low", [d.pos],
                f"continuation lines of '{d.name}' use mixed indentation "
                f"(columns {', '.join(str(c) for c in sorted(set(d.indents)))})"))
    findings.sort(key=lambda f: f.positions[0])
    return ("low" if findings else "high"), findings, []


# --- R6: range endpoints ---


def _has_inclusive_guard(clauses: list[Definition]) -> bool:
    def scan(expr: Expr) -> bool:
        if isinstance(expr, BinOp) and expr.op in ("<=", ">="):
            return True
        return any(scan(c) for c in children(expr))

    return any(c.guard is not None and scan(c.guard) for c in clauses)


def _rule_ranges(tree: SyntaxTree, table: SymbolTable, rule: RubricRule):
    findings = []
    for name in table.order:
        clauses = table.clauses[name]
        if clauses[0].arity < 1 or not _has_inclusive_guard(clauses):
            continue
        zero_sites: list[tuple[int, int]] = []
        var_sites: list[tuple[int, int]] = []
        for d in _all_definitions(tree):
            for expr in _clause_exprs(d):
                _scan_calls(expr, name, zero_sites, var_sites)
        if zero_sites and var_sites:
            findings.append(LintFinding(
                rule.id, "low", sorted(zero_sites + var_sites),
                f"'{name}' is called with both 0 and a variable while its guards use "
                "inclusive comparisons; check that the endpoints are not produced twice"))
    return ("low" if findings else "high"), findings, []


def _scan_calls(expr: Expr, name: str, zero_sites: list, var_sites: list) -> None:
    if isinstance(expr, Call) and expr.name == name and expr.args:
        first = expr.args[0]
        if isinstance(first, Num) and first.value == 0.0:
            zero_sites.append(expr.pos)
        elif isinstance(first, Ident):
            var_sites.append(expr.pos)
    for child in children(expr):
        _scan_calls(child, name, zero_sites, var_sites)
