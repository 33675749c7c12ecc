"""Name resolution, monomorphic type checking and the dependency graph.

Misspelled names get a did-you-mean suggestion: the closest known name
within Damerau-Levenshtein distance 2, ties broken alphabetically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import typetags as tt
from .builtins import BUILTINS
from .diagnostics import Diagnostic, error, info
from .syntax import (BinOp, Call, Definition, Expr, Ident, Index, ListLit,
                     Neg, Num, SyntaxTree, TextLit, TupleLit)

ENTRY_POINT = "program"
SUGGESTION_DISTANCE = 2


def damerau_levenshtein(a: str, b: str) -> int:
    """Edit distance counting insertions, deletions, substitutions and
    transpositions of adjacent characters."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return la or lb
    prev2: list[int] = []
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        row = [i] + [0] * lb
        for j in range(1, lb + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            row[j] = min(prev[j] + 1, row[j - 1] + 1, prev[j - 1] + cost)
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                row[j] = min(row[j], prev2[j - 2] + 1)
        prev2, prev = prev, row
    return prev[lb]


def suggest(name: str, candidates) -> Optional[str]:
    best: Optional[str] = None
    best_distance = SUGGESTION_DISTANCE + 1
    for c in sorted(candidates):
        d = damerau_levenshtein(name, c)
        if d < best_distance:
            best, best_distance = c, d
    return best


@dataclass
class SymbolInfo:
    name: str
    kind: str  # "builtin" | "user"
    arity: Optional[int]
    pos: Optional[tuple[int, int]] = None
    type: Optional[tt.Type] = None

    @property
    def type_display(self) -> Optional[str]:
        return tt.display(self.type) if self.type is not None else None


@dataclass
class SymbolTable:
    entries: dict[str, SymbolInfo] = field(default_factory=dict)
    clauses: dict[str, list[Definition]] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)
    dependencies: dict[str, list[str]] = field(default_factory=dict)

    @property
    def user_names(self) -> list[str]:
        return list(self.order)


def resolve(tree: SyntaxTree, require_entry: bool = True) -> tuple[SymbolTable, list[Diagnostic]]:
    diags: list[Diagnostic] = []
    table = SymbolTable()
    for d in tree.definitions:
        if d.name not in table.clauses:
            table.clauses[d.name] = []
            table.order.append(d.name)
        table.clauses[d.name].append(d)

    for name in table.order:
        cls = table.clauses[name]
        if len({c.arity for c in cls}) > 1:
            diags.append(error("clause-arity-mismatch",
                               f"the clauses of '{name}' do not all take the same number of parameters",
                               cls[1].pos))
        unguarded = [c for c in cls if c.guard is None]
        if len(unguarded) > 1:
            diags.append(error("duplicate-definition", f"'{name}' is defined more than once", unguarded[1].pos))
        for c in cls:
            seen: set[str] = set()
            for p in c.params:
                if p.name in seen:
                    diags.append(error("duplicate-param", f"parameter '{p.name}' appears twice", p.pos))
                seen.add(p.name)
            local_seen: set[str] = set()
            for loc in c.where_locals:
                if loc.name in local_seen:
                    diags.append(error("duplicate-definition",
                                       f"local '{loc.name}' is defined more than once", loc.pos))
                local_seen.add(loc.name)
        table.entries[name] = SymbolInfo(name, "user", cls[0].arity, cls[0].pos)

    for bname, b in BUILTINS.items():
        if bname not in table.entries:
            table.entries[bname] = SymbolInfo(bname, "builtin", b.arity)

    if require_entry:
        if ENTRY_POINT not in table.clauses:
            diags.append(error("missing-entry-point",
                               "there is no 'program' definition to start from", (1, 1)))
        elif table.clauses[ENTRY_POINT][0].params:
            diags.append(error("invalid-entry-point", "'program' must not take parameters",
                               table.clauses[ENTRY_POINT][0].pos))

    user_names = set(table.clauses)
    for name in table.order:
        deps: list[str] = []
        for clause in table.clauses[name]:
            _check_names(clause, set(), user_names, deps, diags)
        table.dependencies[name] = deps
    return table, diags


def _check_names(defn: Definition, inherited: set[str], user_names: set[str],
                 deps: list[str], diags: list[Diagnostic]) -> None:
    local = inherited | {p.name for p in defn.params} | {l.name for l in defn.where_locals}
    exprs = [defn.body] if defn.guard is None else [defn.guard, defn.body]
    for expr in exprs:
        _scan_expr(expr, local, user_names, deps, diags)
    for loc in defn.where_locals:
        _check_names(loc, local, user_names, deps, diags)


def _scan_expr(expr: Expr, local: set[str], user_names: set[str],
               deps: list[str], diags: list[Diagnostic]) -> None:
    stack = [expr]
    while stack:
        node = stack.pop()
        name = None
        if isinstance(node, (Ident, Call)):
            name = node.name
        if name is not None:
            if name in local:
                pass
            elif name in user_names or name in BUILTINS:
                if name not in deps:
                    deps.append(name)
            else:
                candidates = local | user_names | set(BUILTINS)
                diags.append(error("unknown-identifier", f"'{name}' is not defined",
                                   node.pos, suggestion=suggest(name, candidates)))
        if isinstance(node, Call):
            stack.extend(reversed(node.args))
        elif isinstance(node, Neg):
            stack.append(node.operand)
        elif isinstance(node, BinOp):
            stack.extend((node.right, node.left))
        elif isinstance(node, (ListLit, TupleLit)):
            stack.extend(reversed(node.items))
        elif isinstance(node, Index):
            stack.extend((node.index, node.seq))


def dependency_graph(table: SymbolTable) -> tuple[list[tuple[str, str]], list[Diagnostic]]:
    """Directed edges definer -> used name; recursion is reported as info."""
    edges = [(name, dep) for name in table.order for dep in table.dependencies[name]]
    diags: list[Diagnostic] = []
    user = set(table.clauses)
    for scc in _sccs(table.order, {n: [d for d in table.dependencies[n] if d in user] for n in table.order}):
        recursive = len(scc) > 1 or scc[0] in table.dependencies.get(scc[0], [])
        if recursive:
            names = ", ".join(sorted(scc))
            pos = table.entries[scc[0]].pos or (1, 1)
            diags.append(info("recursive-definition", f"recursive definition of {names}", pos))
    return edges, diags


def _sccs(order: list[str], deps: dict[str, list[str]]) -> list[list[str]]:
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = [0]

    def strongconnect(v: str) -> None:
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in deps.get(v, []):
            if w not in index:
                strongconnect(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.append(w)
                if w == v:
                    break
            out.append(comp)

    for v in order:
        if v not in index:
            strongconnect(v)
    return out


class _CheckError(Exception):
    def __init__(self, diag: Diagnostic):
        super().__init__(diag.message)
        self.diag = diag


class _Checker:
    def __init__(self, table: SymbolTable):
        self.table = table
        self.types: dict[str, tt.Type] = {}

    def run(self, require_entry: bool = True) -> list[Diagnostic]:
        diags: list[Diagnostic] = []
        for name in self.table.order:
            self.types[name] = self._assumed(self.table.clauses[name][0])
        for name in self.table.order:
            assumed = self.types[name]
            for clause in self.table.clauses[name]:
                try:
                    self._check_clause(clause, assumed, {})
                except _CheckError as exc:
                    diags.append(exc.diag)
        if require_entry and ENTRY_POINT in self.types and not diags:
            try:
                self._unify(tt.PROGRAM, self.types[ENTRY_POINT],
                            self.table.clauses[ENTRY_POINT][0].pos,
                            code="invalid-entry-point",
                            note="'program' must be built with drawingOf or animationOf")
            except _CheckError as exc:
                diags.append(exc.diag)
        for name in self.table.order:
            self.table.entries[name].type = self.types[name]
        return diags

    def _assumed(self, clause: Definition) -> tt.Type:
        if clause.params:
            return tt.TFunction([tt.TVar() for _ in clause.params], tt.TVar())
        return tt.TVar()

    def _check_clause(self, clause: Definition, assumed: tt.Type, outer_env: dict[str, tt.Type]) -> None:
        env = dict(outer_env)
        result: tt.Type = assumed
        if clause.params:
            fn = tt.prune(assumed)
            assert isinstance(fn, tt.TFunction)
            for p, ptype in zip(clause.params, fn.params):
                env[p.name] = ptype
            result = fn.result
        for loc in clause.where_locals:
            env[loc.name] = self._assumed(loc)
        for loc in clause.where_locals:
            self._check_clause(loc, env[loc.name], env)
        if clause.guard is not None:
            self._unify(tt.BOOL, self._infer(clause.guard, env), clause.guard.pos,
                        note="a guard must be a truth value")
        self._unify(result, self._infer(clause.body, env), clause.body.pos,
                    note=f"in the body of '{clause.name}'")

    def _unify(self, expected: tt.Type, actual: tt.Type, pos: tuple[int, int],
               code: str = "type-mismatch", note: str = "") -> None:
        try:
            tt.unify(expected, actual)
        except tt.UnifyError as exc:
            message = f"expected {tt.display(exc.expected)}, found {tt.display(exc.actual)}"
            if note:
                message += f" ({note})"
            raise _CheckError(error(code, message, pos)) from exc

    def _lookup(self, name: str, env: dict[str, tt.Type]) -> tt.Type:
        if name in env:
            return env[name]
        if name in self.types:
            return self.types[name]
        return BUILTINS[name].make_type()

    def _infer(self, expr: Expr, env: dict[str, tt.Type]) -> tt.Type:
        t = self._infer_inner(expr, env)
        expr.ty = t
        return t

    def _infer_inner(self, expr: Expr, env: dict[str, tt.Type]) -> tt.Type:
        if isinstance(expr, Num):
            return tt.NUMBER
        if isinstance(expr, TextLit):
            return tt.TEXT
        if isinstance(expr, Ident):
            return self._lookup(expr.name, env)
        if isinstance(expr, Call):
            return self._infer_call(expr, env)
        if isinstance(expr, Neg):
            self._unify(tt.NUMBER, self._infer(expr.operand, env), expr.operand.pos,
                        note="negation applies to numbers")
            return tt.NUMBER
        if isinstance(expr, BinOp):
            return self._infer_binop(expr, env)
        if isinstance(expr, ListLit):
            elem: tt.Type = tt.TVar()
            for item in expr.items:
                self._unify(elem, self._infer(item, env), item.pos,
                            code="heterogeneous-list",
                            note="all elements of a list must have the same type")
            return tt.TList(elem)
        if isinstance(expr, TupleLit):
            return tt.TTuple([self._infer(item, env) for item in expr.items])
        if isinstance(expr, Index):
            elem = tt.TVar()
            self._unify(tt.TList(elem), self._infer(expr.seq, env), expr.seq.pos,
                        note="'#' picks from a list")
            self._unify(tt.NUMBER, self._infer(expr.index, env), expr.index.pos,
                        note="a list position is a number")
            return elem
        raise TypeError(f"cannot infer {type(expr).__name__}")

    def _infer_call(self, expr: Call, env: dict[str, tt.Type]) -> tt.Type:
        name = expr.name
        if name in env:
            callee = env[name]
        elif name in self.types:
            callee = self.types[name]
        else:
            b = BUILTINS[name]
            callee = b.call_overload() if b.call_overload is not None else b.make_type()
        callee = tt.prune(callee)
        if isinstance(callee, tt.TVar):
            fn = tt.TFunction([tt.TVar() for _ in expr.args], tt.TVar())
            tt.unify(callee, fn)
            callee = fn
        if not isinstance(callee, tt.TFunction):
            raise _CheckError(error("not-a-function",
                                    f"'{name}' is a {tt.display(callee)}, not a function", expr.pos))
        if len(callee.params) != len(expr.args):
            raise _CheckError(error("arity-mismatch",
                                    f"'{name}' takes {len(callee.params)} argument(s), "
                                    f"but {len(expr.args)} given", expr.pos))
        for param_type, arg in zip(callee.params, expr.args):
            self._unify(param_type, self._infer(arg, env), arg.pos,
                        note=f"in this argument of '{name}'")
        return callee.result

    def _infer_binop(self, expr: BinOp, env: dict[str, tt.Type]) -> tt.Type:
        op = expr.op
        if op == "&":
            for side in (expr.left, expr.right):
                self._unify(tt.PICTURE, self._infer(side, env), side.pos,
                            note="'&' overlays two pictures")
            return tt.PICTURE
        if op in ("+", "-", "*", "/"):
            for side in (expr.left, expr.right):
                self._unify(tt.NUMBER, self._infer(side, env), side.pos,
                            note=f"'{op}' works on numbers")
            return tt.NUMBER
        if op in ("<", "<=", ">", ">="):
            for side in (expr.left, expr.right):
                self._unify(tt.NUMBER, self._infer(side, env), side.pos,
                            note=f"'{op}' compares numbers")
            return tt.BOOL
        if op in ("==", "/="):
            left = self._infer(expr.left, env)
            self._unify(left, self._infer(expr.right, env), expr.right.pos,
                        note=f"both sides of '{op}' must have the same type")
            resolved = tt.prune(left)
            if isinstance(resolved, tt.TVar):
                tt.unify(resolved, tt.NUMBER)  # default unconstrained comparisons to numbers
            elif not (isinstance(resolved, tt.TCon) and resolved.name in ("Number", "Text", "Bool")):
                raise _CheckError(error("type-mismatch",
                                        f"'{op}' cannot compare values of type {tt.display(resolved)}",
                                        expr.pos))
            return tt.BOOL
        raise TypeError(f"unknown operator {op!r}")


def check_types(tree: SyntaxTree, table: SymbolTable, require_entry: bool = True) -> list[Diagnostic]:
    """Annotate every expression with a type tag; report mismatches."""
    return _Checker(table).run(require_entry)
