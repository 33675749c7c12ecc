"""Call-by-need evaluation of type-checked programs.

Every definition becomes a memoized thunk; function arguments are bound
lazily and guards pick the first matching clause in source order.  A fuel
budget of closure applications (plus lazy-list steps) bounds runaway
recursion, and an optional wall-clock deadline covers everything else.
"""

from __future__ import annotations

import math
import sys
import time
from typing import Optional, Union

from . import picture as pic
from .analysis import ENTRY_POINT, SymbolTable
from .builtins import BUILTINS
from .syntax import (BinOp, Call, Definition, Expr, Ident, Index, ListLit,
                     Neg, Num, TextLit, TupleLit)
from .values import (NIL, BuiltinFunction, Closure, Cons, Env, EvalError,
                     ProgramValue, Thunk, TupleValue, Value)

DEFAULT_FUEL = 1_000_000
MAX_CALL_DEPTH = 1_000

# Each language-level call spends a handful of host stack frames; keep the
# host limit above MAX_CALL_DEPTH so our own guard fires first, but low
# enough that a RecursionError still surfaces before the C stack runs out.
_HOST_RECURSION_LIMIT = 12_000

Applicable = Union[Closure, BuiltinFunction]


class Interpreter:
    def __init__(self, table: SymbolTable, fuel: int = DEFAULT_FUEL,
                 deadline: Optional[float] = None, max_depth: int = MAX_CALL_DEPTH):
        sys.setrecursionlimit(max(sys.getrecursionlimit(), _HOST_RECURSION_LIMIT))
        self.fuel = fuel
        self.fuel_used = 0
        self.deadline = deadline
        self.max_depth = max_depth
        self.frames: list[tuple[str, tuple[int, int]]] = []
        self.globals = Env()
        for name in table.order:
            clauses = table.clauses[name]
            if clauses[0].params:
                self.globals.bindings[name] = Thunk.of_value(Closure(name, clauses, self.globals))
            else:
                self.globals.bindings[name] = self._definition_thunk(name, clauses, self.globals)

    def _definition_thunk(self, name: str, clauses: list[Definition], env: Env) -> Thunk:
        return Thunk(lambda: self._eval_clauses(name, clauses, env, clauses[0].pos),
                     label=name, pos=clauses[0].pos)

    # -- entry points --

    def evaluate(self) -> Value:
        """Force the 'program' definition."""
        return self.evaluate_name(ENTRY_POINT)

    def evaluate_name(self, name: str) -> Value:
        thunk = self.globals.lookup(name)
        if thunk is None:
            raise KeyError(name)
        return thunk.force()

    def call(self, name: str, args: list[Value]) -> Value:
        """Apply a defined function to already-computed values (test hook)."""
        f = self.evaluate_name(name)
        if not isinstance(f, (Closure, BuiltinFunction)):
            raise TypeError(f"'{name}' is not a function")
        pos = f.clauses[0].pos if isinstance(f, Closure) else (1, 1)
        return self.apply_function(f, [Thunk.of_value(a) for a in args], pos)

    # -- bookkeeping --

    def tick(self, pos: tuple[int, int]) -> None:
        self.fuel_used += 1
        if self.fuel_used > self.fuel:
            raise self._err("fuel-exhausted",
                            f"the evaluation budget of {self.fuel} steps is used up; "
                            "is there unbounded recursion?", pos)
        if self.deadline is not None and (self.fuel_used & 0xFF) == 0 and time.monotonic() > self.deadline:
            raise self._err("timeout", "evaluation took too long and was stopped", pos)

    def _err(self, kind: str, message: str, pos: tuple[int, int]) -> EvalError:
        return EvalError(kind, message, pos, list(self.frames[-20:]))

    # -- application --

    def apply_function(self, f: Applicable, args: list[Thunk], pos: tuple[int, int]) -> Value:
        if isinstance(f, BuiltinFunction):
            return BUILTINS[f.name].run(self, args, pos)
        if not isinstance(f, Closure):
            raise TypeError(f"cannot apply {type(f).__name__}")
        self.tick(pos)
        if len(self.frames) >= self.max_depth:
            raise self._err("fuel-exhausted",
                            f"calls are nested more than {self.max_depth} levels deep; "
                            "is there unbounded recursion?", pos)
        self.frames.append((f.name, pos))
        try:
            while True:
                clause, env = self._select_clause(f, args, pos)
                body = clause.body
                # Direct calls in tail position loop in place of recursing.
                if isinstance(body, Call):
                    target = self._callee(body.name, env)
                    if isinstance(target, Closure):
                        args = [self._delay(a, env) for a in body.args]
                        f, pos = target, body.pos
                        self.frames[-1] = (f.name, pos)
                        self.tick(pos)
                        continue
                return self._eval(body, env)
        finally:
            self.frames.pop()

    def _select_clause(self, f: Closure, args: list[Thunk], pos: tuple[int, int]) -> tuple[Definition, Env]:
        for clause in f.clauses:
            env = Env(dict(zip((p.name for p in clause.params), args)), f.env)
            self._bind_locals(clause, env)
            if clause.guard is None:
                return clause, env
            if self._eval(clause.guard, env) is True:
                return clause, env
        raise self._err("guard-fallthrough",
                        f"no case of '{f.name}' accepts these arguments", pos)

    def _eval_clauses(self, name: str, clauses: list[Definition], env: Env, pos: tuple[int, int]) -> Value:
        for clause in clauses:
            clause_env = Env({}, env)
            self._bind_locals(clause, clause_env)
            if clause.guard is None or self._eval(clause.guard, clause_env) is True:
                return self._eval(clause.body, clause_env)
        raise self._err("guard-fallthrough", f"no case of '{name}' applies", pos)

    def _bind_locals(self, clause: Definition, env: Env) -> None:
        for loc in clause.where_locals:
            if loc.params:
                env.bindings[loc.name] = Thunk.of_value(Closure(loc.name, [loc], env))
            else:
                env.bindings[loc.name] = self._definition_thunk(loc.name, [loc], env)

    def _callee(self, name: str, env: Env) -> Applicable:
        thunk = env.lookup(name)
        if thunk is not None:
            v = thunk.force()
            if not isinstance(v, (Closure, BuiltinFunction)):
                raise TypeError(f"'{name}' is not a function")
            return v
        return BuiltinFunction(name, BUILTINS[name].arity or 0)

    def _delay(self, expr: Expr, env: Env) -> Thunk:
        if isinstance(expr, Num):
            return Thunk.of_value(expr.value)
        if isinstance(expr, TextLit):
            return Thunk.of_value(expr.value)
        return Thunk(lambda: self._eval(expr, env))

    # -- expression evaluation --

    def _eval(self, expr: Expr, env: Env) -> Value:
        if isinstance(expr, Num):
            return expr.value
        if isinstance(expr, TextLit):
            return expr.value
        if isinstance(expr, Ident):
            return self._eval_ident(expr, env)
        if isinstance(expr, Call):
            f = self._callee(expr.name, env)
            return self.apply_function(f, [self._delay(a, env) for a in expr.args], expr.pos)
        if isinstance(expr, Neg):
            return -self._number(expr.operand, env)
        if isinstance(expr, BinOp):
            return self._eval_binop(expr, env)
        if isinstance(expr, ListLit):
            lst: Value = NIL
            for item in reversed(expr.items):
                lst = Cons(self._delay(item, env), Thunk.of_value(lst))
            return lst
        if isinstance(expr, TupleLit):
            return TupleValue(tuple(self._delay(item, env) for item in expr.items))
        if isinstance(expr, Index):
            return self._eval_index(expr, env)
        raise TypeError(f"cannot evaluate {type(expr).__name__}")

    def _eval_ident(self, expr: Ident, env: Env) -> Value:
        thunk = env.lookup(expr.name)
        if thunk is not None:
            return thunk.force()
        b = BUILTINS[expr.name]
        if b.const is not None:
            return b.const()
        return BuiltinFunction(expr.name, b.arity or 0)

    def _number(self, expr: Expr, env: Env) -> float:
        v = self._eval(expr, env)
        if isinstance(v, bool) or not isinstance(v, float):
            raise TypeError(f"expected a number at {expr.pos}")
        return v

    def _eval_binop(self, expr: BinOp, env: Env) -> Value:
        op = expr.op
        if op == "&":
            top = self._eval(expr.left, env)
            bottom = self._eval(expr.right, env)
            if not isinstance(top, pic.Picture) or not isinstance(bottom, pic.Picture):
                raise TypeError("'&' overlays pictures")
            return pic.overlay(top, bottom)
        if op in ("==", "/="):
            left = self._force_shallow(expr.left, env)
            right = self._force_shallow(expr.right, env)
            return (left == right) if op == "==" else (left != right)
        left_n = self._number(expr.left, env)
        right_n = self._number(expr.right, env)
        if op == "+":
            result = left_n + right_n
        elif op == "-":
            result = left_n - right_n
        elif op == "*":
            result = left_n * right_n
        elif op == "/":
            if right_n == 0.0:
                raise self._err("division-by-zero", "cannot divide by zero", expr.pos)
            result = left_n / right_n
        elif op == "<":
            return left_n < right_n
        elif op == "<=":
            return left_n <= right_n
        elif op == ">":
            return left_n > right_n
        elif op == ">=":
            return left_n >= right_n
        else:
            raise TypeError(f"unknown operator {op!r}")
        if not math.isfinite(result):
            raise self._err("non-finite-number", "the result is too large to represent", expr.pos)
        return result

    def _force_shallow(self, expr: Expr, env: Env) -> Value:
        v = self._eval(expr, env)
        if not isinstance(v, (float, bool, str)):
            raise TypeError("'==' compares numbers, text or truth values")
        return v

    def _eval_index(self, expr: Index, env: Env) -> Value:
        lst = self._eval(expr.seq, env)
        n_value = self._number(expr.index, env)
        if n_value != int(n_value):
            raise self._err("non-whole-count", f"a list position must be a whole number, got {n_value}", expr.pos)
        n = int(n_value)
        if n < 1:
            raise self._err("index-out-of-range", f"list positions start at 1, got {n}", expr.pos)
        seen = 0
        while isinstance(lst, Cons):
            seen += 1
            if seen == n:
                return lst.head.force()
            self.tick(expr.pos)
            lst = lst.tail.force()
        raise self._err("index-out-of-range",
                        f"the list has only {seen} element(s), but position {n} was asked for", expr.pos)


def evaluate(table: SymbolTable, fuel: int = DEFAULT_FUEL,
             deadline: Optional[float] = None) -> Value:
    """Evaluate the 'program' definition of a checked program."""
    return Interpreter(table, fuel=fuel, deadline=deadline).evaluate()
