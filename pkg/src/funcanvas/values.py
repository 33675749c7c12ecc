"""Runtime values for the call-by-need evaluator.

Numbers, booleans and text ride on the host types; pictures and colors come
from the picture module.  Lists are lazy cons cells whose head and tail are
thunks, so they may be infinite; only forced prefixes ever materialize.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from . import picture as pic
from .syntax import Definition

Value = Union[float, bool, str, "pic.Picture", "pic.NamedColor", "pic.GreyColor",
              "pic.TranslucentColor", "pic.RGBA", "LazyList", "TupleValue",
              "Closure", "BuiltinFunction", "ProgramValue"]


class EvalError(Exception):
    """A runtime failure, positioned at the failing expression.

    Kinds: guard-fallthrough, index-out-of-range, division-by-zero,
    fuel-exhausted, non-finite-number, non-whole-count, timeout.
    """

    def __init__(self, kind: str, message: str, pos: tuple[int, int] | None = None,
                 frames: list[tuple[str, tuple[int, int]]] | None = None):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.pos = pos
        self.frames = frames or []

    def render(self) -> str:
        where = f"{self.pos[0]}:{self.pos[1]}: " if self.pos else ""
        lines = [f"{where}{self.kind}: {self.message}"]
        for name, pos in self.frames:
            lines.append(f"  in {name} at {pos[0]}:{pos[1]}")
        return "\n".join(lines)


_UNSET = object()


class Thunk:
    """A suspended computation, forced at most once.

    Re-entrant forcing means the value depends on itself, which can never
    finish; it is reported as exhaustion so students see the loop early.
    """

    __slots__ = ("compute", "value", "busy", "label", "pos")

    def __init__(self, compute: Callable[[], Value], label: str = "",
                 pos: tuple[int, int] | None = None):
        self.compute: Optional[Callable[[], Value]] = compute
        self.value: Value = _UNSET
        self.busy = False
        self.label = label
        self.pos = pos

    @staticmethod
    def of_value(value: Value) -> "Thunk":
        t = Thunk.__new__(Thunk)
        t.compute = None
        t.value = value
        t.busy = False
        t.label = ""
        t.pos = None
        return t

    def force(self) -> Value:
        if self.value is not _UNSET:
            return self.value
        if self.busy:
            name = f"'{self.label}'" if self.label else "this value"
            raise EvalError("fuel-exhausted",
                            f"{name} depends on its own value and can never finish", self.pos)
        self.busy = True
        try:
            self.value = self.compute()  # type: ignore[misc]
        finally:
            self.busy = False
        self.compute = None
        return self.value


@dataclass
class Cons:
    head: Thunk
    tail: Thunk  # forces to a LazyList


class Nil:
    pass


NIL = Nil()
LazyList = Union[Cons, Nil]


@dataclass
class TupleValue:
    items: tuple[Thunk, ...]


@dataclass
class Closure:
    name: str
    clauses: list[Definition]
    env: "Env"

    @property
    def arity(self) -> int:
        return self.clauses[0].arity


@dataclass
class BuiltinFunction:
    name: str
    arity: int


@dataclass
class ProgramValue:
    kind: str  # "drawing" | "animation"
    drawing: Optional[pic.Picture] = None
    animation: Optional[Union[Closure, BuiltinFunction]] = None


@dataclass
class Env:
    """Lexical environment: a frame of thunks chained to its parent."""

    bindings: dict[str, Thunk] = field(default_factory=dict)
    parent: Optional["Env"] = None

    def lookup(self, name: str) -> Optional[Thunk]:
        env: Optional[Env] = self
        while env is not None:
            t = env.bindings.get(name)
            if t is not None:
                return t
            env = env.parent
        return None
