"""Monomorphic type tags and unification for the checker.

Polymorphism is confined to list indexing, ``foreach`` and list literals;
those sites instantiate fresh unknowns, everything else is a fixed tag.
"""

from __future__ import annotations

from typing import Optional


class Type:
    pass


class TCon(Type):
    """A ground tag: Number, Bool, Text, Color, Picture or Program."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return f"TCon({self.name})"


NUMBER = TCon("Number")
BOOL = TCon("Bool")
TEXT = TCon("Text")
COLOR = TCon("Color")
PICTURE = TCon("Picture")
PROGRAM = TCon("Program")


class TList(Type):
    __slots__ = ("elem",)

    def __init__(self, elem: Type):
        self.elem = elem


class TTuple(Type):
    __slots__ = ("items",)

    def __init__(self, items: list[Type]):
        self.items = items


class TFunction(Type):
    __slots__ = ("params", "result")

    def __init__(self, params: list[Type], result: Type):
        self.params = params
        self.result = result


class TVar(Type):
    __slots__ = ("id", "instance")

    _counter = 0

    def __init__(self):
        TVar._counter += 1
        self.id = TVar._counter
        self.instance: Optional[Type] = None


def prune(t: Type) -> Type:
    """Follow instantiated variables to the representative type."""
    while isinstance(t, TVar) and t.instance is not None:
        t = t.instance
    return t


class UnifyError(Exception):
    def __init__(self, expected: Type, actual: Type):
        super().__init__(f"expected {display(expected)}, found {display(actual)}")
        self.expected = expected
        self.actual = actual


def unify(expected: Type, actual: Type) -> None:
    a, b = prune(expected), prune(actual)
    if isinstance(a, TVar):
        if a is not b:
            if occurs(a, b):
                raise UnifyError(a, b)
            a.instance = b
        return
    if isinstance(b, TVar):
        unify(b, a)
        return
    if isinstance(a, TCon) and isinstance(b, TCon):
        if a.name != b.name:
            raise UnifyError(a, b)
        return
    if isinstance(a, TList) and isinstance(b, TList):
        unify(a.elem, b.elem)
        return
    if isinstance(a, TTuple) and isinstance(b, TTuple):
        if len(a.items) != len(b.items):
            raise UnifyError(a, b)
        for x, y in zip(a.items, b.items):
            unify(x, y)
        return
    if isinstance(a, TFunction) and isinstance(b, TFunction):
        if len(a.params) != len(b.params):
            raise UnifyError(a, b)
        for x, y in zip(a.params, b.params):
            unify(x, y)
        unify(a.result, b.result)
        return
    raise UnifyError(a, b)


def occurs(var: TVar, t: Type) -> bool:
    t = prune(t)
    if t is var:
        return True
    if isinstance(t, TList):
        return occurs(var, t.elem)
    if isinstance(t, TTuple):
        return any(occurs(var, x) for x in t.items)
    if isinstance(t, TFunction):
        return any(occurs(var, x) for x in t.params) or occurs(var, t.result)
    return False


def display(t: Type) -> str:
    t = prune(t)
    if isinstance(t, TCon):
        return t.name
    if isinstance(t, TList):
        return f"List({display(t.elem)})"
    if isinstance(t, TTuple):
        return "(" + ", ".join(display(x) for x in t.items) + ")"
    if isinstance(t, TFunction):
        return "Function([" + ", ".join(display(x) for x in t.params) + f"], {display(t.result)})"
    return "Unknown"
