"""The builtin vocabulary: type signatures and runtime behavior in one table.

``grey`` is both the palette color and the grey-level function; the checker
picks the call signature only when the name is applied directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from . import picture as pic
from . import prng
from .typetags import COLOR, NUMBER, PICTURE, PROGRAM, TEXT, TFunction, TList, TTuple, TVar, Type
from .values import (NIL, BuiltinFunction, Closure, Cons, EvalError, LazyList,
                     ProgramValue, Thunk, TupleValue, Value)


@dataclass
class Builtin:
    name: str
    arity: Optional[int]  # None for plain values
    make_type: Callable[[], Type]
    run: Optional[Callable] = None  # (interp, arg thunks, pos) -> Value
    const: Optional[Callable[[], Value]] = None
    call_overload: Optional[Callable[[], TFunction]] = None


def _fn(params: list[Type], result: Type) -> Callable[[], Type]:
    return lambda: TFunction(params, result)


def _force_number(t: Thunk) -> float:
    v = t.force()
    if isinstance(v, bool) or not isinstance(v, float):
        raise TypeError(f"expected a number, got {type(v).__name__}")
    return v


def _force_picture(t: Thunk) -> pic.Picture:
    v = t.force()
    if not isinstance(v, pic.Picture):
        raise TypeError(f"expected a picture, got {type(v).__name__}")
    return v


def _force_color(t: Thunk) -> pic.Color:
    v = t.force()
    if not isinstance(v, (pic.NamedColor, pic.GreyColor, pic.TranslucentColor, pic.RGBA)):
        raise TypeError(f"expected a color, got {type(v).__name__}")
    return v


def _force_text(t: Thunk) -> str:
    v = t.force()
    if not isinstance(v, str):
        raise TypeError(f"expected text, got {type(v).__name__}")
    return v


def _whole(value: float, what: str, pos) -> int:
    if value != int(value):
        raise EvalError("non-whole-count", f"{what} must be a whole number, got {value}", pos)
    return int(value)


def _guard_picture_args(fn, *args, pos=None):
    try:
        return fn(*args)
    except pic.PictureArgumentError as exc:
        raise EvalError("invalid-argument", str(exc), pos) from exc


def _force_points(interp, t: Thunk, pos) -> list[tuple[float, float]]:
    points = []
    lst = t.force()
    while isinstance(lst, Cons):
        interp.tick(pos)
        item = lst.head.force()
        if not isinstance(item, TupleValue) or len(item.items) != 2:
            raise TypeError("polygon points must be pairs")
        x = _force_number(item.items[0])
        y = _force_number(item.items[1])
        points.append((x, y))
        lst = lst.tail.force()
    return points


def _map_lazy(interp, lst: LazyList, f, pos) -> LazyList:
    if not isinstance(lst, Cons):
        return NIL
    head_thunk = lst.head
    tail_thunk = lst.tail

    def mapped_head() -> Value:
        return interp.apply_function(f, [head_thunk], pos)

    def mapped_tail() -> Value:
        return _map_lazy(interp, tail_thunk.force(), f, pos)

    return Cons(Thunk(mapped_head), Thunk(mapped_tail))


def _random_stream(interp, state: int, pos) -> Cons:
    interp.tick(pos)
    nxt = prng.next_state(state)

    def rest() -> Value:
        return _random_stream(interp, nxt, pos)

    return Cons(Thunk.of_value(prng.to_unit(nxt)), Thunk(rest))


# --- runtime implementations ---


def _run_solid_circle(interp, args, pos):
    return _guard_picture_args(pic.solid_circle, _force_number(args[0]), pos=pos)


def _run_circle(interp, args, pos):
    return _guard_picture_args(pic.circle, _force_number(args[0]), pos=pos)


def _run_solid_rectangle(interp, args, pos):
    return _guard_picture_args(pic.solid_rectangle, _force_number(args[0]), _force_number(args[1]), pos=pos)


def _run_rectangle(interp, args, pos):
    return _guard_picture_args(pic.rectangle, _force_number(args[0]), _force_number(args[1]), pos=pos)


def _run_solid_polygon(interp, args, pos):
    return _guard_picture_args(pic.solid_polygon, _force_points(interp, args[0], pos), pos=pos)


def _run_polygon(interp, args, pos):
    return _guard_picture_args(pic.polygon, _force_points(interp, args[0], pos), pos=pos)


def _run_sector(interp, args, pos):
    return _guard_picture_args(
        pic.sector, _force_number(args[0]), _force_number(args[1]), _force_number(args[2]), pos=pos
    )


def _run_lettering(interp, args, pos):
    return pic.lettering(_force_text(args[0]))


def _run_translated(interp, args, pos):
    return _guard_picture_args(
        pic.translated, _force_picture(args[0]), _force_number(args[1]), _force_number(args[2]), pos=pos
    )


def _run_rotated(interp, args, pos):
    return _guard_picture_args(pic.rotated, _force_picture(args[0]), _force_number(args[1]), pos=pos)


def _run_scaled(interp, args, pos):
    return _guard_picture_args(
        pic.scaled, _force_picture(args[0]), _force_number(args[1]), _force_number(args[2]), pos=pos
    )


def _run_dilated(interp, args, pos):
    return _guard_picture_args(pic.dilated, _force_picture(args[0]), _force_number(args[1]), pos=pos)


def _run_colored(interp, args, pos):
    return pic.colored(_force_picture(args[0]), _force_color(args[1]))


def _run_translucent(interp, args, pos):
    return pic.TranslucentColor(_force_color(args[0]))


def _run_grey(interp, args, pos):
    return pic.GreyColor(_force_number(args[0]))


def _run_overlays(interp, args, pos):
    f = args[0].force()
    n = _whole(_force_number(args[1]), "the repetition count of overlays", pos)
    if n < 0:
        raise EvalError("non-whole-count", f"the repetition count of overlays must not be negative, got {n}", pos)
    acc: pic.Picture = pic.EMPTY
    for i in range(n, 0, -1):  # build f(1) & (f(2) & ... & f(n))
        image = interp.apply_function(f, [Thunk.of_value(float(i))], pos)
        if not isinstance(image, pic.Picture):
            raise TypeError("overlays expects a picture-producing function")
        acc = pic.overlay(image, acc) if i != n else image
    return acc


def _run_foreach(interp, args, pos):
    items = args[0].force()
    f = args[1].force()
    return _map_lazy(interp, items, f, pos)


def _run_pictures(interp, args, pos):
    images: list[pic.Picture] = []
    lst = args[0].force()
    while isinstance(lst, Cons):
        interp.tick(pos)
        images.append(_force_picture(lst.head))
        lst = lst.tail.force()
    acc: pic.Picture = pic.EMPTY
    for i, image in enumerate(reversed(images)):
        acc = image if i == 0 else pic.overlay(image, acc)
    return acc


def _run_random_numbers(interp, args, pos):
    seed = _whole(_force_number(args[0]), "the seed of randomNumbers", pos)
    return _random_stream(interp, prng.initial_state(seed), pos)


def _run_drawing_of(interp, args, pos):
    return ProgramValue("drawing", drawing=_force_picture(args[0]))


def _run_animation_of(interp, args, pos):
    f = args[0].force()
    if not isinstance(f, (Closure, BuiltinFunction)):
        raise TypeError("animationOf expects a function of time")
    return ProgramValue("animation", animation=f)


def _color_const(name: str) -> Callable[[], Value]:
    return lambda: pic.NamedColor(name)


def _point_list_type() -> Type:
    return TList(TTuple([NUMBER, NUMBER]))


def _foreach_type() -> Type:
    a, b = TVar(), TVar()
    return TFunction([TList(a), TFunction([a], b)], TList(b))


BUILTINS: dict[str, Builtin] = {}


def _add(b: Builtin) -> None:
    BUILTINS[b.name] = b


_add(Builtin("blank", None, lambda: PICTURE, const=lambda: pic.EMPTY))
_add(Builtin("coordinatePlane", None, lambda: PICTURE, const=lambda: pic.COORDINATE_PLANE))
_add(Builtin("solidCircle", 1, _fn([NUMBER], PICTURE), run=_run_solid_circle))
_add(Builtin("circle", 1, _fn([NUMBER], PICTURE), run=_run_circle))
_add(Builtin("solidRectangle", 2, _fn([NUMBER, NUMBER], PICTURE), run=_run_solid_rectangle))
_add(Builtin("rectangle", 2, _fn([NUMBER, NUMBER], PICTURE), run=_run_rectangle))
_add(Builtin("solidPolygon", 1, lambda: TFunction([_point_list_type()], PICTURE), run=_run_solid_polygon))
_add(Builtin("polygon", 1, lambda: TFunction([_point_list_type()], PICTURE), run=_run_polygon))
_add(Builtin("sector", 3, _fn([NUMBER, NUMBER, NUMBER], PICTURE), run=_run_sector))
_add(Builtin("lettering", 1, _fn([TEXT], PICTURE), run=_run_lettering))
_add(Builtin("translated", 3, _fn([PICTURE, NUMBER, NUMBER], PICTURE), run=_run_translated))
_add(Builtin("rotated", 2, _fn([PICTURE, NUMBER], PICTURE), run=_run_rotated))
_add(Builtin("scaled", 3, _fn([PICTURE, NUMBER, NUMBER], PICTURE), run=_run_scaled))
_add(Builtin("dilated", 2, _fn([PICTURE, NUMBER], PICTURE), run=_run_dilated))
_add(Builtin("colored", 2, _fn([PICTURE, COLOR], PICTURE), run=_run_colored))
_add(Builtin("translucent", 1, _fn([COLOR], COLOR), run=_run_translucent))
_add(Builtin("overlays", 2, lambda: TFunction([TFunction([NUMBER], PICTURE), NUMBER], PICTURE), run=_run_overlays))
_add(Builtin("foreach", 2, _foreach_type, run=_run_foreach))
_add(Builtin("pictures", 1, lambda: TFunction([TList(PICTURE)], PICTURE), run=_run_pictures))
_add(Builtin("randomNumbers", 1, lambda: TFunction([NUMBER], TList(NUMBER)), run=_run_random_numbers))
_add(Builtin("drawingOf", 1, _fn([PICTURE], PROGRAM), run=_run_drawing_of))
_add(Builtin("animationOf", 1, lambda: TFunction([TFunction([NUMBER], PICTURE)], PROGRAM), run=_run_animation_of))

for _name in ("red", "yellow", "green", "blue", "orange", "purple", "brown", "black", "white", "pink"):
    _add(Builtin(_name, None, lambda: COLOR, const=_color_const(_name)))

_add(
    Builtin(
        "grey",
        None,
        lambda: COLOR,
        const=_color_const("grey"),
        run=_run_grey,
        call_overload=lambda: TFunction([NUMBER], COLOR),
    )
)

BUILTIN_NAMES = tuple(BUILTINS)
