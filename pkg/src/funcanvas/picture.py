"""Immutable scene trees: drawing primitives, affine transforms, colors and overlay.

Every primitive is centered at the origin; transform nodes wrap children and
``overlay(top, bottom)`` stacks the first operand above the second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union


@dataclass(frozen=True)
class NamedColor:
    name: str


@dataclass(frozen=True)
class GreyColor:
    level: float  # 0 = black, 1 = white


@dataclass(frozen=True)
class TranslucentColor:
    base: "Color"


@dataclass(frozen=True)
class RGBA:
    r: float
    g: float
    b: float
    a: float


Color = Union[NamedColor, GreyColor, TranslucentColor, RGBA]

# Student palette; values follow the common CSS colors.
NAMED_COLOR_VALUES: dict[str, tuple[float, float, float]] = {
    "red": (1.0, 0.0, 0.0),
    "yellow": (1.0, 1.0, 0.0),
    "green": (0.0, 128 / 255, 0.0),
    "blue": (0.0, 0.0, 1.0),
    "orange": (1.0, 165 / 255, 0.0),
    "purple": (128 / 255, 0.0, 128 / 255),
    "brown": (165 / 255, 42 / 255, 42 / 255),
    "black": (0.0, 0.0, 0.0),
    "white": (1.0, 1.0, 1.0),
    "pink": (1.0, 192 / 255, 203 / 255),
    "grey": (0.5, 0.5, 0.5),
}


def _clamp(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def resolve_color(c: Color) -> RGBA:
    """Reduce any color to clamped RGBA channels."""
    if isinstance(c, RGBA):
        return RGBA(_clamp(c.r), _clamp(c.g), _clamp(c.b), _clamp(c.a))
    if isinstance(c, NamedColor):
        r, g, b = NAMED_COLOR_VALUES[c.name]
        return RGBA(r, g, b, 1.0)
    if isinstance(c, GreyColor):
        v = _clamp(c.level)
        return RGBA(v, v, v, 1.0)
    if isinstance(c, TranslucentColor):
        base = resolve_color(c.base)
        return RGBA(base.r, base.g, base.b, base.a * 0.5)
    raise TypeError(f"not a color: {c!r}")


class Picture:
    pass


@dataclass(frozen=True)
class Empty(Picture):
    pass


EMPTY = Empty()


@dataclass(frozen=True)
class Circle(Picture):
    radius: float
    filled: bool


@dataclass(frozen=True)
class Rectangle(Picture):
    width: float
    height: float
    filled: bool


@dataclass(frozen=True)
class Polygon(Picture):
    points: tuple[tuple[float, float], ...]
    filled: bool


@dataclass(frozen=True)
class Sector(Picture):
    start_deg: float
    end_deg: float
    radius: float


@dataclass(frozen=True)
class Lettering(Picture):
    text: str


@dataclass(frozen=True)
class CoordinatePlane(Picture):
    pass


COORDINATE_PLANE = CoordinatePlane()


@dataclass(frozen=True)
class Translated(Picture):
    child: Picture
    dx: float
    dy: float


@dataclass(frozen=True)
class Rotated(Picture):
    child: Picture
    degrees: float


@dataclass(frozen=True)
class Scaled(Picture):
    child: Picture
    sx: float
    sy: float


@dataclass(frozen=True)
class Dilated(Picture):
    child: Picture
    k: float


@dataclass(frozen=True)
class Colored(Picture):
    child: Picture
    color: Color


@dataclass(frozen=True)
class Overlay(Picture):
    top: Picture
    bottom: Picture


class PictureArgumentError(ValueError):
    """A constructor received a non-finite or out-of-contract argument."""


def _require_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise PictureArgumentError("picture arguments must be finite numbers")


def _require_nonnegative(what: str, v: float) -> None:
    if v < 0:
        raise PictureArgumentError(f"{what} must not be negative")


def solid_circle(radius: float) -> Picture:
    _require_finite(radius)
    _require_nonnegative("circle radius", radius)
    return Circle(radius, True)


def circle(radius: float) -> Picture:
    _require_finite(radius)
    _require_nonnegative("circle radius", radius)
    return Circle(radius, False)


def solid_rectangle(width: float, height: float) -> Picture:
    _require_finite(width, height)
    _require_nonnegative("rectangle width", width)
    _require_nonnegative("rectangle height", height)
    return Rectangle(width, height, True)


def rectangle(width: float, height: float) -> Picture:
    _require_finite(width, height)
    _require_nonnegative("rectangle width", width)
    _require_nonnegative("rectangle height", height)
    return Rectangle(width, height, False)


def _checked_points(points: list[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    if len(points) < 3:
        raise PictureArgumentError("a polygon needs at least 3 points")
    for x, y in points:
        _require_finite(x, y)
    return tuple((float(x), float(y)) for x, y in points)


def solid_polygon(points: list[tuple[float, float]]) -> Picture:
    return Polygon(_checked_points(points), True)


def polygon(points: list[tuple[float, float]]) -> Picture:
    return Polygon(_checked_points(points), False)


def sector(start_deg: float, end_deg: float, radius: float) -> Picture:
    _require_finite(start_deg, end_deg, radius)
    _require_nonnegative("sector radius", radius)
    return Sector(start_deg, end_deg, radius)


def lettering(text: str) -> Picture:
    return Lettering(text)


def translated(p: Picture, dx: float, dy: float) -> Picture:
    _require_finite(dx, dy)
    return Translated(p, dx, dy)


def rotated(p: Picture, degrees: float) -> Picture:
    _require_finite(degrees)
    return Rotated(p, degrees)


def scaled(p: Picture, sx: float, sy: float) -> Picture:
    _require_finite(sx, sy)
    return Scaled(p, sx, sy)


def dilated(p: Picture, k: float) -> Picture:
    _require_finite(k)
    return Scaled(p, k, k)  # dilation is uniform scaling, exactly


def colored(p: Picture, c: Color) -> Picture:
    return Colored(p, c)


def overlay(top: Picture, bottom: Picture) -> Picture:
    return Overlay(top, bottom)


# --- affine geometry ---
# A transform is (a, b, c, d, e, f) mapping (x, y) -> (a*x + b*y + e, c*x + d*y + f).

Affine = tuple[float, float, float, float, float, float]

IDENTITY: Affine = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)

# Exact cos/sin for right angles so quarter turns stay axis-aligned.
_EXACT_TURNS = {0.0: (1.0, 0.0), 90.0: (0.0, 1.0), 180.0: (-1.0, 0.0), 270.0: (0.0, -1.0)}


def rotation_matrix(degrees: float) -> Affine:
    quarter = _EXACT_TURNS.get(degrees % 360.0)
    if quarter is not None:
        cos_t, sin_t = quarter
    else:
        rad = math.radians(degrees)
        cos_t, sin_t = math.cos(rad), math.sin(rad)
    return (cos_t, -sin_t, sin_t, cos_t, 0.0, 0.0)


def compose(outer: Affine, inner: Affine) -> Affine:
    a1, b1, c1, d1, e1, f1 = outer
    a2, b2, c2, d2, e2, f2 = inner
    return (
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
        a1 * e2 + b1 * f2 + e1,
        c1 * e2 + d1 * f2 + f1,
    )


def apply_affine(m: Affine, x: float, y: float) -> tuple[float, float]:
    a, b, c, d, e, f = m
    return (a * x + b * y + e, c * x + d * y + f)


def node_transform(p: Picture) -> Optional[Affine]:
    if isinstance(p, Translated):
        return (1.0, 0.0, 0.0, 1.0, p.dx, p.dy)
    if isinstance(p, Rotated):
        return rotation_matrix(p.degrees)
    if isinstance(p, Scaled):
        return (p.sx, 0.0, 0.0, p.sy, 0.0, 0.0)
    if isinstance(p, Dilated):
        return (p.k, 0.0, 0.0, p.k, 0.0, 0.0)
    return None


Box = tuple[float, float, float, float]


def bounding_box(p: Picture) -> Optional[Box]:
    """Tight axis-aligned box ``(xmin, ymin, xmax, ymax)`` in world coordinates.

    Circles stay exact under any affine transform; boxes of polygons and
    rectangles come from their transformed corners.  Lettering uses a fixed
    approximate footprint of 0.6 units per character and 1 unit of height.
    """
    return _box(p, IDENTITY)


def _box(root: Picture, matrix: Affine) -> Optional[Box]:
    result: Optional[Box] = None
    stack: list[tuple[Picture, Affine]] = [(root, matrix)]
    while stack:
        p, m = stack.pop()
        if isinstance(p, Empty):
            continue
        if isinstance(p, Overlay):
            stack.append((p.top, m))
            stack.append((p.bottom, m))
            continue
        if isinstance(p, Colored):
            stack.append((p.child, m))
            continue
        local = node_transform(p)
        if local is not None:
            stack.append((p.child, compose(m, local)))  # type: ignore[attr-defined]
            continue
        if isinstance(p, Circle):
            result = _union(result, _ellipse_box(m, p.radius))
        elif isinstance(p, Rectangle):
            w, h = p.width / 2.0, p.height / 2.0
            result = _union(result, _points_box(m, [(-w, -h), (w, -h), (w, h), (-w, h)]))
        elif isinstance(p, Polygon):
            result = _union(result, _points_box(m, list(p.points)))
        elif isinstance(p, Sector):
            result = _union(result, _points_box(m, _sector_extremes(p, m)))
        elif isinstance(p, Lettering):
            w = 0.3 * len(p.text)
            result = _union(result, _points_box(m, [(-w, -0.5), (w, -0.5), (w, 0.5), (-w, 0.5)]))
        elif isinstance(p, CoordinatePlane):
            result = _union(result, _points_box(m, [(-10, -10), (10, -10), (10, 10), (-10, 10)]))
        else:
            raise TypeError(f"not a picture node: {p!r}")
    return result


def _ellipse_box(m: Affine, r: float) -> Box:
    a, b, c, d, e, f = m
    ex = r * math.hypot(a, b)
    ey = r * math.hypot(c, d)
    return (e - ex, f - ey, e + ex, f + ey)


def _points_box(m: Affine, points: list[tuple[float, float]]) -> Box:
    xs, ys = [], []
    for x, y in points:
        px, py = apply_affine(m, x, y)
        xs.append(px)
        ys.append(py)
    return (min(xs), min(ys), max(xs), max(ys))


def _sector_extremes(p: Sector, m: Affine) -> list[tuple[float, float]]:
    lo, hi = (p.start_deg, p.end_deg) if p.start_deg <= p.end_deg else (p.end_deg, p.start_deg)
    hi = min(hi, lo + 360.0)
    a, b, c, d, _, _ = m
    candidates = [lo, hi]
    # Angles where the transformed arc is extreme in x or y.
    for base in (math.degrees(math.atan2(b, a)), math.degrees(math.atan2(d, c))):
        for turn in (base, base + 180.0):
            k = math.ceil((lo - turn) / 360.0)
            angle = turn + 360.0 * k
            if lo <= angle <= hi:
                candidates.append(angle)
    points = [(0.0, 0.0)]
    for deg in candidates:
        rad = math.radians(deg)
        points.append((p.radius * math.cos(rad), p.radius * math.sin(rad)))
    return points


def _union(a: Optional[Box], b: Optional[Box]) -> Optional[Box]:
    if a is None:
        return b
    if b is None:
        return a
    return (min(a[0], b[0]), min(a[1], b[1]), max(a[2], b[2]), max(a[3], b[3]))
