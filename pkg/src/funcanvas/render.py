"""Deterministic SVG rendering of pictures and animations.

The camera is fixed: world coordinates span [-10, 10] on both axes, the
y axis points up, and equal pictures always produce byte-identical
documents.  Transforms are flattened into each primitive, so composing
translations or rotations changes nothing in the output.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

from . import picture as pic
from .numfmt import format_number as fmt
from .values import EvalError, ProgramValue, Thunk

TOOL_VERSION = "0.1.0"


@dataclass(frozen=True)
class Viewport:
    width: int = 500
    height: int = 500
    half: float = 10.0  # world range is [-half, half] in x and y

    def world_to_pixel(self) -> pic.Affine:
        # Uniform scale so the world square never distorts in a non-square window.
        s = min(self.width, self.height) / (2.0 * self.half)
        return (s, 0.0, 0.0, -s, self.width / 2.0, self.height / 2.0)


DEFAULT_VIEWPORT = Viewport()


@dataclass
class Drawing:
    picture: pic.Picture


@dataclass
class Animation:
    function: object  # Closure or BuiltinFunction of one number
    interp: object  # evaluator used to apply it

    def frame_at(self, t: float) -> pic.Picture:
        image = self.interp.apply_function(self.function, [Thunk.of_value(float(t))], (1, 1))
        if not isinstance(image, pic.Picture):
            raise TypeError("an animation must produce a picture")
        return image


def classify_program(value, interp=None):
    """Sort an evaluated 'program' value into a drawing or an animation."""
    if isinstance(value, ProgramValue):
        if value.kind == "drawing":
            return Drawing(value.drawing)
        if value.kind == "animation":
            return Animation(value.animation, interp)
    raise TypeError("'program' did not evaluate to drawingOf(...) or animationOf(...)")


# --- SVG emission ---

_LIGHT_GREY = "#dddddd"
_GRID_WIDTH = 0.02
_OUTLINE_WIDTH = 0.1
_SECTOR_STEP_DEG = 2.5


def render_svg(p: pic.Picture, viewport: Viewport = DEFAULT_VIEWPORT,
               source_hash: Optional[str] = None) -> str:
    out: list[str] = []
    _emit(p, viewport.world_to_pixel(), None, out)
    header = f"<!-- funcanvas {TOOL_VERSION}"
    if source_hash:
        header += f" source:{source_hash}"
    header += " -->"
    doc = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{viewport.width}" '
        f'height="{viewport.height}" viewBox="0 0 {viewport.width} {viewport.height}">',
        header,
        *out,
        "</svg>",
        "",
    ]
    return "\n".join(doc)


def _emit(root: pic.Picture, camera: pic.Affine, start_color: Optional[pic.RGBA], out: list[str]) -> None:
    # Transforms accumulate in world space and meet the camera only at each
    # primitive, so composed translations stay bit-identical to single ones.
    # Worklist instead of recursion: overlay chains can be arbitrarily deep.
    stack: list[tuple[pic.Picture, pic.Affine, Optional[pic.RGBA]]] = [(root, pic.IDENTITY, start_color)]
    while stack:
        p, m, color = stack.pop()
        if isinstance(p, pic.Empty):
            continue
        if isinstance(p, pic.Overlay):
            stack.append((p.top, m, color))  # popped second: paints over the bottom
            stack.append((p.bottom, m, color))
            continue
        if isinstance(p, pic.Colored):
            stack.append((p.child, m, pic.resolve_color(p.color)))
            continue
        local = pic.node_transform(p)
        if local is not None:
            stack.append((p.child, pic.compose(m, local), color))  # type: ignore[attr-defined]
            continue
        pm = pic.compose(camera, m)
        if isinstance(p, pic.Circle):
            _emit_circle(p, pm, color, out)
        elif isinstance(p, pic.Rectangle):
            _emit_rectangle(p, pm, color, out)
        elif isinstance(p, pic.Polygon):
            _emit_points(list(p.points), p.filled, pm, color, out)
        elif isinstance(p, pic.Sector):
            _emit_points(_sector_points(p), True, pm, color, out)
        elif isinstance(p, pic.Lettering):
            _emit_text(p, pm, color, out)
        elif isinstance(p, pic.CoordinatePlane):
            _emit_plane(pm, out)
        else:
            raise TypeError(f"cannot render {type(p).__name__}")


def _uniform_scale(m: pic.Affine) -> float:
    a, b, c, d, _, _ = m
    return math.sqrt(abs(a * d - b * c))


def _paint(color: Optional[pic.RGBA], filled: bool, stroke_width: float) -> str:
    rgba = color if color is not None else pic.RGBA(0.0, 0.0, 0.0, 1.0)
    value = f"#{round(rgba.r * 255):02x}{round(rgba.g * 255):02x}{round(rgba.b * 255):02x}"
    if filled:
        attrs = f'fill="{value}"'
        if rgba.a < 1.0:
            attrs += f' fill-opacity="{fmt(rgba.a)}"'
        return attrs
    attrs = f'fill="none" stroke="{value}" stroke-width="{fmt(stroke_width)}"'
    if rgba.a < 1.0:
        attrs += f' stroke-opacity="{fmt(rgba.a)}"'
    return attrs


def _svg_matrix(m: pic.Affine) -> str:
    a, b, c, d, e, f = m
    return f"matrix({fmt(a)} {fmt(c)} {fmt(b)} {fmt(d)} {fmt(e)} {fmt(f)})"


def _emit_circle(p: pic.Circle, m: pic.Affine, color: Optional[pic.RGBA], out: list[str]) -> None:
    a, b, c, d, e, f = m
    s11 = a * a + b * b
    s22 = c * c + d * d
    s12 = a * c + b * d
    scale = _uniform_scale(m)
    if abs(s12) <= 1e-12 * max(s11, s22, 1e-300):
        rx = p.radius * math.sqrt(s11)
        ry = p.radius * math.sqrt(s22)
        paint = _paint(color, p.filled, _OUTLINE_WIDTH * scale)
        if rx == ry:
            out.append(f'<circle cx="{fmt(e)}" cy="{fmt(f)}" r="{fmt(rx)}" {paint}/>')
        else:
            out.append(f'<ellipse cx="{fmt(e)}" cy="{fmt(f)}" rx="{fmt(rx)}" ry="{fmt(ry)}" {paint}/>')
        return
    # A sheared circle has tilted axes; keep it exact inside a transform group.
    paint = _paint(color, p.filled, _OUTLINE_WIDTH)
    out.append(f'<g transform="{_svg_matrix(m)}">')
    out.append(f'<circle cx="0" cy="0" r="{fmt(p.radius)}" {paint}/>')
    out.append("</g>")


def _emit_rectangle(p: pic.Rectangle, m: pic.Affine, color: Optional[pic.RGBA], out: list[str]) -> None:
    a, b, c, d, _, _ = m
    w, h = p.width / 2.0, p.height / 2.0
    corners = [(-w, -h), (w, -h), (w, h), (-w, h)]
    if (b == 0.0 and c == 0.0) or (a == 0.0 and d == 0.0):
        points = [pic.apply_affine(m, x, y) for x, y in corners]
        xs = [q[0] for q in points]
        ys = [q[1] for q in points]
        paint = _paint(color, p.filled, _OUTLINE_WIDTH * _uniform_scale(m))
        out.append(
            f'<rect x="{fmt(min(xs))}" y="{fmt(min(ys))}" width="{fmt(max(xs) - min(xs))}" '
            f'height="{fmt(max(ys) - min(ys))}" {paint}/>'
        )
        return
    _emit_points(corners, p.filled, m, color, out)


def _emit_points(points: list[tuple[float, float]], filled: bool, m: pic.Affine,
                 color: Optional[pic.RGBA], out: list[str]) -> None:
    mapped = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in (pic.apply_affine(m, px, py) for px, py in points))
    paint = _paint(color, filled, _OUTLINE_WIDTH * _uniform_scale(m))
    out.append(f'<polygon points="{mapped}" {paint}/>')


def _sector_points(p: pic.Sector) -> list[tuple[float, float]]:
    lo, hi = (p.start_deg, p.end_deg) if p.start_deg <= p.end_deg else (p.end_deg, p.start_deg)
    hi = min(hi, lo + 360.0)
    sweep = hi - lo
    steps = max(2, math.ceil(sweep / _SECTOR_STEP_DEG))
    points = [(0.0, 0.0)]
    for i in range(steps + 1):
        rad = math.radians(lo + sweep * i / steps)
        points.append((p.radius * math.cos(rad), p.radius * math.sin(rad)))
    return points


_XML_ESCAPES = {"&": "&amp;", "<": "&lt;", ">": "&gt;"}


def _escape_text(text: str) -> str:
    return "".join(_XML_ESCAPES.get(ch, ch) for ch in text)


def _emit_text(p: pic.Lettering, m: pic.Affine, color: Optional[pic.RGBA], out: list[str]) -> None:
    rgba = color if color is not None else pic.RGBA(0.0, 0.0, 0.0, 1.0)
    fill = f"#{round(rgba.r * 255):02x}{round(rgba.g * 255):02x}{round(rgba.b * 255):02x}"
    opacity = f' fill-opacity="{fmt(rgba.a)}"' if rgba.a < 1.0 else ""
    upright = pic.compose(m, (1.0, 0.0, 0.0, -1.0, 0.0, 0.0))  # undo the y flip for glyphs
    out.append(f'<g transform="{_svg_matrix(upright)}">')
    out.append(
        f'<text x="0" y="0" font-family="sans-serif" font-size="1" text-anchor="middle" '
        f'dominant-baseline="central" fill="{fill}"{opacity}>{_escape_text(p.text)}</text>'
    )
    out.append("</g>")


def _emit_plane(m: pic.Affine, out: list[str]) -> None:
    scale = _uniform_scale(m)
    width = fmt(_GRID_WIDTH * scale)
    segments: list[tuple[float, float, float, float, str]] = []
    for x in range(-10, 11):
        if x != 0:
            segments.append((float(x), -10.0, float(x), 10.0, _LIGHT_GREY))
    for y in range(-10, 11):
        if y != 0:
            segments.append((-10.0, float(y), 10.0, float(y), _LIGHT_GREY))
    segments.append((0.0, -10.0, 0.0, 10.0, "#000000"))
    segments.append((-10.0, 0.0, 10.0, 0.0, "#000000"))
    for x in range(-10, 11):
        if x != 0:
            segments.append((float(x), -0.1, float(x), 0.1, "#000000"))
    for y in range(-10, 11):
        if y != 0:
            segments.append((-0.1, float(y), 0.1, float(y), "#000000"))
    for x1, y1, x2, y2, stroke in segments:
        px1, py1 = pic.apply_affine(m, x1, y1)
        px2, py2 = pic.apply_affine(m, x2, y2)
        out.append(
            f'<line x1="{fmt(px1)}" y1="{fmt(py1)}" x2="{fmt(px2)}" y2="{fmt(py2)}" '
            f'stroke="{stroke}" stroke-width="{width}"/>'
        )


def render_frames(animation: Animation, fps: float, duration: float,
                  viewport: Viewport = DEFAULT_VIEWPORT,
                  source_hash: Optional[str] = None,
                  deadline: Optional[float] = None) -> list[str]:
    """Render frames at t = 0, 1/fps, 2/fps, ... strictly below the duration."""
    if fps <= 0:
        raise ValueError("fps must be positive")
    if duration < 0:
        raise ValueError("duration must not be negative")
    frames: list[str] = []
    i = 0
    while i / fps < duration:
        t = i / fps
        try:
            image = animation.frame_at(t)
        except EvalError as exc:
            raise EvalError(exc.kind, f"{exc.message} (at animation time {fmt(t)}s)",
                            exc.pos, exc.frames) from exc
        frames.append(render_svg(image, viewport, source_hash))
        if deadline is not None and time.monotonic() > deadline:
            raise EvalError("timeout", "rendering the animation took too long", (1, 1))
        i += 1
    return frames
