"""Shortest round-trip decimal formatting, shared by the printer and the renderer."""

from __future__ import annotations


def format_number(x: float) -> str:
    """Format a finite double with the shortest text that parses back exactly.

    Whole values print without a fractional part and negative zero is
    normalized to ``0`` so output is stable across platforms.
    """
    if x == 0.0:
        return "0"
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)
