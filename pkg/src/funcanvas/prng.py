"""Deterministic random stream.

The generator is splitmix64: the seed is truncated to a 64-bit unsigned
integer and passed through the splitmix64 finalizer once; every draw then
adds the golden-gamma constant and finalizes again.  Draws surface as the
top 53 bits scaled into [0, 1), so the stream is bit-identical everywhere.
"""

from __future__ import annotations

from typing import Iterator

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """The splitmix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def initial_state(seed: int) -> int:
    return mix64(seed & MASK64)


def next_state(state: int) -> int:
    return mix64((state + GOLDEN_GAMMA) & MASK64)


def to_unit(state: int) -> float:
    return (state >> 11) * (2.0 ** -53)


def unit_stream(seed: int) -> Iterator[float]:
    """Infinite stream of doubles in [0, 1) for a whole-number seed."""
    state = initial_state(seed)
    while True:
        state = next_state(state)
        yield to_unit(state)
