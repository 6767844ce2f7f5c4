"""Pure-Python implementation of the hot crossover kernel.

Imported by ecscalar.kernels when the compiled extension is unavailable.
Must stay draw-for-draw identical to ecscalar._speedups: one SplitMix64
output is consumed per bit position, in MSB-first order, with no
short-circuiting.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB

BACKEND = "python"


def crossover_fill(
    state: int, width: int, thr_inclusive: int, never: bool, j_rand: int
) -> tuple[int, int]:
    """Draw ``width`` Bernoulli bits; return (mask, new_state).

    Mask bit at MSB-first position j is set iff the j-th draw is
    <= thr_inclusive (suppressed entirely when ``never``) or j == j_rand.
    """
    buf = bytearray((width + 7) >> 3)
    pad = len(buf) * 8 - width
    for j in range(width):
        state = (state + _GOLDEN) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * _MUL1) & _MASK64
        z = ((z ^ (z >> 27)) * _MUL2) & _MASK64
        z ^= z >> 31
        if j == j_rand or (not never and z <= thr_inclusive):
            pos = pad + j
            buf[pos >> 3] |= 0x80 >> (pos & 7)
    return int.from_bytes(buf, "big"), state
