"""Backend selection for the crossover hot loop.

Prefers the compiled Cython kernel (ecscalar._speedups) and falls back to
the pure-Python twin.  Both implement the same draw-for-draw contract, so
the choice affects speed only; benchmarks/backend_bench.py compares them.
"""

from __future__ import annotations

try:
    from ecscalar import _speedups as _impl
except ImportError:  # extension not built
    from ecscalar import _fallback as _impl

BACKEND: str = _impl.BACKEND

_U64_MAX = (1 << 64) - 1


def crossover_fill(
    state: int, width: int, threshold: int, j_rand: int, impl=None
) -> tuple[int, int]:
    """Generate a width-bit crossover mask from a SplitMix64 stream.

    ``threshold`` is the inclusive-exclusive u64 acceptance bound in
    [0, 2^64] (see rng.bernoulli_threshold); position ``j_rand`` is always
    taken.  Returns (mask, new_state); exactly ``width`` draws are consumed.
    """
    if not 0 <= j_rand < width:
        raise ValueError(f"j_rand {j_rand} out of range for width {width}")
    if not 0 <= threshold <= (1 << 64):
        raise ValueError(f"threshold {threshold} outside [0, 2^64]")
    backend = impl if impl is not None else _impl
    if threshold == 0:
        return backend.crossover_fill(state & _U64_MAX, width, 0, True, j_rand)
    return backend.crossover_fill(
        state & _U64_MAX, width, threshold - 1, False, j_rand
    )
