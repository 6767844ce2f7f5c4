# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled crossover kernel: SplitMix64 Bernoulli mask generation.

Draw-for-draw identical to ecscalar._fallback — one u64 per bit position,
MSB first, no short-circuiting — so results never depend on which backend
happens to be importable.
"""

from libc.stdint cimport uint64_t

BACKEND = "compiled"

cdef uint64_t _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t _MUL1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t _MUL2 = 0x94D049BB133111EBULL


cdef inline uint64_t _next(uint64_t* state) noexcept nogil:
    cdef uint64_t z
    state[0] += _GOLDEN
    z = state[0]
    z = (z ^ (z >> 30)) * _MUL1
    z = (z ^ (z >> 27)) * _MUL2
    return z ^ (z >> 31)


def crossover_fill(
    unsigned long long state,
    int width,
    unsigned long long thr_inclusive,
    bint never,
    int j_rand,
):
    """Draw ``width`` Bernoulli bits; return (mask, new_state).

    Mask bit at MSB-first position j is set iff the j-th draw is
    <= thr_inclusive (suppressed entirely when ``never``) or j == j_rand.
    """
    cdef int nbytes = (width + 7) >> 3
    cdef bytearray buf = bytearray(nbytes)
    cdef unsigned char[::1] view = buf
    cdef uint64_t s = state
    cdef int pad = nbytes * 8 - width
    cdef int j, pos
    cdef uint64_t v
    cdef bint take
    for j in range(width):
        v = _next(&s)
        take = (j == j_rand) or ((not never) and v <= thr_inclusive)
        if take:
            pos = pad + j
            view[pos >> 3] |= <unsigned char> (0x80 >> (pos & 7))
    return int.from_bytes(bytes(buf), "big"), s
