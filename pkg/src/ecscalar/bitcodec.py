"""Fixed-width binary representation of scalars and the entropy objective.

A ``BitString`` is a width-annotated unsigned integer: exactly ``width`` bits,
most significant first, leading zeros preserved.  The binary Shannon entropy
of the 0/1 proportions is the fitness function the optimizer maximizes; it is
1.0 exactly when the ones and zeros counts are equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

__all__ = [
    "BitString",
    "bit_counts",
    "from_bits",
    "imbalance",
    "shannon_entropy",
    "to_bits",
]


@dataclass(frozen=True)
class BitString:
    value: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise OverflowError(
                f"value {self.value} does not fit in {self.width} bits"
            )

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")

    def __len__(self) -> int:
        return self.width

    def __iter__(self) -> Iterator[int]:
        # MSB first
        for j in range(self.width - 1, -1, -1):
            yield (self.value >> j) & 1

    def bit(self, position: int) -> int:
        """Bit at MSB-first ``position`` (0 is the most significant)."""
        if not 0 <= position < self.width:
            raise IndexError(f"bit position {position} out of range")
        return (self.value >> (self.width - 1 - position)) & 1

    @property
    def ones(self) -> int:
        return self.value.bit_count()

    @property
    def zeros(self) -> int:
        return self.width - self.value.bit_count()

    def complement(self) -> "BitString":
        mask = (1 << self.width) - 1
        return BitString(self.value ^ mask, self.width)


def to_bits(k: int, width: int) -> BitString:
    """Encode ``k`` as a width-bit string, MSB first, zero-padded."""
    if k < 0:
        raise OverflowError(f"scalar must be non-negative, got {k}")
    return BitString(k, width)


def from_bits(s: BitString) -> int:
    """Inverse of :func:`to_bits`."""
    return s.value


def bit_counts(s: BitString) -> tuple[int, int]:
    """(ones, zeros); the two always sum to the width."""
    ones = s.value.bit_count()
    return ones, s.width - ones


def imbalance(s: BitString) -> int:
    """|ones - zeros|, an exact integer proxy for entropy ordering.

    Within a fixed width, lower imbalance means strictly higher entropy,
    so comparisons on this value avoid float rounding entirely.
    """
    return abs(2 * s.value.bit_count() - s.width)


def shannon_entropy(s: BitString) -> float:
    """Binary Shannon entropy of the bit proportions, in [0, 1].

    H = -p0*log2(p0) - p1*log2(p1) with the usual 0*log(0) = 0 convention,
    so constant strings score exactly 0.0 and balanced strings exactly 1.0.
    """
    ones = s.value.bit_count()
    if ones == 0 or ones == s.width:
        return 0.0
    p1 = ones / s.width
    p0 = 1.0 - p1
    return -(p0 * math.log2(p0) + p1 * math.log2(p1))
