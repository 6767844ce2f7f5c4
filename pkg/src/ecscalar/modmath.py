"""Exact arithmetic in prime fields, on Python's arbitrary-precision integers.

Everything here is pure and allocation-cheap; operands of any size work, but
the intended range is field elements up to 256 bits (with intermediate
products up to 512 bits before reduction).  No attempt is made at
constant-time behaviour.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

__all__ = [
    "FieldElement",
    "ModulusMismatchError",
    "NonInvertibleError",
    "format_hex",
    "is_probable_prime",
    "mod_add",
    "mod_inv",
    "mod_mul",
    "mod_sub",
    "parse_hex",
]


class ModulusMismatchError(ValueError):
    """Raised when two field elements with different moduli are combined."""


class NonInvertibleError(ArithmeticError):
    """Raised when asked for the inverse of a non-unit (zero mod a prime)."""


def parse_hex(text: str) -> int:
    """Parse an unsigned hex string into an int.

    Accepts an optional ``0x``/``0X`` prefix and upper- or lower-case digits.
    Internal whitespace is stripped (published parameter tables are often
    line-wrapped mid-value).  Anything else is rejected.
    """
    compact = "".join(text.split())
    if compact[:2].lower() == "0x":
        compact = compact[2:]
    if not compact:
        raise ValueError(f"empty hex value: {text!r}")
    for c in compact:
        if c not in "0123456789abcdefABCDEF":
            raise ValueError(f"invalid hex digit {c!r} in {text!r}")
    return int(compact, 16)


def format_hex(value: int, width: int | None = None) -> str:
    """Format ``value`` as lowercase ``0x…`` hex.

    With ``width`` (in bits) the output is zero-padded to ``ceil(width/4)``
    digits, so fixed-width scalars render with their leading zeros.
    """
    if value < 0:
        raise ValueError("negative value")
    digits = format(value, "x")
    if width is not None:
        digits = digits.zfill((width + 3) // 4)
    return "0x" + digits


@dataclass(frozen=True)
class FieldElement:
    """An element of the prime field Z/pZ, kept in canonical form [0, p).

    Arithmetic between elements requires identical moduli; division uses the
    modular inverse and fails on zero.  Instances are immutable and safe to
    share across threads.
    """

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other: "FieldElement | int") -> "FieldElement":
        if isinstance(other, int):
            return FieldElement(other, self.modulus)
        if other.modulus != self.modulus:
            raise ModulusMismatchError(
                f"moduli differ: {self.modulus} vs {other.modulus}"
            )
        return other

    def __add__(self, other: "FieldElement | int") -> "FieldElement":
        other = self._coerce(other)
        return FieldElement((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other: "FieldElement | int") -> "FieldElement":
        other = self._coerce(other)
        return FieldElement((self.value - other.value) % self.modulus, self.modulus)

    def __rsub__(self, other: int) -> "FieldElement":
        return self._coerce(other) - self

    def __mul__(self, other: "FieldElement | int") -> "FieldElement":
        other = self._coerce(other)
        return FieldElement((self.value * other.value) % self.modulus, self.modulus)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value, self.modulus)

    def __truediv__(self, other: "FieldElement | int") -> "FieldElement":
        return self * self._coerce(other).inverse()

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse via the extended Euclidean algorithm.

        Delegates to ``pow(v, -1, m)`` (CPython computes this with extended
        Euclid, not Fermat exponentiation, so no primality assumption is
        made here).
        """
        try:
            return FieldElement(pow(self.value, -1, self.modulus), self.modulus)
        except ValueError:
            raise NonInvertibleError(
                f"{self.value} is not invertible mod {self.modulus}"
            ) from None

    def __int__(self) -> int:
        return self.value


def mod_add(a: FieldElement, b: FieldElement) -> FieldElement:
    """(a + b) mod p."""
    return a + b


def mod_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    """(a - b) mod p."""
    return a - b


def mod_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """(a * b) mod p, exact for operands of any size."""
    return a * b


def mod_inv(a: FieldElement) -> FieldElement:
    """a^-1 mod p; raises NonInvertibleError for zero."""
    return a.inverse()


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int, rounds: int = 64) -> bool:
    """Miller-Rabin primality test with ``rounds`` random witnesses.

    Witnesses are drawn from a generator seeded by ``n`` itself, so the
    verdict for a given input never changes between runs.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(n ^ 0x9E3779B97F4A7C15)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True
