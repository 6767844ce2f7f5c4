"""Short-Weierstrass elliptic curves over prime fields, in affine form.

The group law is implemented directly from the slope formulas — generic
chord slope (y2 - y1)/(x2 - x1), tangent slope (3x^2 + a)/(2y) — with the
point at infinity as identity.  Affine coordinates keep the code an exact
transcription of the textbook formulas; throughput is more than adequate for
desk-scale work (a 256-bit scalar multiplication is a few milliseconds).

Also provides exhaustive point enumeration for small fields, the Hasse
interval check, and whole-curve parameter validation.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "ENUMERATION_LIMIT",
    "INFINITY",
    "CurveParams",
    "CurveValidation",
    "FieldTooLargeError",
    "Point",
    "enumerate_points",
    "hasse_check",
    "is_on_curve",
    "negate",
    "point_add",
    "scalar_mul",
    "validate_curve",
]

# Exhaustive enumeration is O(p); the guard keeps it interactive.
ENUMERATION_LIMIT = 1 << 20


class FieldTooLargeError(ValueError):
    """Raised when exhaustive enumeration is requested above the guard."""


@dataclass(frozen=True)
class Point:
    """Affine curve point, or the point at infinity when both fields are None."""

    x: int | None = None
    y: int | None = None

    def __post_init__(self) -> None:
        if (self.x is None) != (self.y is None):
            raise ValueError("affine points need both coordinates")

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self) -> str:
        if self.is_infinity:
            return "Point(infinity)"
        return f"Point({self.x}, {self.y})"


INFINITY = Point()


@dataclass(frozen=True)
class CurveParams:
    """Public parameters of one curve: y^2 = x^3 + ax + b over F_p.

    ``g`` is the base point and ``n`` its order; ``curve_order`` is the total
    point count #E(F_p) where known (equal to n for the built-in prime-order
    curves, whose cofactor is 1).  Immutable; share freely across threads.
    """

    name: str
    p: int
    a: int
    b: int
    g: Point
    n: int
    curve_order: int | None = None

    def __post_init__(self) -> None:
        if self.p < 3:
            raise ValueError(f"field prime must be >= 3, got {self.p}")
        if self.n < 1:
            raise ValueError(f"base point order must be >= 1, got {self.n}")
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)


def is_on_curve(point: Point, params: CurveParams) -> bool:
    """True iff the point is the identity or satisfies y^2 = x^3 + ax + b."""
    if point.is_infinity:
        return True
    p = params.p
    return (point.y * point.y - (point.x**3 + params.a * point.x + params.b)) % p == 0


def negate(point: Point, params: CurveParams) -> Point:
    """-P = (x, -y); the identity is its own negative."""
    if point.is_infinity:
        return INFINITY
    return Point(point.x, -point.y % params.p)


def point_add(p1: Point, p2: Point, params: CurveParams) -> Point:
    """Group sum of two on-curve points; every degenerate case is defined.

    Works on raw residues for speed (this sits under every scalar
    multiplication); the inverse is the same extended-Euclid pow(x, -1, p)
    that backs FieldElement.inverse.
    """
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    p = params.p
    x1, y1 = p1.x, p1.y
    x2, y2 = p2.x, p2.y
    if x1 == x2 and (y1 + y2) % p == 0:
        # Q = -P, including the doubling of a 2-torsion point (y = 0).
        return INFINITY
    if x1 == x2 and y1 == y2:
        lam = (3 * x1 * x1 + params.a) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return Point(x3, y3)


def scalar_mul(k: int, point: Point, params: CurveParams) -> Point:
    """k*P by left-to-right double-and-add (most significant bit first).

    Any k >= 0 is accepted — in particular k = n, so the order check
    n*G = O is expressible.  k = 0 gives the identity.
    """
    if k < 0:
        raise ValueError(f"scalar must be non-negative, got {k}")
    if k == 0 or point.is_infinity:
        return INFINITY
    acc = INFINITY
    for bit in format(k, "b"):
        acc = point_add(acc, acc, params)
        if bit == "1":
            acc = point_add(acc, point, params)
    return acc


def enumerate_points(params: CurveParams) -> list[Point]:
    """All points of E(F_p) for small p: sorted affine points, then infinity.

    Scans every x, pairing it with the y values whose squares hit the curve
    polynomial (a full residue table is built first, so the scan is O(p)).
    Guarded by ENUMERATION_LIMIT.
    """
    p = params.p
    if p >= ENUMERATION_LIMIT:
        raise FieldTooLargeError(
            f"p = {p} exceeds the enumeration guard ({ENUMERATION_LIMIT})"
        )
    roots_of: dict[int, list[int]] = {}
    for y in range(p):
        roots_of.setdefault(y * y % p, []).append(y)
    points = []
    for x in range(p):
        rhs = (x * x * x + params.a * x + params.b) % p
        for y in roots_of.get(rhs, ()):
            points.append(Point(x, y))
    points.sort(key=lambda pt: (pt.x, pt.y))
    points.append(INFINITY)
    return points


def hasse_check(count: int, p: int) -> bool:
    """Hasse interval: |count - (p + 1)| <= 2*sqrt(p), compared exactly.

    Both sides are squared so the test is pure integer arithmetic:
    (count - p - 1)^2 <= 4p.
    """
    return (count - p - 1) ** 2 <= 4 * p


@dataclass(frozen=True)
class CurveValidation:
    """Outcome of the three independent parameter checks, plus the residue
    4a^3 + 27b^2 mod p actually computed for the discriminant test."""

    discriminant_residue: int
    discriminant_nonzero: bool
    generator_on_curve: bool
    order_annihilates_generator: bool

    @property
    def ok(self) -> bool:
        return (
            self.discriminant_nonzero
            and self.generator_on_curve
            and self.order_annihilates_generator
        )

    def failures(self) -> list[str]:
        out = []
        if not self.discriminant_nonzero:
            out.append("discriminant is zero (singular curve)")
        if not self.generator_on_curve:
            out.append("base point is not on the curve")
        if not self.order_annihilates_generator:
            out.append("n*G is not the point at infinity")
        return out


def validate_curve(params: CurveParams) -> CurveValidation:
    """Check non-singularity, base-point membership, and n*G = O.

    Each check is reported independently; nothing raises.  The n*G check is
    skipped (reported failed) when the generator is off-curve, since the
    group law is undefined there.
    """
    residue = (4 * params.a**3 + 27 * params.b**2) % params.p
    on_curve = is_on_curve(params.g, params)
    annihilates = False
    if on_curve and not params.g.is_infinity:
        annihilates = scalar_mul(params.n, params.g, params).is_infinity
    return CurveValidation(
        discriminant_residue=residue,
        discriminant_nonzero=residue != 0,
        generator_on_curve=on_curve,
        order_annihilates_generator=annihilates,
    )
