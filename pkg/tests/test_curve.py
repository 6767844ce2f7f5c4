"""Group law, enumeration, Hasse bound, and parameter validation."""

import pytest

from ecscalar.curve import (
    ENUMERATION_LIMIT,
    INFINITY,
    CurveParams,
    FieldTooLargeError,
    Point,
    enumerate_points,
    hasse_check,
    is_on_curve,
    negate,
    point_add,
    scalar_mul,
    validate_curve,
)
from reference_data import TOY29_AFFINE_TABLE

G = Point(0, 7)


class TestOnCurve:
    def test_base_point(self, toy29):
        assert is_on_curve(G, toy29)

    def test_infinity(self, toy29):
        assert is_on_curve(INFINITY, toy29)

    def test_off_curve_point(self, toy29):
        # 1 != 1 + 4 + 20 (mod 29)
        assert not is_on_curve(Point(1, 1), toy29)


class TestNegate:
    def test_affine(self, toy29):
        assert negate(G, toy29) == Point(0, 22)

    def test_infinity(self, toy29):
        assert negate(INFINITY, toy29) == INFINITY

    def test_involution(self, toy29):
        for x, y in TOY29_AFFINE_TABLE:
            assert negate(negate(Point(x, y), toy29), toy29) == Point(x, y)


class TestPointAdd:
    def test_identity(self, toy29):
        assert point_add(G, INFINITY, toy29) == G
        assert point_add(INFINITY, G, toy29) == G

    def test_inverse_pair(self, toy29):
        assert point_add(G, Point(0, 22), toy29) == INFINITY

    def test_doubling(self, toy29):
        # lambda = 4 * inv(14) = 21; x3 = 6, y3 = 12
        assert point_add(G, G, toy29) == Point(6, 12)

    def test_closure_over_all_pairs(self, toy29):
        points = enumerate_points(toy29)
        for p1 in points:
            for p2 in points:
                assert is_on_curve(point_add(p1, p2, toy29), toy29)

    def test_commutativity_over_all_pairs(self, toy29):
        points = enumerate_points(toy29)
        for p1 in points:
            for p2 in points:
                assert point_add(p1, p2, toy29) == point_add(p2, p1, toy29)


class TestScalarMul:
    def test_one(self, toy29):
        assert scalar_mul(1, G, toy29) == G

    def test_zero(self, toy29):
        assert scalar_mul(0, G, toy29) == INFINITY

    def test_nineteen(self, toy29):
        # Repeated addition gives (8, 19); see docs/errata.md for the
        # incorrect (19, 16) that circulates (that point is 10*G).
        assert scalar_mul(19, G, toy29) == Point(8, 19)
        assert scalar_mul(10, G, toy29) == Point(19, 16)

    def test_group_order_annihilates(self, toy29):
        assert scalar_mul(37, G, toy29) == INFINITY

    def test_matches_repeated_addition_oracle(self, toy29):
        acc = INFINITY
        for k in range(41):
            assert scalar_mul(k, G, toy29) == acc
            acc = point_add(acc, G, toy29)

    def test_negative_rejected(self, toy29):
        with pytest.raises(ValueError):
            scalar_mul(-1, G, toy29)

    def test_accepts_scalars_above_n(self, toy29):
        assert scalar_mul(38, G, toy29) == G


class TestEnumerate:
    def test_toy29_full_table(self, toy29):
        points = enumerate_points(toy29)
        assert len(points) == 37
        assert points[-1] == INFINITY
        affine = [(pt.x, pt.y) for pt in points[:-1]]
        assert affine == sorted(TOY29_AFFINE_TABLE)

    def test_matches_brute_force_oracle_on_f5(self):
        small = CurveParams(name="f5", p=5, a=0, b=1, g=Point(0, 1), n=6)
        expected = sorted(
            (x, y)
            for x in range(5)
            for y in range(5)
            if (y * y - (x**3 + 1)) % 5 == 0
        )
        points = enumerate_points(small)
        assert [(pt.x, pt.y) for pt in points[:-1]] == expected

    def test_guard(self, p192):
        assert p192.p >= ENUMERATION_LIMIT
        with pytest.raises(FieldTooLargeError):
            enumerate_points(p192)

    def test_counts_satisfy_hasse_on_small_curves(self):
        for p in (5, 7, 11, 13, 29, 97):
            for a, b in ((1, 1), (2, 3), (4, 20)):
                if (4 * a**3 + 27 * b**2) % p == 0:
                    continue
                params = CurveParams(name="t", p=p, a=a, b=b, g=INFINITY, n=1)
                count = len(enumerate_points(params))
                assert hasse_check(count, p)


class TestHasse:
    def test_toy_count(self):
        assert hasse_check(37, 29)  # |37 - 30| = 7, 49 <= 116

    def test_zero_deviation(self):
        assert hasse_check(30, 29)

    def test_just_outside(self):
        assert not hasse_check(30 + 11, 29)  # 121 > 116


class TestValidateCurve:
    def test_toy29_all_pass(self, toy29):
        v = validate_curve(toy29)
        assert v.ok and v.failures() == []
        # 4a^3 + 27b^2 = 11056 = 7 (mod 29); Delta = -16 * 11056 = 4 (mod 29)
        assert v.discriminant_residue == 7
        assert (-16 * 11056) % 29 == 4 != 0

    def test_p192_all_pass(self, p192):
        assert validate_curve(p192).ok

    def test_singular_curve_reported(self):
        # p = 29, a = 0: 27 * b^2 = 0 (mod 29) forces b = 0.
        params = CurveParams(name="sing", p=29, a=0, b=0, g=INFINITY, n=1)
        v = validate_curve(params)
        assert not v.discriminant_nonzero
        assert "singular" in v.failures()[0]

    def test_off_curve_generator_reported(self, toy29):
        params = CurveParams(
            name="bad", p=29, a=4, b=20, g=Point(1, 1), n=37
        )
        v = validate_curve(params)
        assert v.discriminant_nonzero
        assert not v.generator_on_curve
        assert not v.order_annihilates_generator

    def test_wrong_order_reported(self, toy29):
        params = CurveParams(name="bad_n", p=29, a=4, b=20, g=Point(0, 7), n=36)
        v = validate_curve(params)
        assert v.generator_on_curve
        assert not v.order_annihilates_generator


class TestHomomorphismSmall:
    def test_additive_in_the_scalar(self, toy29):
        n = toy29.n
        for k1 in (1, 5, 17, 30, 36):
            for k2 in (2, 11, 25, 36):
                lhs = scalar_mul((k1 + k2) % n, G, toy29)
                rhs = point_add(
                    scalar_mul(k1, G, toy29), scalar_mul(k2, G, toy29), toy29
                )
                assert lhs == rhs
