import random
from fractions import Fraction as Q

import pytest

from tautrel.series import (
    BiPoly,
    DivisibilityError,
    Grading,
    LaurentSeries,
    MultiSeries,
    PowerSeries,
    divide_exact,
)


def geometric(order):
    return PowerSeries([1] * (order + 1), order)


def exp_series(order):
    from math import factorial

    return PowerSeries([Q(1, factorial(k)) for k in range(order + 1)], order)


class TestPowerSeries:
    def test_mul_difference_of_squares(self):
        one_plus = PowerSeries([1, 1], 5)
        one_minus = PowerSeries([1, -1], 5)
        assert one_plus * one_minus == PowerSeries([1, 0, -1], 5)

    def test_exp_times_exp_neg(self):
        e = exp_series(20)
        em = e.scale_argument(-1)
        assert (e * em) == PowerSeries.one(20)

    def test_log_of_one_plus_z(self):
        f = PowerSeries([1, 1], 8)
        lg = f.log()
        assert [lg[k] for k in range(1, 9)] == [Q((-1) ** (k + 1), k) for k in range(1, 9)]

    def test_log_exp_inverse_pair(self):
        assert exp_series(15).log() == PowerSeries.identity(15)

    def test_exp_log_roundtrip_random(self):
        rng = random.Random(7)
        for _ in range(5):
            f = PowerSeries(
                [1] + [Q(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(30)], 30
            )
            assert f.log().exp() == f

    def test_derivative(self):
        f = PowerSeries([0, 0, 0, 1], 3)
        assert f.derivative() == PowerSeries([0, 0, 3], 2)

    def test_derivative_product_rule_random(self):
        rng = random.Random(11)
        f = PowerSeries([Q(rng.randint(-5, 5)) for _ in range(12)], 11)
        g = PowerSeries([Q(rng.randint(-5, 5)) for _ in range(12)], 11)
        lhs = (f * g).derivative()
        rhs = f.derivative() * g.truncate(10) + f.truncate(10) * g.derivative()
        assert lhs == rhs

    def test_antiderivative_inverts_derivative(self):
        f = PowerSeries([0, 2, 3, 4], 3)
        assert f.derivative().antiderivative() == f

    def test_compose_geometric_with_z2(self):
        geo = geometric(8)
        inner = PowerSeries([0, 0, 1], 8)
        got = geo.compose(inner)
        assert [got[k] for k in range(9)] == [1, 0, 1, 0, 1, 0, 1, 0, 1]

    def test_compose_rejects_nonzero_constant(self):
        with pytest.raises(ValueError):
            geometric(4).compose(PowerSeries([1, 1], 4))

    def test_reciprocal(self):
        f = PowerSeries([1, -60, 27720], 2)
        assert f.reciprocal() == PowerSeries([1, 60, -24120], 2)

    def test_reciprocal_zero_constant_rejected(self):
        with pytest.raises(ValueError):
            PowerSeries([0, 1], 3).reciprocal()

    def test_evaluate(self):
        f = PowerSeries([1, 2, 3], 2)
        assert f(Q(1, 2)) == 1 + 1 + Q(3, 4)

    def test_json_roundtrip(self):
        f = PowerSeries([Q(1), Q(-5, 24)], 4, var="x")
        data = f.to_json()
        assert data["coeffs"][1] == "-5/24"
        assert PowerSeries.from_json(data) == f


class TestLaurentSeries:
    def test_mul_with_negative_exponents(self):
        a = LaurentSeries({-2: Q(1), 0: Q(3)}, 4)
        b = LaurentSeries({1: Q(2)}, 4)
        p = a * b
        assert p[-1] == 2 and p[1] == 6

    def test_z0_extraction(self):
        a = LaurentSeries({-1: Q(5), 0: Q(7), 2: Q(1)}, 3)
        assert a.z0_part() == 7

    def test_truncation_guard_on_mul(self):
        # 1/z times something valid to z^4 is only valid to z^3.
        a = LaurentSeries({-1: Q(1)}, 4)
        b = LaurentSeries({0: Q(1)}, 4)
        assert (a * b).order == 3


class TestMultiSeries:
    def grading(self):
        return Grading(["t0", "t1", "t2"], [1, 3, 5])

    def test_weighted_truncation(self):
        g = self.grading()
        t2 = MultiSeries.variable(g, "t2", 4)
        assert t2.is_zero()  # weight 5 > 4

    def test_product_agrees_with_untruncated(self):
        g = self.grading()
        rng = random.Random(3)
        def rand(maxdeg):
            terms = {}
            for e0 in range(4):
                for e1 in range(2):
                    if g.degree((e0, e1, 0)) <= maxdeg:
                        terms[(e0, e1, 0)] = Q(rng.randint(-4, 4))
            return terms
        big = 20
        a_t, b_t = rand(6), rand(6)
        small = MultiSeries(g, a_t, 6) * MultiSeries(g, b_t, 6)
        full = MultiSeries(g, a_t, big) * MultiSeries(g, b_t, big)
        assert small == full.truncate(6)

    def test_exp_log_roundtrip(self):
        g = self.grading()
        f = (
            MultiSeries.variable(g, "t0", 7)
            + MultiSeries.variable(g, "t1", 7) * Q(1, 3)
            + MultiSeries.variable(g, "t2", 7) * 5
        )
        assert f.exp().log() == f

    def test_derivative(self):
        g = self.grading()
        t0 = MultiSeries.variable(g, "t0", 6)
        t1 = MultiSeries.variable(g, "t1", 6)
        f = t0 * t0 * t1
        df = f.derivative("t0")
        assert df.coefficient((1, 1, 0)) == 2

    def test_coefficient_out_of_range(self):
        g = self.grading()
        f = MultiSeries.constant(g, 1, 3)
        with pytest.raises(IndexError):
            f.coefficient((0, 0, 1))


class TestDivideExact:
    def test_difference_of_squares(self):
        num = BiPoly({(2, 0): Q(1), (0, 2): Q(-1)}, 4)
        q = divide_exact(num)
        assert q == BiPoly({(1, 0): Q(1), (0, 1): Q(-1)}, 3)

    def test_divide_self(self):
        num = BiPoly({(1, 0): Q(1), (0, 1): Q(1)}, 4)
        assert divide_exact(num) == BiPoly({(0, 0): Q(1)}, 3)

    def test_remainder_detected(self):
        num = BiPoly({(1, 0): Q(1)}, 3)
        with pytest.raises(DivisibilityError):
            divide_exact(num)

    def test_random_roundtrip(self):
        rng = random.Random(5)
        den = BiPoly({(1, 0): Q(1), (0, 1): Q(1)}, 9)
        q = BiPoly(
            {(i, j): Q(rng.randint(-6, 6)) for i in range(4) for j in range(4)}, 8
        )
        assert divide_exact(den * q) == q
