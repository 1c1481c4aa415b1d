import random
from fractions import Fraction as Q

import pytest

from tautrel import named_series as ns
from tautrel.series import PowerSeries


class TestAB:
    def test_first_coefficients(self):
        A = ns.series_A(2)
        assert A[0] == 1
        assert A[1] == Q(5, 24)
        assert A[2] == Q(385, 1152)
        B = ns.series_B(1)
        assert B[0] == -1
        assert B[1] == Q(7, 24)

    def test_first_order_ode(self):
        # 3z^2 A' + (z/2 - 1) A = B
        order = 30
        A = ns.series_A(order + 1)
        B = ns.series_B(order)
        z = PowerSeries.identity(order)
        lhs = 3 * z * z * A.derivative().truncate(order) + (z * Q(1, 2) - PowerSeries.one(order)) * A.truncate(order)
        assert (lhs - B).is_zero()

    def test_second_order_ode(self):
        # 3z^2 A'' + (6z - 2) A' + (5/12) A = 0
        order = 30
        A = ns.series_A(order + 2)
        z = PowerSeries.identity(order)
        lhs = (
            3 * z * z * A.derivative().derivative().truncate(order)
            + (6 * z - 2 * PowerSeries.one(order)) * A.derivative().truncate(order)
            + Q(5, 12) * A.truncate(order)
        )
        assert lhs.is_zero()


class TestCalAB:
    def test_calA_expansion(self):
        cA = ns.series_calA(6)
        assert [cA[k] for k in range(7)] == [1, 0, 0, Q(-5, 24), 0, 0, Q(385, 1152)]

    def test_calB_expansion(self):
        cB = ns.series_calB(3)
        assert cB[0] == 1 and cB[3] == Q(7, 24)

    def test_relation_to_A(self):
        assert ns.series_calA(15) == ns.series_A(5).scale_argument(-1).shift_exponents(3)


class TestH:
    def test_H0_H1_coefficients(self):
        H0 = ns.series_H0(2)
        H1 = ns.series_H1(2)
        assert tuple(H0.coeffs) == (1, -60, 27720)
        assert tuple(H1.coeffs) == (1, 84, -32760)

    def test_reflection_identity(self):
        order = 30
        H0 = ns.series_H0(order)
        H1 = ns.series_H1(order)
        H0m = H0.scale_argument(-1)
        H1m = H1.scale_argument(-1)
        assert H0 * H1m + H0m * H1 == 2 * PowerSeries.one(order)

    def test_reciprocal_H0(self):
        rec = ns.series_H0(2).reciprocal()
        assert tuple(rec.coeffs) == (1, 60, -24120)


class TestD:
    def test_d0_d1(self):
        # d_1 = |a_1| + 3*(1/2)*|a_0| = 5/24 + 3/2; the product factor at
        # n=1, i=1, k=1 is n + 1/2 - k = 1/2.
        assert ns.d_coeff(0) == 1
        assert ns.d_coeff(1) == Q(41, 24)

    def test_closed_form_equals_ode_solution(self):
        assert ns.series_D(21) == ns.series_D_ode(21)

    def test_ode_residual(self):
        order = 21
        D = ns.series_D(order + 3)
        x = PowerSeries.identity(order)
        lhs = (
            -(x * x * x * x) * D.derivative().truncate(order)
            - Q(3, 2) * (x * x * x) * D.truncate(order)
            + D.truncate(order)
        )
        assert lhs == ns.series_calA(order).scale_argument(-1)


class TestPhi:
    def test_constant_term(self):
        phi = ns.series_Phi(3, Q(2), Q(3))
        assert phi[0] == 1

    def test_q1_coefficient(self):
        lam, z = Q(2), Q(3)
        phi = ns.series_Phi(1, lam, z)
        assert phi[1] == 1 / ((z - lam) * z)

    def test_specialization_error(self):
        with pytest.raises(ns.SpecializationError):
            ns.series_Phi(2, Q(1), Q(1))

    def test_ode_random_specializations(self):
        # (z q d/dq)^2 Phi - lambda (z q d/dq) Phi = q Phi through q^15
        rng = random.Random(20150731)
        order = 15
        checked = 0
        while checked < 5:
            lam = Q(rng.randint(-9, 9), rng.randint(1, 9))
            z = Q(rng.randint(-9, 9), rng.randint(1, 9))
            try:
                phi = ns.series_Phi(order, lam, z)
            except (ns.SpecializationError, ZeroDivisionError):
                continue
            for d in range(order):
                c = phi[d + 1]
                lhs = (z * (d + 1)) ** 2 * c - lam * z * (d + 1) * c
                assert lhs == phi[d]
            checked += 1


class TestBernoulliStirling:
    def test_first_bernoullis(self):
        assert ns.bernoulli(0) == 1
        assert ns.bernoulli(1) == Q(-1, 2)
        assert ns.bernoulli(2) == Q(1, 6)
        assert ns.bernoulli(12) == Q(-691, 2730)

    def test_stirling_first_terms(self):
        st = ns.stirling_series(5)
        assert st[1] == Q(1, 12)
        assert st[3] == Q(-1, 360)
        assert st[0] == 0 and st[2] == 0


def test_double_factorial():
    assert ns.double_factorial(-1) == 1
    assert ns.double_factorial(0) == 1
    assert ns.double_factorial(5) == 15
    assert ns.double_factorial(7) == 105
