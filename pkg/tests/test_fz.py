from fractions import Fraction as Q
from math import factorial

import pytest

from tautrel import fz


def row1(i):
    return Q(factorial(6 * i), factorial(3 * i) * factorial(2 * i))


class TestBuildPsi:
    def test_constant_term(self):
        assert fz.build_psi(3, 4).constant_term() == 1

    def test_first_row_coefficients(self):
        psi = fz.build_psi(3, 0)
        g = psi.grading
        for i in range(4):
            e = [0] * len(g)
            e[0] = i
            assert psi.coefficient(tuple(e)) == row1(i)
        assert psi.coefficient((1,) + (0,) * (len(g) - 1)) == 60

    def test_second_row_coefficients(self):
        # coefficient of t^i p_1 is row1(i) * (6i+1)/(6i-1)
        psi = fz.build_psi(2, 1)
        g = psi.grading
        j = g.index["p1"]
        for i in range(3):
            e = [0] * len(g)
            e[0], e[j] = i, 1
            assert psi.coefficient(tuple(e)) == row1(i) * Q(6 * i + 1, 6 * i - 1)

    def test_p_row_shift(self):
        # p_{3k} multiplies the first row shifted by t^k, while p_{3k-2}
        # multiplies the second row shifted by t^{k-1}.
        psi = fz.build_psi(2, 4)
        g = psi.grading
        e = [0] * len(g)
        e[0], e[g.index["p3"]] = 2, 1
        assert psi.coefficient(tuple(e)) == row1(1)
        e = [0] * len(g)
        e[0], e[g.index["p4"]] = 1, 1
        assert psi.coefficient(tuple(e)) == -1
        e[0] = 2
        assert psi.coefficient(tuple(e)) == row1(1) * Q(7, 5)

    def test_log_round_trip(self):
        psi = fz.build_psi(3, 4)
        assert psi.log().exp() == psi


class TestConstants:
    def test_empty_partition(self):
        assert fz.fz_constants(0, ()) == 0
        assert fz.fz_constants(1, ()) == 60
        # t^2: 27720 - 60^2/2
        assert fz.fz_constants(2, ()) == 27720 - 1800

    def test_p1_column(self):
        assert fz.fz_constants(0, (1,)) == -1
        # log(Psi0 + p1 Psi1) = log Psi0 + p1 Psi1/Psi0 + O(p1^2); the
        # t-coefficient of Psi1/Psi0 is 84 - 60*(-1) = 144 and the
        # t^2-coefficient is 32760 - 84*60 - (-1)*(3600 - 27720) = 51840.
        assert fz.fz_constants(1, (1,)) == 144
        assert fz.fz_constants(2, (1,)) == 51840

    def test_bad_partition(self):
        with pytest.raises(ValueError):
            fz.fz_constants(1, (2,))
        with pytest.raises(ValueError):
            fz.fz_constants(1, (5,))
        with pytest.raises(ValueError):
            fz.fz_constants(1, (0,))


class TestRelation:
    def test_inequality_boundary(self):
        with pytest.raises(fz.NotARelationError, match="3r"):
            fz.fz_relation(4, 1, ())
        with pytest.raises(fz.NotARelationError, match="3r"):
            fz.fz_relation(5, 2, (1, 1))

    def test_parity_violation(self):
        with pytest.raises(fz.NotARelationError, match="mod 2"):
            fz.fz_relation(2, 2, ())

    def test_codimension2_relation(self):
        # exp(-gamma) at t^2: gamma^2/2 - gamma = (60^2/2) k1^2 - C2 k2.
        rel = fz.fz_relation(3, 2, ())
        assert rel.terms == {(2,): Q(1800), (0, 1): Q(-25920)}

    def test_p1_relation_genus1(self):
        # At g=1 the kappa_0 scalar 2g-2 vanishes, leaving -C1(p1) k1.
        rel = fz.fz_relation(1, 1, (1,))
        assert rel.terms == {(1,): Q(-144)}

    def test_p1_relation_genus2_hand_expansion(self):
        # [exp(-gamma)]_{t^2 p1} with kappa_0 = 2:
        #   -gamma:       -C2(p1) k2                    = -51840 k2
        #   +gamma^2/2:   60*144 k1^2 + C2 * C0(p1)*2 k2 = 8640 k1^2 - 51840 k2
        #   -gamma^3/6:   -3*60^2*(-2)/6 k1^2            = +3600 k1^2
        rel = fz.fz_relation(2, 2, (1,))
        assert rel.terms == {(2,): Q(12240), (0, 1): Q(-103680)}

    @pytest.mark.parametrize(
        "g,r,sigma", [(3, 2, ()), (1, 1, (1,)), (4, 3, (1, 3)), (3, 3, (1, 1, 1))]
    )
    def test_graded_degree_is_r(self, g, r, sigma):
        rel = fz.fz_relation(g, r, sigma)
        assert not rel.is_zero()
        assert rel.graded_degrees() == [r]

    def test_g_independence_for_empty_sigma(self):
        # For sigma = (), gamma has no kappa_0 term, so the polynomial
        # depends on g only through validity.
        assert fz.fz_relation(3, 2, ()) == fz.fz_relation(5, 2, ())
        assert fz.fz_relation(2, 3, ()) == fz.fz_relation(4, 3, ())


class TestKappaPolynomial:
    def test_normalization(self):
        p = fz.KappaPolynomial({(1, 0, 0): Q(2), (1,): Q(-2), (0, 1): Q(3)})
        assert p.terms == {(0, 1): Q(3)}
        assert p.graded_degrees() == [2]

    def test_zero(self):
        assert fz.KappaPolynomial({}).is_zero()

    def test_json(self):
        p = fz.KappaPolynomial({(2, 1): Q(5, 3)})
        assert p.to_json() == {"k1^2*k2^1": "5/3"}
