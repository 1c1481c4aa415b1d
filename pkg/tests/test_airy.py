import mpmath
import pytest
from mpmath import mpf

from tautrel import airy


def sig_agree(a, b, digits):
    return abs(a - b) <= abs(b) * mpf(10) ** (-digits)


class TestOracles:
    @pytest.mark.parametrize("x", [1, 5, 10, 20])
    def test_dual_oracles_agree(self, x):
        q = airy.airy_quadrature(x)
        o = airy.airy_ode(x)
        assert sig_agree(q, o, 10)

    def test_known_magnitudes(self):
        # These are pi times the standard Airy values.
        v10 = airy.airy_numeric(10)
        assert sig_agree(v10, mpf("1.1047532552898685e-10") * mpmath.pi, 8)
        v1 = airy.airy_numeric(1)
        assert sig_agree(v1, mpf("0.13529241631288141") * mpmath.pi, 8)

    def test_prime_oracles_agree(self):
        for x in [1, 5, 10]:
            q = airy.airy_prime_quadrature(x)
            o = airy.airy_prime_ode(x)
            assert sig_agree(q, o, 10)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            airy.airy_numeric(-1)
        with pytest.raises(ValueError):
            airy.airy_numeric(0)

    def test_ode_satisfied_numerically(self):
        # y'' = x y via central differences of the ODE oracle.
        h = mpf(1) / 1024
        for x in [2, 5, 9]:
            x = mpf(x)
            y = airy.airy_ode(x, 192)
            ypp = (airy.airy_ode(x + h, 192) - 2 * y + airy.airy_ode(x - h, 192)) / h**2
            assert abs(ypp - x * y) < abs(x * y) * mpf(10) ** -4


class TestAsymptotics:
    def test_k0_closed_form(self):
        with mpmath.mp.workprec(160):
            x = mpf(7)
            expected = (
                mpmath.sqrt(mpmath.pi)
                / 2
                * x ** mpf("-0.25")
                * mpmath.e ** (-mpf(2) / 3 * x ** mpf("1.5"))
            )
            assert sig_agree(airy.airy_asymptotic(x, 0), expected, 25)

    def test_k1_correction_factor(self):
        x = mpf(10)
        ratio = airy.airy_asymptotic(x, 1) / airy.airy_asymptotic(x, 0)
        expected = 1 - mpf(5) / 48 / mpmath.sqrt(mpf(1000))
        assert sig_agree(ratio, expected, 25)

    @pytest.mark.parametrize("x", [5, 10, 20])
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_envelope(self, x, k):
        rep = airy.asymptotic_report(x, k)
        assert rep.envelope_ok, rep.to_json()

    @pytest.mark.parametrize("x", [5, 10, 20])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_envelope_prime(self, x, k):
        rep = airy.asymptotic_report(x, k, prime=True)
        assert rep.envelope_ok, rep.to_json()

    def test_report_fields(self):
        rep = airy.asymptotic_report(10, 3)
        data = rep.to_json()
        assert data["terms"] == 3 and data["x"] == 10.0
        assert float(data["rel_error"]) >= 0
