r"""High-precision evaluation of the Airy integral and its asymptotics.

The function treated here is

    Ai(x) = int_0^oo cos(t^3/3 + x t) dt,

i.e. pi times the conventionally normalized Airy function, which is why the
asymptotic prefactor below is (sqrt(pi)/2) x^{-1/4} e^{-(2/3)x^{3/2}} rather
than 1/(2 sqrt(pi)) x^{-1/4} ...

Two independent numeric oracles are provided for x > 0:

- ``airy_quadrature``: Gauss-Legendre quadrature of the deformed-Gaussian
  contour form  Ai(x) = e^{-(2/3)x^{3/2}} x^{-1/4}/(2 sqrt 2)
  * int_R e^{-t^2/2} cos(x^{-3/4} t^3 / (6 sqrt 2)) dt.
- ``airy_ode``: Taylor-series continuation of y'' = x y from 0, with working
  precision padded to absorb the exponential cancellation.

This is the only module in the package that uses floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .named_series import a_j, b_j


def _require_positive(x):
    if x <= 0:
        raise ValueError("Airy evaluation implemented for x > 0 only")


def airy_quadrature(x, precision_bits: int = 128):
    """Ai(x) by quadrature of the deformed-Gaussian integral (x > 0)."""
    _require_positive(x)
    if precision_bits < 64:
        raise ValueError("precision_bits must be >= 64")
    with mp.workprec(precision_bits + 32):
        x = mpf(x)
        # e^{-T^2/2} below target tolerance bounds the truncated tail.
        tol_log = (precision_bits + 16) * math.log(2)
        T = mpmath.sqrt(2 * tol_log) + 2
        c = x ** mpf("-0.75") / (6 * mpmath.sqrt(2))

        def integrand(t):
            return mpmath.e ** (-t * t / 2) * mpmath.cos(c * t**3)

        # Even integrand: integrate [0, T] and double.  Split into unit
        # panels; mpmath applies Gauss-Legendre on each.
        panels = mpmath.linspace(0, T, int(mpmath.ceil(T)) + 1)
        integral = 2 * mpmath.quad(integrand, panels, method="gauss-legendre")
        pref = mpmath.e ** (-mpf(2) / 3 * x ** mpf("1.5")) * x ** mpf("-0.25") / (
            2 * mpmath.sqrt(2)
        )
        result = pref * integral
    with mp.workprec(precision_bits):
        return +result


def airy_prime_quadrature(x, precision_bits: int = 128):
    """Ai'(x) by quadrature: d/dx of the contour form, differentiated under
    the integral in the pre-scaling variable u (Ai = e^{-zeta} / 1 *
    int_0^oo e^{-sqrt(x) u^2} cos(u^3/3) du has a clean x-derivative)."""
    _require_positive(x)
    if precision_bits < 64:
        raise ValueError("precision_bits must be >= 64")
    with mp.workprec(precision_bits + 32):
        x = mpf(x)
        sx = mpmath.sqrt(x)
        # Ai(x) = e^{-(2/3)x^{3/2}} * int_0^oo e^{-sx u^2} cos(u^3/3) du
        # (substitute u = t / (sqrt(2) x^{1/4}) in the module docstring form).
        # Differentiate the product in x.
        tol_log = (precision_bits + 16) * math.log(2)
        U = mpmath.sqrt(2 * tol_log / sx) + 2

        def f0(u):
            return mpmath.e ** (-sx * u * u) * mpmath.cos(u**3 / 3)

        def f2(u):
            return u * u * mpmath.e ** (-sx * u * u) * mpmath.cos(u**3 / 3)

        panels = int(mpmath.ceil(U)) + 1
        grid = mpmath.linspace(0, U, panels)
        i0 = mpmath.quad(f0, grid, method="gauss-legendre")
        i2 = mpmath.quad(f2, grid, method="gauss-legendre")
        pref = mpmath.e ** (-mpf(2) / 3 * x ** mpf("1.5"))
        result = pref * (-sx * i0 - i2 / (2 * sx))
    with mp.workprec(precision_bits):
        return +result


def _ode_pair(x, precision_bits: int):
    """(Ai(x), Ai'(x)) by Taylor continuation of y'' = x y from 0.

    The partial sums reach magnitude ~ e^{(2/3)x^{3/2}} before collapsing to
    the e^{-(2/3)x^{3/2}} answer, so the working precision is padded by the
    corresponding number of bits.
    """
    _require_positive(x)
    cancel_bits = int(mpf(4) / 3 * mpf(x) ** mpf("1.5") / math.log(2)) + 32
    with mp.workprec(precision_bits + cancel_bits + 32):
        x = mpf(x)
        # pi times the standard initial values.
        c0 = mpmath.pi / (mpf(3) ** (mpf(2) / 3) * mpmath.gamma(mpf(2) / 3))
        c1 = -mpmath.pi / (mpf(3) ** (mpf(1) / 3) * mpmath.gamma(mpf(1) / 3))
        # y = sum c_n x^n with c_{n+3} = c_n / ((n+3)(n+2)); c_2 = 0.
        y = mpmath.mpf(0)
        yp = mpmath.mpf(0)
        terms = [c0, c1, mpf(0)]
        n = 0
        xe = mpf(1)  # x^n
        tiny = mpmath.mpf(2) ** (-(precision_bits + cancel_bits))
        while True:
            c = terms[n % 3]
            y += c * xe
            if n >= 1:
                yp += n * c * xe / x
            terms[n % 3] = c / ((n + 3) * (n + 2))
            xe *= x
            # Every third coefficient is zero, so test all three pending
            # coefficient streams, not just the current term.
            if n > 3 * x and max(abs(t) for t in terms) * xe < tiny:
                break
            n += 1
        ai, aip = +y, +yp
    with mp.workprec(precision_bits):
        return +ai, +aip


def airy_ode(x, precision_bits: int = 128):
    """Ai(x) by the ODE/Taylor oracle."""
    return _ode_pair(x, precision_bits)[0]


def airy_prime_ode(x, precision_bits: int = 128):
    """Ai'(x) by the ODE/Taylor oracle."""
    return _ode_pair(x, precision_bits)[1]


def airy_numeric(x, precision_bits: int = 128):
    """Ai(x), cross-checked between the quadrature and ODE oracles.

    Raises ArithmeticError if the two methods disagree beyond the certified
    tolerance 2^{-(precision_bits/2)} relative.
    """
    q = airy_quadrature(x, precision_bits)
    o = airy_ode(x, precision_bits)
    tol = mpf(2) ** (-(precision_bits // 2))
    if abs(q - o) > tol * abs(o):
        raise ArithmeticError(f"oracle disagreement at x={x}: {q} vs {o}")
    return o


def airy_prime_numeric(x, precision_bits: int = 128):
    """Ai'(x), cross-checked between the quadrature and ODE oracles."""
    q = airy_prime_quadrature(x, precision_bits)
    o = airy_prime_ode(x, precision_bits)
    tol = mpf(2) ** (-(precision_bits // 2))
    if abs(q - o) > tol * abs(o):
        raise ArithmeticError(f"oracle disagreement at x={x}: {q} vs {o}")
    return o


def _asym_sum(coeff, x, k, precision_bits):
    """sum_{j<=k} coeff(j) * (2^{-1/3} x^{-1/2})^{3j} and the first omitted
    term, as mpf values."""
    with mp.workprec(precision_bits):
        x = mpf(x)
        arg3 = 1 / (2 * x ** mpf("1.5"))  # (2^{-1/3} x^{-1/2})^3
        total = mpmath.mpf(0)
        p = mpf(1)
        for j in range(k + 1):
            total += mpf(coeff(j).numerator) / coeff(j).denominator * p
            p *= arg3
        omitted = mpf(coeff(k + 1).numerator) / coeff(k + 1).denominator * p
        return +total, +omitted


def airy_asymptotic(x, k, precision_bits: int = 128):
    """Truncated asymptotic (sqrt(pi)/2) x^{-1/4} e^{-(2/3)x^{3/2}}
    * calA(2^{-1/3} x^{-1/2}) kept through the x^{-3k/2} term."""
    _require_positive(x)
    with mp.workprec(precision_bits):
        x = mpf(x)
        s, _ = _asym_sum(a_j, x, k, precision_bits)
        pref = (
            mpmath.sqrt(mpmath.pi)
            / 2
            * x ** mpf("-0.25")
            * mpmath.e ** (-mpf(2) / 3 * x ** mpf("1.5"))
        )
        return +(pref * s)


def airy_prime_asymptotic(x, k, precision_bits: int = 128):
    """Truncated asymptotic (sqrt(pi)/2) x^{1/4} e^{-(2/3)x^{3/2}}
    * (-calB)(2^{-1/3} x^{-1/2}); the leading term is negative, as Ai' is."""
    _require_positive(x)
    with mp.workprec(precision_bits):
        x = mpf(x)
        s, _ = _asym_sum(lambda j: -b_j(j), x, k, precision_bits)
        pref = (
            mpmath.sqrt(mpmath.pi)
            / 2
            * x ** mpf("0.25")
            * mpmath.e ** (-mpf(2) / 3 * x ** mpf("1.5"))
        )
        return +(pref * s)


@dataclass
class AsymptoticReport:
    x: float
    terms: int
    numeric: str
    asymptotic: str
    abs_error: str
    rel_error: str
    first_omitted: str
    envelope_ok: bool
    prime: bool = False

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "terms": self.terms,
            "numeric": self.numeric,
            "asymptotic": self.asymptotic,
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "first_omitted_magnitude": self.first_omitted,
            "envelope_ok": self.envelope_ok,
            "prime": self.prime,
        }


def asymptotic_report(x, k, prime: bool = False, precision_bits: int = 128) -> AsymptoticReport:
    """Compare numeric and truncated-asymptotic values at x with k terms."""
    with mp.workprec(precision_bits):
        x = mpf(x)
        if prime:
            num = airy_prime_numeric(x, precision_bits)
            asym = airy_prime_asymptotic(x, k, precision_bits)
            _, omitted = _asym_sum(lambda j: -b_j(j), x, k, precision_bits)
            pref = mpmath.sqrt(mpmath.pi) / 2 * x ** mpf("0.25")
        else:
            num = airy_numeric(x, precision_bits)
            asym = airy_asymptotic(x, k, precision_bits)
            _, omitted = _asym_sum(a_j, x, k, precision_bits)
            pref = mpmath.sqrt(mpmath.pi) / 2 * x ** mpf("-0.25")
        omitted_mag = abs(pref * mpmath.e ** (-mpf(2) / 3 * x ** mpf("1.5")) * omitted)
        err = abs(num - asym)
        return AsymptoticReport(
            x=float(x),
            terms=k,
            numeric=mpmath.nstr(num, 20),
            asymptotic=mpmath.nstr(asym, 20),
            abs_error=mpmath.nstr(err, 10),
            rel_error=mpmath.nstr(err / abs(num), 10),
            first_omitted=mpmath.nstr(omitted_mag, 10),
            envelope_ok=bool(err <= 2 * omitted_mag),
            prime=prime,
        )
