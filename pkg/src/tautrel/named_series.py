r"""The named hypergeometric series and their companions.

Everything here is a :class:`~tautrel.series.PowerSeries` with exact rational
coefficients:

- ``series_A``, ``series_B`` -- the basic hypergeometric pair in z, with
  coefficients (6i)!/((3i)!(2i)! 288^i) and the (6i+1)/(6i-1) twist.
- ``series_calA``, ``series_calB`` -- the x-variants A(-x^3) and -B(-x^3)
  (so calB's own sign matches b_j = -(6j+1)/(6j-1) a_j).
- ``series_H0``, ``series_H1`` -- T-variants A(-288 T) and -B(-288 T).
- ``series_D`` -- the correction series with d_n given by a closed sum, and
  the first-order ODE it satisfies.
- ``series_Phi`` -- the q-hypergeometric series at a rational (lambda, z)
  specialization.
- ``bernoulli`` / ``stirling_series`` -- Bernoulli numbers and the Stirling
  log-correction series.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .series import PowerSeries, Q


def double_factorial(n: int) -> int:
    """(2k-1)!! style double factorial; (-1)!! = 1 by convention."""
    if n < -1:
        raise ValueError("double factorial needs n >= -1")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@lru_cache(maxsize=None)
def _a_coeff(i: int) -> Fraction:
    return Q(factorial(6 * i), factorial(3 * i) * factorial(2 * i) * 288**i)


def series_A(order: int) -> PowerSeries:
    """A(z) = sum_i (6i)!/((3i)!(2i)!) (z/288)^i.

    >>> series_A(2).coeffs
    (Fraction(1, 1), Fraction(5, 24), Fraction(385, 1152))
    """
    return PowerSeries([_a_coeff(i) for i in range(order + 1)], order)


def series_B(order: int) -> PowerSeries:
    """B(z): A's coefficients twisted by (6i+1)/(6i-1).

    >>> series_B(1).coeffs
    (Fraction(-1, 1), Fraction(7, 24))
    """
    return PowerSeries(
        [_a_coeff(i) * Q(6 * i + 1, 6 * i - 1) for i in range(order + 1)], order
    )


def a_j(j: int) -> Fraction:
    """Coefficient of x^{3j} in calA: (-1)^j (6j)!/(288^j (2j)! (3j)!)."""
    return (-1) ** j * _a_coeff(j)


def b_j(j: int) -> Fraction:
    """Coefficient of x^{3j} in calB: -(6j+1)/(6j-1) a_j."""
    return -Q(6 * j + 1, 6 * j - 1) * a_j(j)


def _cubed(coeff_fn, order: int) -> PowerSeries:
    coeffs = [Q(0)] * (order + 1)
    for j in range(order // 3 + 1):
        coeffs[3 * j] = coeff_fn(j)
    return PowerSeries(coeffs, order, var="x")


def series_calA(order: int) -> PowerSeries:
    """calA(x) = A(-x^3) = 1 - (5/24)x^3 + (385/1152)x^6 - ..."""
    return _cubed(a_j, order)


def series_calB(order: int) -> PowerSeries:
    """calB(x) = -B(-x^3); starts 1 + (7/24)x^3 + ..."""
    return _cubed(b_j, order)


def series_H0(order: int) -> PowerSeries:
    """H0(T) = A(-288 T) = 1 - 60T + 27720T^2 - ..."""
    return PowerSeries(
        [_a_coeff(i) * (-288) ** i for i in range(order + 1)], order, var="T"
    )


def series_H1(order: int) -> PowerSeries:
    """H1(T) = -B(-288 T) = 1 + 84T - 32760T^2 + ..."""
    return PowerSeries(
        [-_a_coeff(i) * Q(6 * i + 1, 6 * i - 1) * (-288) ** i for i in range(order + 1)],
        order,
        var="T",
    )


def d_coeff(n: int) -> Fraction:
    """d_n = sum_{i=0}^n 3^i |a_{n-i}| prod_{k=1}^i (n + 1/2 - k).

    >>> d_coeff(1)
    Fraction(41, 24)
    """
    total = Q(0)
    for i in range(n + 1):
        prod = Q(1)
        for k in range(1, i + 1):
            prod *= n + Q(1, 2) - k
        total += 3**i * abs(a_j(n - i)) * prod
    return total


def series_D(order: int) -> PowerSeries:
    """D(x) = 1 + sum_{i>=1} d_i x^{3i}."""
    return _cubed(d_coeff, order)


def series_D_ode(order: int) -> PowerSeries:
    """The series solution of (-x^4 d/dx - (3/2)x^3 + 1) D = calA(-x).

    Solved coefficient-by-coefficient: the x^m equation reads
    c_m = rhs_m + (m - 3 + 3/2) c_{m-3}, which determines each c_m from the
    constant term up.
    """
    rhs = series_calA(order).scale_argument(-1)
    c = [Q(0)] * (order + 1)
    for m in range(order + 1):
        c[m] = rhs[m]
        if m >= 3:
            # -x^4 d/dx sends x^{m-3} to -(m-3) x^m; -(3/2)x^3 shifts by 3.
            c[m] += (m - 3 + Q(3, 2)) * c[m - 3]
    return PowerSeries(c, order, var="x")


class SpecializationError(ValueError):
    """A rational specialization hits a vanishing denominator."""


def series_Phi(order_in_q: int, lam: Fraction, z: Fraction) -> PowerSeries:
    """Phi(z, q) at fixed rational (lambda, z): q^d coefficient is
    prod_{i=1}^d 1/((iz - lambda) i z)."""
    lam, z = Q(lam), Q(z)
    coeffs = [Q(1)]
    acc = Q(1)
    for i in range(1, order_in_q + 1):
        den = (i * z - lam) * i * z
        if den == 0:
            raise SpecializationError(
                f"denominator (iz - lambda)iz vanishes at i={i}, lambda={lam}, z={z}"
            )
        acc /= den
        coeffs.append(acc)
    return PowerSeries(coeffs, order_in_q, var="q")


@lru_cache(maxsize=None)
def _bernoulli_list(n: int) -> tuple:
    # x/(e^x - 1) expanded via reciprocal of sum x^k/(k+1)!.
    den = PowerSeries([Q(1, factorial(k + 1)) for k in range(n + 1)], n)
    rec = den.reciprocal()
    return tuple(rec.coeffs[k] * factorial(k) for k in range(n + 1))


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n from x/(e^x - 1); B_1 = -1/2.

    >>> bernoulli(2)
    Fraction(1, 6)
    """
    return _bernoulli_list(n)[n]


def stirling_series(order: int) -> PowerSeries:
    """Stirling correction sum_{i>=1} B_{2i}/(2i(2i-1)) w^{2i-1} in w = z/lambda."""
    coeffs = [Q(0)] * (order + 1)
    for i in range(1, order // 2 + 2):
        k = 2 * i - 1
        if k > order:
            break
        coeffs[k] = bernoulli(2 * i) / (2 * i * (2 * i - 1))
    return PowerSeries(coeffs, order, var="w")
