r"""Closed descendent integrals, the potential F^c, and its consistency checks.

The brackets <tau_{k_1} ... tau_{k_n}>_g are determined by the Virasoro
constraints L_n exp(F^c) = 0 alone.  Extracting the coefficient of a
monomial from the constraint with n = k_max - 1 yields a recursion that
strictly lowers (sum k, multiset) and bottoms out at the inhomogeneous
terms t_0^2/2 (string, forcing <tau_0^3>_0 = 1) and 1/16 (dilaton, forcing
<tau_1>_1 = 1/24).  The genus of a bracket is implied by the dimension
constraint 3g - 3 + n = sum k_i, so brackets are keyed by the exponent
multiset only.

Weighted degree of t_i is 2i + 1 throughout; a genus-g, n-point bracket
contributes a monomial of weighted degree 6g - 6 + 3n.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial

from .named_series import double_factorial, series_calA
from .series import BiPoly, Grading, MultiSeries, PowerSeries, Q, divide_exact


def _genus_of(ks: tuple) -> int | None:
    """Genus implied by the dimension constraint, or None if none exists."""
    n = len(ks)
    g3 = sum(ks) - n + 3
    if g3 < 0 or g3 % 3:
        return None
    g = g3 // 3
    if 2 * g - 2 + n <= 0:
        return None
    return g


@lru_cache(maxsize=None)
def bracket(ks: tuple) -> Fraction:
    """<tau_{k_1} ... tau_{k_n}> at the genus forced by dimension (0 if none).

    >>> bracket((0, 0, 0))
    Fraction(1, 1)
    >>> bracket((1,))
    Fraction(1, 24)
    >>> bracket((4,))
    Fraction(1, 1152)
    """
    ks = tuple(sorted(ks))
    if not ks or _genus_of(ks) is None:
        return Q(0)
    if ks[0] == 0:
        # String equation from L_{-1}: F_{t_0} = sum_i t_i F_{t_{i-1}} + t_0^2/2.
        if ks == (0, 0, 0):
            return Q(1)
        rest = list(ks[1:])
        total = Q(0)
        for j, k in enumerate(rest):
            if k >= 1:
                total += bracket(tuple(rest[:j] + [k - 1] + rest[j + 1 :]))
        return total
    if ks[-1] == 1:
        # Dilaton from L_0: (3/2) F_{t_1} = sum_i ((2i+1)/2) t_i F_{t_i} + 1/16.
        if ks == (1,):
            return Q(2, 3) * Q(1, 16)
        rest = ks[:-1]
        return Q(2, 3) * (sum(rest) + Q(len(rest), 2)) * bracket(rest)
    # DVV recursion from L_n with n = k_max - 1 >= 1.
    n = ks[-1] - 1
    rest = list(ks[:-1])
    m = len(rest)
    total = Q(0)
    for j, k in enumerate(rest):
        c = Q(double_factorial(2 * k + 2 * n + 1), double_factorial(2 * k - 1))
        total += c * bracket(tuple(rest[:j] + [k + n] + rest[j + 1 :]))
    for i in range(n):
        c = Q(double_factorial(2 * i + 1) * double_factorial(2 * n - 2 * i - 1), 2)
        total += c * bracket(tuple(rest + [i, n - 1 - i]))
        for r in range(m + 1):
            for subset in combinations(range(m), r):
                inside = [rest[j] for j in subset]
                outside = [rest[j] for j in range(m) if j not in subset]
                total += c * bracket(tuple([i] + inside)) * bracket(
                    tuple([n - 1 - i] + outside)
                )
    return total / double_factorial(2 * n + 3)


def descendent(g: int, ks) -> Fraction:
    """<tau_{k_1} ... tau_{k_n}>_g with explicit genus (0 off-dimension)."""
    ks = tuple(sorted(ks))
    if 2 * g - 2 + len(ks) <= 0:
        raise ValueError(f"unstable (g, n) = ({g}, {len(ks)})")
    if _genus_of(ks) != g:
        return Q(0)
    return bracket(ks)


def t_grading(degree_max: int) -> Grading:
    """Variables t_0 .. t_K with weights 2i+1, K as large as the degree allows."""
    K = max((degree_max - 1) // 2, 0)
    return Grading(
        [f"t{i}" for i in range(K + 1)], [2 * i + 1 for i in range(K + 1)]
    )


def _monomials_by_degree(num_vars: int, weights, degree_max: int):
    """All exponent tuples with weighted degree <= degree_max."""
    out = [[tuple([0] * num_vars)]]
    for d in range(1, degree_max + 1):
        row = []
        # build monomials of degree d whose smallest used variable index is i
        def rec(i, d_left, exps):
            if d_left == 0:
                row.append(tuple(exps))
                return
            if i >= num_vars or weights[i] > d_left:
                return
            rec(i + 1, d_left, exps)
            exps[i] += 1
            rec(i, d_left - weights[i], exps)
            exps[i] -= 1

        rec(0, d, [0] * num_vars)
        out.append(row)
    return out


def build_Fc(degree_max: int, grading: Grading | None = None) -> MultiSeries:
    """F^c as a MultiSeries to the given weighted degree.

    The coefficient of prod t_a^{m_a} is bracket(ks) / prod m_a!.

    >>> g = t_grading(5)
    >>> build_Fc(5, g).coefficient((3, 0, 0))
    Fraction(1, 6)
    >>> build_Fc(5, g).coefficient((0, 1, 0))
    Fraction(1, 24)
    """
    if grading is None:
        grading = t_grading(degree_max)
    nv = len(grading)
    terms = {}
    for row in _monomials_by_degree(nv, grading.weights, degree_max):
        for exps in row:
            n = sum(exps)
            if n == 0:
                continue
            ks = tuple(
                k for k, e in enumerate(exps) for _ in range(e)
            )
            if _genus_of(ks) is None:
                continue
            val = bracket(ks)
            if val:
                sym = 1
                for e in exps:
                    sym *= factorial(e)
                terms[exps] = val / sym
    return MultiSeries(grading, terms, degree_max)


def apply_L(n: int, series: MultiSeries, s_var: bool = False) -> MultiSeries:
    """Apply the Virasoro operator L_n (or the open modification if s_var).

    L_n = sum_i (2i+2n+1)!!/(2^{n+1}(2i-1)!!) (t_i - delta_{i,1}) d/dt_{i+n}
        + 1/2 sum_{i=0}^{n-1} (2i+1)!!(2n-2i-1)!!/2^{n+1} d^2/dt_i dt_{n-1-i}
        + delta_{n,-1} t_0^2/2 + delta_{n,0}/16.

    With ``s_var`` the operator gains s d^{n+1}/ds^{n+1} + ((3n+3)/4) d^n/ds^n
    and the grading is expected to contain a final variable named "s".

    The returned truncation degree is max_degree - (2n+3) for n >= 0 and
    max_degree - 1 for n = -1: the t-linear and quadratic terms shift the
    weighted degree by exactly -2n, but the dilaton shift -d/dt_{n+1}
    consults input coefficients 2n+3 degrees higher (one degree higher for
    n = -1).
    """
    if n < -1:
        raise ValueError("L_n defined for n >= -1")
    g = series.grading
    names = g.names
    t_names = [nm for nm in names if nm.startswith("t")]
    K = len(t_names) - 1
    D = series.max_degree
    out_deg = D - (2 * n + 3) if n >= 0 else D - 1
    acc = MultiSeries.zero(g, out_deg)
    pow2 = Q(1, 2 ** (n + 1))
    for i in range(0, K + 1):
        if i + n < 0 or i + n > K:
            continue
        c = pow2 * Q(
            double_factorial(2 * i + 2 * n + 1), double_factorial(2 * i - 1)
        )
        d = series.derivative(f"t{i + n}").truncate(out_deg)
        term = MultiSeries.variable(g, f"t{i}", out_deg) * d
        if i == 1:
            term = term - d
        acc = acc + term * c
    for i in range(0, n):
        c = pow2 * Q(
            double_factorial(2 * i + 1) * double_factorial(2 * n - 2 * i - 1), 2
        )
        acc = acc + series.derivative(f"t{i}").derivative(f"t{n - 1 - i}").truncate(
            out_deg
        ) * c
    if n == -1:
        t0 = MultiSeries.variable(g, "t0", out_deg)
        acc = acc + t0 * t0 * series.truncate(out_deg - 2) * Q(1, 2)
    if n == 0:
        acc = acc + series.truncate(out_deg) * Q(1, 16)
    if s_var:
        ds = series
        for _ in range(n + 1):
            ds = ds.derivative("s")
        acc = acc + MultiSeries.variable(g, "s", out_deg) * ds.truncate(out_deg)
        if n >= 0:
            ds = series
            for _ in range(n):
                ds = ds.derivative("s")
            acc = acc + ds.truncate(out_deg) * Q(3 * n + 3, 4)
    return acc.truncate(out_deg)


def kdv_residual(Fc: MultiSeries, which: int) -> MultiSeries:
    """Residual of the first (which=1) or second (which=2) KdV equation for
    u = d^2 F^c / dt_0^2, with x identified with t_0.  Zero up to truncation
    if F^c is correct."""
    u = Fc.derivative("t0").derivative("t0")

    def dx(f, k=1):
        for _ in range(k):
            f = f.derivative("t0")
        return f

    if which == 1:
        res = u.derivative("t1") - u * dx(u) - dx(u, 3) * Q(1, 12)
        return res.truncate(Fc.max_degree - 5)
    if which == 2:
        res = (
            u.derivative("t2")
            - u * u * dx(u) * Q(1, 2)
            - (dx(u) * dx(u, 2) * 2 + u * dx(u, 3)) * Q(1, 12)
            - dx(u, 5) * Q(1, 240)
        )
        return res.truncate(Fc.max_degree - 7)
    raise ValueError("which must be 1 or 2")


def specialize_airy(Fc: MultiSeries, order: int) -> PowerSeries:
    """exp(F^c) at t_i = -(2i-1)!! y^{2i+1} as a series in y = 1/lambda.

    Each monomial lands at y-power equal to its weighted degree, so the
    result is exact through the truncation degree of F^c.
    """
    if order > Fc.max_degree:
        raise IndexError("order exceeds the truncation of F^c")
    deg = Fc.grading.degree
    coeffs = [Q(0)] * (order + 1)
    for exps, c in Fc.terms.items():
        d = deg(exps)
        if d > order:
            continue
        for i, e in enumerate(exps):
            if e:
                c *= (-double_factorial(2 * i - 1)) ** e
        coeffs[d] += c
    return PowerSeries(coeffs, order, var="y").exp()


def _bipoly_exp(f: BiPoly) -> BiPoly:
    if f.coefficient(0, 0) != 0:
        raise ValueError("exp requires zero constant term")
    acc = BiPoly({(0, 0): Q(1)}, f.max_degree)
    term = acc
    for k in range(1, f.max_degree + 1):
        term = term * f * Q(1, k)
        if term.is_zero():
            break
        acc = acc + term
    return acc


def _apply_D(A: PowerSeries) -> PowerSeries:
    """x * D(A) where D = x^3 d/dx + 1/x + x^2/2 (multiplying by x clears the
    pole; the constant term of A/x is handled by the caller's pairing)."""
    order = A.order
    x = PowerSeries.identity(order)
    return (
        (x * x * x * x) * A.derivative().truncate(order)
        + A
        + (x * x * x) * A * Q(1, 2)
    )


def determinant_formula_check(Fc: MultiSeries, N: int, order: int) -> dict:
    """Check the determinant representation of the Airy specialization.

    N=1: exp(F^c)|_{t_i = -(2i-1)!! x^{2i+1}} must equal calA(x) through
    the given order.  N=2: with t_i = -(2i-1)!!(x1^{2i+1} + x2^{2i+1}),
    exp(F^c) must equal [x1 A(x1) E(x2) - x2 A(x2) E(x1)] / (x1 - x2) where
    E = x * (D-operator applied to calA); the division must be exact.
    Returns {"ok": bool, "residual_terms": ...}.
    """
    if N == 1:
        lhs = specialize_airy(Fc, order)
        rhs = series_calA(order)
        diff = lhs - rhs
        return {"ok": diff.is_zero(), "residual_terms": [str(c) for c in diff.coeffs]}
    if N != 2:
        raise ValueError("N must be 1 or 2")
    # Left side as a bivariate polynomial of total degree <= order.
    deg = Fc.grading.degree
    f = BiPoly.zero(order)
    binom_cache = {}
    for exps, c in Fc.terms.items():
        d = deg(exps)
        if d > order:
            continue
        poly = BiPoly({(0, 0): c}, order)
        for i, e in enumerate(exps):
            if not e:
                continue
            w = 2 * i + 1
            key = (w, e)
            if key not in binom_cache:
                base = BiPoly(
                    {(w, 0): -double_factorial(2 * i - 1), (0, w): -double_factorial(2 * i - 1)},
                    order,
                )
                p = BiPoly({(0, 0): Q(1)}, order)
                for _ in range(e):
                    p = p * base
                binom_cache[key] = p
            poly = poly * binom_cache[key]
        f = f + poly
    lhs = _bipoly_exp(f)
    # Right side: antisymmetric numerator divided exactly by x1 - x2.
    A = series_calA(order + 2)
    E = _apply_D(A)
    xA = PowerSeries.identity(order + 2) * A

    def outer(a: PowerSeries, b: PowerSeries, max_degree: int) -> BiPoly:
        terms = {}
        for i, ca in enumerate(a.coeffs):
            if not ca:
                continue
            for j, cb in enumerate(b.coeffs):
                if cb and i + j <= max_degree:
                    terms[(i, j)] = terms.get((i, j), Q(0)) + ca * cb
        return BiPoly(terms, max_degree)

    # num = x1 A(x1) E(x2) - x2 A(x2) E(x1), antisymmetric in (x1, x2).
    num = outer(xA, E, order + 1) - outer(E, xA, order + 1)
    rhs = divide_exact(num, (1, -1))
    diff = lhs - rhs
    return {
        "ok": diff.is_zero(),
        "residual_terms": {str(e): str(c) for e, c in diff.terms.items()},
    }
