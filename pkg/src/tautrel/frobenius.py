"""Two-dimensional Frobenius structures and the flatness recursion for R.

Two structures are provided.  The *polynomial* structure has potential
t0^2 t1 / 2 + t1^4 / 72 and metric [[0, 1], [1, 0]]; writing
phi = t1 / 3, the product is e1 * e1 = phi e0.  The *exponential*
structure has potential t0^2 t1 / 2 + lam t0 t1^2 / 2 + lam^2 t1^3 / 6
+ e^{t1} and metric [[0, 1], [1, lam]]; writing q = e^{t1} and
phi = q + lam^2 / 4, the product is e1 * e1 = q e0 + lam e1.  (The
cubic coefficient +lam^2/6 is forced: eta(e1 * e1, e1) = q + lam^2
must equal the third t1-derivative of the potential.)

For the polynomial structure everything is exact in the formal square
root rho = sqrt(phi) with d rho / d t1 = 1 / (6 rho).  The R-matrix is
solved from the flatness equation z dS/dt1 = e1 * S for
S = Psi R e^{u/z} in the canonical frame, where the commutator with
diag(-rho, rho) determines the off-diagonal part of each R_{k+1} and
the diagonal part follows by integration, with integration constants
killed by rho-homogeneity.  In the flat basis the result is the
hypergeometric matrix

    [[ -B^even(w),        -rho   B^odd(w) ],
     [  rho^{-1} A^odd(w),  A^even(w)     ]],     w = z / (6 rho^3),

built from the A and B series of ``named_series``.

Example::

    >>> R = solve_R(spin3_structure(), 2)
    >>> R.entry(1, 0)[1]
    RhoPoly(5/144 rho^-4)
"""

import itertools
import random
from fractions import Fraction
from math import factorial

from .named_series import (
    SpecializationError,
    double_factorial,
    series_A,
    series_B,
    series_Phi,
)
from .series import PowerSeries

__all__ = [
    "CoordPolynomial",
    "FrobeniusData2D",
    "spin3_structure",
    "cp1_structure",
    "canonical_data",
    "RhoPoly",
    "ZRhoSeries",
    "MatrixSeries",
    "solve_R",
    "hypergeometric_r_matrix",
    "airy_flatness_check",
    "cp1_gamma_limit_check",
    "cp1_phi_ode_residual",
    "cp1_phi_ode_check",
    "cp1_leading_limit",
]


# ---------------------------------------------------------------------------
# coordinate polynomials


class CoordPolynomial:
    """Polynomial in t0, t1 and q, where q differentiates to itself in t1.

    Terms map exponent triples (i, j, k) for t0^i t1^j q^k to rationals.

    >>> p = CoordPolynomial({(0, 0, 1): Fraction(1)})
    >>> p.derivative(1) == p
    True
    """

    def __init__(self, terms):
        self.terms = {}
        for e, c in terms.items():
            c = Fraction(c)
            if c:
                self.terms[tuple(e)] = self.terms.get(tuple(e), Fraction(0)) + c
        self.terms = {e: c for e, c in self.terms.items() if c}

    @classmethod
    def constant(cls, c):
        return cls({(0, 0, 0): Fraction(c)})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return CoordPolynomial(out)

    def __sub__(self, other):
        return self + other * Fraction(-1)

    def __mul__(self, other):
        if not isinstance(other, CoordPolynomial):
            c = Fraction(other)
            return CoordPolynomial({e: x * c for e, x in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return CoordPolynomial(out)

    __rmul__ = __mul__

    def derivative(self, var):
        """Partial derivative; var 0 is t0, var 1 is t1 (with dq/dt1 = q)."""
        if var not in (0, 1):
            raise ValueError("var must be 0 or 1")
        out = {}
        for (i, j, k), c in self.terms.items():
            if var == 0:
                if i:
                    e = (i - 1, j, k)
                    out[e] = out.get(e, Fraction(0)) + c * i
            else:
                if j:
                    e = (i, j - 1, k)
                    out[e] = out.get(e, Fraction(0)) + c * j
                if k:
                    e = (i, j, k)
                    out[e] = out.get(e, Fraction(0)) + c * k
        return CoordPolynomial(out)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, CoordPolynomial) and self.terms == other.terms

    def __repr__(self):
        return "CoordPolynomial(%r)" % (self.terms,)


# ---------------------------------------------------------------------------
# Frobenius data


class FrobeniusData2D:
    """Metric and quantum product of a 2-dimensional Frobenius structure.

    ``eta`` is a symmetric 2x2 rational matrix, ``potential`` a
    CoordPolynomial, and ``c1`` the 2x2 matrix (of CoordPolynomial
    entries) of multiplication by e1 in the basis (e0, e1); e0 is the
    unit, so multiplication by e0 is the identity.
    """

    def __init__(self, name, eta, potential, c1, lam=None):
        self.name = name
        self.eta = tuple(tuple(Fraction(x) for x in row) for row in eta)
        if self.eta[0][1] != self.eta[1][0]:
            raise ValueError("eta must be symmetric")
        if self.eta[0][0] * self.eta[1][1] == self.eta[0][1] * self.eta[1][0]:
            raise ValueError("eta must be nondegenerate")
        self.potential = potential
        self.c1 = tuple(tuple(row) for row in c1)
        self.lam = None if lam is None else Fraction(lam)

    def eta_inverse(self):
        (a, b), (_, d) = self.eta[0], (self.eta[1][0], self.eta[1][1])
        det = a * d - b * b
        return ((d / det, -b / det), (-b / det, a / det))

    def product_matrix_from_potential(self, a):
        """Multiplication by e_a derived from third potential derivatives.

        Returns the 2x2 matrix with entries c^nu_b = eta^{nu c} Phi_{a b c}
        as CoordPolynomials.
        """
        third = {}
        for b, c in itertools.product((0, 1), repeat=2):
            third[(b, c)] = (
                self.potential.derivative(a).derivative(b).derivative(c)
            )
        inv = self.eta_inverse()
        out = [[None, None], [None, None]]
        for nu in (0, 1):
            for b in (0, 1):
                acc = CoordPolynomial({})
                for c in (0, 1):
                    acc = acc + third[(b, c)] * inv[nu][c]
                out[nu][b] = acc
        return tuple(tuple(row) for row in out)

    def product_consistency(self):
        """True iff the stored c1 table matches the potential and e0 is
        the unit."""
        derived = self.product_matrix_from_potential(1)
        if derived != self.c1:
            return False
        ident = self.product_matrix_from_potential(0)
        one = CoordPolynomial.constant(1)
        zero = CoordPolynomial({})
        return ident == ((one, zero), (zero, one))

    def associativity_check(self):
        """(e1*e1)*e1 == e1*(e1*e1), checked on the c1 matrix."""
        # e1*e1 = alpha e0 + beta e1 reads off the second column of c1.
        alpha, beta = self.c1[0][1], self.c1[1][1]
        lhs = _mat_mul(self.c1, self.c1)
        one = CoordPolynomial.constant(1)
        zero = CoordPolynomial({})
        ident = ((one, zero), (zero, one))
        rhs = _mat_add(_mat_scale(ident, alpha), _mat_scale(self.c1, beta))
        return lhs == rhs


def _mat_mul(A, B):
    return tuple(
        tuple(
            A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in (0, 1)
        )
        for i in (0, 1)
    )


def _mat_add(A, B):
    return tuple(tuple(A[i][j] + B[i][j] for j in (0, 1)) for i in (0, 1))


def _mat_scale(A, s):
    return tuple(tuple(A[i][j] * s for j in (0, 1)) for i in (0, 1))


def spin3_structure():
    """The polynomial structure: potential t0^2 t1/2 + t1^4/72.

    >>> spin3_structure().product_consistency()
    True
    """
    potential = CoordPolynomial(
        {(2, 1, 0): Fraction(1, 2), (0, 4, 0): Fraction(1, 72)}
    )
    phi = CoordPolynomial({(0, 1, 0): Fraction(1, 3)})
    zero = CoordPolynomial({})
    one = CoordPolynomial.constant(1)
    c1 = ((zero, phi), (one, zero))
    return FrobeniusData2D("3spin", ((0, 1), (1, 0)), potential, c1)


def cp1_structure(lam):
    """The exponential structure at rational parameter lam.

    Potential t0^2 t1/2 + lam t0 t1^2/2 + lam^2 t1^3/6 + q with
    q = e^{t1}; the product is e1*e1 = q e0 + lam e1.

    >>> cp1_structure(Fraction(2)).product_consistency()
    True
    """
    lam = Fraction(lam)
    potential = CoordPolynomial(
        {
            (2, 1, 0): Fraction(1, 2),
            (1, 2, 0): lam / 2,
            (0, 3, 0): lam * lam / 6,
            (0, 0, 1): Fraction(1),
        }
    )
    q = CoordPolynomial({(0, 0, 1): Fraction(1)})
    zero = CoordPolynomial({})
    one = CoordPolynomial.constant(1)
    c1 = ((zero, q), (one, CoordPolynomial.constant(lam)))
    return FrobeniusData2D("cp1", ((0, 1), (1, lam)), potential, c1, lam=lam)


# ---------------------------------------------------------------------------
# canonical data


class SqrtExt:
    """Element a + b*r of a quadratic extension with r^2 = square.

    >>> r = SqrtExt(0, 1, Fraction(2))
    >>> (r * r).a
    Fraction(2, 1)
    """

    def __init__(self, a, b, square):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.square = Fraction(square)

    def __add__(self, other):
        other = self._coerce(other)
        return SqrtExt(self.a + other.a, self.b + other.b, self.square)

    __radd__ = __add__

    def __sub__(self, other):
        return self + self._coerce(other) * -1

    def __mul__(self, other):
        if not isinstance(other, SqrtExt):
            c = Fraction(other)
            return SqrtExt(self.a * c, self.b * c, self.square)
        return SqrtExt(
            self.a * other.a + self.b * other.b * self.square,
            self.a * other.b + self.b * other.a,
            self.square,
        )

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, SqrtExt):
            return other
        return SqrtExt(Fraction(other), 0, self.square)

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        other = self._coerce(other)
        return (self.a, self.b, self.square) == (other.a, other.b, other.square)

    def __repr__(self):
        return "SqrtExt(%s + %s r, r^2=%s)" % (self.a, self.b, self.square)


def canonical_data(data, q=None):
    """Canonical-coordinate data at a semisimple point.

    For the polynomial structure the computation is symbolic in
    rho = sqrt(phi); for the exponential structure a rational value of
    q = e^{t1} must be supplied and sqrt(phi) is a formal quadratic
    irrationality.  Returns a dict with the eigenvalues of
    multiplication by e1 (the t1-derivatives of the canonical
    coordinates), the normalizations Delta of the idempotent
    directions, and the Gram matrix of the normalized idempotents
    (always the identity).

    >>> canonical_data(spin3_structure())["delta"][0]
    RhoPoly(-2 rho)
    """
    if data.name == "3spin":
        # Eigenvectors of [[0, phi], [1, 0]] for eigenvalues -rho, +rho:
        # v_pm = (mp rho, 1).
        vs = [
            (RhoPoly({1: Fraction(-1)}), RhoPoly({0: Fraction(1)})),
            (RhoPoly({1: Fraction(1)}), RhoPoly({0: Fraction(1)})),
        ]
        eigen = (RhoPoly({1: Fraction(-1)}), RhoPoly({1: Fraction(1)}))

        def pair(v, w):
            # eta = [[0, 1], [1, 0]]
            return v[0] * w[1] + v[1] * w[0]

        delta = (pair(vs[0], vs[0]), pair(vs[1], vs[1]))
        cross = pair(vs[0], vs[1])
        u_desc = ("-2 rho^3 + t0", "2 rho^3 + t0")
    elif data.name == "cp1":
        if q is None:
            raise ValueError("the exponential structure needs a rational q")
        lam = data.lam
        phi = Fraction(q) + lam * lam / 4
        if phi == 0:
            raise ValueError("non-semisimple point: phi = 0")
        r = SqrtExt(0, 1, phi)
        # Eigenvalues lam/2 +- sqrt(phi); eigenvectors (-lam/2 +- sqrt(phi), 1).
        eigen = (lam / 2 + r, (r * -1) + lam / 2)
        vs = [
            (r + (-lam / 2), SqrtExt(1, 0, phi)),
            ((r * -1) + (-lam / 2), SqrtExt(1, 0, phi)),
        ]

        def pair(v, w):
            # eta = [[0, 1], [1, lam]]
            return v[0] * w[1] + v[1] * w[0] + v[1] * w[1] * lam

        delta = (pair(vs[0], vs[0]), pair(vs[1], vs[1]))
        cross = pair(vs[0], vs[1])
        u_desc = (
            "2 sqrt(phi) + lam log(-lam/2 + sqrt(phi)) + t0",
            "-2 sqrt(phi) + lam log(-lam/2 - sqrt(phi)) + t0",
        )
    else:
        raise ValueError("unknown structure %r" % (data.name,))

    if not cross.is_zero():
        raise ValueError("idempotent directions are not eta-orthogonal")
    # Gram matrix of v_i / sqrt(Delta_i): diagonal entries Delta_i/Delta_i,
    # off-diagonal 0 since the unnormalized pairing vanished.
    gram = ((1, 0), (0, 1))
    return {
        "model": data.name,
        "eigenvalues": eigen,
        "delta": delta,
        "gram": gram,
        "u": u_desc,
    }


# ---------------------------------------------------------------------------
# Laurent polynomials in rho and series in z


class RhoPoly:
    """Laurent polynomial in rho = sqrt(phi) with d rho/d t1 = 1/(6 rho).

    Terms map integer rho-exponents (possibly negative) to rationals.

    >>> RhoPoly({1: Fraction(1)}).t1_derivative()
    RhoPoly(1/6 rho^-1)
    """

    def __init__(self, terms):
        self.terms = {}
        for m, c in terms.items():
            c = Fraction(c)
            if c:
                self.terms[int(m)] = self.terms.get(int(m), Fraction(0)) + c
        self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def constant(cls, c):
        return cls({0: Fraction(c)})

    def coefficient(self, m):
        return self.terms.get(m, Fraction(0))

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return RhoPoly(out)

    def __sub__(self, other):
        return self + other * Fraction(-1)

    def __mul__(self, other):
        if not isinstance(other, RhoPoly):
            c = Fraction(other)
            return RhoPoly({m: x * c for m, x in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out[m1 + m2] = out.get(m1 + m2, Fraction(0)) + c1 * c2
        return RhoPoly(out)

    __rmul__ = __mul__

    def shift(self, m):
        """Multiply by rho^m."""
        return RhoPoly({k + m: c for k, c in self.terms.items()})

    def t1_derivative(self):
        # d(rho^m)/dt1 = (m/6) rho^{m-2}
        return RhoPoly(
            {m - 2: c * Fraction(m, 6) for m, c in self.terms.items()}
        )

    def t1_antiderivative(self):
        """The rho-homogeneous antiderivative: rho^m -> 6 rho^{m+2}/(m+2).

        >>> RhoPoly({-5: Fraction(1)}).t1_antiderivative()
        RhoPoly(-2 rho^-3)
        """
        out = {}
        for m, c in self.terms.items():
            if m == -2:
                raise ValueError("rho^-2 has no homogeneous antiderivative")
            out[m + 2] = c * Fraction(6, m + 2)
        return RhoPoly(out)

    def __eq__(self, other):
        return isinstance(other, RhoPoly) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "RhoPoly(0)"
        bits = []
        for m, c in sorted(self.terms.items()):
            if m == 0:
                bits.append(str(c))
            elif m == 1:
                bits.append("%s rho" % c)
            else:
                bits.append("%s rho^%d" % (c, m))
        return "RhoPoly(%s)" % " + ".join(bits)

    def to_json(self):
        return {"rho^%d" % m: str(c) for m, c in sorted(self.terms.items())}


class ZRhoSeries:
    """Truncated series in z with RhoPoly coefficients.

    >>> s = ZRhoSeries([RhoPoly.constant(1), RhoPoly({-3: Fraction(1, 6)})], 1)
    >>> s[1]
    RhoPoly(1/6 rho^-3)
    """

    def __init__(self, coeffs, order):
        coeffs = list(coeffs)
        if len(coeffs) < order + 1:
            coeffs += [RhoPoly({})] * (order + 1 - len(coeffs))
        self.coeffs = coeffs[: order + 1]
        self.order = order

    @classmethod
    def zero(cls, order):
        return cls([], order)

    def __getitem__(self, k):
        if 0 <= k <= self.order:
            return self.coeffs[k]
        return RhoPoly({})

    def __add__(self, other):
        order = min(self.order, other.order)
        return ZRhoSeries(
            [self[k] + other[k] for k in range(order + 1)], order
        )

    def __sub__(self, other):
        order = min(self.order, other.order)
        return ZRhoSeries(
            [self[k] - other[k] for k in range(order + 1)], order
        )

    def scale(self, rho_poly):
        """Multiply every coefficient by a RhoPoly (or rational)."""
        if not isinstance(rho_poly, RhoPoly):
            rho_poly = RhoPoly.constant(rho_poly)
        return ZRhoSeries([c * rho_poly for c in self.coeffs], self.order)

    def z_shift(self):
        """Multiply by z (truncating at the order)."""
        return ZRhoSeries([RhoPoly({})] + self.coeffs, self.order)

    def t1_derivative(self):
        return ZRhoSeries([c.t1_derivative() for c in self.coeffs], self.order)

    def truncate(self, order):
        return ZRhoSeries(self.coeffs, min(order, self.order))

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, ZRhoSeries)
            and self.order == other.order
            and all(self[k] == other[k] for k in range(self.order + 1))
        )

    def __repr__(self):
        return "ZRhoSeries(%r, order=%d)" % (self.coeffs, self.order)

    def to_json(self):
        return [c.to_json() for c in self.coeffs]


class MatrixSeries:
    """A 2x2 matrix of ZRhoSeries with identity constant term."""

    def __init__(self, entries, order):
        self.entries = tuple(tuple(row) for row in entries)
        self.order = order
        ident = (
            (RhoPoly.constant(1), RhoPoly({})),
            (RhoPoly({}), RhoPoly.constant(1)),
        )
        for i in (0, 1):
            for j in (0, 1):
                if self.entries[i][j][0] != ident[i][j]:
                    raise ValueError("constant term must be the identity")

    def entry(self, i, j):
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, MatrixSeries)
            and self.order == other.order
            and self.entries == other.entries
        )

    def to_json(self):
        return {
            "order": self.order,
            "entries": {
                "%d%d" % (i, j): self.entries[i][j].to_json()
                for i in (0, 1)
                for j in (0, 1)
            },
        }


# ---------------------------------------------------------------------------
# the flatness recursion


def _canonical_components(order):
    """Components (a, beta, gamma, d) of R in the canonical frame.

    R_k = [[a_k, i beta_k], [i gamma_k, d_k]] with real RhoPoly entries;
    the off-diagonal parts are determined by the commutator with
    diag(-rho, rho) and the diagonal parts by integration:

        beta_{k+1}  = (d_k / (12 rho^2) - beta_k') / (2 rho)
        gamma_{k+1} = (a_k / (12 rho^2) + gamma_k') / (2 rho)
        a_{k+1}' = -gamma_{k+1} / (12 rho^2),
        d_{k+1}' = +beta_{k+1} / (12 rho^2),

    with integration constants killed by rho-homogeneity.
    """
    twelfth = RhoPoly({-2: Fraction(1, 12)})
    half_inv_rho = RhoPoly({-1: Fraction(1, 2)})
    a = [RhoPoly.constant(1)]
    beta = [RhoPoly({})]
    gamma = [RhoPoly({})]
    d = [RhoPoly.constant(1)]
    for k in range(order):
        b_next = (d[k] * twelfth - beta[k].t1_derivative()) * half_inv_rho
        g_next = (a[k] * twelfth + gamma[k].t1_derivative()) * half_inv_rho
        beta.append(b_next)
        gamma.append(g_next)
        a.append((g_next * twelfth * Fraction(-1)).t1_antiderivative())
        d.append((b_next * twelfth).t1_antiderivative())
    return a, beta, gamma, d


def solve_R(data, order):
    """The R-matrix in the flat basis, solved from the flatness equation.

    Implemented for the polynomial structure (the exponential structure
    is covered only by its leading-order limit, ``cp1_leading_limit``).

    >>> R = solve_R(spin3_structure(), 1)
    >>> R.entry(0, 1)[1]
    RhoPoly(-7/144 rho^-2)
    """
    if data.name != "3spin":
        raise ValueError(
            "the flatness recursion is implemented for the polynomial "
            "structure only"
        )
    if order < 1:
        raise ValueError("order must be at least 1")
    a, beta, gamma, d = _canonical_components(order)
    half = Fraction(1, 2)
    e00, e01, e10, e11 = [], [], [], []
    for k in range(order + 1):
        s, diff = a[k] + d[k], d[k] - a[k]
        cross = beta[k] + gamma[k]
        e00.append((s + (gamma[k] - beta[k])) * half)
        e01.append(((diff - cross) * half).shift(1))
        e10.append(((diff + cross) * half).shift(-1))
        e11.append((s + (beta[k] - gamma[k])) * half)
    return MatrixSeries(
        (
            (ZRhoSeries(e00, order), ZRhoSeries(e01, order)),
            (ZRhoSeries(e10, order), ZRhoSeries(e11, order)),
        ),
        order,
    )


def hypergeometric_r_matrix(order):
    """The closed-form R-matrix built from the A and B series.

    Entry-wise, with w = z / (6 rho^3):

        (0,0) = -B^even(w)            (0,1) = -rho B^odd(w)
        (1,0) = rho^{-1} A^odd(w)     (1,1) =  A^even(w)

    ``solve_R`` reproduces this matrix exactly.
    """
    A = series_A(order)
    B = series_B(order)
    e00, e01, e10, e11 = [], [], [], []
    for k in range(order + 1):
        scale = Fraction(1, 6**k)
        if k % 2 == 0:
            e00.append(RhoPoly({-3 * k: -B[k] * scale}))
            e11.append(RhoPoly({-3 * k: A[k] * scale}))
            e01.append(RhoPoly({}))
            e10.append(RhoPoly({}))
        else:
            e01.append(RhoPoly({1 - 3 * k: -B[k] * scale}))
            e10.append(RhoPoly({-1 - 3 * k: A[k] * scale}))
            e00.append(RhoPoly({}))
            e11.append(RhoPoly({}))
    return MatrixSeries(
        (
            (ZRhoSeries(e00, order), ZRhoSeries(e01, order)),
            (ZRhoSeries(e10, order), ZRhoSeries(e11, order)),
        ),
        order,
    )


def _reduced_operator(g, branch, include_exponential):
    """z(g' - g/(12 rho^2)) - branch*rho*g, the flatness operator on the
    reduced solution columns (the last term records the e^{u/z} factor;
    dropping it is the negative control)."""
    twelfth = RhoPoly({-2: Fraction(1, 12)})
    out = (g.t1_derivative() - g.scale(twelfth)).z_shift()
    if include_exponential:
        out = out - g.scale(RhoPoly({1: Fraction(branch)}))
    return out


def airy_flatness_check(order, branch=1, include_exponential=True):
    """Residuals of the flatness system for S = Psi R e^{u/z}.

    The solution column for the given branch (+1 or -1) reduces, after
    stripping 1/sqrt(Delta) and e^{u/z}, to G = R_flat . (-branch*rho, 1).
    Returned residuals (all ZRhoSeries, identically zero when
    ``include_exponential`` is true):

    - "t0_0", "t0_1": z dS/dt0 - S for each component,
    - "t1_1": z dS/dt1 - (e1 * S), component 1 (reduces to D G^1 - G^0),
    - "t1_0": component 0 (reduces to D G^0 - rho^2 G^1),
    - "second_order": (z d/dt1)^2 S^1 - phi S^1 (reduces to
      D D G^1 - rho^2 G^1).
    """
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    if order < 2:
        raise ValueError("order must be at least 2")
    R = solve_R(spin3_structure(), order)
    minus_rho = RhoPoly({1: Fraction(-branch)})
    one = RhoPoly.constant(1)
    g0 = R.entry(0, 0).scale(minus_rho) + R.entry(0, 1).scale(one)
    g1 = R.entry(1, 0).scale(minus_rho) + R.entry(1, 1).scale(one)
    rho_sq = RhoPoly({2: Fraction(1)})

    def op(g):
        return _reduced_operator(g, branch, include_exponential)

    # z dS/dt0 = S reduces to (du/dt0) G = G with the exponential factor
    # present, and to 0 = G without it.
    t0_factor = Fraction(0) if include_exponential else Fraction(-1)
    return {
        "t0_0": g0.scale(t0_factor),
        "t0_1": g1.scale(t0_factor),
        "t1_1": op(g1) - g0,
        "t1_0": op(g0) - g1.scale(rho_sq),
        "second_order": op(op(g1)) - g1.scale(rho_sq),
    }


# ---------------------------------------------------------------------------
# exponential-structure checks


def cp1_phi_ode_residual(order, lam, z):
    """Residual of (z q d/dq)^2 Phi - lam (z q d/dq) Phi - q Phi.

    Exact through q^order; identically zero for the hypergeometric
    series Phi.

    >>> cp1_phi_ode_residual(6, Fraction(3), Fraction(1, 7)).is_zero()
    True
    """
    lam, z = Fraction(lam), Fraction(z)
    phi = series_Phi(order, lam, z)
    coeffs = []
    for dd in range(order + 1):
        euler = z * dd
        val = phi[dd] * euler * (euler - lam)
        if dd >= 1:
            val -= phi[dd - 1]
        coeffs.append(val)
    return PowerSeries(coeffs, order, var="q")


def _sample_rational(rng):
    num = rng.randint(-40, 40)
    den = rng.randint(1, 12)
    return Fraction(num, den)


def cp1_phi_ode_check(order=15, trials=5, seed=0):
    """Check the second-order ODE for Phi at random rational (lam, z).

    Returns a report dict with the seed, the sampled points, and a
    boolean "ok".
    """
    rng = random.Random(seed)
    samples = []
    while len(samples) < trials:
        lam, z = _sample_rational(rng), _sample_rational(rng)
        try:
            residual = cp1_phi_ode_residual(order, lam, z)
        except SpecializationError:
            continue
        samples.append(
            {"lam": str(lam), "z": str(z), "residual_zero": residual.is_zero()}
        )
    return {
        "seed": seed,
        "order": order,
        "samples": samples,
        "ok": all(s["residual_zero"] for s in samples),
    }


def cp1_gamma_limit_check(shift=-1, trials=5, seed=0):
    """The q -> 0 limit identity for the first q-derivative of Phi.

    The identity states that shifting the Gamma-function argument by
    ``shift`` and the power of (-z) by the same amount multiplies the
    limit by 1/(z(z - lam)):

        (-z)^shift * (1/z) * Gamma(x + shift)/Gamma(x) = 1/(z(z - lam)),

    at x = lam/z, where the Gamma-ratio is evaluated exactly through the
    functional equation Gamma(x) = (x - 1) Gamma(x - 1).  It holds for
    shift = -1 and fails for other shifts (the negative control).  The
    matching boundary value d Phi/d q (z, 0) = 1/((z - lam) z) is
    checked alongside.

    >>> cp1_gamma_limit_check()
    True
    >>> cp1_gamma_limit_check(shift=1)
    False
    """
    rng = random.Random(seed)
    done = 0
    while done < trials:
        lam, z = _sample_rational(rng), _sample_rational(rng)
        if z == 0 or lam == z or lam == 0:
            continue
        x = lam / z
        if shift == -1:
            if x == 1:
                continue
            ratio = 1 / (x - 1)
        elif shift == 1:
            ratio = x
        else:
            raise ValueError("shift must be -1 or +1")
        lhs = Fraction(-1, 1) ** shift * z**shift / z * ratio
        rhs = 1 / (z * (z - lam))
        if lhs != rhs:
            return False
        try:
            phi = series_Phi(1, lam, z)
        except SpecializationError:
            continue
        if phi[1] != 1 / ((z - lam) * z):
            return False
        done += 1
    return True


def cp1_leading_limit(order):
    """Leading coefficients of the saddle-point expansion of the
    exponential structure's solution integrals.

    Keeping only the cubic term of the expanded exponent and evaluating
    the Gaussian moments <x^{2k}> = (2k-1)!! gives the series

        sum_j (6j-1)!! / (36^j (2j)!) y^j

    in the scaling variable y; this equals the A series exactly.

    >>> cp1_leading_limit(1)[1]
    Fraction(5, 24)
    """
    coeffs = [
        Fraction(double_factorial(6 * j - 1), 36**j * factorial(2 * j))
        for j in range(order + 1)
    ]
    return PowerSeries(coeffs, order, var="y")
