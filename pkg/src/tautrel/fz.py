"""Kappa-class relations extracted from a two-row hypergeometric series.

The generating object is

    Psi(t, p) = (1 + t p_3 + t^2 p_6 + ...) * sum_i (6i)!/((3i)!(2i)!) t^i
              + (p_1 + t p_4 + t^2 p_7 + ...) * sum_i (6i)!/((3i)!(2i)!)
                                                 * (6i+1)/(6i-1) t^i

in a variable t and variables p_j indexed by positive integers j not
congruent to 2 mod 3.  Writing

    log(Psi) = sum_{sigma, r} C_r(sigma) t^r p^sigma,

the class gamma = sum C_r(sigma) kappa_r t^r p^sigma gives, for each
admissible triple (g, r, sigma), the kappa-polynomial relation

    [exp(-gamma)]_{t^r p^sigma} = 0,

valid when g - 1 + |sigma| < 3r and g = r + |sigma| + 1 (mod 2).  Here
sigma is a partition avoiding parts congruent to 2 mod 3, and kappa_0
is substituted by the scalar 2g - 2.

Example::

    >>> fz_constants(1, ())
    Fraction(60, 1)
    >>> sorted(fz_relation(3, 2, ()).terms.items())
    [((0, 1), Fraction(-25920, 1)), ((2,), Fraction(1800, 1))]
"""

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .series import Grading, MultiSeries

__all__ = [
    "NotARelationError",
    "KappaPolynomial",
    "normalize_partition",
    "build_psi",
    "fz_constants",
    "fz_relation",
]


class NotARelationError(ValueError):
    """Raised when (g, r, sigma) fails an admissibility condition."""


def normalize_partition(sigma):
    """Validate and sort a partition avoiding parts congruent to 2 mod 3.

    >>> normalize_partition([4, 1, 3])
    (1, 3, 4)
    """
    parts = tuple(sorted(sigma))
    for part in parts:
        if part <= 0 or part % 3 == 2:
            raise ValueError("parts must be positive and not 2 mod 3: %r" % (part,))
    return parts


def _row_coeff(i):
    # (6i)! / ((3i)! (2i)!)
    return Fraction(factorial(6 * i), factorial(3 * i) * factorial(2 * i))


def _p_indices(p_weight_max):
    return [j for j in range(1, p_weight_max + 1) if j % 3 != 2]


def _psi_grading(t_order, p_weight_max):
    names = ["t"] + ["p%d" % j for j in _p_indices(p_weight_max)]
    weights = [1] + _p_indices(p_weight_max)
    return Grading(names, weights)


def build_psi(t_order, p_weight_max):
    """The two-row series Psi as a multivariate series in t and the p_j.

    Monomials are kept when the t-degree is at most ``t_order`` and the
    p-weight (weight of p_j is j) is at most ``p_weight_max``.

    >>> psi = build_psi(2, 1)
    >>> psi.constant_term()
    Fraction(1, 1)
    >>> psi.coefficient((1, 0))
    Fraction(60, 1)
    >>> psi.coefficient((0, 1))
    Fraction(-1, 1)
    """
    if t_order < 0 or p_weight_max < 0:
        raise ValueError("orders must be nonnegative")
    g = _psi_grading(t_order, p_weight_max)
    nv = len(g)
    terms = {}

    def add(t_pow, p_name, coeff):
        e = [0] * nv
        e[0] = t_pow
        if p_name is not None:
            e[g.index[p_name]] = 1
        key = tuple(e)
        terms[key] = terms.get(key, Fraction(0)) + coeff

    for i in range(t_order + 1):
        row1 = _row_coeff(i)
        row2 = row1 * Fraction(6 * i + 1, 6 * i - 1)
        add(i, None, row1)
        for k in range(1, (t_order - i) + 1):
            if 3 * k <= p_weight_max:
                add(i + k, "p%d" % (3 * k), row1)
        for k in range(1, (t_order - i + 1) + 1):
            if 3 * k - 2 <= p_weight_max:
                add(i + k - 1, "p%d" % (3 * k - 2), row2)
    return MultiSeries(g, terms, t_order + p_weight_max)


@lru_cache(maxsize=None)
def _log_psi(t_order, p_weight_max):
    return build_psi(t_order, p_weight_max).log()


def fz_constants(r, sigma):
    """Coefficient C_r(sigma) of t^r p^sigma in log Psi.

    >>> fz_constants(0, ())
    Fraction(0, 1)
    >>> fz_constants(0, (1,))
    Fraction(-1, 1)
    """
    sigma = normalize_partition(sigma)
    if r < 0:
        raise ValueError("r must be nonnegative")
    weight = sum(sigma)
    lp = _log_psi(r, weight)
    e = [0] * len(lp.grading)
    e[0] = r
    for part in sigma:
        e[lp.grading.index["p%d" % part]] += 1
    return lp.coefficient(tuple(e))


class KappaPolynomial:
    """A sparse polynomial in kappa_1, kappa_2, ...

    Terms map exponent tuples (e_1, e_2, ...) to rationals; the graded
    degree of a term is sum a * e_a.  kappa_0 never appears: it is a
    scalar and is absorbed into the coefficients.
    """

    def __init__(self, terms):
        self.terms = {}
        for e, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            e = tuple(e)
            while e and e[-1] == 0:
                e = e[:-1]
            self.terms[e] = self.terms.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in self.terms.items() if c != 0}

    @staticmethod
    def term_degree(e):
        return sum((a + 1) * x for a, x in enumerate(e))

    def graded_degrees(self):
        return sorted({self.term_degree(e) for e in self.terms})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, KappaPolynomial):
            other = KappaPolynomial({(): Fraction(other)})
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return KappaPolynomial(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if not isinstance(other, KappaPolynomial):
            c = Fraction(other)
            return KappaPolynomial({e: x * c for e, x in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                m = max(len(e1), len(e2))
                a = e1 + (0,) * (m - len(e1))
                b = e2 + (0,) * (m - len(e2))
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return KappaPolynomial(out)

    __rmul__ = __mul__

    def truncate(self, degree_max):
        return KappaPolynomial(
            {e: c for e, c in self.terms.items() if self.term_degree(e) <= degree_max}
        )

    def exp(self, degree_max):
        """exp of a polynomial with zero constant term, graded-truncated.

        >>> p = KappaPolynomial({(1,): Fraction(1)})
        >>> sorted(p.exp(2).terms.items())
        [((), Fraction(1, 1)), ((1,), Fraction(1, 1)), ((2,), Fraction(1, 2))]
        """
        if () in self.terms:
            raise ValueError("exp requires zero constant term")
        body = self.truncate(degree_max)
        acc = KappaPolynomial({(): Fraction(1)})
        power = KappaPolynomial({(): Fraction(1)})
        fact = 1
        for m in range(1, degree_max + 1):
            power = (power * body).truncate(degree_max)
            if power.is_zero():
                break
            fact *= m
            acc = acc + power * Fraction(1, fact)
        return acc

    def coefficient(self, e):
        e = tuple(e)
        while e and e[-1] == 0:
            e = e[:-1]
        return self.terms.get(e, Fraction(0))

    def __eq__(self, other):
        return isinstance(other, KappaPolynomial) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "KappaPolynomial(0)"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                "k%d^%d" % (a + 1, x) if x > 1 else "k%d" % (a + 1)
                for a, x in enumerate(e)
                if x
            )
            bits.append("%s*%s" % (c, mono) if mono else str(c))
        return "KappaPolynomial(%s)" % " + ".join(bits)

    def to_json(self):
        return {
            "*".join("k%d^%d" % (a + 1, x) for a, x in enumerate(e) if x) or "1": str(c)
            for e, c in sorted(self.terms.items())
        }


def fz_relation(g, r, sigma):
    """The kappa-polynomial relation [exp(-gamma)]_{t^r p^sigma}.

    Admissibility requires g - 1 + |sigma| < 3r (strict) and
    g = r + |sigma| + 1 (mod 2); violations raise NotARelationError
    naming the failed condition.

    >>> rel = fz_relation(3, 2, ())
    >>> rel.graded_degrees()
    [2]
    """
    sigma = normalize_partition(sigma)
    weight = sum(sigma)
    if not g - 1 + weight < 3 * r:
        raise NotARelationError(
            "validity: g-1+|sigma| < 3r fails (%d < %d)" % (g - 1 + weight, 3 * r)
        )
    if (g - (r + weight + 1)) % 2 != 0:
        raise NotARelationError(
            "validity: g = r+|sigma|+1 (mod 2) fails (g=%d, r+|sigma|+1=%d)"
            % (g, r + weight + 1)
        )

    # gamma as a series in kappa_1..kappa_r and the p_j appearing in
    # sigma; kappa_a carries weight a so the t-power is the kappa-degree.
    kappa_names = ["k%d" % a for a in range(1, r + 1)]
    kappa_weights = list(range(1, r + 1))
    p_parts = sorted(set(sigma))
    p_names = ["p%d" % j for j in p_parts]
    p_weights = list(p_parts)
    grading = Grading(kappa_names + p_names, kappa_weights + p_weights)
    nv = len(grading)
    cap = r + weight

    gamma_terms = {}
    for rp in range(r + 1):
        for sub in _sub_multisets(sigma):
            if rp == 0 and not sub:
                continue
            c = fz_constants(rp, sub)
            if rp == 0:
                c *= 2 * g - 2  # kappa_0 is the scalar 2g-2
            if c == 0:
                continue
            e = [0] * nv
            if rp > 0:
                e[grading.index["k%d" % rp]] = 1
            for part in sub:
                e[grading.index["p%d" % part]] += 1
            key = tuple(e)
            gamma_terms[key] = gamma_terms.get(key, Fraction(0)) + c
    gamma = MultiSeries(grading, gamma_terms, cap)
    E = (gamma * Fraction(-1)).exp()

    target_p = tuple(sigma.count(j) for j in p_parts)
    out = {}
    for e, c in E.terms.items():
        if tuple(e[r:]) != target_p:
            continue
        kexp = tuple(e[:r])
        if KappaPolynomial.term_degree(kexp) != r:
            continue
        out[kexp] = c
    return KappaPolynomial(out)


def _sub_multisets(sigma):
    """All sub-multisets of a sorted partition tuple, each sorted."""
    if not sigma:
        return [()]
    parts = sorted(set(sigma))
    out = [()]
    for j in parts:
        n = sigma.count(j)
        out = [base + (j,) * k for base in out for k in range(n + 1)]
    return [tuple(sorted(s)) for s in out]
