r"""Exact truncated series arithmetic over the rationals.

Three containers cover everything the higher-level modules need:

- :class:`PowerSeries` -- dense univariate series truncated at an explicit
  order (inclusive).
- :class:`LaurentSeries` -- univariate series with finitely many negative
  exponents.
- :class:`MultiSeries` -- sparse multivariate series truncated by a weighted
  total degree; each variable carries a positive integer weight.

All coefficients are :class:`fractions.Fraction`; no floating point enters
this module.  Values are immutable after construction and safe to share.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iter_product
from typing import Iterable, Mapping, Sequence


Q = Fraction


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class PowerSeries:
    """Truncated power series sum_{k=0}^{order} c_k x^k.

    The truncation order is explicit and inclusive; arithmetic between two
    series truncates to the smaller order.
    """

    __slots__ = ("coeffs", "order", "var")

    def __init__(self, coeffs: Sequence, order: int | None = None, var: str = "z"):
        coeffs = [_q(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        if len(coeffs) < order + 1:
            coeffs = coeffs + [Q(0)] * (order + 1 - len(coeffs))
        self.coeffs = tuple(coeffs[: order + 1])
        self.order = order
        self.var = var

    @classmethod
    def zero(cls, order: int, var: str = "z") -> "PowerSeries":
        return cls([], order, var)

    @classmethod
    def one(cls, order: int, var: str = "z") -> "PowerSeries":
        return cls([Q(1)], order, var)

    @classmethod
    def identity(cls, order: int, var: str = "z") -> "PowerSeries":
        """The series x itself."""
        return cls([Q(0), Q(1)], order, var)

    def __getitem__(self, k: int) -> Fraction:
        if k < 0 or k > self.order:
            raise IndexError(f"coefficient {k} beyond truncation order {self.order}")
        return self.coeffs[k]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: order + 1], min(order, self.order), self.var)

    def __add__(self, other) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            other = PowerSeries([other], self.order, self.var)
        n = min(self.order, other.order)
        return PowerSeries(
            [self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n, self.var
        )

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries([-c for c in self.coeffs], self.order, self.var)

    def __sub__(self, other) -> "PowerSeries":
        return self + (-other if isinstance(other, PowerSeries) else PowerSeries([-_q(other)], self.order, self.var))

    def __rsub__(self, other) -> "PowerSeries":
        return (-self) + other

    def __mul__(self, other) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            c = _q(other)
            return PowerSeries([c * a for a in self.coeffs], self.order, self.var)
        n = min(self.order, other.order)
        out = [Q(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return PowerSeries(out, n, self.var)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def derivative(self) -> "PowerSeries":
        """Formal derivative; the order drops by one."""
        if self.order == 0:
            return PowerSeries.zero(0, self.var)
        return PowerSeries(
            [k * self.coeffs[k] for k in range(1, self.order + 1)],
            self.order - 1,
            self.var,
        )

    def antiderivative(self) -> "PowerSeries":
        """Formal antiderivative with constant term 0; the order rises by one."""
        return PowerSeries(
            [Q(0)] + [self.coeffs[k] / (k + 1) for k in range(self.order + 1)],
            self.order + 1,
            self.var,
        )

    def reciprocal(self) -> "PowerSeries":
        if self.coeffs[0] == 0:
            raise ValueError("reciprocal requires nonzero constant term")
        inv0 = 1 / self.coeffs[0]
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = Q(0)
            for j in range(1, k + 1):
                acc += self.coeffs[j] * out[k - j]
            out.append(-inv0 * acc)
        return PowerSeries(out, self.order, self.var)

    def log(self) -> "PowerSeries":
        """Formal logarithm; requires constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("log requires constant term 1")
        # L' = f'/f, integrated term by term.
        out = [Q(0)] * (self.order + 1)
        for k in range(1, self.order + 1):
            acc = k * self.coeffs[k]
            for j in range(1, k):
                acc -= j * out[j] * self.coeffs[k - j]
            out[k] = acc / k
        return PowerSeries(out, self.order, self.var)

    def exp(self) -> "PowerSeries":
        """Formal exponential; requires constant term 0."""
        if self.coeffs[0] != 0:
            raise ValueError("exp requires constant term 0")
        out = [Q(1)] + [Q(0)] * self.order
        for k in range(1, self.order + 1):
            acc = Q(0)
            for j in range(1, k + 1):
                acc += j * self.coeffs[j] * out[k - j]
            out[k] = acc / k
        return PowerSeries(out, self.order, self.var)

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """self(inner); the inner series must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("compose requires inner constant term 0")
        n = min(self.order, inner.order)
        acc = PowerSeries([self.coeffs[0]], n, inner.var)
        power = PowerSeries.one(n, inner.var)
        for k in range(1, n + 1):
            power = power * inner
            if self.coeffs[k]:
                acc = acc + power * self.coeffs[k]
        return acc

    def __call__(self, x):
        """Evaluate the truncated polynomial at a scalar."""
        acc = Q(0) if not self.coeffs else 0 * x + 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift_exponents(self, factor: int) -> "PowerSeries":
        """Replace x by x^factor (order scales accordingly)."""
        out = [Q(0)] * (factor * self.order + 1)
        for k, c in enumerate(self.coeffs):
            out[factor * k] = c
        return PowerSeries(out, factor * self.order, self.var)

    def scale_argument(self, c) -> "PowerSeries":
        """Replace x by c*x."""
        c = _q(c)
        return PowerSeries(
            [self.coeffs[k] * c**k for k in range(self.order + 1)],
            self.order,
            self.var,
        )

    def even_part(self) -> "PowerSeries":
        return PowerSeries(
            [self.coeffs[k] if k % 2 == 0 else Q(0) for k in range(self.order + 1)],
            self.order,
            self.var,
        )

    def odd_part(self) -> "PowerSeries":
        return PowerSeries(
            [self.coeffs[k] if k % 2 == 1 else Q(0) for k in range(self.order + 1)],
            self.order,
            self.var,
        )

    def to_json(self) -> dict:
        return {
            "var": self.var,
            "order": self.order,
            "coeffs": [str(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PowerSeries":
        return cls([Fraction(c) for c in data["coeffs"]], data["order"], data["var"])

    def __repr__(self):
        terms = [
            f"{c}*{self.var}^{k}" for k, c in enumerate(self.coeffs) if c != 0
        ]
        body = " + ".join(terms) if terms else "0"
        return f"PowerSeries({body} + O({self.var}^{self.order + 1}))"


class LaurentSeries:
    """Truncated Laurent series with finitely many negative exponents."""

    __slots__ = ("coeffs", "min_exponent", "order", "var")

    def __init__(self, coeffs: Mapping[int, Fraction], order: int, var: str = "z"):
        clean = {k: _q(v) for k, v in coeffs.items() if v != 0 and k <= order}
        self.coeffs = dict(clean)
        self.min_exponent = min(clean, default=0)
        self.order = order
        self.var = var

    @classmethod
    def from_power_series(cls, ps: PowerSeries) -> "LaurentSeries":
        return cls({k: c for k, c in enumerate(ps.coeffs)}, ps.order, ps.var)

    def __getitem__(self, k: int) -> Fraction:
        if k > self.order:
            raise IndexError(f"coefficient {k} beyond truncation order {self.order}")
        return self.coeffs.get(k, Q(0))

    def __add__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries({0: _q(other)}, self.order, self.var)
        n = min(self.order, other.order)
        out: dict[int, Fraction] = {}
        for k in set(self.coeffs) | set(other.coeffs):
            if k <= n:
                out[k] = self.coeffs.get(k, Q(0)) + other.coeffs.get(k, Q(0))
        return LaurentSeries(out, n, self.var)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries({k: -v for k, v in self.coeffs.items()}, self.order, self.var)

    def __sub__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries({0: _q(other)}, self.order, self.var)
        return self + (-other)

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            c = _q(other)
            return LaurentSeries({k: c * v for k, v in self.coeffs.items()}, self.order, self.var)
        # Truncation bookkeeping: with negative exponents present, products of
        # discarded tail terms with negative-exponent terms could re-enter the
        # window, so the reliable order is min over cross terms.
        n = min(
            self.order + other.min_exponent,
            other.order + self.min_exponent,
        )
        out: dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if i + j <= n:
                    out[i + j] = out.get(i + j, Q(0)) + a * b
        return LaurentSeries(out, n, self.var)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def derivative(self) -> "LaurentSeries":
        return LaurentSeries(
            {k - 1: k * v for k, v in self.coeffs.items() if k != 0},
            self.order - 1,
            self.var,
        )

    def z0_part(self) -> Fraction:
        return self.coeffs.get(0, Q(0))

    def to_json(self) -> dict:
        ks = sorted(self.coeffs)
        return {
            "var": self.var,
            "order": self.order,
            "min_exponent": self.min_exponent,
            "coeffs": {str(k): str(self.coeffs[k]) for k in ks},
        }

    def __repr__(self):
        terms = [f"{v}*{self.var}^{k}" for k, v in sorted(self.coeffs.items())]
        return f"LaurentSeries({' + '.join(terms) or '0'} + O({self.var}^{self.order + 1}))"


class Grading:
    """Variable alphabet with positive integer weights."""

    __slots__ = ("names", "weights", "index")

    def __init__(self, names: Sequence[str], weights: Sequence[int]):
        if len(names) != len(weights):
            raise ValueError("names and weights must have equal length")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        self.names = tuple(names)
        self.weights = tuple(weights)
        self.index = {n: i for i, n in enumerate(names)}

    def degree(self, exps: Sequence[int]) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def __eq__(self, other):
        return (
            isinstance(other, Grading)
            and self.names == other.names
            and self.weights == other.weights
        )

    def __len__(self):
        return len(self.names)


class MultiSeries:
    """Sparse multivariate series truncated by weighted total degree.

    Monomials are exponent tuples over a fixed :class:`Grading`; only
    monomials of weighted degree <= ``max_degree`` are stored, and explicit
    zeros are dropped.
    """

    __slots__ = ("grading", "terms", "max_degree")

    def __init__(self, grading: Grading, terms: Mapping[tuple, Fraction], max_degree: int):
        self.grading = grading
        self.max_degree = max_degree
        clean = {}
        for exps, c in terms.items():
            c = _q(c)
            if c == 0:
                continue
            if grading.degree(exps) <= max_degree:
                clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def zero(cls, grading: Grading, max_degree: int) -> "MultiSeries":
        return cls(grading, {}, max_degree)

    @classmethod
    def constant(cls, grading: Grading, c, max_degree: int) -> "MultiSeries":
        z = (0,) * len(grading)
        return cls(grading, {z: _q(c)}, max_degree)

    @classmethod
    def variable(cls, grading: Grading, name: str, max_degree: int) -> "MultiSeries":
        i = grading.index[name]
        exps = tuple(1 if j == i else 0 for j in range(len(grading)))
        return cls(grading, {exps: Q(1)}, max_degree)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        exps = tuple(exps)
        if self.grading.degree(exps) > self.max_degree:
            raise IndexError("monomial beyond weighted truncation degree")
        return self.terms.get(exps, Q(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.grading), Q(0))

    def truncate(self, max_degree: int) -> "MultiSeries":
        return MultiSeries(self.grading, self.terms, min(max_degree, self.max_degree))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        n = min(self.max_degree, other.max_degree)
        return self.truncate(n).terms == other.truncate(n).terms

    def __add__(self, other) -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            other = MultiSeries.constant(self.grading, other, self.max_degree)
        n = min(self.max_degree, other.max_degree)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, Q(0)) + c
        return MultiSeries(self.grading, out, n)

    __radd__ = __add__

    def __neg__(self) -> "MultiSeries":
        return MultiSeries(
            self.grading, {e: -c for e, c in self.terms.items()}, self.max_degree
        )

    def __sub__(self, other) -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            other = MultiSeries.constant(self.grading, other, self.max_degree)
        return self + (-other)

    def __rsub__(self, other) -> "MultiSeries":
        return (-self) + other

    def __mul__(self, other) -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            c = _q(other)
            return MultiSeries(
                self.grading, {e: c * v for e, v in self.terms.items()}, self.max_degree
            )
        n = min(self.max_degree, other.max_degree)
        out: dict[tuple, Fraction] = {}
        deg = self.grading.degree
        for e1, c1 in self.terms.items():
            d1 = deg(e1)
            for e2, c2 in other.terms.items():
                if d1 + deg(e2) > n:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Q(0)) + c1 * c2
        return MultiSeries(self.grading, out, n)

    __rmul__ = __mul__

    def derivative(self, name: str) -> "MultiSeries":
        i = self.grading.index[name]
        out: dict[tuple, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
            out[e2] = out.get(e2, Q(0)) + c * e[i]
        # Differentiation lowers weighted degree uniformly by the weight of
        # the variable, so the truncation window stays valid as-is.
        return MultiSeries(self.grading, out, self.max_degree)

    def exp(self) -> "MultiSeries":
        if self.constant_term() != 0:
            raise ValueError("exp requires zero constant term")
        acc = MultiSeries.constant(self.grading, 1, self.max_degree)
        term = MultiSeries.constant(self.grading, 1, self.max_degree)
        # Every variable has weight >= 1, so powers beyond max_degree vanish.
        for k in range(1, self.max_degree + 1):
            term = term * self * Q(1, k)
            if term.is_zero():
                break
            acc = acc + term
        return acc

    def log(self) -> "MultiSeries":
        if self.constant_term() != 1:
            raise ValueError("log requires constant term 1")
        u = self - 1
        acc = MultiSeries.zero(self.grading, self.max_degree)
        term = MultiSeries.constant(self.grading, -1, self.max_degree)
        for k in range(1, self.max_degree + 1):
            term = term * u * Q(-1)
            if term.is_zero():
                break
            acc = acc + term * Q(1, k)
        return acc

    def homogeneous_part(self, degree: int) -> "MultiSeries":
        deg = self.grading.degree
        return MultiSeries(
            self.grading,
            {e: c for e, c in self.terms.items() if deg(e) == degree},
            self.max_degree,
        )

    def max_term_degree(self) -> int:
        deg = self.grading.degree
        return max((deg(e) for e in self.terms), default=0)

    def to_json(self) -> list:
        items = sorted(self.terms.items())
        return [{"exps": list(e), "coeff": str(c)} for e, c in items]

    def __repr__(self):
        names = self.grading.names
        terms = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            terms.append(f"{c}" + (f"*{mono}" if mono else ""))
        return f"MultiSeries({' + '.join(terms) or '0'}; deg<={self.max_degree})"


class BiPoly:
    """Bivariate polynomial with exact coefficients, truncated by total degree.

    Used for the edge-factor and Vandermonde divisions: sparse dict from
    (i, j) exponent pairs to Fraction.
    """

    __slots__ = ("terms", "max_degree")

    def __init__(self, terms: Mapping[tuple, Fraction], max_degree: int):
        self.max_degree = max_degree
        self.terms = {
            (i, j): _q(c)
            for (i, j), c in terms.items()
            if c != 0 and i + j <= max_degree
        }

    @classmethod
    def zero(cls, max_degree: int) -> "BiPoly":
        return cls({}, max_degree)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        n = min(self.max_degree, other.max_degree)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Q(0)) + c
        return BiPoly(out, n)

    def __neg__(self) -> "BiPoly":
        return BiPoly({e: -c for e, c in self.terms.items()}, self.max_degree)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other) -> "BiPoly":
        if not isinstance(other, BiPoly):
            c = _q(other)
            return BiPoly({e: c * v for e, v in self.terms.items()}, self.max_degree)
        n = min(self.max_degree, other.max_degree)
        out: dict[tuple, Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                if i1 + i2 + j1 + j2 <= n:
                    e = (i1 + i2, j1 + j2)
                    out[e] = out.get(e, Q(0)) + c1 * c2
        return BiPoly(out, n)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Q(0))

    def swap(self) -> "BiPoly":
        return BiPoly({(j, i): c for (i, j), c in self.terms.items()}, self.max_degree)

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        n = min(self.max_degree, other.max_degree)
        a = {e: c for e, c in self.terms.items() if e[0] + e[1] <= n}
        b = {e: c for e, c in other.terms.items() if e[0] + e[1] <= n}
        return a == b


class DivisibilityError(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


def divide_exact(num: BiPoly, den: tuple = (1, 1)) -> BiPoly:
    """Divide ``num`` exactly by the linear form a*x + b*y.

    ``den`` is the coefficient pair (a, b) with a != 0.  The division is
    performed degree by degree; a nonzero remainder raises
    :class:`DivisibilityError`, which signals an inconsistency upstream
    (e.g. a wrongly assembled edge factor).
    """
    a, b = _q(den[0]), _q(den[1])
    if a == 0:
        raise ValueError("leading coefficient of the divisor must be nonzero")
    rem = dict(num.terms)
    out: dict[tuple, Fraction] = {}
    # Eliminate highest x-power first: x^i y^j = (a x + b y)/a * x^(i-1) y^j - ...
    for i in range(num.max_degree, 0, -1):
        for j in range(num.max_degree - i + 1):
            c = rem.get((i, j), Q(0))
            if c == 0:
                continue
            q = c / a
            out[(i - 1, j)] = out.get((i - 1, j), Q(0)) + q
            rem.pop((i, j))
            key = (i - 1, j + 1)
            rem[key] = rem.get(key, Q(0)) - q * b
    leftovers = {e: c for e, c in rem.items() if c != 0}
    if leftovers:
        raise DivisibilityError(f"nonzero remainder: {leftovers}")
    return BiPoly(out, num.max_degree - 1)
