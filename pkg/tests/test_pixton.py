import itertools
from fractions import Fraction as Q

import pytest

from tautrel import pixton, strata
from tautrel.series import DivisibilityError


def kappa_monomials(deg):
    out = []

    def rec(prefix, rem, idx):
        if rem == 0:
            out.append(tuple(prefix))
            return
        if idx > rem:
            return
        for e in range(rem // idx + 1):
            rec(prefix + [e], rem - idx * e, idx + 1)

    rec([], deg, 1)
    return out


def all_pairings(element):
    g, n = element.g, element.n
    extra = 3 * g - 3 + n - element.d
    for psis in itertools.product(range(extra + 1), repeat=n):
        rem = extra - sum(psis)
        if rem < 0:
            continue
        for ke in kappa_monomials(rem):
            yield psis, ke, strata.integrate(element, psi_exps=psis, kappa_exps=ke)


class TestZetaPolynomial:
    def test_square_to_one(self):
        x = pixton.ZetaPolynomial({frozenset([3]): Q(2)})
        assert (x * x).terms == {frozenset(): Q(4)}

    def test_symmetric_difference(self):
        a = pixton.ZetaPolynomial({frozenset([0]): Q(1)})
        b = pixton.ZetaPolynomial({frozenset([0, 1]): Q(1)})
        assert (a * b).terms == {frozenset([1]): Q(1)}

    def test_add(self):
        a = pixton.ZetaPolynomial({frozenset([0]): Q(1)})
        assert (a + a).terms == {frozenset([0]): Q(2)}


class TestVertexFactor:
    def test_degree0(self):
        out = pixton.vertex_factor(0, 0)
        assert out.coefficient(frozenset()).terms == {(): Q(1)}

    def test_degree1(self):
        out = pixton.vertex_factor(0, 1)
        assert out.coefficient(frozenset([0])).terms == {(1,): Q(60)}
        assert out.coefficient(frozenset()).terms == {(): Q(1)}

    def test_degree2_even_part(self):
        # even-parity degree-2 terms come from the T^3 coefficient
        # -27720 (kappa_2) and the two-point term (60 zeta)^2/2 ->
        # (1800)(k1^2 + k2) with parity 0.
        out = pixton.vertex_factor(0, 2)
        even = out.coefficient(frozenset())
        assert even.coefficient((0, 1)) == Q(-27720 + 1800)
        assert even.coefficient((2,)) == Q(1800)


class TestLegFactor:
    def test_a0(self):
        out = pixton.leg_factor(0, 0, 1)
        assert out.coefficient(frozenset()) == {0: Q(1)}
        assert out.coefficient(frozenset([0])) == {1: Q(-60)}

    def test_a1(self):
        out = pixton.leg_factor(0, 1, 1)
        assert out.coefficient(frozenset([0])) == {0: Q(1)}
        assert out.coefficient(frozenset()) == {1: Q(84)}

    def test_bad_marking(self):
        with pytest.raises(ValueError):
            pixton.leg_factor(0, 2, 1)


class TestEdgeFactor:
    def test_degree0(self):
        sec = pixton.edge_factor(0, 1, 0)
        assert sec[(1, 1)].coefficient(0, 0) == Q(60)
        assert sec[(0, 0)].coefficient(0, 0) == Q(-84)
        assert sec[(1, 0)].is_zero() and sec[(0, 1)].is_zero()

    def test_degree1(self):
        sec = pixton.edge_factor(0, 1, 1)
        # 32760 (z'psi' + z''psi'') - 27720 (z'psi'' + z''psi')
        assert sec[(1, 0)].coefficient(1, 0) == Q(32760)
        assert sec[(0, 1)].coefficient(0, 1) == Q(32760)
        assert sec[(1, 0)].coefficient(0, 1) == Q(-27720)
        assert sec[(0, 1)].coefficient(1, 0) == Q(-27720)

    @pytest.mark.parametrize("trunc", [0, 1, 2, 4, 8, 12])
    def test_divisibility_exact(self, trunc):
        # divide_exact raises DivisibilityError on any remainder, so
        # construction succeeding is the assertion.
        pixton.edge_factor(0, 1, trunc)

    @pytest.mark.parametrize("trunc", [0, 1, 3, 6])
    def test_half_edge_symmetry(self, trunc):
        sec = pixton.edge_factor(0, 1, trunc)
        for (p1, p2), bp in sec.items():
            assert bp.swap() == sec[(p2, p1)]


class TestPixtonClass:
    def test_admissibility(self):
        with pytest.raises(pixton.NotInPixtonSetError):
            pixton.pixton_class(2, 0, (), 0)
        with pytest.raises(pixton.NotInPixtonSetError):
            pixton.pixton_class(0, 2, (0, 0), 1)
        with pytest.raises(ValueError):
            pixton.pixton_class(1, 1, (2,), 1)

    def test_smallest_class_terms(self):
        # (g,n,A,d) = (1,1,(1),1): smooth graph carries 60 k1 + 84 psi1,
        # the loop graph carries -24 * (1/2^{h1}) = -12.
        el = pixton.pixton_class(1, 1, (1,), 1)
        assert el.d == 1 and len(el.terms) == 3
        by_key = {
            (gr.edges, dec.vertex_kappas, dec.leg_psis): c
            for (gr, dec), c in el.terms.items()
        }
        assert by_key[((), ((1,),), (0,))] == Q(60)
        assert by_key[((), ((),), (1,))] == Q(84)
        assert by_key[(((0, 0),), ((),), (0,))] == Q(-12)

    def test_pure_codimension(self):
        el = pixton.pixton_class(2, 0, (), 3)
        for (graph, dec), _ in el.terms.items():
            assert len(graph.edges) + dec.degree() == 3

    def test_parity_zero_classes(self):
        # Wrong-parity data give the identically-zero class, mirroring
        # the parity condition of the kappa-relation extraction.
        assert pixton.pixton_class(2, 1, (1,), 1).is_zero()
        assert pixton.pixton_class(2, 0, (), 2).is_zero()

    @pytest.mark.parametrize(
        "g,n,A,d",
        [(1, 1, (1,), 1), (2, 0, (), 1), (2, 1, (1,), 1), (2, 0, (), 2)],
    )
    def test_zero_pairings_spec_cases(self, g, n, A, d):
        el = pixton.pixton_class(g, n, A, d)
        for psis, ke, value in all_pairings(el):
            assert value == 0, (psis, ke, value)

    @pytest.mark.parametrize("g,n,A,d", [(2, 0, (), 3), (2, 1, (1,), 2)])
    def test_zero_pairings_nonzero_classes(self, g, n, A, d):
        # These classes have many nonzero terms (24 and 17), so the
        # vanishing of every pairing is a genuine cancellation.
        el = pixton.pixton_class(g, n, A, d)
        assert not el.is_zero()
        for psis, ke, value in all_pairings(el):
            assert value == 0, (psis, ke, value)


class TestFZRestriction:
    def test_report_matches_up_to_sign(self):
        rep = pixton.fz_restriction_report(2, 3)
        assert rep["comparable"] and rep["match"]
        assert rep["scale"] == "-1"

    def test_report_not_comparable(self):
        # (3, 1) is admissible for the graph sum but fails the parity
        # condition of the kappa-relation extraction.
        rep = pixton.fz_restriction_report(3, 1)
        assert rep["comparable"] is False
