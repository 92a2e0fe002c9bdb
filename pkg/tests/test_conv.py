import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rswork.cat import disjoint_union, enumerate_bisections, graph_category, is_groupoid
from rswork.conv import (ConvElement, CoveringMorphism, coeff_array, compose_coverings,
                         convolve, covering_transfer, crossed_delta, disjointify,
                         involution, psi, validate_covering, check_psi_multiplicative)
from rswork.errors import TruncationError, UnsupportedStructureError
from rswork.germs import germ_category, induced_algebra_action
from rswork.spectrum import canonical_action
from rswork.cli import load


def naive_convolve(f, g):
    C = f.category
    out = [0] * C.n
    for x, y in itertools.product(range(C.n), repeat=2):
        z = C.comp[x, y]
        if z >= 0:
            out[z] += f.coeffs[x] * g.coeffs[y]
    return out


def random_element(C, rng, exact=False):
    if exact:
        return ConvElement(C, coeff_array([Fraction(int(v)) for v in rng.integers(-4, 5, C.n)],
                                          exact=True))
    return ConvElement(C, rng.standard_normal(C.n) + 1j * rng.standard_normal(C.n))


def untruncated_fixtures():
    ws = load("coverings")
    cats = [ws.category(n) for n in ws.names("category")]
    cats.append(load("arrow").category())
    return cats


def test_deltas_on_graph(loops3):
    x1, x2 = loops3.index("x1"), loops3.index("x2")
    prod = ConvElement.delta(loops3, x1) @ ConvElement.delta(loops3, x2)
    assert prod.support() == [loops3.index("x1.x2")]
    arrow = load("arrow").category()
    a, u = arrow.index("a"), arrow.index("u")
    v = arrow.index("v")
    assert (ConvElement.delta(arrow, u) @ ConvElement.delta(arrow, a)).support() == []
    assert (ConvElement.delta(arrow, v) @ ConvElement.delta(arrow, a)).support() == [a]


def test_matches_naive_sum(p2, rng):
    f, g = random_element(p2, rng), random_element(p2, rng)
    assert np.allclose(convolve(f, g).coeffs, naive_convolve(f, g))


def test_units_multiply_pointwise(p2, rng):
    units = list(p2.unit_set)
    f, g = ConvElement.zeros(p2), ConvElement.zeros(p2)
    f.coeffs[units] = rng.standard_normal(len(units))
    g.coeffs[units] = rng.standard_normal(len(units))
    assert np.allclose((f @ g).coeffs, f.coeffs * g.coeffs)


def test_unit_supported_right_factor(p2, rng):
    f = random_element(p2, rng)
    g = ConvElement.zeros(p2)
    for u in p2.unit_set:
        g.coeffs[u] = rng.standard_normal()
    got = (f @ g).coeffs
    want = [f.coeffs[z] * g.coeffs[p2.unit[p2.d[z]]] for z in range(p2.n)]
    assert np.allclose(got, want)


@pytest.mark.parametrize("idx", range(4))
def test_associativity_exact(idx):
    C = untruncated_fixtures()[idx]
    rng = np.random.default_rng(idx)
    for _ in range(10):
        f, g, h = (random_element(C, rng, exact=True) for _ in range(3))
        assert ((f @ g) @ h).equals(f @ (g @ h))


def test_bisection_supported_products(p2, rng):
    for U, V in itertools.product(enumerate_bisections(p2), repeat=2):
        f, g = ConvElement.zeros(p2), ConvElement.zeros(p2)
        f.coeffs[list(U)] = 1 + rng.random(len(U))
        g.coeffs[list(V)] = 1 + rng.random(len(V))
        UV = {p2.comp[x, y] for x in U for y in V if p2.comp[x, y] >= 0}
        assert set((f @ g).support()) <= UV


def test_overflow_refused():
    C = graph_category(["v"], [("e", "v", "v")], 2)
    e = ConvElement.delta(C, "e")
    assert (e @ e).support() == [C.index("e.e")]
    with pytest.raises(TruncationError) as info:
        e @ e @ e
    assert info.value.details["pair"] == ["e.e", "e"]


def test_involution_on_germ_groupoid(i2, rng):
    G = germ_category(i2, canonical_action(i2)).category
    f, g = random_element(G, rng), random_element(G, rng)
    assert involution(involution(f)).equals(f)
    assert involution(f @ g).equals(involution(g) @ involution(f), 1e-12)
    units = ConvElement.zeros(G)
    units.coeffs[list(G.unit_set)] = rng.standard_normal(len(G.unit_set))
    assert involution(units).equals(units)


def test_unitary_on_bisection_is_partial_isometry(p2, rng):
    for U in enumerate_bisections(p2):
        f = ConvElement.zeros(p2)
        f.coeffs[list(U)] = np.exp(2j * np.pi * rng.random(len(U)))
        assert (f @ involution(f) @ f).equals(f, 1e-12)


def test_involution_needs_groupoid():
    arrow = load("arrow").category()
    with pytest.raises(UnsupportedStructureError):
        involution(ConvElement.delta(arrow, "a"))


def test_psi_and_crossed_products(i2, diamond, rng):
    alpha = induced_algebra_action(canonical_action(i2))
    assert check_psi_multiplicative(alpha) is None
    for e, f in itertools.product(i2.E, repeat=2):
        lhs = crossed_delta(alpha, e) * crossed_delta(alpha, f)
        assert lhs.equals(crossed_delta(alpha, int(i2.table[e, f])))
    for e in i2.E:
        assert psi(alpha, {e: 1}).equals(crossed_delta(alpha, e))
    beta = induced_algebra_action(canonical_action(diamond))
    m = beta.action.size

    def rand():
        terms = {}
        for s in range(diamond.n):
            v = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) \
                * beta.indicator(int(diamond.rho[s]))
            terms[s] = v
        from rswork.conv import CrossedElement
        return CrossedElement(beta, terms)

    for _ in range(5):
        a, b, c = rand(), rand(), rand()
        assert ((a * b) * c).equals(a * (b * c), 1e-12)


def test_psi_injective_on_basis(i2):
    alpha = induced_algebra_action(canonical_action(i2))
    images = [psi(alpha, {s: 1}, exact=True) for s in range(i2.n)]
    for a, b in itertools.combinations(images, 2):
        assert not a.equals(b)


def coverings():
    ws = load("coverings")
    return ws, ws.covering("fold"), ws.covering("wind")


def test_identity_covering(p2, rng):
    ident = CoveringMorphism.identity(p2)
    assert validate_covering(ident).ok
    f = random_element(p2, rng, exact=True)
    assert covering_transfer(ident, f).equals(f)


def test_bundled_coverings_and_functoriality():
    ws, fold, wind = coverings()
    rng = np.random.default_rng(3)
    for phi in (fold, wind):
        assert validate_covering(phi).ok
        for _ in range(5):
            f = random_element(phi.target, rng, exact=True)
            g = random_element(phi.target, rng, exact=True)
            lhs = covering_transfer(phi, f @ g)
            rhs = covering_transfer(phi, f) @ covering_transfer(phi, g)
            assert lhs.equals(rhs)
    both = compose_coverings(fold, wind)
    assert validate_covering(both).ok
    f = random_element(wind.target, rng, exact=True)
    assert covering_transfer(both, f).equals(
        covering_transfer(fold, covering_transfer(wind, f)))


def test_units_transfer_to_units():
    _, fold, wind = coverings()
    for phi in (fold, wind):
        D = phi.target
        f = ConvElement.zeros(D, exact=True)
        for u in D.unit_set:
            f.coeffs[u] = Fraction(3)
        assert set(covering_transfer(phi, f).support()) <= phi.source.unit_set


def test_broken_covering_reports_condition():
    ws, _, wind = coverings()
    p2, z2 = wind.source, wind.target
    one = z2.index("1")
    bad = CoveringMorphism(p2, z2, wind.on_objects, tuple(frozenset([one]) for _ in range(p2.n)))
    rep = validate_covering(bad)
    assert not rep.ok
    assert rep.results["M4"] is not None


def test_disjointify_examples():
    A, B = frozenset({1, 2}), frozenset({2, 3})
    assert {b for _, b in disjointify([A, B])} == {frozenset({1}), frozenset({3}), frozenset({2})}
    assert [b for _, b in disjointify([A, A])] == [A]
    assert {b for _, b in disjointify([frozenset({1}), frozenset({2})])} == \
        {frozenset({1}), frozenset({2})}


@given(st.lists(st.frozensets(st.integers(0, 8)), max_size=5))
def test_disjointify_partitions(family):
    blocks = disjointify(family)
    union = frozenset().union(*family) if family else frozenset()
    seen = set()
    for J, P in blocks:
        assert P and not (P & seen)
        seen |= P
        for i, A in enumerate(family):
            assert (P <= A) if i in J else not (P & A)
    assert seen == union
