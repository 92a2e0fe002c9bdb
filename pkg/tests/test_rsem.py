import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rswork import guards
from rswork.errors import GuardError, NotRestrictionError, StructureError
from rswork.rsem import (FinRS, PartialMap, check_regularity_window, classify_ample,
                         embedding_domain, is_inverse, natural_leq, semilattice,
                         validate_axioms, verify_identities, wagner_preston_embed)

partial_maps = st.dictionaries(st.integers(0, 3), st.integers(0, 3), max_size=4)


@given(partial_maps, partial_maps)
def test_compose_matches_dict_composition(f, g):
    # f after g, g applied first
    want = {x: f[g[x]] for x in g if g[x] in f}
    got = PartialMap.from_dict(f).compose(PartialMap.from_dict(g))
    assert got.as_dict == want


@given(partial_maps)
def test_inverse_of_injective_map(f):
    m = PartialMap.from_dict(f)
    if m.is_injective():
        assert m.inverse().compose(m) == PartialMap.identity(m.domain)
    else:
        with pytest.raises(ValueError):
            m.inverse()


def test_labels():
    assert PartialMap.from_dict({}).label() == "{}"
    assert PartialMap.from_dict({"b": "a", "a": "a"}).label() == "{a>a,b>a}"


def test_j2_fails_only_p8(j2):
    rep = validate_axioms(j2)
    assert j2.n == 9
    assert rep.failing() == ["P8"]
    assert rep.classification == "Ehresmann"
    assert rep.properties == ["Ehresmann", "left-restriction"]
    s = j2.index(rep.witnesses["P8"]["s"])
    # the witness is a constant map onto one point
    assert len(eval_label(j2.name(s))) == 2
    assert len(set(eval_label(j2.name(s)).values())) == 1


def eval_label(label):
    body = label.strip("{}")
    return dict(p.split(">") for p in body.split(",")) if body else {}


def test_i2_is_restriction_inverse_ample(i2):
    rep = validate_axioms(i2)
    assert i2.n == 7 and rep.restriction and rep.classification == "restriction"
    assert classify_ample(i2).ample
    assert is_inverse(i2) is not None
    assert len(i2.E) == 4


def test_i3_size_and_identities(i3):
    assert i3.n == 34
    assert verify_identities(i3).ok


def test_structure_maps_in_symmetric_inverse_monoid(i2):
    # lam(s) is the identity on the domain, rho(s) the identity on the image
    for s in range(i2.n):
        m = eval_label(i2.name(s))
        dom = {k: k for k in m}
        img = {v: v for v in m.values()}
        assert eval_label(i2.name(i2.lam[s])) == dom
        assert eval_label(i2.name(i2.rho[s])) == img


def test_natural_order_is_restriction_of_maps(i2):
    for s, t in itertools.product(range(i2.n), repeat=2):
        ms, mt = eval_label(i2.name(s)), eval_label(i2.name(t))
        restr = all(k in mt and mt[k] == v for k, v in ms.items())
        assert natural_leq(i2, s, t) == restr


def _brute_left_ample(S):
    T = S.table
    for s, t, u in itertools.product(range(S.n), repeat=3):
        if T[s, t] == T[s, u] and T[S.lam[s], t] != T[S.lam[s], u]:
            return False
    return True


def test_ample_classification_matches_brute_force(i2, fab, j2, diamond, z2zero):
    for S in (i2, fab, diamond, z2zero):
        assert classify_ample(S).left == _brute_left_ample(S)


def test_fab_is_restriction_but_not_left_ample(fab):
    assert validate_axioms(fab).restriction
    rep = classify_ample(fab)
    assert not rep.left
    s, t, u = rep.left_witness
    assert fab.table[s, t] == fab.table[s, u]
    assert [fab.name(x) for x in rep.left_witness] == ["{a>a,b>a}", "{a>a,b>b}", "{a>a,b>a}"]


def test_semilattice_and_group_with_zero(diamond, z2zero):
    assert validate_axioms(diamond).restriction
    assert validate_axioms(z2zero).restriction
    assert is_inverse(z2zero) is not None
    assert diamond.zero == 3


def test_supplied_maps_must_agree(i2):
    lam = i2.lam.copy()
    lam[0], lam[1] = lam[1], lam[0]
    with pytest.raises(StructureError):
        FinRS.build(i2.table, i2.E, i2.names, lam=lam)


def test_no_fixing_projection_raises():
    # 0 * 1 = 1, so no projection fixes 0 on the right
    with pytest.raises(NotRestrictionError):
        FinRS.build([[1, 1], [1, 1]], [1])


def test_nonassociative_detected():
    from rswork import kernels
    assert kernels.find_nonassociative(np.array([[1, 0], [0, 0]])) is not None
    assert kernels.find_nonassociative(np.array([[0, 0], [0, 1]])) is None


def test_embedding(i2, j2, fab):
    emb = wagner_preston_embed(i2)
    assert emb.injective and emb.all_bijective and emb.left_ample
    assert wagner_preston_embed(j2).injective
    assert not wagner_preston_embed(fab).left_ample
    for s in range(i2.n):
        assert emb.maps[s].domain == embedding_domain(i2, s)


def _brute_regular(S):
    T = S.table
    return all(any(T[T[s, t], s] == s and T[T[t, s], t] == t and T[s, t] in S.E
                   for t in range(S.n)) for s in range(S.n))


def test_regularity_window(i2, fab, diamond, z2zero):
    for S in (i2, fab, diamond, z2zero):
        rep = check_regularity_window(S)
        assert rep.regular == _brute_regular(S)
        assert rep.coincide == rep.regular


def test_identities_hold(i2, fab, diamond, z2zero):
    for S in (i2, fab, diamond, z2zero):
        assert verify_identities(S).ok


subset_families = st.sets(st.frozensets(st.integers(0, 3)), min_size=1, max_size=6)


@settings(max_examples=40, deadline=None)
@given(subset_families)
def test_random_semilattices_are_restriction(family):
    closed = set(family)
    while True:
        new = {a & b for a in closed for b in closed} - closed
        if not new:
            break
        closed |= new
    elems = sorted(closed, key=lambda x: (len(x), sorted(x)))
    idx = {x: i for i, x in enumerate(elems)}
    meet = [[idx[a & b] for b in elems] for a in elems]
    S = semilattice(meet)
    assert validate_axioms(S).restriction
    for a, b in itertools.product(elems, repeat=2):
        assert natural_leq(S, idx[a], idx[b]) == (a <= b)


def test_guard(monkeypatch):
    with pytest.raises(GuardError):
        guards.check("thing", 10, 5)
    monkeypatch.setenv(guards.ENV_VAR, "1")
    guards.check("thing", 10, 5)
