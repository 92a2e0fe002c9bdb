import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bundled import bundled_semigroups
from rswork.errors import StructureError, UnsupportedStructureError
from rswork.rsem import semilattice, validate_axioms
from rswork.spectrum import (Semilattice, action_violations, canonical_action,
                             character_label, covers_of, enumerate_characters, is_cover,
                             principal_character, push_cover, tight_spectrum,
                             trivial_action)


def filters(meet):
    """Nonempty upward closed, meet closed subsets by brute force."""
    k = len(meet)
    out = set()
    for r in range(1, k + 1):
        for sub in itertools.combinations(range(k), r):
            F = set(sub)
            up = all(y in F for x in F for y in range(k) if meet[x][y] == x)
            closed = all(meet[x][y] in F for x in F for y in F)
            if up and closed:
                out.add(frozenset(F))
    return out


def char_sets(E, chars):
    return {frozenset(c.support()) for c in chars}


def test_diamond_characters_are_principal(diamond):
    E = Semilattice.from_rs(diamond)
    chars = enumerate_characters(E)
    assert [character_label(E, c) for c in chars] == ["ς_1", "ς_e", "ς_f", "ς_0"]
    assert char_sets(E, chars) == filters(E.meet.tolist())


@pytest.mark.parametrize("name,S", bundled_semigroups())
def test_bundled_characters_match_filter_oracle(name, S):
    E = Semilattice.from_rs(S)
    chars = enumerate_characters(E)
    assert char_sets(E, chars) == filters(E.meet.tolist())
    assert {c.bits for c in chars} == {principal_character(S, e).bits for e in S.E}


def tight_oracle(meet, zero):
    k = len(meet)
    nonzero = [i for i in range(k) if i != zero]
    out = set()
    for F in filters(meet):
        if zero in F:
            continue
        good = True
        for x in F:
            below = [y for y in nonzero if meet[y][x] == y]
            for r in range(len(below) + 1):
                for Z in itertools.combinations(below, r):
                    covers = all(any(meet[z][y] != zero for z in Z) for y in below)
                    if covers and not any(z in F for z in Z):
                        good = False
        if good:
            out.add(F)
    return out


def test_tight_diamond(diamond):
    E = Semilattice.from_rs(diamond)
    tight = tight_spectrum(diamond)
    assert [character_label(E, c) for c in tight] == ["ς_e", "ς_f"]
    assert char_sets(E, tight) == tight_oracle(E.meet.tolist(), E.zero)


def test_tight_i2(i2):
    E = Semilattice.from_rs(i2)
    assert [character_label(E, c) for c in tight_spectrum(i2)] == ["ς_{1>1}", "ς_{2>2}"]


@pytest.mark.parametrize("name,S", [(n, S) for n, S in bundled_semigroups(True)
                                    if Semilattice.from_rs(S).zero is not None])
def test_bundled_tight_match_oracle(name, S):
    E = Semilattice.from_rs(S)
    assert char_sets(E, tight_spectrum(S)) == tight_oracle(E.meet.tolist(), E.zero)


def test_tight_needs_zero_in_e():
    chain_no_zero = semilattice([[0, 1], [1, 1]])
    E = Semilattice.from_meet([[0, 1], [1, 1]])
    assert E.zero == 1
    assert tight_spectrum(chain_no_zero)
    from rswork.rsem import monoid
    with pytest.raises(UnsupportedStructureError):
        tight_spectrum(monoid([[0, 1], [1, 0]]))


def test_covers(diamond):
    one, e, f, zero = range(4)
    assert is_cover(diamond, [e, f], one)
    assert not is_cover(diamond, [e], one)
    assert is_cover(diamond, [e], e)
    masks = covers_of(diamond, one)
    # any set containing 1, or containing both e and f
    assert len(masks) == 5
    assert push_cover(diamond, [e, f], one, one) == frozenset([e, f])


def oracle_theta(S, phi_bits, s):
    """theta_s(phi)(f) = phi(lam(f s)) over the owner indices."""
    E = Semilattice.from_rs(S)
    phi = lambda e: (phi_bits >> E.local(e)) & 1
    return sum(phi(int(S.lam[S.table[f, s]])) << E.local(f) for f in S.E)


def test_canonical_action_needs_restriction(j2):
    with pytest.raises(StructureError):
        canonical_action(j2)


@pytest.mark.parametrize("name,S", bundled_semigroups(True))
def test_canonical_action_laws(name, S):
    A = canonical_action(S)
    assert action_violations(A) == []
    E = Semilattice.from_rs(S)
    for s in range(S.n):
        lam = E.local(S.lam[s])
        dom = {x for x, c in enumerate(A.carrier) if c(lam)}
        assert set(A.maps[s]) == dom
        for x, y in A.maps[s].items():
            assert A.carrier[y].bits == oracle_theta(S, A.carrier[x].bits, s)
            assert A.zeta(s, y) == x
    for s, t in itertools.product(range(S.n), repeat=2):
        st_ = int(S.table[s, t])
        comp = {x: A.maps[s][y] for x, y in A.maps[t].items() if y in A.maps[s]}
        assert comp == A.maps[st_]
    for e in S.E:
        assert A.maps[e] == {x: x for x in A.domains[e]}


def test_trivial_action_is_valid(fab):
    assert action_violations(trivial_action(fab, ["p", "q"])) == []


@settings(max_examples=30, deadline=None)
@given(st.sets(st.frozensets(st.integers(0, 3)), min_size=1, max_size=6))
def test_random_semilattice_characters_principal(family):
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
    E = Semilattice.from_rs(S)
    chars = enumerate_characters(E)
    assert char_sets(E, chars) == filters(E.meet.tolist())
    assert len(chars) == len(elems)
    assert char_sets(E, tight_spectrum(S)) == tight_oracle(E.meet.tolist(), E.zero)
