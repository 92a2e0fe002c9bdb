"""Characters of a finite semilattice and the canonical action on them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import guards
from .errors import InternalConsistencyError, UnsupportedStructureError
from .rsem import FinRS, _require_restriction


@dataclass(frozen=True, eq=False)
class Semilattice:
    """A finite meet semilattice in local indices ``0..k-1``.

    ``source[i]`` is the element index of position i in the owning
    semigroup (or simply i for a standalone semilattice). Public functions
    take and return owner indices.
    """

    meet: np.ndarray
    names: tuple
    source: tuple
    zero: int | None
    zero_problem: str | None = None

    @classmethod
    def from_meet(cls, meet, names=None):
        meet = np.asarray(meet, dtype=np.int64)
        k = meet.shape[0]
        names = tuple(names) if names is not None else tuple(map(str, range(k)))
        zero = next((z for z in range(k) if (meet[z] == z).all()), None)
        problem = None if zero is not None else "semilattice has no zero"
        return cls(meet, names, tuple(range(k)), zero, problem)

    @classmethod
    def from_rs(cls, S: FinRS):
        E = np.array(S.E, dtype=np.int64)
        pos = {int(e): i for i, e in enumerate(E)}
        meet = np.vectorize(pos.__getitem__, otypes=[np.int64])(S.table[np.ix_(E, E)])
        zero, problem = None, None
        if S.zero is None:
            problem = "semigroup has no zero"
        elif S.zero not in pos:
            problem = "the zero of the semigroup is not a projection"
        else:
            zero = pos[S.zero]
        return cls(meet, tuple(S.name(e) for e in E), tuple(int(e) for e in E),
                   zero, problem)

    @property
    def size(self):
        return self.meet.shape[0]

    @cached_property
    def _pos(self):
        return {e: i for i, e in enumerate(self.source)}

    def local(self, e):
        try:
            return self._pos[int(e)]
        except KeyError:
            raise ValueError(f"{e} is not a projection") from None

    def le(self, i, j):
        """Local order test."""
        return self.meet[i, j] == i

    @cached_property
    def up_masks(self):
        """up_masks[i] = bitmask of i's upper set."""
        k = self.size
        return [sum(1 << j for j in range(k) if self.meet[i, j] == i) for i in range(k)]

    @cached_property
    def down_masks(self):
        k = self.size
        return [sum(1 << j for j in range(k) if self.meet[i, j] == j) for i in range(k)]

    def require_zero(self):
        if self.zero is None:
            raise UnsupportedStructureError(
                f"tight spectrum needs 0 in E: {self.zero_problem}")
        return self.zero


def as_semilattice(E) -> Semilattice:
    if isinstance(E, Semilattice):
        return E
    if isinstance(E, FinRS):
        return Semilattice.from_rs(E)
    raise TypeError("expected a Semilattice or FinRS")


# --------------------------------------------------------------------------
# characters


@dataclass(frozen=True, order=True)
class Character:
    """A {0,1}-valued map on E as a bitmask over local positions."""

    bits: int
    width: int

    def __call__(self, i):
        return (self.bits >> i) & 1

    def support(self):
        return [i for i in range(self.width) if (self.bits >> i) & 1]

    def bitstring(self):
        return "".join(str(self(i)) for i in range(self.width))


def _bits_to_mask(bits):
    return sum(1 << i for i, b in enumerate(bits) if b)


def is_character(E: Semilattice, bits: int) -> bool:
    if bits == 0:
        return False
    k = E.size
    for i in range(k):
        for j in range(i, k):
            m = E.meet[i, j]
            if ((bits >> m) & 1) != (((bits >> i) & (bits >> j)) & 1):
                return False
    return True


def _filter_closure(E: Semilattice, mask: int) -> int:
    """Smallest up-closed, meet-closed set containing ``mask``."""
    k = E.size
    cur = mask
    while True:
        members = [i for i in range(k) if (cur >> i) & 1]
        nxt = cur
        for i, j in itertools.combinations(members, 2):
            nxt |= 1 << int(E.meet[i, j])
        for i in members:
            nxt |= E.up_masks[i]
        if nxt == cur:
            return cur
        cur = nxt


def _brute_force(E: Semilattice):
    k = E.size
    masks = np.arange(1, 1 << k, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(k)) & 1).astype(bool)
    ok = np.ones(len(masks), dtype=bool)
    for i in range(k):
        for j in range(i, k):
            ok &= bits[:, E.meet[i, j]] == (bits[:, i] & bits[:, j])
    return set(int(m) for m in masks[ok])


def enumerate_characters(E) -> list[Character]:
    """All nonzero multiplicative {0,1}-maps, found as filters.

    Filters are generated by closing singletons and then repeatedly adding
    one element and re-closing. For |E| <= 16 the result is compared with a
    brute-force scan of all maps. Sorted by the position of the least
    element of the support.
    """
    E = as_semilattice(E)
    k = E.size
    guards.check("semilattice for character enumeration", k, guards.MAX_CHARACTER_E)
    found = set()
    frontier = [_filter_closure(E, 1 << i) for i in range(k)]
    while frontier:
        f = frontier.pop()
        if f in found:
            continue
        found.add(f)
        for i in range(k):
            if not (f >> i) & 1:
                g = _filter_closure(E, f | (1 << i))
                if g not in found:
                    frontier.append(g)
    for f in found:
        if not is_character(E, f):
            raise InternalConsistencyError("filter closure produced a non-character")
    if k <= guards.MAX_BRUTE_FORCE_E and found != _brute_force(E):
        raise InternalConsistencyError("filter enumeration disagrees with brute force")
    chars = []
    for f in found:
        mins = [i for i in range(k) if (f >> i) & 1 and E.up_masks[i] == f]
        if len(mins) != 1:
            raise InternalConsistencyError("finite character is not principal")
        chars.append((mins[0], Character(f, k)))
    chars.sort()
    return [c for _, c in chars]


def principal_character(E, e) -> Character:
    """``1`` on the upper set of e. ``e`` is an owner index."""
    E = as_semilattice(E)
    return Character(E.up_masks[E.local(e)], E.size)


def character_label(E, phi: Character) -> str:
    E = as_semilattice(E)
    for i in range(E.size):
        if E.up_masks[i] == phi.bits:
            return f"ς_{E.names[i]}"
    return "φ_" + phi.bitstring()


def character_json(E, phi: Character):
    E = as_semilattice(E)
    return {"label": character_label(E, phi), "bits": phi.bitstring(),
            "support": [E.names[i] for i in phi.support()]}


# --------------------------------------------------------------------------
# actions


@dataclass(frozen=True, eq=False)
class EtaleAction:
    """Partial bijections ``theta_s : D_lam(s) -> D_rho(s)`` of a finite set.

    ``domains`` maps each projection (owner index) to a frozenset of carrier
    positions and ``maps[s]`` is a dict on carrier positions.
    """

    semigroup: FinRS
    carrier: tuple
    domains: dict
    maps: tuple

    @cached_property
    def semilattice(self):
        return Semilattice.from_rs(self.semigroup)

    @cached_property
    def inverses(self):
        return tuple({y: x for x, y in m.items()} for m in self.maps)

    @property
    def size(self):
        return len(self.carrier)

    def dom(self, s):
        return self.domains[int(self.semigroup.lam[s])]

    def ran(self, s):
        return self.domains[int(self.semigroup.rho[s])]

    def theta(self, s, x):
        return self.maps[s][x]

    def zeta(self, s, y):
        return self.inverses[s][y]

    def label(self, x):
        c = self.carrier[x]
        if isinstance(c, Character):
            return character_label(self.semilattice, c)
        return str(c)

    def to_json(self):
        S = self.semigroup
        return {
            "carrier": [self.label(x) for x in range(self.size)],
            "domains": {S.name(e): sorted(self.label(x) for x in d)
                        for e, d in self.domains.items()},
            "maps": {S.name(s): {self.label(x): self.label(y) for x, y in m.items()}
                     for s, m in enumerate(self.maps)},
        }

    @classmethod
    def from_maps(cls, S: FinRS, carrier, maps):
        """Build from per-element dicts; projection domains are read off
        the projection maps."""
        maps = tuple(dict(m) for m in maps)
        domains = {e: frozenset(maps[e]) for e in S.E}
        return cls(S, tuple(carrier), domains, maps)


def trivial_action(S: FinRS, carrier) -> EtaleAction:
    """Every element acts as the identity of the whole carrier."""
    carrier = tuple(carrier)
    ident = {x: x for x in range(len(carrier))}
    return EtaleAction.from_maps(S, carrier, [ident] * S.n)


def action_violations(action: EtaleAction):
    """List of (law, witness) pairs; empty when the action is valid."""
    S = action.semigroup
    out = []
    X = set(range(action.size))
    union = set().union(*action.domains.values()) if action.domains else set()
    if union != X:
        out.append(("domains_cover_carrier", sorted(X - union)[:1]))
    for e in S.E:
        m = action.maps[e]
        d = action.domains[e]
        if set(m) != d or any(m[x] != x for x in m):
            out.append(("projection_acts_as_identity", [S.name(e)]))
    for s, m in enumerate(action.maps):
        if set(m) != set(action.dom(s)):
            out.append(("domain_is_lam_domain", [S.name(s)]))
        if len(set(m.values())) != len(m):
            out.append(("injective", [S.name(s)]))
        if set(m.values()) != set(action.ran(s)):
            out.append(("range_is_rho_domain", [S.name(s)]))
    if out:
        return out
    T = S.table
    for s, ms in enumerate(action.maps):
        for t, mt in enumerate(action.maps):
            comp = {x: ms[y] for x, y in mt.items() if y in ms}
            if comp != action.maps[T[s, t]]:
                out.append(("multiplicative", [S.name(s), S.name(t)]))
                return out
    return out


def canonical_action(S: FinRS) -> EtaleAction:
    """``theta_s(phi)(f) = phi(lam(fs))`` on the characters of E."""
    _require_restriction(S, "the canonical action")
    E = Semilattice.from_rs(S)
    chars = enumerate_characters(E)
    where = {c.bits: i for i, c in enumerate(chars)}
    k = E.size
    T, lam, rho = S.table, S.lam, S.rho
    src = np.array(E.source)
    domains = {}
    for i, e in enumerate(E.source):
        domains[e] = frozenset(x for x, c in enumerate(chars) if c(i))

    def push(s, through, phi):
        # local positions of through(f s) or through(s f) for each f
        bits = 0
        for i in range(k):
            if phi(E.local(through(src[i]))):
                bits |= 1 << i
        try:
            return where[bits]
        except KeyError:
            raise InternalConsistencyError("image of a character is not a character",
                                           element=S.name(s)) from None

    maps, invs = [], []
    for s in range(S.n):
        dl, dr = domains[int(lam[s])], domains[int(rho[s])]
        maps.append({x: push(s, lambda f: lam[T[f, s]], chars[x]) for x in sorted(dl)})
        invs.append({y: push(s, lambda f: rho[T[s, f]], chars[y]) for y in sorted(dr)})
    action = EtaleAction(S, tuple(chars), domains, tuple(maps))
    for s in range(S.n):
        if {y: x for x, y in maps[s].items()} != invs[s]:
            raise InternalConsistencyError("stored inverse is not the inverse",
                                           element=S.name(s))
        sl = where[principal_character(E, lam[s]).bits]
        sr = where[principal_character(E, rho[s]).bits]
        if maps[s].get(sl) != sr:
            raise InternalConsistencyError("principal character not carried to principal",
                                           element=S.name(s))
    bad = action_violations(action)
    if bad:
        raise InternalConsistencyError("canonical action violates the action laws",
                                       violations=bad[:3])
    return action


# --------------------------------------------------------------------------
# covers and tight characters


def _nonzero_mask(E):
    return ((1 << E.size) - 1) & ~(1 << E.zero)


def is_cover(E, Z, x) -> bool:
    """True iff every nonzero y <= x meets some z in Z nontrivially.

    ``Z`` and ``x`` are owner indices; Z must lie below x.
    """
    E = as_semilattice(E)
    zero = E.require_zero()
    xl = E.local(x)
    zl = [E.local(z) for z in Z]
    if any(not E.le(z, xl) for z in zl):
        raise ValueError("cover elements must lie below x")
    zmask = _bits_to_mask([i in zl for i in range(E.size)]) & ~(1 << zero)
    return _covers(E, zmask, xl)


def _covers(E, zmask, xl):
    zero = E.zero
    below = E.down_masks[xl] & ~(1 << zero)
    for y in range(E.size):
        if not (below >> y) & 1:
            continue
        meets = 0
        for z in range(E.size):
            if (zmask >> z) & 1 and E.meet[z, y] != zero:
                meets = 1
                break
        if not meets:
            return False
    return True


def covers_of(E, x):
    """All covers of x as local bitmasks, zero excluded."""
    E = as_semilattice(E)
    E.require_zero()
    xl = E.local(x)
    below = E.down_masks[xl] & ~(1 << E.zero)
    guards.check("down-set for cover enumeration", bin(E.down_masks[xl]).count("1"),
                 guards.MAX_COVER_DOWNSET)
    members = [i for i in range(E.size) if (below >> i) & 1]
    out = []
    for r in range(len(members) + 1):
        for combo in itertools.combinations(members, r):
            m = _bits_to_mask([i in combo for i in range(E.size)])
            if _covers(E, m, xl):
                out.append(m)
    return out


def push_cover(S: FinRS, Z, s, x):
    """``{lam(zs) : z in Z}``; asserts it covers ``lam(xs)``."""
    if not is_cover(S, Z, x):
        raise ValueError("Z is not a cover for x")
    T, lam = S.table, S.lam
    Zs = frozenset(int(lam[T[z, s]]) for z in Z)
    if not is_cover(S, Zs, int(lam[T[x, s]])):
        raise InternalConsistencyError("pushed set is not a cover",
                                       element=S.name(s), x=S.name(x))
    return Zs


def _tight_in(E, chars):
    covers = {x: covers_of(E, E.source[x]) for x in range(E.size)}
    tight = []
    for phi in chars:
        if phi(E.zero):
            continue
        ok = all(not phi(x) or all(cz & phi.bits for cz in covers[x])
                 for x in range(E.size))
        if ok:
            tight.append(phi)
    return tight


def tight_spectrum(S) -> list[Character]:
    """Tight characters by exhaustive cover enumeration.

    Given a FinRS, also asserts that the canonical action maps tight
    characters to tight characters.
    """
    E = as_semilattice(S)
    E.require_zero()
    if not isinstance(S, FinRS):
        return _tight_in(E, enumerate_characters(E))
    action = canonical_action(S)
    tight = _tight_in(E, list(action.carrier))
    pos = {c.bits: i for i, c in enumerate(action.carrier)}
    tight_pos = {pos[c.bits] for c in tight}
    zero_killed = {x for x, c in enumerate(action.carrier) if not c(E.zero)}
    for s, m in enumerate(action.maps):
        for x, y in m.items():
            if x in tight_pos and y not in tight_pos:
                raise InternalConsistencyError("image of a tight character is not tight",
                                               element=S.name(s))
            if x in zero_killed and y not in zero_killed:
                raise InternalConsistencyError("action leaves the characters vanishing at 0")
    return tight
