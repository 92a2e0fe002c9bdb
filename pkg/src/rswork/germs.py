"""Germs of an action and the category they form."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import guards
from .cat import (FinCat, UNDEFINED, bis_semigroup, is_left_cancellative,
                  validate_category)
from .errors import InternalConsistencyError, ValidationError
from .rsem import FinRS, classify_ample
from .spectrum import (EtaleAction, action_violations, canonical_action,
                       principal_character, trivial_action)

__all__ = [
    "ActionReport", "GermTable", "validate_action", "germ_category", "s_tilde",
    "check_ample_cancellative", "bis_germ_reconstruction", "induced_algebra_action",
    "trivial_action", "canonical_action",
]


@dataclass
class ActionReport:
    violations: list

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {"ok": self.ok,
                "violations": [{"law": l, "witness": w} for l, w in self.violations]}


def validate_action(S: FinRS, action: EtaleAction) -> ActionReport:
    if action.semigroup is not S:
        raise ValueError("action belongs to a different semigroup")
    return ActionReport(action_violations(action))


class _UnionFind:
    def __init__(self):
        self.parent = {}
        self.rank = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        self.rank.setdefault(a, 0)
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


@dataclass(eq=False)
class GermTable:
    """Germ classes ``[s, x]`` with their category.

    ``reps[c]`` is the lexicographically least pair in class c,
    ``members[c]`` all of its pairs, ``theta_sets[s]`` the class ids of
    ``{[s, x] : x in D_lam(s)}`` and ``unit_of[x]`` the class of ``[e, x]``.
    """

    action: EtaleAction
    reps: list
    members: list
    index: dict
    category: FinCat
    theta_sets: list
    unit_of: list = field(default_factory=list)

    def germ(self, s, x):
        return self.index[(s, x)]

    def label(self, c):
        return self.category.morphisms[c]

    def to_json(self):
        S, C = self.action.semigroup, self.category
        return [{"class_id": c,
                 "representative": [S.name(s), self.action.label(x)],
                 "members_count": len(self.members[c]),
                 "d": C.objects[C.d[c]], "r": C.objects[C.r[c]]}
                for c, (s, x) in enumerate(self.reps)]


def germ_category(S: FinRS, action: EtaleAction) -> GermTable:
    """Quotient ``{(s, x) : x in D_lam(s)}`` by ``(s, x) ~ (t, x)`` iff
    ``sf = tf`` for a projection f with ``x in D_f``."""
    rep = validate_action(S, action)
    if not rep.ok:
        raise ValidationError("action fails its laws", violations=rep.violations[:3])
    T = S.table
    pairs = [(s, x) for s in range(S.n) for x in sorted(action.dom(s))]
    uf = _UnionFind()
    for p in pairs:
        uf.find(p)
    by_point = {}
    for s, x in pairs:
        by_point.setdefault(x, []).append(s)
    for x, elems in by_point.items():
        for f in S.E:
            if x not in action.domains[f]:
                continue
            groups = {}
            for s in elems:
                groups.setdefault(int(T[s, f]), []).append(s)
            for g in groups.values():
                for s in g[1:]:
                    uf.union((g[0], x), (s, x))
    classes = {}
    for p in pairs:
        classes.setdefault(uf.find(p), []).append(p)
    groups = sorted((sorted(m) for m in classes.values()), key=lambda m: m[0])
    reps = [m[0] for m in groups]
    index = {p: c for c, m in enumerate(groups) for p in m}
    for m in groups:
        targets = {action.theta(s, x) for s, x in m}
        if len(targets) != 1:
            raise InternalConsistencyError("equivalent germs move the point differently",
                                           germ=[S.name(m[0][0]), action.label(m[0][1])])

    X = action.size
    unit_of = []
    for x in range(X):
        units = {index[(e, x)] for e in S.E if x in action.domains[e]}
        if len(units) != 1:
            raise InternalConsistencyError("projections disagree at a point",
                                           point=action.label(x))
        unit_of.append(units.pop())

    k = len(reps)
    d = [x for _, x in reps]
    r = [action.theta(s, x) for s, x in reps]
    comp = np.full((k, k), UNDEFINED, dtype=np.int64)
    for a in range(k):
        for b in range(k):
            if d[a] != r[b]:
                continue
            results = {index[(int(T[s, t]), y)]
                       for s, _ in groups[a] for t, y in groups[b]}
            if len(results) != 1:
                raise InternalConsistencyError("germ product depends on representatives",
                                               pair=[a, b])
            comp[a, b] = results.pop()
    names = [f"[{S.name(s)},{action.label(x)}]" for s, x in reps]
    objects = [action.label(x) for x in range(X)]
    C = FinCat.build(objects, names, d, r, unit_of, comp, "germs")
    crep = validate_category(C)
    if not crep.ok:
        raise InternalConsistencyError("germ category fails the category laws",
                                       failures=crep.failures)
    theta_sets = [frozenset(index[(s, x)] for x in action.dom(s)) for s in range(S.n)]
    for s, th in enumerate(theta_sets):
        if len({d[c] for c in th}) != len(th) or len({r[c] for c in th}) != len(th):
            raise InternalConsistencyError("germs of one element do not form a bisection",
                                           element=S.name(s))
    return GermTable(action, reps, groups, index, C, theta_sets, unit_of)


# --------------------------------------------------------------------------
# the embedded copy of S


@dataclass
class STilde:
    psi: list
    whole_category: bool

    def to_json(self, S, table):
        return {"psi": {S.name(s): table.category.morphisms[c] for s, c in enumerate(self.psi)},
                "whole_category": self.whole_category}


def s_tilde(S: FinRS, table: GermTable | None = None) -> STilde:
    """``psi(s) = [s, sigma_lam(s)]`` for the canonical action.

    Asserts psi is injective, its image is the set of germs between principal
    characters, the image is closed under left composition, psi(s)psi(t) is
    defined iff lam(s) = rho(t) and then equals psi(st), and
    ``[s, sigma_e] = psi(se)`` for e <= lam(s).
    """
    if table is None:
        table = germ_category(S, canonical_action(S))
    action, C, T = table.action, table.category, S.table
    E = action.semilattice
    where = {c.bits: i for i, c in enumerate(action.carrier)}
    sigma = {e: where[principal_character(E, e).bits] for e in S.E}
    psi = [table.germ(s, sigma[int(S.lam[s])]) for s in range(S.n)]
    image = set(psi)
    if len(image) != S.n:
        raise InternalConsistencyError("psi is not injective")
    principal = set(sigma.values())
    between = {c for c in range(C.n) if C.d[c] in principal and C.r[c] in principal}
    if image != between:
        raise InternalConsistencyError("image of psi is not the set of germs between principal characters")
    for c in image:
        for g in range(C.n):
            p = C.comp[g, c]
            if p >= 0 and int(p) not in image:
                raise InternalConsistencyError("image of psi is not closed under left composition")
    for s in range(S.n):
        for t in range(S.n):
            p = C.comp[psi[s], psi[t]]
            if (S.lam[s] == S.rho[t]) != (p != UNDEFINED):
                raise InternalConsistencyError("composability of psi images is wrong",
                                               pair=[S.name(s), S.name(t)])
            if p >= 0 and p != psi[T[s, t]]:
                raise InternalConsistencyError("psi is not multiplicative",
                                               pair=[S.name(s), S.name(t)])
    for s in range(S.n):
        for e in S.E:
            if S.eleq(e, S.lam[s]):
                if table.germ(s, sigma[e]) != psi[T[s, e]]:
                    raise InternalConsistencyError("restricted germ is not psi(se)",
                                                   pair=[S.name(s), S.name(e)])
    return STilde(psi, len(image) == C.n)


# --------------------------------------------------------------------------
# ampleness against cancellation


@dataclass
class AmpleCancelReport:
    canonical: bool
    left_ample: bool
    left_cancellative: bool
    witness: list | None
    ample_witness: list | None

    def to_json(self):
        return {"canonical": self.canonical, "left_ample": self.left_ample,
                "left_cancellative": self.left_cancellative,
                "cancellation_witness": self.witness,
                "ample_witness": self.ample_witness}


def check_ample_cancellative(S: FinRS, action: EtaleAction | None = None,
                             table: GermTable | None = None) -> AmpleCancelReport:
    """For the canonical action: left ample iff the germ category is left
    cancellative. For any other action only ample implies cancellative is
    asserted."""
    canonical = action is None
    if table is None:
        table = germ_category(S, canonical_action(S) if canonical else action)
    C = table.category
    amp = classify_ample(S)
    canc = is_left_cancellative(C)
    wit = None if canc.witness is None else [C.morphisms[i] for i in canc.witness]
    aw = None if amp.left_witness is None else [S.name(i) for i in amp.left_witness]
    if canonical and amp.left != canc.ok:
        raise InternalConsistencyError("ampleness and cancellation disagree for the canonical action")
    if amp.left and not canc.ok:
        raise InternalConsistencyError("left ample semigroup with a non-cancellative germ category")
    if amp.left:
        _check_partial_isometries(S, table)
    return AmpleCancelReport(canonical, amp.left, canc.ok, wit, aw)


def _check_partial_isometries(S, table):
    """[st, y] = [st', y'] with both targets in D_lam(s) forces [t, y] = [t', y']."""
    action, T = table.action, S.table
    for s in range(S.n):
        dom = action.dom(s)
        seen = {}
        for c, (t, y) in enumerate(table.reps):
            if action.theta(t, y) not in dom:
                continue
            key = table.germ(int(T[s, t]), y)
            if seen.setdefault(key, c) != c:
                raise InternalConsistencyError("left multiplication identifies distinct germs",
                                               element=S.name(s))


# --------------------------------------------------------------------------
# every category is a germ category


@dataclass
class ReconstructionReport:
    mapping: dict
    bisections: int
    germs: int

    def to_json(self):
        return {"ok": True, "bisections": self.bisections, "germs": self.germs,
                "mapping": self.mapping}


def bisection_action(D: FinCat):
    """Bis(D) acting on the objects of D by ``r_U o d_U^-1``."""
    S, bis = bis_semigroup(D)
    maps = [{int(D.d[x]): int(D.r[x]) for x in U} for U in bis]
    return S, bis, EtaleAction.from_maps(S, D.objects, maps)


def bis_germ_reconstruction(D: FinCat) -> ReconstructionReport:
    """Check that ``[U, x] -> d_U^-1(x)`` is an isomorphism from the germ
    category of the bisection action onto D."""
    guards.check("category for reconstruction", D.n, guards.MAX_RECONSTRUCTION_MORPHISMS)
    S, bis, action = bisection_action(D)
    table = germ_category(S, action)
    G = table.category
    phi = []
    for c, members in enumerate(table.members):
        imgs = set()
        for U, x in members:
            imgs |= {m for m in bis[U] if D.d[m] == x}
        if len(imgs) != 1:
            raise InternalConsistencyError("germ does not determine a morphism",
                                           germ=G.morphisms[c])
        phi.append(imgs.pop())
    if sorted(phi) != list(range(D.n)):
        raise InternalConsistencyError("germ map is not a bijection onto the morphisms")
    for c, m in enumerate(phi):
        if D.d[m] != G.d[c] or D.r[m] != G.r[c]:
            raise InternalConsistencyError("germ map does not preserve source and range")
    for x in range(len(D.objects)):
        if phi[G.unit[x]] != D.unit[x]:
            raise InternalConsistencyError("germ map does not preserve units")
    for a in range(G.n):
        for b in range(G.n):
            g, h = G.comp[a, b], D.comp[phi[a], phi[b]]
            if (g == UNDEFINED) != (h == UNDEFINED) or (g >= 0 and phi[g] != h):
                raise InternalConsistencyError("germ map is not a functor",
                                               pair=[G.morphisms[a], G.morphisms[b]])
    mapping = {G.morphisms[c]: D.morphisms[m] for c, m in enumerate(phi)}
    return ReconstructionReport(mapping, S.n, G.n)


# --------------------------------------------------------------------------
# action on functions


class AlgebraAction:
    """``alpha_s(g) = g o zeta_s`` on functions stored as carrier vectors."""

    def __init__(self, action: EtaleAction):
        self.action = action
        self.semigroup = action.semigroup
        m = action.size
        self._support = {e: np.isin(np.arange(m), sorted(d)) for e, d in action.domains.items()}
        self._check()

    def indicator(self, e, dtype=float):
        return self._support[e].astype(dtype)

    def point(self, x, dtype=float):
        v = np.zeros(self.action.size, dtype=dtype)
        v[x] = 1
        return v

    def _supported(self, g, e):
        return not np.any(np.asarray(g)[~self._support[e]] != 0)

    def apply(self, s, g):
        """Function on D_lam(s) to function on D_rho(s)."""
        S = self.semigroup
        if not self._supported(g, int(S.lam[s])):
            raise ValueError("function is not supported in the domain of the element")
        out = np.zeros_like(np.asarray(g))
        for x, y in self.action.maps[s].items():
            out[y] = g[x]
        return out

    def apply_inverse(self, s, g):
        S = self.semigroup
        if not self._supported(g, int(S.rho[s])):
            raise ValueError("function is not supported in the range of the element")
        out = np.zeros_like(np.asarray(g))
        for x, y in self.action.maps[s].items():
            out[x] = g[y]
        return out

    def _check(self):
        S, A = self.semigroup, self.action
        T = S.table
        for s in range(S.n):
            l, r = int(S.lam[s]), int(S.rho[s])
            if not np.array_equal(self.apply(s, self.indicator(l)), self.indicator(r)):
                raise InternalConsistencyError("alpha_s(1_lam(s)) != 1_rho(s)",
                                               element=S.name(s))
            for e in S.E:
                if S.eleq(e, l):
                    got = self.apply(s, self.indicator(e))
                    if not np.array_equal(got, self.indicator(int(S.rho[T[s, e]]))):
                        raise InternalConsistencyError("alpha_s(1_e) != 1_rho(se)",
                                                       pair=[S.name(s), S.name(e)])
        for s in range(S.n):
            for t in range(S.n):
                st = int(T[s, t])
                for x in A.dom(st):
                    v = self.point(x)
                    if not np.array_equal(self.apply(st, v), self.apply(s, self.apply(t, v))):
                        raise InternalConsistencyError("alpha is not multiplicative",
                                                       pair=[S.name(s), S.name(t)])


def induced_algebra_action(action: EtaleAction) -> AlgebraAction:
    rep = action_violations(action)
    if rep:
        raise ValidationError("action fails its laws", violations=rep[:3])
    return AlgebraAction(action)
