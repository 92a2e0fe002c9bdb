"""Finite restriction semigroups.

Elements are dense integer indices ``0..n-1`` into a Cayley table, with
``table[s, t]`` the product ``st``. A semigroup carries a commutative
subsemigroup of idempotents ``E`` (the projections) and two structure maps
``lam``/``rho`` into ``E``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import guards, kernels
from .errors import InternalConsistencyError, NotRestrictionError, StructureError

AXIOMS = ("P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8")
EHRESMANN = ("P1", "P2", "P3", "P4", "P5", "P6")
LEFT_RESTRICTION = ("P1", "P3", "P5", "P7")


# --------------------------------------------------------------------------
# partial maps


def _sorted(items):
    try:
        return tuple(sorted(items))
    except TypeError:
        return tuple(sorted(items, key=repr))


@dataclass(frozen=True)
class PartialMap:
    """A partial function stored as sorted (x, f(x)) pairs.

    The codomain is always taken to be the image, so the product
    ``f.compose(g)`` (f after g) is the product of the semigroup of partial
    surjections.
    """

    pairs: tuple

    @classmethod
    def from_dict(cls, mapping):
        return cls(_sorted(mapping.items()))

    @classmethod
    def identity(cls, points):
        return cls(_sorted((p, p) for p in points))

    @cached_property
    def as_dict(self):
        return dict(self.pairs)

    @property
    def domain(self):
        return frozenset(x for x, _ in self.pairs)

    @property
    def image(self):
        return frozenset(y for _, y in self.pairs)

    def __call__(self, x):
        return self.as_dict[x]

    def __len__(self):
        return len(self.pairs)

    def compose(self, other):
        """``self`` after ``other``, defined on ``other^-1(dom self)``."""
        mine = self.as_dict
        return PartialMap.from_dict(
            {x: mine[y] for x, y in other.pairs if y in mine})

    def is_injective(self):
        return len(self.image) == len(self.pairs)

    def inverse(self):
        if not self.is_injective():
            raise ValueError("partial map is not injective")
        return PartialMap.from_dict({y: x for x, y in self.pairs})

    def label(self):
        if not self.pairs:
            return "{}"
        return "{" + ",".join(f"{x}>{y}" for x, y in self.pairs) + "}"


# --------------------------------------------------------------------------
# the semigroup type


def _as_table(table):
    t = np.array(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise StructureError("Cayley table must be a non-empty square array",
                             shape=list(t.shape))
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise StructureError("Cayley table has entries outside 0..n-1")
    return t


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


def check_projections(table, E):
    """Raise StructureError unless E is a commutative subsemigroup of idempotents."""
    n = table.shape[0]
    E = tuple(int(e) for e in E)
    if not E:
        raise StructureError("the set of projections is empty")
    if len(set(E)) != len(E) or min(E) < 0 or max(E) >= n:
        raise StructureError("projections must be distinct element indices")
    Eset = set(E)
    for e in E:
        if table[e, e] != e:
            raise StructureError("projection is not idempotent", element=e)
    for e, f in itertools.combinations_with_replacement(E, 2):
        if table[e, f] != table[f, e]:
            raise StructureError("projections do not commute", pair=(e, f))
        if int(table[e, f]) not in Eset:
            raise StructureError("projections are not closed under products",
                                 pair=(e, f))
    return E


def derive_structure_maps(table, E):
    """``lam(s) = min{f in E : sf = s}`` and ``rho(s) = min{f in E : fs = s}``.

    Raises NotRestrictionError when some element has no fixing projection
    or the fixing projections have no minimum.
    """
    table = _as_table(table)
    E = check_projections(table, E)
    Earr = np.array(E, dtype=np.int64)
    n = table.shape[0]
    ar = np.arange(n)
    # le[i, j]: E[i] <= E[j]
    le = table[np.ix_(Earr, Earr)] == Earr[:, None]

    def minimum(fixes, side):
        out = np.empty(n, dtype=np.int64)
        for s in range(n):
            idx = np.nonzero(fixes[s])[0]
            if len(idx) == 0:
                raise NotRestrictionError(
                    f"no projection fixes element {s} on the {side}", element=s)
            sub = le[np.ix_(idx, idx)]
            mins = idx[sub.all(axis=1)]
            if len(mins) != 1:
                strictly_below = sub & ~np.eye(len(idx), dtype=bool)
                minimal = idx[~strictly_below.any(axis=0)]
                raise NotRestrictionError(
                    f"fixing projections of {s} have no minimum",
                    element=s, incomparable=[int(Earr[i]) for i in minimal[:2]])
            out[s] = Earr[mins[0]]
        return out

    lam = minimum(table[:, Earr] == ar[:, None], "right")
    rho = minimum(table[Earr, :].T == ar[:, None], "left")
    return lam, rho


@dataclass(frozen=True, eq=False)
class FinRS:
    """A finite semigroup with projections and structure maps.

    Use :meth:`build` (derives the structure maps) rather than the raw
    constructor.
    """

    table: np.ndarray
    E: tuple
    lam: np.ndarray
    rho: np.ndarray
    names: tuple = field(default=())

    @classmethod
    def build(cls, table, E, names=None, lam=None, rho=None):
        table = _as_table(table)
        guards.check("semigroup", table.shape[0], guards.MAX_SEMIGROUP)
        E = tuple(sorted(int(e) for e in E))
        dlam, drho = derive_structure_maps(table, E)
        for given, derived, label in ((lam, dlam, "lambda"), (rho, drho, "rho")):
            if given is not None:
                given = np.asarray(given, dtype=np.int64)
                bad = np.nonzero(given != derived)[0]
                if len(bad):
                    s = int(bad[0])
                    raise StructureError(
                        f"supplied {label} disagrees with the derived map",
                        element=s, supplied=int(given[s]), derived=int(derived[s]))
        n = table.shape[0]
        names = tuple(str(x) for x in names) if names is not None else tuple(map(str, range(n)))
        if len(names) != n or len(set(names)) != n:
            raise StructureError("element names must be distinct, one per element")
        return cls(_frozen(table), E, _frozen(dlam), _frozen(drho), names)

    @classmethod
    def from_operation(cls, elements, op, projections, names=None):
        """Tabulate ``op`` over a list of hashable elements."""
        elements = list(elements)
        index = {x: i for i, x in enumerate(elements)}
        n = len(elements)
        guards.check("semigroup", n, guards.MAX_SEMIGROUP)
        table = np.empty((n, n), dtype=np.int64)
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                try:
                    table[i, j] = index[op(x, y)]
                except KeyError:
                    raise StructureError("operation is not closed",
                                         pair=(i, j)) from None
        E = [index[p] for p in projections]
        return cls.build(table, E, names=names)

    # basic accessors

    @property
    def n(self):
        return self.table.shape[0]

    def __len__(self):
        return self.n

    def mul(self, s, t):
        return int(self.table[s, t])

    def name(self, s):
        return self.names[s]

    @cached_property
    def _index(self):
        return {nm: i for i, nm in enumerate(self.names)}

    def index(self, name):
        try:
            return self._index[str(name)]
        except KeyError:
            raise KeyError(f"unknown element {name!r}") from None

    @cached_property
    def Eset(self):
        return frozenset(self.E)

    @cached_property
    def zero(self):
        """Index of the zero element, or None."""
        t = self.table
        for z in range(self.n):
            if (t[z] == z).all() and (t[:, z] == z).all():
                return z
        return None

    @cached_property
    def nonassociative_triple(self):
        return kernels.find_nonassociative(self.table)

    @cached_property
    def leq(self):
        """Natural partial order: ``leq[s, t]`` iff ``s = t lam(s)``."""
        m = kernels.natural_leq_matrix(self.table, self.lam)
        m.setflags(write=False)
        return m

    def eleq(self, e, f):
        """Order on projections: e <= f iff ef = e."""
        return self.table[e, f] == e


# --------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    passed: dict
    witnesses: dict
    classification: str
    properties: list

    @property
    def restriction(self):
        return all(self.passed.values())

    def failing(self):
        return [a for a in AXIOMS if not self.passed[a]]

    def to_json(self):
        return {"axioms": dict(self.passed), "witnesses": dict(self.witnesses),
                "classification": self.classification,
                "properties": list(self.properties)}


def _first(mask):
    bad = np.argwhere(~mask)
    return None if len(bad) == 0 else tuple(int(x) for x in bad[0])


def validate_axioms(S: FinRS) -> AxiomReport:
    """Exhaustively check P1 to P8 and classify.

    Structural problems (non-associativity, structure maps leaving E) raise
    StructureError before any axiom is tested.
    """
    T, lam, rho, n = S.table, S.lam, S.rho, S.n
    triple = S.nonassociative_triple
    if triple is not None:
        raise StructureError("table is not associative",
                             triple=[S.name(x) for x in triple])
    for label, m in (("lambda", lam), ("rho", rho)):
        outside = [s for s in range(n) if int(m[s]) not in S.Eset]
        if outside:
            raise StructureError(f"{label} leaves the projections",
                                 element=S.name(outside[0]))

    E = np.array(S.E, dtype=np.int64)
    ar = np.arange(n)
    nm = S.name
    passed, wit = {}, {}

    def record(axiom, mask, roles, explain):
        w = _first(mask)
        passed[axiom] = w is None
        if w is not None:
            vals = roles(w)
            wit[axiom] = {k: nm(v) for k, v in vals.items()}
            wit[axiom]["detail"] = explain(vals)

    record("P1", lam[E] == E, lambda w: {"f": E[w[0]]},
           lambda v: f"lam({nm(v['f'])}) = {nm(lam[v['f']])}")
    record("P2", rho[E] == E, lambda w: {"f": E[w[0]]},
           lambda v: f"rho({nm(v['f'])}) = {nm(rho[v['f']])}")
    record("P3", T[ar, lam] == ar, lambda w: {"s": w[0]},
           lambda v: f"s lam(s) = {nm(T[v['s'], lam[v['s']]])}")
    record("P4", T[rho, ar] == ar, lambda w: {"s": w[0]},
           lambda v: f"rho(s) s = {nm(T[rho[v['s']], v['s']])}")
    record("P5", lam[T] == lam[T[lam]], lambda w: {"s": w[0], "t": w[1]},
           lambda v: f"lam(st) = {nm(lam[T[v['s'], v['t']]])}, "
                     f"lam(lam(s)t) = {nm(lam[T[lam[v['s']], v['t']]])}")
    record("P6", rho[T] == rho[T[:, rho]], lambda w: {"s": w[0], "t": w[1]},
           lambda v: f"rho(st) = {nm(rho[T[v['s'], v['t']]])}, "
                     f"rho(s rho(t)) = {nm(rho[T[v['s'], rho[v['t']]]])}")
    FS = T[E, :]                                   # FS[i, s] = E[i] s
    record("P7", FS == T[ar[None, :], lam[FS]], lambda w: {"f": E[w[0]], "s": w[1]},
           lambda v: f"fs = {nm(T[v['f'], v['s']])}, "
                     f"s lam(fs) = {nm(T[v['s'], lam[T[v['f'], v['s']]]])}")
    SF = T[:, E]                                   # SF[s, i] = s E[i]
    record("P8", SF == T[rho[SF], ar[:, None]], lambda w: {"s": w[0], "f": E[w[1]]},
           lambda v: f"sf = {nm(T[v['s'], v['f']])}, "
                     f"rho(sf) s = {nm(T[rho[T[v['s'], v['f']]], v['s']])}")

    props = []
    if all(passed[a] for a in AXIOMS):
        props.append("restriction")
    if all(passed[a] for a in EHRESMANN):
        props.append("Ehresmann")
    if all(passed[a] for a in LEFT_RESTRICTION):
        props.append("left-restriction")
    classification = props[0] if props else "none"
    return AxiomReport(passed, wit, classification, props)


def _require_restriction(S, what):
    rep = validate_axioms(S)
    if not rep.restriction:
        raise StructureError(f"{what} needs a restriction semigroup",
                             failing=rep.failing())
    return rep


# --------------------------------------------------------------------------
# order, ampleness, inverses


def natural_leq(S: FinRS, s: int, t: int) -> bool:
    """``s <= t`` in the natural order, ``s = t lam(s)``.

    In a restriction semigroup this is cross-checked against
    ``s = tf``, ``s = ft`` for some projection f, and ``s = rho(s)t``.
    """
    T = S.table
    a = T[t, S.lam[s]] == s
    b = any(T[t, f] == s for f in S.E)
    c = any(T[f, t] == s for f in S.E)
    d = T[S.rho[s], t] == s
    if not (a == b == c == d) and validate_axioms(S).restriction:
        raise InternalConsistencyError(
            "characterisations of the natural order disagree",
            pair=(S.name(s), S.name(t)), values=[bool(a), bool(b), bool(c), bool(d)])
    return bool(a)


@dataclass
class AmpleReport:
    left: bool
    right: bool
    left_witness: tuple | None
    right_witness: tuple | None

    @property
    def ample(self):
        return self.left and self.right

    def to_json(self, S=None):
        name = S.name if S is not None else (lambda x: x)
        conv = lambda w: None if w is None else [name(x) for x in w]
        return {"left_ample": self.left, "right_ample": self.right,
                "ample": self.ample, "left_witness": conv(self.left_witness),
                "right_witness": conv(self.right_witness)}


def classify_ample(S: FinRS) -> AmpleReport:
    """Left ample: st = su implies lam(s)t = lam(s)u. Right ample is the dual.

    Witnesses are triples (s, t, u); for the right-hand test they read
    ts = us with t rho(s) != u rho(s).
    """
    lw = kernels.find_ample_violation(S.table, S.lam)
    rw = kernels.find_ample_violation(np.ascontiguousarray(S.table.T), S.rho)
    return AmpleReport(lw is None, rw is None, lw, rw)


def is_inverse(S: FinRS):
    """Return the involution ``s -> s*`` as an array if S is an inverse
    semigroup whose projections are all of its idempotents, else None."""
    T, n = S.table, S.n
    ar = np.arange(n)
    idem = set(np.nonzero(T[ar, ar] == ar)[0].tolist())
    if idem != set(S.E):
        return None
    inv = np.empty(n, dtype=np.int64)
    for s in range(n):
        sts = T[T[s, ar], s] == s
        tst = T[T[ar, s], ar] == ar
        cands = np.nonzero(sts & tst)[0]
        if len(cands) != 1:
            return None
        inv[s] = cands[0]
    if not ((T[ar, inv] == S.rho).all() and (T[inv, ar] == S.lam).all()):
        raise InternalConsistencyError("inverse semigroup structure maps are not ss*, s*s")
    return inv


# --------------------------------------------------------------------------
# Wagner-Preston style embedding


@dataclass
class Embedding:
    maps: tuple
    injective: bool
    all_bijective: bool
    left_ample: bool

    def to_json(self, S):
        return {
            "maps": {S.name(s): {S.name(x): S.name(y) for x, y in m.pairs}
                     for s, m in enumerate(self.maps)},
            "injective": self.injective,
            "all_bijective": self.all_bijective,
            "left_ample": self.left_ample,
        }


def embedding_domain(S: FinRS, s: int) -> frozenset:
    """``{t : lam(s) t = t}``."""
    col = S.table[S.lam[s]]
    return frozenset(np.nonzero(col == np.arange(S.n))[0].tolist())


def wagner_preston_embed(S: FinRS) -> Embedding:
    """Represent S by partial maps ``t -> st`` on ``{t : lam(s)t = t}``.

    Needs P1, P3, P5 and P7. Checks the homomorphism law in the semigroup of
    partial surjections, that projections go to identities, and injectivity.
    """
    rep = validate_axioms(S)
    if "left-restriction" not in rep.properties:
        raise StructureError("embedding needs a left restriction semigroup",
                             failing=rep.failing())
    T, n = S.table, S.n
    two_sided = all(rep.passed[a] for a in ("P2", "P4", "P6"))
    maps = []
    for s in range(n):
        dom = embedding_domain(S, s)
        if two_sided:
            alt = frozenset(t for t in range(n) if S.eleq(S.rho[t], S.lam[s]))
            if alt != dom:
                raise InternalConsistencyError(
                    "domain of the embedded map has two inequivalent descriptions",
                    element=S.name(s))
        maps.append(PartialMap.from_dict({t: int(T[s, t]) for t in dom}))
    for e in S.E:
        if maps[e] != PartialMap.identity(maps[e].domain):
            raise InternalConsistencyError("projection does not act as an identity",
                                           element=S.name(e))
    for s in range(n):
        for u in range(n):
            if maps[s].compose(maps[u]) != maps[T[s, u]]:
                raise InternalConsistencyError("embedding is not multiplicative",
                                               pair=(S.name(s), S.name(u)))
    injective = len(set(maps)) == n
    if not injective:
        raise InternalConsistencyError("embedding is not injective")
    ample = classify_ample(S).left
    bij = all(m.is_injective() for m in maps)
    if ample and not bij:
        raise InternalConsistencyError("left ample semigroup produced a non-injective map")
    return Embedding(tuple(maps), injective, bij, ample)


# --------------------------------------------------------------------------
# regularity window


@dataclass
class RegularityReport:
    coincide: bool
    mismatches: list
    regular: bool
    inverses: dict | None

    def to_json(self, S):
        return {
            "coincide": self.coincide,
            "regular": self.regular,
            "mismatches": [S.name(s) for s in self.mismatches],
            "inverses": None if self.inverses is None else
            {S.name(s): S.name(t) for s, t in self.inverses.items()},
        }


def check_regularity_window(S: FinRS) -> RegularityReport:
    """Compare the image ``C_s = s B_s`` with ``{y : rho(y) <= rho(s)}``.

    If they agree for every s an inverse is exhibited for each element.
    Conversely, when every element has an inverse t with st a projection,
    the sets are asserted to agree.
    """
    _require_restriction(S, "the regularity window")
    T, n = S.table, S.n
    ar = np.arange(n)
    mismatches = []
    for s in range(n):
        image = {int(T[s, t]) for t in embedding_domain(S, s)}
        window = {y for y in range(n) if S.eleq(S.rho[y], S.rho[s])}
        if image != window:
            mismatches.append(s)
    coincide = not mismatches

    found = {}
    for s in range(n):
        ok = (T[T[s, ar], s] == s) & (T[T[ar, s], ar] == ar) \
            & np.isin(T[s, ar], np.array(S.E))
        c = np.nonzero(ok)[0]
        if len(c):
            found[s] = int(c[0])
    regular = len(found) == n

    if coincide:
        for s in range(n):
            dom = embedding_domain(S, s)
            cands = [t for t in dom if T[s, t] == S.rho[s] and T[T[t, s], t] == t]
            if not cands:
                raise InternalConsistencyError(
                    "window coincides but no inverse found", element=S.name(s))
    if regular and not coincide:
        raise InternalConsistencyError(
            "inverses exist but the window does not coincide",
            element=S.name(mismatches[0]))
    return RegularityReport(coincide, mismatches, regular, found if regular else None)


# --------------------------------------------------------------------------
# derived identities


@dataclass
class IdentityReport:
    results: dict

    @property
    def ok(self):
        return all(v is None for v in self.results.values())

    def to_json(self, S):
        return {k: (True if v is None else [S.name(x) for x in v])
                for k, v in self.results.items()}


def verify_identities(S: FinRS) -> IdentityReport:
    """Check the order identities that hold in every restriction semigroup.

    Keys map to None (holds) or a witness tuple.
    """
    rep = validate_axioms(S)
    T, lam, rho, n, leq = S.table, S.lam, S.rho, S.n, S.leq
    ar = np.arange(n)
    E = np.array(S.E)
    res = {}

    # leq by its alternative characterisations
    right_mult = np.zeros((n, n), dtype=bool)
    left_mult = np.zeros((n, n), dtype=bool)
    for f in E:
        right_mult[T[:, f], ar] = True
        left_mult[T[f, :], ar] = True
    rho_mult = T[rho[:, None], ar[None, :]] == ar[:, None]
    res["order_characterisations"] = next(
        ((int(s), int(t)) for m in (right_mult, left_mult, rho_mult)
         for s, t in np.argwhere(m != leq)), None)

    dom = leq[rho[None, :], lam[:, None]]                   # rho(t) <= lam(s)
    res["domain_of_product"] = _first(dom == (lam[T] == lam[None, :]))
    r1 = np.ones((n, n), dtype=bool)
    r1[:, E] = leq[T[:, E], ar[:, None]]
    r2 = np.ones((n, n), dtype=bool)
    r2[:, E] = leq[T[E, :], ar[None, :]].T
    res["sf_below_s"] = _first(r1)
    res["fs_below_s"] = _first(r2)
    mono = ~leq | (leq[lam[:, None], lam[None, :]] & leq[rho[:, None], rho[None, :]])
    res["maps_monotone"] = _first(mono)
    same_l = lam[:, None] == lam[None, :]
    same_r = rho[:, None] == rho[None, :]
    eq = ar[:, None] == ar[None, :]
    res["lam_separates"] = _first(~(leq & same_l) | eq)
    res["rho_separates"] = _first(~(leq & same_r) | eq)
    res["lam_product"] = _first(leq[lam[T], lam[None, :]])
    res["rho_product"] = _first(leq[rho[T], rho[:, None]])
    res["order_below_product"] = kernels.find_order_split_violation(T, lam, rho, leq)

    report = IdentityReport(res)
    if rep.restriction and not report.ok:
        bad = [k for k, v in res.items() if v is not None]
        raise InternalConsistencyError("identity fails in a restriction semigroup",
                                       identities=bad)
    return report


# --------------------------------------------------------------------------
# standard families


def symmetric_inverse_monoid(points, names=None) -> FinRS:
    """All partial bijections of ``points`` under composition."""
    points = list(points)
    elems = []
    for k in range(len(points) + 1):
        for dom in itertools.combinations(points, k):
            for img in itertools.permutations(points, k):
                elems.append(PartialMap.from_dict(dict(zip(dom, img))))
    proj = [m for m in elems if all(x == y for x, y in m.pairs)]
    return FinRS.from_operation(elems, PartialMap.compose, proj,
                                names or [m.label() for m in elems])


def partial_surjections(points, names=None) -> FinRS:
    """All partial maps of ``points``, each onto its image.

    Projections are the identities on subsets. This satisfies P1 to P7 but
    not P8 once there are two points.
    """
    points = list(points)
    elems = []
    for k in range(len(points) + 1):
        for dom in itertools.combinations(points, k):
            for img in itertools.product(points, repeat=k):
                elems.append(PartialMap.from_dict(dict(zip(dom, img))))
    proj = [m for m in elems if all(x == y for x, y in m.pairs)]
    return FinRS.from_operation(elems, PartialMap.compose, proj,
                                names or [m.label() for m in elems])


ZERO = "0"


def transformations_with_zero(points, names=None) -> FinRS:
    """All total self-maps of ``points`` plus an adjoined zero; E = {0, id}."""
    points = list(points)
    maps = [PartialMap.from_dict(dict(zip(points, img)))
            for img in itertools.product(points, repeat=len(points))]
    ident = PartialMap.identity(points)
    maps.sort(key=lambda m: (m != ident, m.pairs))
    elems = maps + [ZERO]

    def op(x, y):
        if x == ZERO or y == ZERO:
            return ZERO
        return x.compose(y)

    return FinRS.from_operation(elems, op, [ident, ZERO],
                                names or [m.label() if m != ZERO else "0" for m in elems])


def semilattice(meet, names=None) -> FinRS:
    """A meet semilattice viewed as a restriction semigroup with E = S."""
    meet = np.asarray(meet, dtype=np.int64)
    return FinRS.build(meet, range(meet.shape[0]), names=names)


def monoid(table, names=None) -> FinRS:
    """A monoid with only its identity as projection."""
    table = _as_table(table)
    n = table.shape[0]
    units = [u for u in range(n)
             if (table[u] == np.arange(n)).all() and (table[:, u] == np.arange(n)).all()]
    if not units:
        raise StructureError("table has no identity element")
    return FinRS.build(table, [units[0]], names=names)


def group_with_zero(table, names=None) -> FinRS:
    """Adjoin a zero to a group table; E = {1, 0}."""
    table = _as_table(table)
    n = table.shape[0]
    full = np.full((n + 1, n + 1), n, dtype=np.int64)
    full[:n, :n] = table
    unit = [u for u in range(n) if (table[u] == np.arange(n)).all()][0]
    names = list(names) if names is not None else [str(i) for i in range(n)]
    return FinRS.build(full, [unit, n], names=names + ["0"])


def cyclic_group_table(k):
    a = np.arange(k)
    return (a[:, None] + a[None, :]) % k
