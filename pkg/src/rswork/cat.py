"""Finite small categories, possibly truncated to a window of morphisms.

Objects and morphisms are dense indices. ``comp[a, b]`` is the product
``ab`` (b first), defined when ``d(a) == r(b)``. Non-composable pairs hold
``UNDEFINED`` and products that fall outside a truncation window hold
``OVERFLOW``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import guards, kernels
from .errors import (InternalConsistencyError, StructureError, TruncationError,
                     ValidationError)
from .rsem import FinRS, validate_axioms

UNDEFINED = kernels.UNDEFINED
OVERFLOW = kernels.OVERFLOW


@dataclass(frozen=True, eq=False)
class FinCat:
    objects: tuple
    morphisms: tuple
    d: np.ndarray
    r: np.ndarray
    unit: np.ndarray
    comp: np.ndarray
    name: str = ""

    @classmethod
    def build(cls, objects, morphisms, d, r, unit, comp, name=""):
        objects = tuple(str(o) for o in objects)
        morphisms = tuple(str(m) for m in morphisms)
        n, k = len(morphisms), len(objects)
        arrs = [np.array(a, dtype=np.int64) for a in (d, r, unit)]
        comp = np.array(comp, dtype=np.int64).reshape(n, n) if n else np.zeros((0, 0), np.int64)
        if len(set(morphisms)) != n or len(set(objects)) != k:
            raise StructureError("object and morphism names must be distinct")
        if arrs[0].shape != (n,) or arrs[1].shape != (n,) or arrs[2].shape != (k,):
            raise StructureError("structure maps have the wrong length")
        for a in arrs:
            a.setflags(write=False)
        comp.setflags(write=False)
        return cls(objects, morphisms, arrs[0], arrs[1], arrs[2], comp, name)

    @classmethod
    def from_products(cls, objects, morphisms, products, units, name=""):
        """``morphisms`` is a list of (name, d, r); ``products`` maps name
        pairs to a name or OVERFLOW; ``units`` maps object to its unit.

        Products with a unit on either side are filled in automatically.
        A composable pair of non-units with no entry is an error.
        """
        objects = [str(o) for o in objects]
        oidx = {o: i for i, o in enumerate(objects)}
        names = [str(m[0]) for m in morphisms]
        midx = {m: i for i, m in enumerate(names)}
        try:
            d = [oidx[str(m[1])] for m in morphisms]
            r = [oidx[str(m[2])] for m in morphisms]
            unit = [midx[str(units[o])] for o in objects]
        except KeyError as exc:
            raise StructureError(f"unknown name {exc.args[0]!r}") from None
        n = len(names)
        comp = np.full((n, n), UNDEFINED, dtype=np.int64)
        unitset = set(unit)
        for a in range(n):
            for b in range(n):
                if d[a] != r[b]:
                    continue
                key = (names[a], names[b])
                if key in products:
                    c = products[key]
                    comp[a, b] = OVERFLOW if isinstance(c, int) and c == OVERFLOW else midx[str(c)]
                elif a in unitset:
                    comp[a, b] = b
                elif b in unitset:
                    comp[a, b] = a
                else:
                    raise StructureError("missing product for a composable pair",
                                         pair=list(key))
        for key in products:
            a, b = midx[key[0]], midx[key[1]]
            if d[a] != r[b]:
                raise StructureError("product given for a non-composable pair",
                                     pair=list(key))
        return cls.build(objects, names, d, r, unit, comp, name)

    # sizes and lookups

    @property
    def n(self):
        return len(self.morphisms)

    @cached_property
    def _midx(self):
        return {m: i for i, m in enumerate(self.morphisms)}

    @cached_property
    def _oidx(self):
        return {o: i for i, o in enumerate(self.objects)}

    def index(self, name):
        try:
            return self._midx[str(name)]
        except KeyError:
            raise KeyError(f"unknown morphism {name!r}") from None

    def object_index(self, name):
        try:
            return self._oidx[str(name)]
        except KeyError:
            raise KeyError(f"unknown object {name!r}") from None

    @cached_property
    def overflow(self):
        return [tuple(map(int, p)) for p in np.argwhere(self.comp == OVERFLOW)]

    @property
    def truncated(self):
        return bool(self.overflow)

    @cached_property
    def unit_set(self):
        return frozenset(int(u) for u in self.unit)

    @cached_property
    def factorizations(self):
        """Arrays (xs, ys, zs) listing every in-window product x y = z."""
        xs, ys = np.nonzero(self.comp >= 0)
        return xs, ys, self.comp[xs, ys]

    def factors_of(self, z):
        """M_z: pairs (x, y) with xy = z."""
        xs, ys, zs = self.factorizations
        sel = zs == z
        return list(zip(xs[sel].tolist(), ys[sel].tolist()))

    def with_source(self, u):
        """Morphisms with d = u."""
        return np.nonzero(self.d == u)[0].tolist()

    def with_range(self, u):
        """Morphisms with r = u."""
        return np.nonzero(self.r == u)[0].tolist()

    def to_json(self):
        xs, ys, zs = self.factorizations
        names = self.morphisms
        return {
            "objects": list(self.objects),
            "morphisms": [{"name": m, "d": self.objects[self.d[i]],
                           "r": self.objects[self.r[i]]} for i, m in enumerate(names)],
            "comp": [[names[x], names[y], names[z]] for x, y, z in zip(xs, ys, zs)],
            "overflow": [[names[a], names[b]] for a, b in self.overflow],
        }


# --------------------------------------------------------------------------
# validation


@dataclass
class CategoryReport:
    failures: list
    skipped_triples: int

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        return {"ok": self.ok, "failures": [{"law": l, "witness": w} for l, w in self.failures],
                "skipped_triples": self.skipped_triples}


def validate_category(C: FinCat) -> CategoryReport:
    nm = C.morphisms
    fails = []
    for x, u in enumerate(C.unit):
        if C.d[u] != x or C.r[u] != x:
            fails.append(("unit_has_its_object", [C.objects[x]]))
    composable = C.d[:, None] == C.r[None, :]
    defined = C.comp != UNDEFINED
    bad = np.argwhere(composable != defined)
    if len(bad):
        a, b = bad[0]
        fails.append(("defined_exactly_on_composable", [nm[a], nm[b]]))
    xs, ys, zs = C.factorizations
    inc = (C.d[zs] != C.d[ys]) | (C.r[zs] != C.r[xs])
    if inc.any():
        i = int(np.argmax(inc))
        fails.append(("source_range_of_product", [nm[xs[i]], nm[ys[i]]]))
    for a in range(C.n):
        if C.comp[C.unit[C.r[a]], a] != a:
            fails.append(("left_unit", [nm[a]]))
            break
    for a in range(C.n):
        if C.comp[a, C.unit[C.d[a]]] != a:
            fails.append(("right_unit", [nm[a]]))
            break
    skipped = 0
    if not fails:
        w, skipped = kernels.find_category_assoc_violation(C.comp)
        if w is not None:
            fails.append(("associative", [nm[i] for i in w]))
    return CategoryReport(fails, int(skipped))


# --------------------------------------------------------------------------
# bisections


def is_bisection(C: FinCat, U) -> bool:
    U = list(U)
    return (len({int(C.d[x]) for x in U}) == len(U)
            and len({int(C.r[x]) for x in U}) == len(U))


def enumerate_bisections(C: FinCat) -> list:
    """Every subset of morphisms on which d and r are injective, as frozensets
    ordered by size and then lexicographically."""
    guards.check("category for bisection enumeration", C.n, guards.MAX_BISECTION_MORPHISMS)
    out = []
    d, r = C.d.tolist(), C.r.tolist()

    def grow(start, chosen, used_d, used_r):
        out.append(frozenset(chosen))
        for m in range(start, C.n):
            if d[m] in used_d or r[m] in used_r:
                continue
            chosen.append(m)
            used_d.add(d[m])
            used_r.add(r[m])
            grow(m + 1, chosen, used_d, used_r)
            chosen.pop()
            used_d.discard(d[m])
            used_r.discard(r[m])

    grow(0, [], set(), set())
    out.sort(key=lambda b: (len(b), sorted(b)))
    return out


def bisection_product(C: FinCat, U, V) -> frozenset:
    """``UV = {xy : x in U, y in V composable}``; refuses overflow."""
    out = set()
    for x in U:
        for y in V:
            z = C.comp[x, y]
            if z == OVERFLOW:
                raise TruncationError("bisection product leaves the window",
                                      pair=[C.morphisms[x], C.morphisms[y]])
            if z >= 0:
                out.add(int(z))
    return frozenset(out)


def bisection_name(C: FinCat, U) -> str:
    if not U:
        return "{}"
    return "{" + ",".join(C.morphisms[x] for x in sorted(U)) + "}"


def bis_semigroup(C: FinCat, bisections=None):
    """The restriction monoid of bisections.

    Returns ``(S, bisections)`` where element i of S is ``bisections[i]``.
    """
    if C.truncated:
        raise TruncationError("the bisection monoid of a truncated category is not closed")
    bis = list(bisections) if bisections is not None else enumerate_bisections(C)
    where = {b: i for i, b in enumerate(bis)}
    m = len(bis)
    table = np.empty((m, m), dtype=np.int64)
    for i, U in enumerate(bis):
        for j, V in enumerate(bis):
            W = bisection_product(C, U, V)
            if W not in where:
                raise InternalConsistencyError("product of bisections is not a bisection")
            table[i, j] = where[W]
    units = C.unit_set
    E = [i for i, b in enumerate(bis) if b <= units]
    lam = [where[frozenset(int(C.unit[C.d[x]]) for x in b)] for b in bis]
    rho = [where[frozenset(int(C.unit[C.r[x]]) for x in b)] for b in bis]
    S = FinRS.build(table, E, names=[bisection_name(C, b) for b in bis], lam=lam, rho=rho)
    rep = validate_axioms(S)
    if not rep.restriction:
        raise InternalConsistencyError("bisection monoid fails the axioms",
                                       failing=rep.failing())
    return S, bis


def check_unique_factorization(C: FinCat, bisections, max_len=3):
    """For each tuple of at most ``max_len`` bisections and each z in their
    product, exactly one tuple of factors multiplies to z."""
    for k in range(1, max_len + 1):
        for tup in itertools.product(bisections, repeat=k):
            counts = {}
            for factors in itertools.product(*[sorted(U) for U in tup]):
                z = factors[0]
                for y in factors[1:]:
                    z = C.comp[z, y]
                    if z < 0:
                        break
                if z == OVERFLOW:
                    continue
                if z >= 0:
                    counts[int(z)] = counts.get(int(z), 0) + 1
            if any(c != 1 for c in counts.values()):
                return False
    return True


# --------------------------------------------------------------------------
# cancellation and inverses


@dataclass
class CancelReport:
    ok: bool
    witness: tuple | None
    skipped: int

    def to_json(self, C):
        w = None if self.witness is None else [C.morphisms[i] for i in self.witness]
        return {"ok": self.ok, "witness": w, "skipped": self.skipped}


def is_left_cancellative(C: FinCat) -> CancelReport:
    """xy = xw implies y = w. Witness (x, y, w)."""
    w, skipped = kernels.find_left_cancel_violation(C.comp)
    return CancelReport(w is None, w, int(skipped))


def is_right_cancellative(C: FinCat) -> CancelReport:
    """yx = wx implies y = w. Witness (x, y, w)."""
    w, skipped = kernels.find_left_cancel_violation(np.ascontiguousarray(C.comp.T))
    return CancelReport(w is None, w, int(skipped))


def is_cancellative(C: FinCat) -> bool:
    return is_left_cancellative(C).ok and is_right_cancellative(C).ok


def is_groupoid(C: FinCat):
    """Array of inverses, or None if some morphism has no inverse."""
    if C.truncated:
        raise TruncationError("inverses are not defined on a truncated category")
    inv = np.empty(C.n, dtype=np.int64)
    for x in range(C.n):
        left = C.comp[x] == C.unit[C.r[x]]
        right = C.comp[:, x] == C.unit[C.d[x]]
        cands = np.nonzero(left & right)[0]
        if len(cands) == 0:
            return None
        inv[x] = cands[0]
    return inv


# --------------------------------------------------------------------------
# constructions


def graph_category(vertices, edges, N, name=""):
    """Vertices plus paths of length at most N.

    ``edges`` holds ``(name, source, target)``; an edge e has d(e) = source
    and r(e) = target. A path ``a1.a2...an`` needs d(a_i) = r(a_{i+1}), has
    d = d(an), r = r(a1), and composes by concatenation.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    vertices = [str(v) for v in vertices]
    vidx = {v: i for i, v in enumerate(vertices)}
    ed = {str(e): (vidx[str(s)], vidx[str(t)]) for e, s, t in edges}
    enames = [str(e) for e, _, _ in edges]
    paths = []
    layer = [(e,) for e in enames] if N >= 1 else []
    for length in range(1, N + 1):
        paths.extend(layer)
        if length == N:
            break
        layer = [p + (e,) for p in layer for e in enames if ed[e][1] == ed[p[-1]][0]]
    keys = [("vertex", v) for v in vertices] + paths
    index = {k: i for i, k in enumerate(keys)}
    nv = len(vertices)
    d = list(range(nv)) + [ed[p[-1]][0] for p in paths]
    r = list(range(nv)) + [ed[p[0]][1] for p in paths]
    n = len(keys)
    comp = np.full((n, n), UNDEFINED, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            if d[a] != r[b]:
                continue
            if a < nv:
                comp[a, b] = b
            elif b < nv:
                comp[a, b] = a
            else:
                p = keys[a] + keys[b]
                comp[a, b] = index[p] if len(p) <= N else OVERFLOW
    names = vertices + [".".join(p) for p in paths]
    return FinCat.build(vertices, names, d, r, list(range(nv)), comp, name)


def transformation_category(X, f, N, name=""):
    """Triples ``(y, n, x)`` with f^n(x) = y and n <= N."""
    if N < 0:
        raise ValueError("N must be non-negative")
    X = list(X)
    fmap = dict(f) if not callable(f) else {x: f(x) for x in X}
    xidx = {x: i for i, x in enumerate(X)}
    triples = []
    for n in range(N + 1):
        for x in X:
            y = x
            for _ in range(n):
                y = fmap[y]
            triples.append((y, n, x))
    index = {t: i for i, t in enumerate(triples)}
    m = len(triples)
    d = [xidx[t[2]] for t in triples]
    r = [xidx[t[0]] for t in triples]
    unit = [index[(x, 0, x)] for x in X]
    comp = np.full((m, m), UNDEFINED, dtype=np.int64)
    for a, (z, p, y1) in enumerate(triples):
        for b, (y2, q, x) in enumerate(triples):
            if y1 == y2:
                comp[a, b] = index[(z, p + q, x)] if p + q <= N else OVERFLOW
    names = [f"({y},{n},{x})" for y, n, x in triples]
    return FinCat.build([str(x) for x in X], names, d, r, unit, comp, name)


def category_of_semigroup(S: FinRS, name=""):
    """Objects E, morphisms S, d = lam, r = rho; st defined iff lam(s) = rho(t)."""
    E = list(S.E)
    pos = {e: i for i, e in enumerate(E)}
    d = [pos[int(x)] for x in S.lam]
    r = [pos[int(x)] for x in S.rho]
    comp = np.where(S.lam[:, None] == S.rho[None, :], S.table, UNDEFINED)
    C = FinCat.build([S.name(e) for e in E], S.names, d, r, E, comp, name)
    rep = validate_category(C)
    if not rep.ok:
        raise InternalConsistencyError("category of a semigroup fails the laws",
                                       failures=rep.failures)
    return C


def one_object_category(table, names=None, obj="*", name=""):
    """A monoid table (entries may be OVERFLOW) as a one-object category."""
    table = np.array(table, dtype=np.int64)
    n = table.shape[0]
    ar = np.arange(n)
    units = [u for u in range(n) if (table[u] == ar).all() and (table[:, u] == ar).all()]
    if not units:
        raise StructureError("monoid table has no identity")
    names = names if names is not None else [str(i) for i in range(n)]
    return FinCat.build([obj], names, [0] * n, [0] * n, [units[0]], table, name)


def multiplicative_monoid_category(N, name=""):
    """``{0, 1, ..., N}`` under multiplication; products above N overflow."""
    a = np.arange(N + 1)
    prod = a[:, None] * a[None, :]
    table = np.where(prod <= N, prod, OVERFLOW)
    return one_object_category(table, [str(i) for i in a], name=name)


def disjoint_union(C: FinCat, D: FinCat, name=""):
    """Side-by-side copy; names get suffixes ``.1`` and ``.2``."""
    nc, nd = C.n, D.n
    comp = np.full((nc + nd, nc + nd), UNDEFINED, dtype=np.int64)
    comp[:nc, :nc] = C.comp
    dd = D.comp.copy()
    dd[dd >= 0] += nc
    comp[nc:, nc:] = dd
    k = len(C.objects)
    return FinCat.build(
        [o + ".1" for o in C.objects] + [o + ".2" for o in D.objects],
        [m + ".1" for m in C.morphisms] + [m + ".2" for m in D.morphisms],
        np.concatenate([C.d, D.d + k]), np.concatenate([C.r, D.r + k]),
        np.concatenate([C.unit, D.unit + nc]), comp, name)


def pair_groupoid(points, name=""):
    """Morphisms (i, j) from j to i for all points i, j."""
    points = [str(p) for p in points]
    k = len(points)
    pairs = [(i, j) for i in range(k) for j in range(k)]
    idx = {p: a for a, p in enumerate(pairs)}
    n = len(pairs)
    comp = np.full((n, n), UNDEFINED, dtype=np.int64)
    for a, (i, j) in enumerate(pairs):
        for b, (j2, l) in enumerate(pairs):
            if j == j2:
                comp[a, b] = idx[(i, l)]
    names = [f"{points[i]}{points[j]}" for i, j in pairs]
    return FinCat.build(points, names, [j for _, j in pairs], [i for i, _ in pairs],
                        [idx[(i, i)] for i in range(k)], comp, name)


def require_valid(C: FinCat):
    rep = validate_category(C)
    if not rep.ok:
        raise ValidationError("category fails its laws", failures=rep.failures)
    return rep
