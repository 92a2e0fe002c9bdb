"""Convolution algebras of finite categories, formal crossed products and
covering morphisms.

Coefficients are complex by default. Passing ``exact=True`` stores
``fractions.Fraction`` entries in object arrays so identities can be
checked with ``==``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

import numpy as np

from . import kernels
from .cat import FinCat, OVERFLOW, enumerate_bisections, is_bisection, is_groupoid
from .errors import InternalConsistencyError, TruncationError, UnsupportedStructureError
from .germs import AlgebraAction


def _exact(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, complex):
        if x.imag:
            raise ValueError("exact mode holds rational (real) coefficients only")
        x = x.real
    return Fraction(x)


def coeff_array(values, exact=False):
    if exact:
        return np.array([_exact(v) for v in values], dtype=object)
    return np.asarray(values, dtype=complex)


def _zeros(n, exact):
    if exact:
        return np.array([Fraction(0)] * n, dtype=object)
    return np.zeros(n, dtype=complex)


def _is_exact(a):
    return a.dtype == object


def _pair_json(v):
    """Exact coefficients print as rational strings, floats as [re, im]."""
    if isinstance(v, Fraction):
        return str(v)
    v = complex(v)
    return [v.real, v.imag]


# --------------------------------------------------------------------------
# convolution algebra


class ConvElement:
    """A function on the morphisms of a finite category."""

    __slots__ = ("category", "coeffs")

    def __init__(self, category: FinCat, coeffs):
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (category.n,):
            raise ValueError("coefficient vector has the wrong length")
        if coeffs.dtype != object:
            coeffs = coeffs.astype(complex)
        self.category = category
        self.coeffs = coeffs

    @classmethod
    def zeros(cls, C, exact=False):
        return cls(C, _zeros(C.n, exact))

    @classmethod
    def delta(cls, C, morphism, coeff=1, exact=False):
        out = cls.zeros(C, exact)
        i = morphism if isinstance(morphism, (int, np.integer)) else C.index(morphism)
        out.coeffs[i] = _exact(coeff) if exact else coeff
        return out

    @classmethod
    def from_dict(cls, C, mapping, exact=False):
        out = cls.zeros(C, exact)
        for k, v in mapping.items():
            i = k if isinstance(k, (int, np.integer)) else C.index(k)
            out.coeffs[i] += _exact(v) if exact else v
        return out

    @property
    def exact(self):
        return _is_exact(self.coeffs)

    def support(self):
        return [i for i, v in enumerate(self.coeffs) if v != 0]

    def sup_norm(self):
        return max((abs(complex(v)) for v in self.coeffs), default=0.0)

    def _check(self, other):
        if not isinstance(other, ConvElement) or other.category is not self.category:
            raise ValueError("elements live over different categories")

    def __add__(self, other):
        self._check(other)
        return ConvElement(self.category, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return ConvElement(self.category, self.coeffs - other.coeffs)

    def __neg__(self):
        return ConvElement(self.category, -self.coeffs)

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        if self.exact:
            c = _exact(c)
        return ConvElement(self.category, self.coeffs * c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return convolve(self, other)

    def equals(self, other, tol=0.0):
        self._check(other)
        if tol == 0:
            return bool(np.all(self.coeffs == other.coeffs))
        diff = np.abs(self.coeffs.astype(complex) - other.coeffs.astype(complex))
        return bool(np.all(diff <= tol))

    def to_json(self):
        return {self.category.morphisms[i]: _pair_json(self.coeffs[i]) for i in self.support()}


def convolve(f: ConvElement, g: ConvElement) -> ConvElement:
    """``(f*g)(z) = sum over xy = z of f(x) g(y)``.

    A nonzero contribution landing outside the truncation window raises
    TruncationError.
    """
    f._check(g)
    C = f.category
    exact = f.exact or g.exact
    fc = f.coeffs if not exact else np.array([_exact(v) for v in f.coeffs], dtype=object)
    gc = g.coeffs if not exact else np.array([_exact(v) for v in g.coeffs], dtype=object)
    for a, b in C.overflow:
        if fc[a] != 0 and gc[b] != 0:
            raise TruncationError("convolution leaves the truncation window",
                                  pair=[C.morphisms[a], C.morphisms[b]])
    out = _zeros(C.n, exact)
    xs, ys, zs = C.factorizations
    kernels.conv_accumulate(xs, ys, zs, fc, gc, out)
    return ConvElement(C, out)


def involution(f: ConvElement) -> ConvElement:
    """``f*(x) = conj f(x^-1)`` on a groupoid."""
    inv = is_groupoid(f.category)
    if inv is None:
        raise UnsupportedStructureError("involution needs a groupoid")
    vals = f.coeffs[inv]
    if f.exact:
        return ConvElement(f.category, np.array([v.conjugate() for v in vals], dtype=object))
    return ConvElement(f.category, np.conj(vals))


# --------------------------------------------------------------------------
# formal crossed product


class CrossedElement:
    """A formal sum ``sum_s a_s delta_s`` with ``a_s`` a function on the
    carrier supported in ``D_rho(s)``."""

    def __init__(self, alpha: AlgebraAction, terms):
        self.alpha = alpha
        S = alpha.semigroup
        clean = {}
        for s, v in terms.items():
            v = np.asarray(v)
            if not np.any(v != 0):
                continue
            if not alpha._supported(v, int(S.rho[s])):
                raise ValueError("coefficient is not supported in D_rho(s)")
            clean[int(s)] = v
        self.terms = clean

    def __add__(self, other):
        out = dict(self.terms)
        for s, v in other.terms.items():
            out[s] = out[s] + v if s in out else v
        return CrossedElement(self.alpha, out)

    def __mul__(self, other):
        return crossed_multiply(self, other)

    def equals(self, other, tol=0.0):
        keys = set(self.terms) | set(other.terms)
        m = self.alpha.action.size
        for s in keys:
            a = self.terms.get(s, np.zeros(m))
            b = other.terms.get(s, np.zeros(m))
            if tol == 0:
                if np.any(a != b):
                    return False
            elif np.max(np.abs(a.astype(complex) - b.astype(complex))) > tol:
                return False
        return True

    def to_json(self):
        S, A = self.alpha.semigroup, self.alpha.action
        return {S.name(s): {A.label(x): _pair_json(v[x]) for x in range(len(v)) if v[x] != 0}
                for s, v in sorted(self.terms.items())}


def crossed_multiply(a: CrossedElement, b: CrossedElement) -> CrossedElement:
    """``(a_s d_s)(b_t d_t) = alpha_s(alpha_s^-1(a_s) b_t) d_st``."""
    alpha = a.alpha
    S = alpha.semigroup
    out = {}
    for s, av in a.terms.items():
        pulled = alpha.apply_inverse(s, av)
        for t, bv in b.terms.items():
            val = alpha.apply(s, pulled * bv)
            st = int(S.table[s, t])
            if not alpha._supported(val, int(S.rho[st])):
                raise InternalConsistencyError("crossed product term leaves D_rho(st)",
                                               pair=[S.name(s), S.name(t)])
            out[st] = out[st] + val if st in out else val
    return CrossedElement(alpha, out)


def crossed_delta(alpha: AlgebraAction, s, f=None, exact=False):
    """``f delta_s``; ``f`` defaults to the indicator of D_rho(s)."""
    S = alpha.semigroup
    if f is None:
        f = alpha.indicator(int(S.rho[s]), dtype=object if exact else complex)
        if exact:
            f = np.array([Fraction(int(v)) for v in f], dtype=object)
    return CrossedElement(alpha, {s: f})


def psi(alpha: AlgebraAction, coeffs, exact=False) -> CrossedElement:
    """``sum a_s delta_s -> sum a_s 1_rho(s) delta_s``; ``coeffs`` maps s to a_s."""
    S = alpha.semigroup
    terms = {}
    for s, c in coeffs.items():
        ind = alpha.indicator(int(S.rho[s]), dtype=object if exact else complex)
        if exact:
            ind = np.array([Fraction(int(v)) for v in ind], dtype=object)
            c = _exact(c)
        terms[int(s)] = ind * c
    return CrossedElement(alpha, terms)


def check_psi_multiplicative(alpha: AlgebraAction, exact=True):
    """``psi(d_s) psi(d_t) = psi(d_st)`` for all s, t. Returns the first failing
    pair or None."""
    S = alpha.semigroup
    basis = [psi(alpha, {s: 1}, exact=exact) for s in range(S.n)]
    for s in range(S.n):
        for t in range(S.n):
            if not (basis[s] * basis[t]).equals(basis[int(S.table[s, t])]):
                return (s, t)
    return None


# --------------------------------------------------------------------------
# covering morphisms


@dataclass(frozen=True, eq=False)
class CoveringMorphism:
    """``on_objects[v]`` is an object of the target; ``on_morphisms[a]`` a
    frozenset of target morphisms."""

    source: FinCat
    target: FinCat
    on_objects: tuple
    on_morphisms: tuple

    @classmethod
    def identity(cls, C):
        return cls(C, C, tuple(range(len(C.objects))),
                   tuple(frozenset([i]) for i in range(C.n)))

    @classmethod
    def from_names(cls, C, D, objects, morphisms):
        obj = tuple(D.object_index(objects[o]) for o in C.objects)
        mor = tuple(frozenset(D.index(x) for x in morphisms.get(m, ())) for m in C.morphisms)
        return cls(C, D, obj, mor)

    def to_json(self):
        C, D = self.source, self.target
        return {"objects": {C.objects[v]: D.objects[w] for v, w in enumerate(self.on_objects)},
                "morphisms": {C.morphisms[a]: sorted(D.morphisms[x] for x in xs)
                              for a, xs in enumerate(self.on_morphisms)}}


@dataclass
class CoveringReport:
    results: dict

    @property
    def ok(self):
        return all(v is None for v in self.results.values())

    def to_json(self):
        return {"ok": self.ok,
                "conditions": {k: (True if v is None else v) for k, v in self.results.items()}}


def validate_covering(phi: CoveringMorphism) -> CoveringReport:
    """Check the six covering conditions M1 to M6."""
    C, D = phi.source, phi.target
    p0, p1 = phi.on_objects, phi.on_morphisms
    cn, dn = C.morphisms, D.morphisms
    res = {}

    res["M1"] = next(([C.objects[v]] for v in range(len(C.objects))
                      if int(D.unit[p0[v]]) not in p1[C.unit[v]]), None)

    res["M2"] = next(([cn[a], dn[b]] for a in range(C.n) for b in p1[a]
                      if D.d[b] != p0[C.d[a]] or D.r[b] != p0[C.r[a]]), None)

    m3 = None
    for a, b in zip(*np.nonzero(C.comp >= 0)):
        ab = C.comp[a, b]
        for c in p1[a]:
            for e in p1[b]:
                ce = D.comp[c, e]
                if ce == OVERFLOW:
                    continue
                if ce < 0 or int(ce) not in p1[ab]:
                    m3 = [cn[a], cn[b], dn[c], dn[e]]
                    break
            if m3:
                break
        if m3:
            break
    res["M3"] = m3

    m4 = None
    for a in range(C.n):
        for b in range(a + 1, C.n):
            if (C.d[a] == C.d[b] or C.r[a] == C.r[b]) and p1[a] & p1[b]:
                m4 = [cn[a], cn[b]]
                break
        if m4:
            break
    res["M4"] = m4

    m5 = None
    for v in range(len(C.objects)):
        out_star = set().union(*(p1[a] for a in C.with_source(v)))
        in_star = set().union(*(p1[a] for a in C.with_range(v)))
        for x in range(D.n):
            if D.d[x] == p0[v] and x not in out_star:
                m5 = [C.objects[v], dn[x], "source"]
            elif D.r[x] == p0[v] and x not in in_star:
                m5 = [C.objects[v], dn[x], "range"]
            if m5:
                break
        if m5:
            break
    res["M5"] = m5

    m6 = None
    for A in enumerate_bisections(D):
        hat = [z for z in range(C.n) if p1[z] & A]
        if not is_bisection(C, hat):
            m6 = sorted(dn[x] for x in A)
            break
    res["M6"] = m6
    return CoveringReport(res)


def covering_transfer(phi: CoveringMorphism, f: ConvElement) -> ConvElement:
    """``T(f)(z) = sum of f(x) over x in phi_1(z)``."""
    if f.category is not phi.target:
        raise ValueError("function lives on the wrong category")
    out = _zeros(phi.source.n, f.exact)
    for z, xs in enumerate(phi.on_morphisms):
        for x in xs:
            out[z] += f.coeffs[x]
    return ConvElement(phi.source, out)


def compose_coverings(phi: CoveringMorphism, psi_: CoveringMorphism) -> CoveringMorphism:
    """``psi o phi`` for ``phi: C -> D`` and ``psi_: D -> E``."""
    if phi.target is not psi_.source:
        raise ValueError("coverings are not composable")
    obj = tuple(psi_.on_objects[w] for w in phi.on_objects)
    mor = tuple(frozenset().union(*(psi_.on_morphisms[x] for x in xs)) if xs else frozenset()
                for xs in phi.on_morphisms)
    return CoveringMorphism(phi.source, psi_.target, obj, mor)


# --------------------------------------------------------------------------
# disjointification


def disjointify(family):
    """Blocks ``P_J = (intersection of A_i, i in J) minus (union of A_i, i not in J)``.

    Returns a list of ``(J, block)`` for the nonempty blocks, J as a sorted
    tuple of family positions.
    """
    family = [frozenset(A) for A in family]
    sig = {}
    for x in set().union(*family) if family else ():
        J = tuple(i for i, A in enumerate(family) if x in A)
        sig.setdefault(J, set()).add(x)
    return [(J, frozenset(sig[J])) for J in sorted(sig)]
