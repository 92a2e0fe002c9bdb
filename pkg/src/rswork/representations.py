"""Finite-dimensional representations and operator norms."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.optimize
import scipy.sparse as sp

from . import guards
from .cat import FinCat, is_bisection, is_left_cancellative
from .conv import ConvElement, CrossedElement, disjointify
from .errors import (ConvergenceError, InternalConsistencyError,
                     UnsupportedStructureError, ValidationError)
from .germs import AlgebraAction, GermTable
from .rsem import FinRS, classify_ample
from .spectrum import EtaleAction, canonical_action


# --------------------------------------------------------------------------
# operators and norms


@dataclass
class NormReport:
    value: float
    method: str
    tol: float
    iterations: int

    def to_json(self):
        return {"value": self.value, "method": self.method, "tol": self.tol,
                "iterations": self.iterations}


@dataclass(eq=False)
class LinOp:
    """A matrix with labelled basis. ``matrix`` may be dense (complex or
    exact object entries) or scipy sparse."""

    basis: tuple
    matrix: object
    meta: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def dense(self):
        m = self.matrix
        if sp.issparse(m):
            return m.toarray()
        return m

    def adjoint(self):
        m = self.matrix
        if sp.issparse(m):
            return LinOp(self.basis, m.conj().T.tocsr())
        if m.dtype == object:
            return LinOp(self.basis, np.vectorize(lambda v: v.conjugate(), otypes=[object])(m.T))
        return LinOp(self.basis, m.conj().T)

    def __matmul__(self, other):
        return LinOp(self.basis, self.matrix @ other.matrix)

    def __add__(self, other):
        return LinOp(self.basis, self.matrix + other.matrix)

    def __sub__(self, other):
        return LinOp(self.basis, self.matrix - other.matrix)

    def __mul__(self, c):
        return LinOp(self.basis, self.matrix * c)

    __rmul__ = __mul__

    def norm(self, **kw):
        return operator_norm(self, **kw)

    def equals(self, other, tol=0.0):
        return matrices_equal(self.matrix, other.matrix, tol)

    def to_bytes(self):
        """Row-major little-endian (re, im) float64 pairs."""
        return np.ascontiguousarray(np.asarray(self.dense(), dtype=complex), dtype="<c16").tobytes()

    @classmethod
    def from_bytes(cls, basis, data):
        n = len(basis)
        return cls(tuple(basis), np.frombuffer(data, dtype="<c16").reshape(n, n).astype(complex))

    def to_json(self):
        M = np.asarray(self.dense(), dtype=complex)
        return {"basis": [str(b) for b in self.basis],
                "real": M.real.tolist(), "imag": M.imag.tolist()}


def matrices_equal(a, b, tol=0.0):
    if sp.issparse(a):
        a = a.toarray()
    if sp.issparse(b):
        b = b.toarray()
    a, b = np.asarray(a), np.asarray(b)
    if tol == 0:
        return bool(np.all(a == b))
    return bool(np.max(np.abs(a.astype(complex) - b.astype(complex)), initial=0.0) <= tol)


def _as_numeric(A):
    if isinstance(A, LinOp):
        A = A.matrix
    if sp.issparse(A):
        return A.tocsr().astype(complex)
    A = np.asarray(A)
    return A.astype(complex)


SVD_LIMIT = 2000


def operator_norm(A, tol=1e-10, max_iter=100_000, method="auto", seed=0) -> NormReport:
    """Largest singular value.

    Dense SVD up to dimension 2000, power iteration on ``A*A`` above that
    (or when ``method="power"``). Power iteration stops once the residual
    ``||A*A v - mu v||`` is below ``tol * mu``.
    """
    M = _as_numeric(A)
    dim = max(M.shape) if M.ndim == 2 else 0
    if dim == 0:
        return NormReport(0.0, "svd", tol, 0)
    if method == "auto":
        method = "svd" if dim <= SVD_LIMIT else "power"
    if method == "svd":
        dense = M.toarray() if sp.issparse(M) else M
        return NormReport(float(np.linalg.norm(dense, 2)), "svd", tol, 1)
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(M.shape[1]) + 1j * rng.standard_normal(M.shape[1])
    v /= np.linalg.norm(v)
    MH = M.conj().T
    mu = 0.0
    for it in range(1, max_iter + 1):
        w = M @ v
        u = MH @ w
        mu = float(np.vdot(w, w).real)
        if mu == 0.0:
            return NormReport(0.0, "power", tol, it)
        if np.linalg.norm(u - mu * v) <= tol * mu:
            return NormReport(float(np.sqrt(mu)), "power", tol, it)
        v = u / np.linalg.norm(u)
    absM = abs(M) if sp.issparse(M) else np.abs(M)
    upper = float(np.sqrt(absM.sum(axis=0).max() * absM.sum(axis=1).max()))
    raise ConvergenceError("power iteration did not converge",
                           estimate=float(np.sqrt(mu)), bracket=[float(np.sqrt(mu)), upper],
                           iterations=max_iter)


def _zeros_matrix(n, exact):
    if exact:
        return np.array([[Fraction(0)] * n for _ in range(n)], dtype=object).reshape(n, n)
    return np.zeros((n, n), dtype=complex)


def _identity(n, exact):
    M = _zeros_matrix(n, exact)
    for i in range(n):
        M[i, i] = Fraction(1) if exact else 1.0
    return M


# --------------------------------------------------------------------------
# regular representations


def regular_rep_category(C: FinCat, f: ConvElement) -> LinOp:
    """``pi_f(delta_z) = sum over x with d(x) = r(z) of f(x) delta_xz`` on
    l2 of the morphisms. Products outside a truncation window are dropped,
    so on a truncated category this is a compression.

    When C is not left cancellative ``meta["diagnostic"]`` records whether a
    bisection-supported f exceeds its sup norm.
    """
    if f.category is not C:
        raise ValueError("element lives on another category")
    exact = f.exact
    M = _zeros_matrix(C.n, exact)
    xs, ys, zs = C.factorizations
    for x, y, z in zip(xs.tolist(), ys.tolist(), zs.tolist()):
        if f.coeffs[x] != 0:
            M[z, y] += f.coeffs[x]
    op = LinOp(C.morphisms, M)
    canc = is_left_cancellative(C)
    op.meta["left_cancellative"] = canc.ok
    if not canc.ok:
        diag = {"witness": [C.morphisms[i] for i in canc.witness]}
        if is_bisection(C, f.support()):
            value = operator_norm(M).value
            diag.update(norm=value, sup=f.sup_norm(), exceeds=value > f.sup_norm() + 1e-12)
        op.meta["diagnostic"] = diag
    return op


def delta_operator(C: FinCat, x) -> sp.csr_matrix:
    """Sparse ``pi`` of the point mass at morphism x, compressed to the window."""
    xs, ys, zs = C.factorizations
    keep = xs == x
    rows, cols = zs[keep], ys[keep]
    return sp.csr_matrix((np.ones(len(rows), dtype=complex), (rows, cols)), shape=(C.n, C.n))


def semigroup_regular_ops(S: FinRS, exact=False):
    """``phi_s(delta_t) = [rho(t) <= lam(s)] delta_st`` for each s.

    Needs S left ample. Checks that each operator is a partial isometry,
    projections go to self-adjoint idempotents, and s -> phi_s is
    multiplicative.
    """
    if not classify_ample(S).left:
        raise UnsupportedStructureError("the regular representation needs a left ample semigroup")
    n, T = S.n, S.table
    ops = []
    for s in range(n):
        M = _zeros_matrix(n, exact)
        for t in range(n):
            if S.eleq(S.rho[t], S.lam[s]):
                M[T[s, t], t] = Fraction(1) if exact else 1.0
        ops.append(M)
    tol = 0 if exact else 1e-12
    for s, M in enumerate(ops):
        if not matrices_equal(M @ M.T @ M, M, tol):
            raise InternalConsistencyError("regular operator is not a partial isometry",
                                           element=S.name(s))
    for e in S.E:
        M = ops[e]
        if not (matrices_equal(M, M.T, tol) and matrices_equal(M @ M, M, tol)):
            raise InternalConsistencyError("projection is not sent to a projection",
                                           element=S.name(e))
    for s in range(n):
        for t in range(n):
            if not matrices_equal(ops[s] @ ops[t], ops[T[s, t]], tol):
                raise InternalConsistencyError("regular representation is not multiplicative",
                                               pair=[S.name(s), S.name(t)])
    return ops


def regular_rep_semigroup(S: FinRS, coeffs, exact=False) -> LinOp:
    """``sum a_s phi_s`` on l2(S); ``coeffs`` maps element index to a_s."""
    ops = semigroup_regular_ops(S, exact)
    M = _zeros_matrix(S.n, exact)
    for s, c in coeffs.items():
        M = M + ops[s] * (Fraction(c) if exact else c)
    return LinOp(S.names, M)


def regular_rep_faithful(S: FinRS) -> bool:
    """The linear extension to the semigroup algebra is injective iff the
    operators are linearly independent."""
    ops = semigroup_regular_ops(S)
    stack = np.array([M.real.ravel() for M in ops])
    return int(np.linalg.matrix_rank(stack)) == S.n


# --------------------------------------------------------------------------
# covariant pairs


@dataclass(eq=False)
class CovariantPair:
    """``points[x]`` is pi of the point mass at carrier position x and
    ``sigma[s]`` the operator of s."""

    alpha: AlgebraAction
    points: list
    sigma: list

    @property
    def dim(self):
        return self.sigma[0].shape[0]

    @property
    def exact(self):
        return self.sigma[0].dtype == object

    def pi(self, f):
        M = _zeros_matrix(self.dim, self.exact)
        for x, v in enumerate(f):
            if v != 0:
                M = M + self.points[x] * v
        return M

    def integrate_crossed(self, a: CrossedElement):
        M = _zeros_matrix(self.dim, self.exact)
        for s, f in a.terms.items():
            M = M + self.pi(f) @ self.sigma[s]
        return M

    def violations(self, tol=1e-10):
        S = self.alpha.semigroup
        A = self.alpha.action
        T = S.table
        out = []
        eq = lambda a, b: matrices_equal(a, b, tol)
        adj = lambda M: M.conj().T if M.dtype != object else \
            np.vectorize(lambda v: v.conjugate(), otypes=[object])(M.T)
        for x, P in enumerate(self.points):
            if not (eq(P, adj(P)) and eq(P @ P, P)):
                out.append(("point_mass_projection", [A.label(x)]))
            for y in range(x + 1, len(self.points)):
                if not eq(P @ self.points[y], 0 * P):
                    out.append(("point_masses_orthogonal", [A.label(x), A.label(y)]))
        for s in range(S.n):
            if not self.exact and operator_norm(self.sigma[s]).value > 1 + tol:
                out.append(("contraction", [S.name(s)]))
            for t in range(S.n):
                if not eq(self.sigma[s] @ self.sigma[t], self.sigma[T[s, t]]):
                    out.append(("multiplicative", [S.name(s), S.name(t)]))
                    break
        for e in S.E:
            M = self.sigma[e]
            if not (eq(M, adj(M)) and eq(M @ M, M)):
                out.append(("projection", [S.name(e)]))
        for s in range(S.n):
            for x, y in A.maps[s].items():
                if not eq(self.points[y] @ self.sigma[s], self.sigma[s] @ self.points[x]):
                    out.append(("covariance", [S.name(s), A.label(x)]))
                    break
        for e in S.E:
            span = _zeros_matrix(self.dim, self.exact)
            for x in A.domains[e]:
                span = span + self.points[x]
            if not eq(span, self.sigma[e]):
                out.append(("range_condition", [S.name(e)]))
        return out


def covariant_pair_from_sigma(S: FinRS, sigma, action: EtaleAction | None = None,
                              tol=1e-10) -> CovariantPair:
    """Extend a representation of S to a covariant pair over the canonical
    action: ``pi(delta_c) = prod_{c(e)=1} sigma_e * prod_{c(e)=0} (1 - sigma_e)``."""
    action = action or canonical_action(S)
    alpha = AlgebraAction(action)
    sigma = [np.asarray(M) for M in sigma]
    n = sigma[0].shape[0]
    exact = sigma[0].dtype == object
    _check_representation(S, sigma, tol)
    I = _identity(n, exact)
    E = action.semilattice
    points = []
    for c in action.carrier:
        P = I.copy()
        for i, e in enumerate(E.source):
            P = P @ (sigma[e] if c(i) else I - sigma[e])
        points.append(P)
    pair = CovariantPair(alpha, points, sigma)
    for e in S.E:
        if not matrices_equal(pair.pi(alpha.indicator(e)), sigma[e], tol):
            raise InternalConsistencyError("pi(1_e) does not recover sigma_e",
                                           element=S.name(e))
    bad = pair.violations(tol)
    if bad:
        raise ValidationError("not a covariant pair", violations=bad[:3])
    return pair


def _check_representation(S, sigma, tol):
    exact = sigma[0].dtype == object
    eq = lambda a, b: matrices_equal(a, b, 0 if exact else tol)
    bad = []
    for s in range(S.n):
        if not exact and operator_norm(sigma[s]).value > 1 + tol:
            bad.append(("contraction", [S.name(s)]))
    for e in S.E:
        M = sigma[e]
        adj = M.T if exact else M.conj().T
        if not (eq(M, adj) and eq(M @ M, M)):
            bad.append(("projection", [S.name(e)]))
    for s, t in itertools.product(range(S.n), repeat=2):
        if not eq(sigma[s] @ sigma[t], sigma[S.table[s, t]]):
            bad.append(("multiplicative", [S.name(s), S.name(t)]))
            break
    if bad:
        raise ValidationError("not a representation of the semigroup", violations=bad[:3])


def psi_isometry_gap(pair: CovariantPair, coeffs) -> float:
    """``| ||(pi x sigma)(psi(x))|| - ||sum a_s sigma_s|| |``."""
    from .conv import psi
    S = pair.alpha.semigroup
    lhs = pair.integrate_crossed(psi(pair.alpha, coeffs))
    rhs = sum(pair.sigma[s] * c for s, c in coeffs.items())
    return abs(operator_norm(lhs).value - operator_norm(rhs).value) if S.n else 0.0


# --------------------------------------------------------------------------
# integration and disintegration over a germ category


def decompose(table: GermTable, F: ConvElement, choose=None):
    """Write F as ``sum f_s delta_s``; returns {s: function on the carrier}.

    ``choose(z, candidates)`` picks which element carries germ z; the default
    takes the representative's element.
    """
    C = table.category
    if F.category is not C:
        raise ValueError("function lives on another category")
    m = table.action.size
    terms = {}
    for z in F.support():
        cands = sorted({s for s, _ in table.members[z]})
        s = table.reps[z][0] if choose is None else choose(z, cands)
        if s not in cands:
            raise ValueError("chosen element does not contain the germ")
        f = terms.setdefault(s, np.zeros(m, dtype=F.coeffs.dtype) if not F.exact
                             else np.array([Fraction(0)] * m, dtype=object))
        f[C.r[z]] += F.coeffs[z]
    return terms


def formal_to_conv(table: GermTable, terms, exact=False) -> ConvElement:
    """``sum f_s delta_s`` as a function on germs: ``[s, x] -> f_s(theta_s(x))``."""
    C, A = table.category, table.action
    out = ConvElement.zeros(C, exact)
    for s, f in terms.items():
        for x in A.dom(s):
            out.coeffs[table.germ(s, x)] += f[A.theta(s, x)]
    return out


def integrate_formal(pair: CovariantPair, terms):
    M = _zeros_matrix(pair.dim, pair.exact)
    for s, f in terms.items():
        M = M + pair.pi(f) @ pair.sigma[s]
    return M


def integrate(pair: CovariantPair, table: GermTable, F: ConvElement, choose=None):
    """``(pi x sigma)(sum f_s delta_s) = sum pi(f_s) sigma_s``."""
    return integrate_formal(pair, decompose(table, F, choose))


def disintegrate(table: GermTable, Pi) -> CovariantPair:
    """From operators ``Pi[z]`` for each germ, ``sigma_s = Pi(1_Theta_s)`` and
    ``pi(delta_x) = Pi(unit at x)``."""
    C = table.category
    Pi = [np.asarray(M) for M in Pi]
    exact = Pi[0].dtype == object
    tol = 0 if exact else 1e-10
    n = Pi[0].shape[0]
    zero = _zeros_matrix(n, exact)
    for a in range(C.n):
        for b in range(C.n):
            c = C.comp[a, b]
            want = Pi[c] if c >= 0 else zero
            if not matrices_equal(Pi[a] @ Pi[b], want, tol):
                raise ValidationError("operators do not represent the germ category",
                                      pair=[C.morphisms[a], C.morphisms[b]])
    S = table.action.semigroup
    sigma = []
    for s in range(S.n):
        M = zero.copy()
        for z in table.theta_sets[s]:
            M = M + Pi[z]
        sigma.append(M)
    points = [Pi[table.unit_of[x]] for x in range(table.action.size)]
    pair = CovariantPair(AlgebraAction(table.action), points, sigma)
    bad = pair.violations(tol)
    if bad:
        raise ValidationError("disintegrated pair is not covariant", violations=bad[:3])
    return pair


def regular_germ_operators(table: GermTable, exact=False):
    C = table.category
    return [regular_rep_category(C, ConvElement.delta(C, z, exact=exact)).matrix
            for z in range(C.n)]


# --------------------------------------------------------------------------
# completely orthogonal families


def completely_orthogonal_check(family, tol=1e-12):
    """True iff ``Ti* Tj = 0 = Ti Tj*`` for i != j. When true the norm of the
    sum is asserted to equal the largest norm in the family."""
    mats = [np.asarray(T, dtype=complex) for T in family]
    for i, j in itertools.permutations(range(len(mats)), 2):
        if np.linalg.norm(mats[i].conj().T @ mats[j]) > tol or \
                np.linalg.norm(mats[i] @ mats[j].conj().T) > tol:
            return False
    if mats:
        total = operator_norm(sum(mats)).value
        biggest = max(operator_norm(T).value for T in mats)
        if abs(total - biggest) > 1e-8:
            raise InternalConsistencyError("orthogonal family violates the max-norm identity",
                                           total=total, max=biggest)
    return True


def max_norm_identity(family):
    return max((operator_norm(np.asarray(T, dtype=complex)).value for T in family), default=0.0)


def orthogonal_decomposition(pair: CovariantPair, table: GermTable, F: ConvElement):
    """Split a bisection-supported F along the disjointified sets Theta_s.

    Returns the operators ``T_j``; they sum to the integrated operator and
    form a completely orthogonal family.
    """
    C, A = table.category, table.action
    if not is_bisection(C, F.support()):
        raise ValueError("function is not supported in a bisection")
    elems = sorted(decompose(table, F))
    thetas = [table.theta_sets[s] for s in elems]
    blocks = disjointify(thetas)
    m = A.size
    out = []
    for J, block in blocks:
        s = elems[max(J)]
        f = np.zeros(m, dtype=complex)
        for z in block:
            f[C.r[z]] += F.coeffs[z]
        if np.any(f != 0):
            out.append(pair.pi(f) @ pair.sigma[s])
    whole = integrate(pair, table, F)
    total = sum(out) if out else 0 * whole
    if not matrices_equal(total, whole, 1e-10):
        raise InternalConsistencyError("orthogonal pieces do not sum to the integrated operator")
    return out


# --------------------------------------------------------------------------
# Fock space, tensor and disc algebras


def fock_basis(m, N):
    words = [()]
    layer = [()]
    for _ in range(N):
        layer = [(j,) + w for w in layer for j in range(m)]
        words.extend(sorted(layer))
    return words


def fock_dimension(m, N):
    return N + 1 if m == 1 else (m ** (N + 1) - 1) // (m - 1)


def word_label(w):
    return ".".join(str(j + 1) for j in w) if w else "()"


def fock_creation(m, N):
    """Creation operators ``L_j(delta_w) = delta_jw`` on words of length at
    most N; words that would grow past N are sent to 0."""
    guards.check("Fock space dimension", fock_dimension(m, N), guards.MAX_FOCK_DIM)
    words = fock_basis(m, N)
    index = {w: i for i, w in enumerate(words)}
    labels = tuple(word_label(w) for w in words)
    ops = []
    for j in range(m):
        rows, cols = [], []
        for w, i in index.items():
            if len(w) < N:
                rows.append(index[(j,) + w])
                cols.append(i)
        M = sp.csr_matrix((np.ones(len(rows), dtype=complex), (rows, cols)),
                          shape=(len(words), len(words)))
        ops.append(LinOp(labels, M))
    return ops


def evaluate_polynomial(poly, ops, identity):
    """``poly`` maps words (tuples of 0-based variable indices) to coefficients."""
    total = identity * 0
    cache = {(): identity}

    def word_op(w):
        if w not in cache:
            cache[w] = ops[w[0]] @ word_op(w[1:])
        return cache[w]

    for w, c in poly.items():
        if c != 0:
            total = total + word_op(tuple(w)) * c
    return total


def poly_variables(poly):
    return 1 + max((max(w) for w in poly if w), default=0)


def tensor_norm(poly, m, N, **kw) -> NormReport:
    """Norm of ``p(L_1, ..., L_m)`` on the Fock space truncated at N."""
    ops = [L.matrix for L in fock_creation(m, N)]
    dim = ops[0].shape[0]
    M = evaluate_polynomial(poly, ops, sp.identity(dim, dtype=complex, format="csr"))
    return operator_norm(M, **kw)


def full_algebra_witness(poly):
    """``|p(1, ..., 1)|``: the norm under the representation x_i -> id."""
    return abs(complex(sum(poly.values())))


def ell1_bound(poly):
    return float(sum(abs(complex(c)) for c in poly.values()))


def norm_bracket(poly, m, N):
    """Lower and upper bounds for the universal norm of p. The lower bound
    is the best of the truncated regular norm and the scalar witness."""
    reduced = tensor_norm(poly, m, N).value
    return {"reduced": reduced, "full_witness": full_algebra_witness(poly),
            "lower": max(reduced, full_algebra_witness(poly)), "upper": ell1_bound(poly)}


def truncated_shift(N):
    return fock_creation(1, N)[0]


def poly_rep(P, T, coeffs, tol=1e-10):
    """``a_0 P + sum_{i>=1} a_i T^i`` for ``P`` a projection, ``T`` a
    contraction with ``PT = T = TP``."""
    P = np.asarray(P, dtype=complex)
    T = np.asarray(T, dtype=complex)
    if not (matrices_equal(P @ P, P, tol) and matrices_equal(P, P.conj().T, tol)):
        raise ValidationError("P is not an orthogonal projection")
    if operator_norm(T).value > 1 + tol:
        raise ValidationError("T is not a contraction")
    if not (matrices_equal(P @ T, T, tol) and matrices_equal(T @ P, T, tol)):
        raise ValidationError("T is not compressed by P")
    out = _eval_pair(P, T, coeffs)
    dominating = _eval_pair(np.eye(P.shape[0], dtype=complex), T, coeffs)
    if operator_norm(out).value > operator_norm(dominating).value + 1e-9:
        raise InternalConsistencyError("compression by P increased the norm")
    return out


def _eval_pair(P, T, coeffs):
    out = coeffs[0] * P if len(coeffs) else 0 * P
    power = np.eye(P.shape[0], dtype=complex)
    for a in coeffs[1:]:
        power = power @ T
        out = out + a * power
    return out


def von_neumann_bound(coeffs, grid=4096):
    """``sup |p(z)|`` over the unit circle: grid maximum refined by a
    bounded local search around the best grid points."""
    c = np.asarray(coeffs, dtype=complex)
    if not len(c):
        return 0.0
    poly = np.polynomial.Polynomial(c)
    t = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    vals = np.abs(poly(np.exp(1j * t)))
    best = float(vals.max())
    h = 2 * np.pi / grid
    for k in np.argsort(vals)[-4:]:
        res = scipy.optimize.minimize_scalar(
            lambda s: -abs(poly(np.exp(1j * s))), bounds=(t[k] - h, t[k] + h),
            method="bounded", options={"xatol": 1e-12})
        best = max(best, float(-res.fun))
    return best
