import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bundled import bundled_categories
from rswork.cat import enumerate_bisections, is_left_cancellative
from rswork.conv import ConvElement, crossed_delta, involution
from rswork.errors import ConvergenceError, UnsupportedStructureError, ValidationError
from rswork.germs import germ_category, induced_algebra_action
from rswork.representations import (
    LinOp, completely_orthogonal_check, covariant_pair_from_sigma, decompose, delta_operator,
    disintegrate, ell1_bound, fock_creation, fock_dimension, full_algebra_witness, integrate,
    max_norm_identity, norm_bracket, operator_norm, orthogonal_decomposition, poly_rep,
    psi_isometry_gap, regular_germ_operators, regular_rep_category, regular_rep_faithful,
    regular_rep_semigroup, semigroup_regular_ops, tensor_norm, truncated_shift,
    von_neumann_bound)
from rswork.rsem import is_inverse, wagner_preston_embed
from rswork.spectrum import canonical_action


def cancellative_categories():
    return [(n, C) for n, C in bundled_categories() if is_left_cancellative(C).ok]


def random_exact(C, rng):
    return ConvElement(C, np.array([Fraction(int(v)) for v in rng.integers(-3, 4, C.n)],
                                   dtype=object))


# -------------------------------------------------------------------- norms

def test_norm_of_identity():
    assert operator_norm(np.eye(7)).value == pytest.approx(1.0, abs=1e-15)


def test_norm_of_nilpotent():
    rep = operator_norm(np.array([[0, 2], [0, 0]]))
    assert rep.value == pytest.approx(2.0, abs=1e-15)
    assert rep.method == "svd"


def test_power_iteration_matches_svd():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((50, 50)) + 1j * rng.standard_normal((50, 50))
    svd = np.linalg.svd(A, compute_uv=False)[0]
    rep = operator_norm(A, method="power")
    assert rep.method == "power"
    assert abs(rep.value - svd) <= 1e-8


def test_nonconvergence_reports_bracket():
    A = np.diag([1.0, 0.999999, 0.5])
    with pytest.raises(ConvergenceError) as info:
        operator_norm(A, method="power", max_iter=3)
    lo, hi = info.value.details["bracket"]
    assert lo <= 1.0 + 1e-12 <= hi + 1e-12
    assert info.value.details["estimate"] == pytest.approx(lo)


def test_norm_report_json():
    assert set(operator_norm(np.eye(2)).to_json()) == {"value", "method", "tol", "iterations"}


def test_binary_export_round_trip():
    rng = np.random.default_rng(2)
    M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    op = LinOp(("a", "b", "c"), M)
    raw = op.to_bytes()
    assert len(raw) == 9 * 16
    assert np.frombuffer(raw, dtype="<f8")[:2].tolist() == [M[0, 0].real, M[0, 0].imag]
    assert LinOp.from_bytes(op.basis, raw).equals(op)
    assert op.to_json()["imag"][1][2] == M[1, 2].imag


# --------------------------------------------------- category representations

def test_point_mass_on_graph_is_creation_operator(loops3):
    L = fock_creation(3, 3)
    labels = L[0].basis
    # morphism "x1.x2" is the word (1, 2); the unit "v" is the empty word
    lookup = {m: (labels.index("()") if m == "v" else
                  labels.index(".".join(p[1:] for p in m.split("."))))
              for m in loops3.morphisms}
    perm = np.array([lookup[m] for m in loops3.morphisms])
    for j in range(3):
        op = delta_operator(loops3, loops3.index(f"x{j + 1}")).toarray()
        fock = L[j].dense()[np.ix_(perm, perm)]
        assert np.array_equal(op, fock)


def test_natural_number_monoid_exceeds_sup(nmult):
    f = ConvElement.delta(nmult, "0")
    op = regular_rep_category(nmult, f)
    v = np.zeros(nmult.n)
    v[[nmult.index("1"), nmult.index("2")]] = 1
    image = op.dense() @ v
    assert image[nmult.index("0")] == 2 and np.count_nonzero(image) == 1
    assert op.norm().value >= np.sqrt(2) - 1e-9
    diag = op.meta["diagnostic"]
    assert not op.meta["left_cancellative"] and diag["exceeds"]


@pytest.mark.parametrize("name,C", cancellative_categories())
def test_bisection_norm_equals_sup(name, C):
    rng = np.random.default_rng(0)
    bis = [U for U in enumerate_bisections(C) if U] if not C.truncated else \
        [frozenset([x]) for x in range(C.n)]
    for k in range(30):
        U = sorted(bis[k % len(bis)])
        f = ConvElement.zeros(C)
        f.coeffs[U] = rng.standard_normal(len(U)) + 1j * rng.standard_normal(len(U))
        assert abs(regular_rep_category(C, f).norm().value - f.sup_norm()) <= 1e-9


@pytest.mark.parametrize("name,C", [(n, C) for n, C in cancellative_categories()
                                    if not C.truncated])
def test_regular_rep_multiplicative_exact(name, C):
    rng = np.random.default_rng(1)
    for _ in range(5):
        f, g = random_exact(C, rng), random_exact(C, rng)
        lhs = regular_rep_category(C, f @ g)
        rhs = regular_rep_category(C, f) @ regular_rep_category(C, g)
        assert lhs.equals(rhs)


@pytest.mark.parametrize("name,C", bundled_categories())
def test_regular_rep_faithful_and_block_diagonal(name, C):
    rng = np.random.default_rng(2)
    for _ in range(5):
        f = ConvElement(C, rng.standard_normal(C.n))
        M = regular_rep_category(C, f).dense()
        assert np.any(M != 0)
        rows, cols = np.nonzero(M)
        assert np.all(C.d[rows] == C.d[cols])


@pytest.mark.parametrize("name,C", bundled_categories())
def test_units_conjugate_to_adjoint(name, C):
    rng = np.random.default_rng(3)
    f = ConvElement.zeros(C)
    units = sorted(C.unit_set)
    f.coeffs[units] = rng.standard_normal(len(units)) + 1j * rng.standard_normal(len(units))
    conj = ConvElement(C, f.coeffs.conj())
    assert regular_rep_category(C, conj).equals(regular_rep_category(C, f).adjoint(), 1e-15)


# -------------------------------------------------- semigroup representation

def test_projection_goes_to_diagonal_projection(i2):
    ops = semigroup_regular_ops(i2)
    for e in i2.E:
        want = np.diag([1.0 if i2.eleq(i2.rho[t], e) else 0.0 for t in range(i2.n)])
        assert np.array_equal(ops[e], want)


def test_matches_wagner_preston(i2):
    emb = wagner_preston_embed(i2)
    ops = semigroup_regular_ops(i2, exact=True)
    for s, m in enumerate(emb.maps):
        want = np.zeros((i2.n, i2.n), dtype=int)
        for t, u in m.pairs:
            want[u, t] = 1
        assert np.array_equal(ops[s].astype(int), want)


def test_faithful_on_small_supports(i2):
    ops = semigroup_regular_ops(i2)
    for k in (1, 2, 3):
        for sub in itertools.combinations(range(i2.n), k):
            stack = np.array([ops[s].ravel() for s in sub])
            assert np.linalg.matrix_rank(stack) == k
    assert regular_rep_faithful(i2)


def test_regular_rep_of_formal_sum(i2):
    coeffs = {0: 2, 3: -1}
    ops = semigroup_regular_ops(i2, exact=True)
    assert regular_rep_semigroup(i2, coeffs, exact=True).equals(
        LinOp(i2.names, 2 * ops[0] - ops[3]))


def test_not_left_ample_is_unsupported(fab):
    with pytest.raises(UnsupportedStructureError):
        semigroup_regular_ops(fab)


# -------------------------------------------------------------- covariant pairs

@pytest.fixture(scope="module")
def i2_pair(i2):
    return covariant_pair_from_sigma(i2, semigroup_regular_ops(i2))


def test_regular_pair_is_covariant(i2, i2_pair):
    assert i2_pair.violations() == []
    for e in i2.E:
        assert np.allclose(i2_pair.pi(i2_pair.alpha.indicator(e)), i2_pair.sigma[e])


def test_psi_is_isometric_on_samples(i2, i2_pair):
    rng = np.random.default_rng(7)
    for _ in range(20):
        coeffs = {s: complex(*rng.standard_normal(2)) for s in range(i2.n)}
        assert psi_isometry_gap(i2_pair, coeffs) <= 1e-9


def test_inverse_semigroup_sigma_of_inverse_is_adjoint(i2, i2_pair):
    inv = is_inverse(i2)
    for s in range(i2.n):
        assert np.allclose(i2_pair.sigma[inv[s]], i2_pair.sigma[s].conj().T, atol=1e-12)


def test_non_representation_rejected(i2):
    ops = semigroup_regular_ops(i2)
    bad = [2 * M for M in ops]
    with pytest.raises(ValidationError):
        covariant_pair_from_sigma(i2, bad)


def test_crossed_integration_of_deltas(i2, i2_pair):
    alpha = i2_pair.alpha
    for e in i2.E:
        assert np.allclose(i2_pair.integrate_crossed(crossed_delta(alpha, e)), i2_pair.sigma[e])


# ------------------------------------------------ integration and disintegration

@pytest.fixture(scope="module")
def i2_germs(i2):
    return germ_category(i2, canonical_action(i2))


def test_round_trip_exact(i2_germs):
    C = i2_germs.category
    Pi = regular_germ_operators(i2_germs, exact=True)
    pair = disintegrate(i2_germs, Pi)
    for z in range(C.n):
        F = ConvElement.delta(C, z, exact=True)
        assert np.array_equal(integrate(pair, i2_germs, F), Pi[z])


def test_integration_independent_of_decomposition(i2_germs):
    C = i2_germs.category
    pair = disintegrate(i2_germs, regular_germ_operators(i2_germs, exact=True))
    F = ConvElement(C, np.array([Fraction(k + 1) for k in range(C.n)], dtype=object))
    first = integrate(pair, i2_germs, F, choose=lambda z, c: c[0])
    last = integrate(pair, i2_germs, F, choose=lambda z, c: c[-1])
    assert np.array_equal(first, last)


def test_disintegrated_projections_have_point_mass_range(i2_germs):
    pair = disintegrate(i2_germs, regular_germ_operators(i2_germs))
    A = i2_germs.action
    for e in A.semigroup.E:
        span = sum(pair.points[x] for x in A.domains[e])
        assert np.allclose(pair.sigma[e], span)
        assert np.allclose(pair.sigma[e] @ pair.sigma[e], pair.sigma[e])


def test_disintegrate_rejects_non_homomorphism(i2_germs):
    Pi = regular_germ_operators(i2_germs)
    Pi[0] = 2 * Pi[0]
    with pytest.raises(ValidationError):
        disintegrate(i2_germs, Pi)


def test_single_theta_support_is_contractive(i2_germs):
    C = i2_germs.category
    pair = disintegrate(i2_germs, regular_germ_operators(i2_germs))
    rng = np.random.default_rng(4)
    for theta in i2_germs.theta_sets:
        if not theta:
            continue
        F = ConvElement.zeros(C)
        F.coeffs[sorted(theta)] = rng.standard_normal(len(theta))
        assert operator_norm(integrate(pair, i2_germs, F)).value <= F.sup_norm() + 1e-9


def test_decompose_sums_back(i2_germs):
    C = i2_germs.category
    F = ConvElement(C, np.arange(C.n, dtype=complex))
    terms = decompose(i2_germs, F)
    from rswork.representations import formal_to_conv
    assert formal_to_conv(i2_germs, terms).equals(F)


# ---------------------------------------------------------- orthogonal families

def test_matrix_units_orthogonal():
    E11, E22 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    assert completely_orthogonal_check([E11, E22])
    assert max_norm_identity([E11, E22]) == 1.0


def test_creation_operators_not_orthogonal():
    L1, L2 = (L.dense() for L in fock_creation(2, 2))
    assert np.allclose(L1.conj().T @ L2, 0)
    assert not np.allclose(L1 @ L2.conj().T, 0)
    assert not completely_orthogonal_check([L1, L2])


def test_integration_pieces_orthogonal(i2_germs):
    C = i2_germs.category
    pair = disintegrate(i2_germs, regular_germ_operators(i2_germs))
    rng = np.random.default_rng(6)
    for U in enumerate_bisections(C)[:40]:
        if not U:
            continue
        F = ConvElement.zeros(C)
        F.coeffs[sorted(U)] = rng.standard_normal(len(U))
        pieces = orthogonal_decomposition(pair, i2_germs, F)
        assert completely_orthogonal_check(pieces)
        assert max_norm_identity(pieces) <= F.sup_norm() + 1e-9


# ------------------------------------------------------------------ Fock space

def test_fock_dimension():
    assert fock_dimension(3, 3) == 40
    assert fock_dimension(1, 5) == 6
    assert fock_creation(3, 3)[0].dim == 40


def test_sum_of_creations_has_norm_root_m():
    poly = {(0,): 1, (1,): 1, (2,): 1}
    assert abs(tensor_norm(poly, 3, 3).value - np.sqrt(3)) <= 1e-6
    assert full_algebra_witness(poly) == 3
    b = norm_bracket(poly, 3, 3)
    assert b["lower"] == 3 and b["upper"] == 3


def test_shift_norm_of_one_plus_x():
    v = tensor_norm({(): 1, (0,): 1}, 1, 512).value
    assert 1.99 <= v <= 2.0000001


@settings(max_examples=15, deadline=None)
@given(st.dictionaries(st.lists(st.integers(0, 1), max_size=3).map(tuple),
                       st.integers(-3, 3), min_size=1, max_size=4))
def test_tensor_norm_monotone_and_bounded(poly):
    norms = [tensor_norm(poly, 2, N).value for N in (1, 2, 3, 4)]
    assert all(a <= b + 1e-9 for a, b in zip(norms, norms[1:]))
    assert norms[-1] <= ell1_bound(poly) + 1e-9


# --------------------------------------------------------- disc algebra pairs

def test_poly_rep_trivial():
    out = poly_rep(np.eye(3), np.zeros((3, 3)), [3, 1])
    assert operator_norm(out).value == pytest.approx(3.0)


def test_poly_rep_domination_on_random_pairs():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(0, n + 1))
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        P = Q[:, :k] @ Q[:, :k].conj().T
        A = P @ (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) @ P
        nrm = operator_norm(A).value
        T = A / nrm * rng.random() if nrm > 0 else A
        coeffs = list(rng.standard_normal(int(rng.integers(1, 5))))
        out = poly_rep(P, T, coeffs)
        full = poly_rep(np.eye(n), T, coeffs)
        assert operator_norm(out).value <= operator_norm(full).value + 1e-9


def test_poly_rep_rejects_bad_inputs():
    with pytest.raises(ValidationError):
        poly_rep(np.array([[1, 1], [0, 0]]), np.zeros((2, 2)), [1])
    with pytest.raises(ValidationError):
        poly_rep(np.eye(2), 2 * np.eye(2), [1])
    with pytest.raises(ValidationError):
        poly_rep(np.diag([1.0, 0.0]), np.array([[0, 1], [0, 0]]), [1])


def test_poly_rep_of_shift_matches_tensor_norm():
    S = truncated_shift(6).dense()
    coeffs = [1, -2, 0.5]
    lhs = operator_norm(poly_rep(np.eye(7), S, coeffs)).value
    rhs = tensor_norm({(): 1, (0,): -2, (0, 0): 0.5}, 1, 6).value
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_von_neumann_simple():
    assert von_neumann_bound([0, 1]) == pytest.approx(1.0, abs=1e-12)
    assert von_neumann_bound([1, 1]) == pytest.approx(2.0, abs=1e-12)


def test_von_neumann_inequality_at_256():
    rng = np.random.default_rng(9)
    S = truncated_shift(256).dense()
    for _ in range(20):
        deg = int(rng.integers(0, 9))
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        M = poly_rep(np.eye(257), S, list(c))
        assert operator_norm(M).value <= von_neumann_bound(c) + 1e-8
