import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from qcomplement.opspace import (DEFAULT_TOL, InvalidInput, OperatorSubspace, TolerancePolicy,
                                 canonical_basis, cluster_eigenvalues, joint_nullspace, nullspace,
                                 numerical_rank, orthogonal_complement, psd_sqrt_pinv,
                                 random_hermitian_in, rank_cutoff, splitmix64, uniform_symmetric,
                                 unvec, vec)
from qcomplement.sampling import random_unitary


def random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def random_subspace(rng, n, d):
    return OperatorSubspace.span([random_matrix(rng, n) for _ in range(d)], n)


class TestVectorization:
    def test_column_stacking(self):
        X = np.array([[1, 2], [3, 4]])
        assert_allclose(vec(X), [1, 3, 2, 4])
        assert_allclose(unvec(vec(X), 2), X)

    def test_sandwich_superoperator(self, rng):
        # X -> A X B acts on vec(X) as kron(B^T, A)
        A, B, X = random_matrix(rng, 3), random_matrix(rng, 3), random_matrix(rng, 3)
        assert_allclose(np.kron(B.T, A) @ vec(X), vec(A @ X @ B), atol=1e-12)

    def test_rectangular_unvec(self):
        v = np.arange(6)
        assert unvec(v, 2, 3).shape == (2, 3)
        assert_allclose(vec(unvec(v, 2, 3)), v)


class TestTolerancePolicy:
    def test_defaults(self):
        tol = TolerancePolicy()
        assert tol.rank_rel == 1e-10 and tol.equality_abs == 1e-9

    @pytest.mark.parametrize("field,value", [("rank_rel", 0.0), ("eig_cluster", -1e-3),
                                             ("equality_abs", float("nan"))])
    def test_rejects_bad_thresholds(self, field, value):
        with pytest.raises(InvalidInput):
            TolerancePolicy(**{field: value})

    @pytest.mark.parametrize("seed", [-1, 2**64, 1.5])
    def test_rejects_bad_seed(self, seed):
        with pytest.raises(InvalidInput):
            TolerancePolicy(seed=seed)

    def test_replace_keeps_other_fields(self):
        tol = DEFAULT_TOL.replace(rank_rel=1e-6)
        assert tol.rank_rel == 1e-6 and tol.seed == DEFAULT_TOL.seed


class TestSplitmix:
    def test_reference_values(self):
        # published splitmix64 outputs for seed 1234567
        s = splitmix64(1234567)
        assert next(s) == 6457827717110365317
        assert next(s) == 3203168211198807973

    def test_seed_zero(self):
        assert next(splitmix64(0)) == 0xE220A8397B1DCDAF

    def test_uniform_range_and_determinism(self):
        u = uniform_symmetric(42, 1000)
        assert np.all(u >= -1) and np.all(u < 1)
        assert_allclose(u, uniform_symmetric(42, 1000), rtol=0, atol=0)
        assert abs(u.mean()) < 0.1


class TestRank:
    def test_rank_of_product(self, rng):
        M = random_matrix(rng, 6, 2) @ random_matrix(rng, 2, 5)
        assert numerical_rank(M) == 2

    def test_scale_floor_discards_noise(self):
        s = np.array([1e-15, 1e-16])
        assert rank_cutoff(s, (4, 4), DEFAULT_TOL) <= 1e-15
        assert rank_cutoff(s, (4, 4), DEFAULT_TOL, scale=1.0) > 1e-15

    def test_nullspace_of_trace_map(self):
        n = 3
        K = nullspace(vec(np.eye(n)).conj()[None, :])
        assert K.dim == n * n - 1
        for B in K:
            assert abs(np.trace(B)) < 1e-12

    def test_joint_nullspace_commutant_of_diagonal(self):
        n = 3
        D = np.diag([1.0, 2.0, 3.0])
        blocks = [np.kron(np.eye(n), D) - np.kron(D.T, np.eye(n))]
        assert joint_nullspace(blocks, n, scale=1.0).dim == 3


class TestOperatorSubspace:
    def test_rejects_non_orthonormal(self):
        with pytest.raises(InvalidInput):
            OperatorSubspace(2, np.ones((4, 2)))

    def test_span_dimension_and_orthonormality(self, rng):
        S = random_subspace(rng, 3, 4)
        assert S.dim == 4
        assert_allclose(S.vectors.conj().T @ S.vectors, np.eye(4), atol=1e-12)

    def test_span_of_dependent_matrices(self):
        A = np.array([[1, 0], [0, 0]])
        assert OperatorSubspace.span([A, 2 * A, 3j * A]).dim == 1

    def test_intersection(self):
        diag = OperatorSubspace.span([np.diag([1, 0]), np.diag([0, 1])])
        other = OperatorSubspace.span([np.eye(2), np.array([[0, 1], [0, 0]])])
        both = diag.intersection(other)
        assert both.dim == 1
        assert both.contains(np.eye(2), 1e-12)

    def test_intersection_with_itself(self, rng):
        S = random_subspace(rng, 3, 5)
        assert S.intersection(S).distance(S) < 1e-10

    def test_complement_dimensions(self, rng):
        S = random_subspace(rng, 3, 4)
        C = orthogonal_complement(S)
        assert C.dim == 5
        assert np.max(np.abs(S.vectors.conj().T @ C.vectors)) < 1e-12

    def test_ambient_mismatch(self):
        with pytest.raises(InvalidInput):
            OperatorSubspace.full(2).distance(OperatorSubspace.full(3))

    @given(st.integers(0, 2**32), st.integers(2, 4), st.integers(1, 6), st.integers(1, 6))
    def test_distance_properties(self, seed, n, d1, d2):
        rng = np.random.default_rng(seed)
        S, T = random_subspace(rng, n, d1), random_subspace(rng, n, d2)
        assert S.distance(S) < 1e-12
        assert abs(S.distance(T) - T.distance(S)) < 1e-10
        oracle = np.linalg.norm(S.projector() - T.projector())
        assert abs(S.distance(T) - oracle) < 1e-9

    @given(st.integers(0, 2**32), st.integers(2, 4), st.integers(1, 8))
    def test_projector_is_orthogonal_projection(self, seed, n, d):
        rng = np.random.default_rng(seed)
        P = random_subspace(rng, n, min(d, n * n)).projector()
        assert_allclose(P @ P, P, atol=1e-10)
        assert_allclose(P, P.conj().T, atol=1e-12)


class TestPsdRoots:
    def test_root_and_pinv(self, rng):
        G = random_matrix(rng, 4, 2)
        R = G @ G.conj().T
        root, pinv = psd_sqrt_pinv(R)
        assert_allclose(root @ root, R, atol=1e-10)
        P = pinv @ root
        assert_allclose(P @ P, P, atol=1e-8)
        assert abs(np.trace(P).real - 2) < 1e-8

    def test_negative_eigenvalue(self):
        with pytest.raises(InvalidInput, match="-1.000e-02"):
            psd_sqrt_pinv(np.diag([1.0, -1e-2]))

    def test_not_hermitian(self):
        with pytest.raises(InvalidInput):
            psd_sqrt_pinv(np.array([[1, 1], [0, 1]]))


class TestCanonicalBasis:
    def test_clusters(self):
        groups = cluster_eigenvalues(np.array([0, 1e-10, 1, 1 + 1e-10, 3]), 1e-8)
        assert [list(g) for g in groups] == [[0, 1], [2, 3], [4]]

    @given(st.integers(0, 2**32), st.integers(1, 5))
    def test_independent_of_input_basis(self, seed, c):
        rng = np.random.default_rng(seed)
        U = np.linalg.qr(random_matrix(rng, 6, c))[0]
        W = random_unitary(rng, c)
        assert_allclose(canonical_basis(U), canonical_basis(U @ W), atol=1e-8)

    def test_generic_hermitian_is_deterministic(self):
        S = OperatorSubspace.full(3)
        H1, H2 = random_hermitian_in(S, 7), random_hermitian_in(S, 7)
        assert_allclose(H1, H2, rtol=0, atol=0)
        assert_allclose(H1, H1.conj().T)
        assert np.linalg.norm(H1 - random_hermitian_in(S, 8)) > 0.1

    def test_generic_hermitian_needs_adjoint_closure(self):
        S = OperatorSubspace.span([np.array([[0, 1], [0, 0]])])
        with pytest.raises(InvalidInput):
            random_hermitian_in(S, 0)
