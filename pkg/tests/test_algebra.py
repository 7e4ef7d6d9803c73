import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from qcomplement.algebra import (MatrixAlgebra, algebra_from_generators, block_signature, center,
                                 commutant, complementarity_measure, compress_to_unit,
                                 conditional_expectation, conjugated, diagonal_algebra,
                                 direct_sum_algebra, full_algebra, quasiorthogonal, scalar_algebra,
                                 tensor_factor_algebra)
from qcomplement.channel import apply
from qcomplement.opspace import InvalidInput, OperatorSubspace, StructureError
from qcomplement.sampling import block_algebra, random_unital_algebra, random_unitary

signatures = st.lists(st.tuples(st.integers(1, 2), st.integers(1, 3)), min_size=1, max_size=3) \
    .filter(lambda sig: sum(m * s for m, s in sig) <= 6)


def E(n, i, j):
    M = np.zeros((n, n))
    M[i, j] = 1
    return M


class TestConstruction:
    def test_not_adjoint_closed(self):
        with pytest.raises(StructureError):
            MatrixAlgebra(OperatorSubspace.span([E(2, 0, 1)]))

    def test_not_multiplicatively_closed(self):
        with pytest.raises(StructureError):
            MatrixAlgebra(OperatorSubspace.span([E(3, 0, 1) + E(3, 1, 0), E(3, 1, 2) + E(3, 2, 1)]))

    def test_generated_algebra(self):
        A = algebra_from_generators([E(2, 0, 1)])
        assert A.dim == 4 and A.is_unital

    def test_generated_projection_is_not_unital(self):
        A = algebra_from_generators([E(3, 0, 0)])
        assert A.dim == 1 and not A.is_unital
        assert_allclose(A.unit_projection, E(3, 0, 0), atol=1e-12)

    def test_unit_projection_of_corner(self):
        A = direct_sum_algebra([np.eye(3)[:2]], 3)
        assert A.dim == 4
        assert_allclose(A.unit_projection, np.diag([1, 1, 0]), atol=1e-12)

    def test_direct_sum_rows_are_vectors(self):
        A = direct_sum_algebra([[[1, 0, 0, 0]], [[0, 1, 1, 0]]], 4)
        assert A.dim == 2 and A.is_abelian()

    def test_direct_sum_rejects_wrong_length(self):
        with pytest.raises(InvalidInput):
            direct_sum_algebra([[[1, 0]]], 3)

    def test_tensor_factor(self):
        A = tensor_factor_algebra([2, 3], 1)
        assert A.dim == 9 and A.is_unital
        assert A.contains(np.kron(np.eye(2), np.arange(9).reshape(3, 3)))
        assert not A.contains(np.kron(np.diag([1, -1]), np.eye(3)))


class TestCommutant:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_full_and_scalars(self, n):
        assert commutant(full_algebra(n)).dim == 1
        assert commutant(scalar_algebra(n)).dim == n * n

    def test_diagonal_is_maximal_abelian(self):
        D = diagonal_algebra(4)
        assert commutant(D).basis.distance(D.basis) < 1e-10

    def test_corner_commutant(self):
        A = direct_sum_algebra([np.eye(3)[:2]], 3)
        C = commutant(A)
        assert C.dim == 2
        assert C.contains(np.eye(3)) and C.contains(np.diag([0, 0, 1]))

    def test_center_of_block_algebra(self):
        A = block_algebra([(1, 2), (1, 1)])
        Z = center(A)
        assert Z.dim == 2
        assert Z.contains(np.diag([1, 1, 0])) and Z.contains(np.diag([0, 0, 1]))

    @given(signatures, st.integers(0, 2**32))
    def test_bicommutant_and_dimension_bound(self, sig, seed):
        rng = np.random.default_rng(seed)
        A = block_algebra(sig)
        A = conjugated(A, random_unitary(rng, A.ambient_dim))
        n = A.ambient_dim
        Ac = commutant(A)
        assert commutant(Ac).basis.distance(A.basis) < 1e-8
        assert A.dim * Ac.dim >= n * n


class TestSignature:
    @given(signatures, st.integers(0, 2), st.integers(0, 2**32))
    def test_round_trip(self, sig, K, seed):
        rng = np.random.default_rng(seed)
        A = block_algebra(sig, K)
        A = conjugated(A, random_unitary(rng, A.ambient_dim))
        got = block_signature(A)
        assert got.blocks == tuple(sorted(sig, key=lambda b: (b[1], b[0])))
        assert got.K == K
        assert got.ambient_dim == A.ambient_dim
        assert got.commutant_dim == commutant(A).dim

    def test_examples(self):
        assert block_signature(full_algebra(3)).blocks == ((1, 3),)
        assert block_signature(scalar_algebra(3)).blocks == ((3, 1),)
        assert block_signature(diagonal_algebra(3)).blocks == ((1, 1),) * 3
        assert block_signature(tensor_factor_algebra([2, 2], 0)).blocks == ((2, 2),)

    def test_hybrid_code(self):
        from qcomplement.gallery import hybrid_code
        sig = block_signature(hybrid_code())
        assert sig.blocks == ((1, 2), (1, 2)) and sig.K == 12


class TestCompression:
    def test_corner_becomes_full(self):
        A = compress_to_unit(direct_sum_algebra([np.eye(3)[:2]], 3))
        assert A.ambient_dim == 2 and A.dim == 4 and A.is_unital

    def test_zero_algebra(self):
        with pytest.raises(InvalidInput):
            compress_to_unit(MatrixAlgebra(OperatorSubspace.zero(2)))


class TestConditionalExpectation:
    def test_diagonal_part(self, rng):
        E_D = conditional_expectation(diagonal_algebra(3))
        X = rng.standard_normal((3, 3))
        assert_allclose(apply(E_D, X), np.diag(np.diag(X)), atol=1e-12)

    def test_rejects_non_unital(self):
        with pytest.raises(InvalidInput):
            conditional_expectation(direct_sum_algebra([np.eye(3)[:2]], 3))

    @given(st.integers(0, 2**32), st.integers(2, 5))
    def test_bimodule_and_idempotent(self, seed, n):
        rng = np.random.default_rng(seed)
        A = random_unital_algebra(rng, n)
        E_A = conditional_expectation(A)
        X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a, b = (sum(c * B for c, B in zip(rng.standard_normal(A.dim), A.elements))
                for _ in range(2))
        assert_allclose(apply(E_A, a @ X @ b), a @ apply(E_A, X) @ b, atol=1e-9)
        assert_allclose(apply(E_A, apply(E_A, X)), apply(E_A, X), atol=1e-10)
        assert abs(np.trace(apply(E_A, X)) - np.trace(X)) < 1e-10


class TestQuasiorthogonality:
    def test_tensor_factors(self):
        A, B = tensor_factor_algebra([2, 2], 0), tensor_factor_algebra([2, 2], 1)
        assert quasiorthogonal(A, B)
        assert abs(complementarity_measure(A, B) - 1) < 1e-12

    def test_diagonal_with_itself(self):
        D = diagonal_algebra(2)
        q = quasiorthogonal(D, D)
        assert not q and abs(q.deviation - 0.5) < 1e-12
        assert abs(complementarity_measure(D, D) - 2) < 1e-12

    def test_fourier_pair(self):
        n = 3
        F = np.exp(2j * np.pi * np.outer(range(n), range(n)) / n) / np.sqrt(n)
        assert quasiorthogonal(diagonal_algebra(n), conjugated(diagonal_algebra(n), F))

    def test_requires_unital(self):
        with pytest.raises(InvalidInput):
            quasiorthogonal(direct_sum_algebra([np.eye(3)[:2]], 3), full_algebra(3))
