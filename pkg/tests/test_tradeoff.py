import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from qcomplement.algebra import (commutant, conditional_expectation, conjugated, diagonal_algebra,
                                 full_algebra, scalar_algebra, tensor_factor_algebra)
from qcomplement.gallery import (bitflip_qubit4, hybrid_code, identity_channel, m3_channel,
                                 m3_lower, m3_upper, partial_depolarizing, trace_channel)
from qcomplement.opspace import InvalidInput
from qcomplement.sampling import quasiorthogonal_pair, random_unital_algebra
from qcomplement.tradeoff import (audit_inequalities, complement_rank_bound, correctable_for,
                                  make_audit, privatized_to_state,
                                  quasiorthogonality_equivalence_check)

seeds = st.integers(0, 2**32)


def by_name(audits):
    return {a.name: a for a in audits}


class TestPrivatization:
    def test_trace_channel(self):
        ok, rho = privatized_to_state(trace_channel(3), full_algebra(3))
        assert ok
        assert_allclose(rho, np.eye(3) / 3, atol=1e-12)

    def test_m3_lower_block(self):
        ok, rho = privatized_to_state(m3_channel(), m3_lower())
        assert ok
        assert_allclose(rho, np.diag([0, 1, 0]), atol=1e-12)

    def test_identity_privatizes_only_scalars(self):
        assert privatized_to_state(identity_channel(2), scalar_algebra(2))[0]
        assert privatized_to_state(identity_channel(2), diagonal_algebra(2)) == (False, None)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInput):
            privatized_to_state(identity_channel(2), full_algebra(3))


class TestQuasiorthogonality:
    def test_tensor_factors(self):
        r = quasiorthogonality_equivalence_check(tensor_factor_algebra([2, 2], 0),
                                                 tensor_factor_algebra([2, 2], 1))
        assert r["quasiorthogonal"] and r["corrects"] and r["privatizes"]
        assert r["c_is_one"] and r["consistent"] and r["c_consistent"]
        assert r["product_gram_error"] < 1e-10
        assert_allclose(r["state"], np.eye(4) / 4, atol=1e-12)

    def test_diagonal_with_itself(self):
        D = diagonal_algebra(2)
        r = quasiorthogonality_equivalence_check(D, D)
        assert not r["quasiorthogonal"] and not r["privatizes"]
        assert abs(r["c"] - 2) < 1e-12
        assert r["consistent"] and r["c_consistent"]

    def test_requires_unital(self):
        with pytest.raises(InvalidInput):
            quasiorthogonality_equivalence_check(m3_upper(), full_algebra(3))

    @given(seeds, st.integers(2, 6), st.booleans())
    def test_equivalence_sweep(self, seed, n, paired):
        rng = np.random.default_rng(seed)
        if paired:
            A, B = quasiorthogonal_pair(rng, n)
        else:
            A, B = random_unital_algebra(rng, n), random_unital_algebra(rng, n)
        r = quasiorthogonality_equivalence_check(A, B)
        assert r["consistent"] and r["c_consistent"]
        if paired:
            assert r["quasiorthogonal"] and r["product_gram_error"] < 1e-8
            assert A.dim * B.dim <= n * n


class TestAudits:
    def test_saturation(self):
        phi = partial_depolarizing(4, 2)
        A, B = tensor_factor_algebra([4, 4], 1), tensor_factor_algebra([4, 4], 0)
        a = by_name(audit_inequalities(phi, A, B))
        prod = a["dim(A)*dim(B) <= n^2"]
        assert (prod.lhs, prod.rhs, prod.holds, prod.saturated) == (256, 256, True, True)
        assert a["dim(B) <= dim(A')"].saturated and a["dim(A) <= dim(B')"].saturated
        assert not any(x.violated for x in a.values())

    def test_m3_violation_is_not_applicable(self):
        a = by_name(audit_inequalities(m3_channel(), m3_upper(), m3_lower()))
        prod = a["dim(A)*dim(B) <= n^2"]
        assert (prod.lhs, prod.rhs, prod.holds) == (16, 9, False)
        assert not prod.applicable and not prod.violated
        assert "not unital" in a["dim(B) <= dim(A')"].notes
        assert not a["dim(M(Phi)) + dim(ker Phi) <= n^2"].applicable

    def test_identity(self):
        a = by_name(audit_inequalities(identity_channel(3), full_algebra(3), scalar_algebra(3)))
        assert a["dim(A)*dim(B) <= n^2"].saturated
        assert a["dim(M(Phi)) + dim(ker Phi) <= n^2"].saturated

    def test_masa_pair(self):
        n = 3
        F = np.exp(2j * np.pi * np.outer(range(n), range(n)) / n) / np.sqrt(n)
        A, B = diagonal_algebra(n), conjugated(diagonal_algebra(n), F)
        a = by_name(audit_inequalities(conditional_expectation(A), A, B))
        masa = a["algebras containing a MASA"]
        assert masa.applicable and masa.holds and (masa.lhs, masa.rhs) == (2, 2)

    def test_uncorrectable_marked(self):
        a = by_name(audit_inequalities(trace_channel(2), full_algebra(2), full_algebra(2)))
        assert not a["dim(A)*dim(B) <= n^2"].applicable
        assert "not correctable" in a["dim(A)*dim(B) <= n^2"].notes

    def test_make_audit_tolerance(self):
        assert make_audit("x", 1.0 + 1e-12, 1.0).saturated

    @given(seeds, st.integers(2, 5))
    def test_no_applicable_violations(self, seed, n):
        rng = np.random.default_rng(seed)
        A = random_unital_algebra(rng, n)
        B = commutant(A)
        phi = conditional_expectation(A)
        for audit in audit_inequalities(phi, A, B):
            assert not audit.violated, audit


class TestComplementRankBound:
    def test_qubit4_corner(self):
        # with its unit projection as Q the hybrid code is correctable
        r = complement_rank_bound(bitflip_qubit4(), hybrid_code())
        assert r.holds and r.lhs <= r.rhs == 2

    def test_uncorrectable(self):
        with pytest.raises(InvalidInput):
            complement_rank_bound(trace_channel(2), full_algebra(2))

    @given(seeds, st.integers(2, 5))
    def test_conditional_expectations(self, seed, n):
        rng = np.random.default_rng(seed)
        A = random_unital_algebra(rng, n)
        phi = conditional_expectation(A)
        assert correctable_for(phi, A)
        assert complement_rank_bound(phi, A).holds
