"""Correctable and private operator algebras for finite-dimensional quantum channels."""
from .algebra import (BlockSignature, MatrixAlgebra, algebra_from_generators, block_signature,
                      center, commutant, complementarity_measure, conditional_expectation,
                      diagonal_algebra, direct_sum_algebra, full_algebra, quasiorthogonal,
                      scalar_algebra, tensor_factor_algebra)
from .channel import (ChoiMatrix, CPMap, QuantumChannel, apply, canonical_kraus, choi,
                      complement, dual, kernel, superoperator_matrix)
from .codes import (CodeVerdict, Representation, complementarity_identity_check, construct_pi,
                    generalized_mult_domain, multiplicative_domain, privacy_kernel_test,
                    test_correctable, test_private, unital_extras)
from .opspace import (DEFAULT_TOL, InvalidInput, OperatorSubspace, StructureError,
                      TolerancePolicy, joint_nullspace, nullspace, orthogonal_complement,
                      psd_sqrt_pinv)
from .tradeoff import (InequalityAudit, audit_inequalities, complement_rank_bound,
                       privatized_to_state, quasiorthogonality_equivalence_check)

__version__ = "0.1.0"
