"""Saturating the tradeoff: depolarize half of a four-qubit register.

The last two qubits pass untouched (a correctable M_4) while the first two
are fully randomized (a privatized M_4).  dim(A) * dim(B) = 16 * 16 = 256
meets the bound n^2 exactly.
"""
from qcomplement.algebra import tensor_factor_algebra
from qcomplement.gallery import partial_depolarizing
from qcomplement.tradeoff import audit_inequalities, quasiorthogonality_equivalence_check

phi = partial_depolarizing(4, 2)
kept = tensor_factor_algebra([4, 4], 1, "I(x)M4")
lost = tensor_factor_algebra([4, 4], 0, "M4(x)I")

for a in audit_inequalities(phi, kept, lost):
    tag = "saturated" if a.saturated else ("holds" if a.holds else "FAILS")
    print(f"{a.name:<36} {a.lhs:>5} <= {a.rhs:<5} {tag}")

# The two factors are quasiorthogonal: the conditional expectation onto one
# corrects it and privatizes the other.
r = quasiorthogonality_equivalence_check(kept, lost)
print(f"\nquasiorthogonal: {r['quasiorthogonal']}, c(A,B) = {r['c']:.6f}, "
      f"corrects A: {r['corrects']}, privatizes B: {r['privatizes']}")
