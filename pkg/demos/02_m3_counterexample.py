"""Why the dimension tradeoff needs unital algebras.

On M_3 the channel keeps the upper-left 2x2 block and pours the (3,3)
entry into the (2,2) slot.  The corner algebra M_2 (+) 0 survives intact,
while 0 (+) M_2 is squashed onto a single state, yet 4 * 4 = 16 > 9.
"""
import numpy as np

from qcomplement import apply, commutant, test_correctable
from qcomplement.gallery import m3_channel, m3_lower, m3_upper
from qcomplement.tradeoff import audit_inequalities, privatized_to_state

phi = m3_channel()
A, B = m3_upper(), m3_lower()

X = np.arange(1, 10).reshape(3, 3)
print("Phi applied to [[1,2,3],[4,5,6],[7,8,9]]:")
print(apply(phi, X).real)

print(f"\nA = M2+0 correctable on its unit: {bool(test_correctable(phi, A, A.unit_projection))}")
ok, rho = privatized_to_state(phi, B)
print(f"B = 0+M2 privatized to a state: {ok}, rho = diag{tuple(np.diag(rho).real.tolist())}")
print(f"dim A' = {commutant(A).dim}, dim B' = {commutant(B).dim}")

print("\naudits:")
for a in audit_inequalities(phi, A, B):
    status = "holds" if a.holds else "fails"
    print(f"  {a.name:<36} {a.lhs:>4} vs {a.rhs:<4} {status}"
          + ("" if a.applicable else f"  (not applicable: {a.notes})"))
