"""A hybrid classical-quantum code for single bit flips on four qubits.

Bit flips hit one of the first three qubits (or nothing), each with
probability 1/4.  Two qubit codes C0 = span{|0000>, |1111>} and
C1 = span{|0001>, |1110>} are carried side by side, giving the algebra
L(C0) (+) L(C1): one qubit of quantum data plus one classical bit.
"""
import numpy as np

from qcomplement import codes, complement
from qcomplement.gallery import bitflip_qubit4, hybrid_code

phi = bitflip_qubit4()
A = hybrid_code()
Q = A.unit_projection  # projection onto C0 (+) C1

print(f"channel: {phi.n_kraus} Kraus operators on M_{phi.dim_in}")
print(f"code algebra: dim {A.dim}, supported on a rank {int(np.trace(Q).real)} subspace")

# Correctability only needs the error products compressed to the code.
v = codes.test_correctable(phi, A, Q)
print(f"\ncorrectable with respect to Q: {bool(v)} (deviation {v.deviation:.1e})")
print(f"correctable with respect to I: {bool(codes.test_correctable(phi, A))}")

# The recovery acts as a representation pi with Q Phi^dag(pi(B)) Q = B.
pi = codes.construct_pi(phi, A, Q)
print(f"round trip error of pi: {codes.round_trip_error(phi, pi, Q):.1e}")

# What is correctable for the channel is private for its complement.
comp = complement(phi)
print(f"\nenvironment dimension: {comp.dim_out}")
print(f"private for the complement: {bool(codes.test_private(comp, A, Q))}")

r = codes.complementarity_identity_check(phi, A, Q)
print(f"M_pi(Phi) = A: {r['mpi_vs_algebra_distance'] < 1e-8}, "
      f"commutant side has dim {r['commutant_side_dim']} (A is not maximal)")
