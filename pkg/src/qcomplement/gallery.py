"""Built-in example channels with their expected analysis outcomes.

Each case names its algebras; ``expected`` maps dotted paths into the
report of :func:`qcomplement.analysis.analyze` to the values they must take.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import (MatrixAlgebra, conditional_expectation, diagonal_algebra,
                      direct_sum_algebra, full_algebra, scalar_algebra, tensor_factor_algebra)
from .analysis import analyze
from .channel import QuantumChannel
from .opspace import DEFAULT_TOL, InvalidInput, TolerancePolicy
from .sampling import random_unitary

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0 + 0j, -1.0]),
}


def pauli_string(word: str) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for ch in word:
        out = np.kron(out, PAULI[ch])
    return out


def basis_ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits))
    v[int(bits, 2)] = 1
    return v


@dataclass
class GalleryCase:
    id: str
    description: str
    build: Callable[[], QuantumChannel]
    algebras: dict[str, Callable[[], MatrixAlgebra]] = field(default_factory=dict)
    correctable: str | None = None  # algebra analysed as the code
    private: str | None = None      # algebra tested for privatization to a state
    expected: dict = field(default_factory=dict)

    def channel(self) -> QuantumChannel:
        return self.build()

    def algebra(self, name: str) -> MatrixAlgebra:
        if name not in self.algebras:
            raise InvalidInput(f"case {self.id!r} has no algebra {name!r}; "
                               f"choose from {sorted(self.algebras)}")
        return self.algebras[name]()

    def report(self, tol: TolerancePolicy = DEFAULT_TOL) -> dict:
        A = self.algebra(self.correctable) if self.correctable else None
        B = self.algebra(self.private) if self.private else None
        return analyze(self.channel(), A, None, B, tol)


# --- channels -------------------------------------------------------------

def identity_channel(n: int) -> QuantumChannel:
    return QuantumChannel([np.eye(n)], label=f"identity-n{n}")


def trace_channel(n: int) -> QuantumChannel:
    """``X -> tr(X) I / n`` with Kraus operators ``E_ij / sqrt(n)``."""
    kraus = []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n))
            E[i, j] = 1 / np.sqrt(n)
            kraus.append(E)
    return QuantumChannel(kraus, label=f"trace-n{n}")


def depolarizing_qubit(p: float = 0.5) -> QuantumChannel:
    kraus = [np.sqrt(1 - 3 * p / 4) * PAULI["I"]] + [np.sqrt(p / 4) * PAULI[c] for c in "XYZ"]
    return QuantumChannel(kraus, label=f"depolarizing-{p}")


def bitflip_qubit4() -> QuantumChannel:
    """Bit flips on one of the first three of four qubits, uniform weights."""
    words = ["IIII", "XIII", "IXII", "IIXI"]
    return QuantumChannel([0.5 * pauli_string(w) for w in words], label="qubit4-bitflip")


def hybrid_code() -> MatrixAlgebra:
    C0 = [basis_ket("0000"), basis_ket("1111")]
    C1 = [basis_ket("0001"), basis_ket("1110")]
    return direct_sum_algebra([C0, C1], 16, label="hybrid-code")


def m3_channel() -> QuantumChannel:
    """Keeps the upper 2x2 block and moves the (3,3) entry onto (2,2)."""
    V1 = np.diag([1.0, 1.0, 0.0])
    V2 = np.zeros((3, 3))
    V2[1, 2] = 1
    return QuantumChannel([V1, V2], label="m3-counterexample")


def m3_upper() -> MatrixAlgebra:
    return direct_sum_algebra([np.eye(3)[:2]], 3, label="M2+0")


def m3_lower() -> MatrixAlgebra:
    return direct_sum_algebra([np.eye(3)[1:]], 3, label="0+M2")


def diagonal_expectation(n: int) -> QuantumChannel:
    E = conditional_expectation(diagonal_algebra(n))
    E.label = f"diag-expectation-n{n}"
    return E


def partial_depolarizing(N: int, k: int) -> QuantumChannel:
    """Completely depolarize the first ``k`` of ``N`` qubits."""
    words = [""]
    for _ in range(k):
        words = [w + c for w in words for c in "IXYZ"]
    kraus = [pauli_string(w + "I" * (N - k)) / 2 ** k for w in words]
    return QuantumChannel(kraus, label=f"depolarize-{k}-of-{N}")


def unitary_conjugation(n: int, seed: int = 3) -> QuantumChannel:
    U = random_unitary(np.random.default_rng(seed), n)
    return QuantumChannel([U], label=f"unitary-n{n}")


def tensor_expectation() -> QuantumChannel:
    E = conditional_expectation(tensor_factor_algebra([2, 2], 0))
    E.label = "tensor-expectation"
    return E


# --- cases ----------------------------------------------------------------

def _cases() -> list[GalleryCase]:
    return [
        GalleryCase(
            "identity-n2", "identity channel on M_2", lambda: identity_channel(2),
            {"full": lambda: full_algebra(2)}, "full", None,
            {"channel.multiplicative_domain.dim": 4, "channel.kernel_dim": 0,
             "channel.complement.dim_out": 1, "algebra.correctable.kind": "correctable",
             "algebra.private_for_complement.kind": "private",
             "algebra.complementarity_identity.maximal": True,
             "unital_extras.saturated": True}),
        GalleryCase(
            "trace-n2", "completely depolarizing channel on M_2", lambda: trace_channel(2),
            {"full": lambda: full_algebra(2), "scalars": lambda: scalar_algebra(2)},
            "scalars", "full",
            {"channel.choi_rank": 4, "channel.multiplicative_domain.dim": 1,
             "algebra.correctable.kind": "correctable",
             "private_algebra.privatized_to_state": True,
             "audits.dim(A)*dim(B) <= n^2.saturated": True,
             "audits.dim(A)*dim(B) <= n^2.holds": True}),
        GalleryCase(
            "depolarizing-qubit", "qubit depolarizing channel, p = 1/2",
            lambda: depolarizing_qubit(0.5),
            {"scalars": lambda: scalar_algebra(2), "full": lambda: full_algebra(2)},
            "scalars", "full",
            {"channel.multiplicative_domain.dim": 1, "channel.kernel_dim": 0,
             "algebra.correctable.kind": "correctable",
             "private_algebra.privatized_to_state": False}),
        GalleryCase(
            "qubit4-bitflip", "bit flips on the first three of four qubits",
            bitflip_qubit4, {"hybrid-code": hybrid_code}, "hybrid-code", None,
            {"channel.choi_rank": 4, "channel.complement.dim_out": 4,
             "algebra.dim": 8, "algebra.correctable.kind": "correctable",
             "algebra.private_for_complement.kind": "private",
             "algebra.complementarity_agrees": True,
             "algebra.complementarity_identity.passed": True,
             "algebra.complement_rank_bound.holds": True}),
        GalleryCase(
            "m3-counterexample", "non-unital channel on M_3 breaking the product bound",
            m3_channel, {"M2+0": m3_upper, "0+M2": m3_lower}, "M2+0", "0+M2",
            {"channel.unital": False, "algebra.correctable.kind": "correctable",
             "private_algebra.privatized_to_state": True,
             "audits.dim(A)*dim(B) <= n^2.lhs": 16, "audits.dim(A)*dim(B) <= n^2.rhs": 9,
             "audits.dim(A)*dim(B) <= n^2.holds": False,
             "audits.dim(A)*dim(B) <= n^2.applicable": False}),
        GalleryCase(
            "diag-expectation-n3", "conditional expectation onto the diagonal of M_3",
            lambda: diagonal_expectation(3), {"diagonal": lambda: diagonal_algebra(3)},
            "diagonal", None,
            {"channel.complement.equals_channel": True, "channel.multiplicative_domain.dim": 3,
             "unital_extras.dim_sum": 9, "unital_extras.projection": True,
             "algebra.complement_rank_bound.holds": True}),
        GalleryCase(
            "diag-expectation-n4", "conditional expectation onto the diagonal of M_4",
            lambda: diagonal_expectation(4), {"diagonal": lambda: diagonal_algebra(4)},
            "diagonal", None,
            {"channel.complement.equals_channel": True, "channel.multiplicative_domain.dim": 4,
             "unital_extras.dim_kernel": 12, "unital_extras.dim_sum": 16,
             "unital_extras.projection": True}),
        GalleryCase(
            "saturate-N4-k2", "depolarize two of four qubits",
            lambda: partial_depolarizing(4, 2),
            {"kept": lambda: tensor_factor_algebra([4, 4], 1, "I(x)M4"),
             "lost": lambda: tensor_factor_algebra([4, 4], 0, "M4(x)I")},
            "kept", "lost",
            {"algebra.correctable.kind": "correctable",
             "private_algebra.privatized_to_state": True,
             "audits.dim(A)*dim(B) <= n^2.lhs": 256, "audits.dim(A)*dim(B) <= n^2.rhs": 256,
             "audits.dim(A)*dim(B) <= n^2.saturated": True}),
        GalleryCase(
            "unitary-conjugation-n3", "conjugation by a fixed random unitary",
            lambda: unitary_conjugation(3), {"full": lambda: full_algebra(3)}, "full", None,
            {"channel.multiplicative_domain.dim": 9, "algebra.correctable.kind": "correctable",
             "algebra.complementarity_identity.maximal": True}),
        GalleryCase(
            "tensor-quasiorthogonal", "conditional expectation onto M_2 (x) I in M_4",
            tensor_expectation,
            {"left": lambda: tensor_factor_algebra([2, 2], 0, "M2(x)I"),
             "right": lambda: tensor_factor_algebra([2, 2], 1, "I(x)M2")},
            "left", "right",
            {"algebra.correctable.kind": "correctable",
             "private_algebra.privatized_to_state": True,
             "audits.dim(A)*dim(B) <= n^2.saturated": True}),
    ]


CASES = {c.id: c for c in _cases()}


def get_case(case_id: str) -> GalleryCase:
    if case_id not in CASES:
        raise InvalidInput(f"unknown gallery case {case_id!r}; choose from {sorted(CASES)}")
    return CASES[case_id]


def lookup(report: dict, path: str):
    """Follow a dotted path; list entries are matched by their ``name``."""
    node = report
    parts = path.split(".")
    i = 0
    while i < len(parts):
        if isinstance(node, list):
            # audit names contain dots, so match the longest prefix naming an entry
            for j in range(len(parts), i, -1):
                name = ".".join(parts[i:j])
                hit = [e for e in node if e.get("name") == name]
                if hit:
                    node, i = hit[0], j
                    break
            else:
                raise KeyError(path)
            continue
        node = node[parts[i]]
        i += 1
    return node


def check_case(case: GalleryCase, tol: TolerancePolicy = DEFAULT_TOL) -> list[str]:
    """Mismatches between a case's expectations and a fresh report."""
    report = case.report(tol)
    problems = []
    for path, want in case.expected.items():
        try:
            got = lookup(report, path)
        except (KeyError, TypeError):
            problems.append(f"{case.id}: {path} missing from report")
            continue
        if got != want:
            problems.append(f"{case.id}: {path} = {got!r}, expected {want!r}")
    return problems
