"""Seeded random channels, unitaries and algebras for property sweeps."""
from __future__ import annotations

import numpy as np

from .algebra import MatrixAlgebra, conjugated, diagonal_algebra, tensor_factor_algebra
from .channel import QuantumChannel
from .opspace import OperatorSubspace, vec


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar unitary via QR with the phase fix."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Qm, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Qm * (d / np.abs(d))


def random_channel(rng: np.random.Generator, n: int, k: int, m: int | None = None,
                   label: str = "") -> QuantumChannel:
    """Channel with ``k`` Kraus operators cut from a random isometry."""
    m = n if m is None else m
    Z = rng.standard_normal((k * m, n)) + 1j * rng.standard_normal((k * m, n))
    W, _ = np.linalg.qr(Z)
    return QuantumChannel(W.reshape(k, m, n), label=label or f"random-n{n}-k{k}")


def random_unital_channel(rng: np.random.Generator, n: int, k: int,
                          label: str = "") -> QuantumChannel:
    """Random mixture of ``k`` unitary conjugations."""
    p = rng.dirichlet(np.ones(k))
    kraus = [np.sqrt(pi) * random_unitary(rng, n) for pi in p]
    return QuantumChannel(kraus, label=label or f"mixed-unitary-n{n}-k{k}")


def block_algebra(signature, K: int = 0, label: str = "") -> MatrixAlgebra:
    """``(+)_k I_{m_k} (x) M_{n_k}  (+)  0_K`` in its standard position."""
    n = sum(m * s for m, s in signature) + K
    mats = []
    offset = 0
    for m, s in signature:
        for a in range(s):
            for b in range(s):
                E = np.zeros((s, s))
                E[a, b] = 1
                M = np.zeros((n, n))
                M[offset:offset + m * s, offset:offset + m * s] = np.kron(np.eye(m), E) / np.sqrt(m)
                mats.append(M)
        offset += m * s
    vectors = np.stack([vec(M) for M in mats], axis=1) if mats else np.zeros((n * n, 0))
    return MatrixAlgebra(OperatorSubspace(n, vectors), label=label, check=False)


def random_unital_algebra(rng: np.random.Generator, n: int, label: str = "") -> MatrixAlgebra:
    """Unitarily rotated algebra with a random signature filling ``n``."""
    blocks = []
    left = n
    while left:
        s = int(rng.integers(1, left + 1))
        m = int(rng.integers(1, left // s + 1))
        blocks.append((m, s))
        left -= m * s
    A = block_algebra(blocks)
    return conjugated(A, random_unitary(rng, n), label=label or f"random-{blocks}")


def quasiorthogonal_pair(rng: np.random.Generator, n: int):
    """A pair of quasiorthogonal unital algebras in ``M_n``, rotated by a random unitary.

    Tensor factors when ``n`` factors nontrivially, otherwise the diagonal
    algebra and its Fourier conjugate.
    """
    U = random_unitary(rng, n)
    divisors = [d for d in range(2, n) if n % d == 0]
    if divisors:
        d = int(rng.choice(divisors))
        A = tensor_factor_algebra([d, n // d], 0)
        B = tensor_factor_algebra([d, n // d], 1)
    else:
        F = np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / np.sqrt(n)
        A = diagonal_algebra(n)
        B = conjugated(diagonal_algebra(n), F)
    return conjugated(A, U, label="qo-A"), conjugated(B, U, label="qo-B")
