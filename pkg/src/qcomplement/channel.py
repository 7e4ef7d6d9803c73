"""Completely positive maps and quantum channels in Kraus form.

Kraus operators are stored as an array of shape ``(k, m, n)`` for a map
from ``n x n`` to ``m x m`` matrices.  Superoperators use the column
stacking convention of :mod:`qcomplement.opspace`; Choi matrices are
``sum_{kl} E_kl (x) Phi(E_kl)`` with the input factor first.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .opspace import (DEFAULT_TOL, InvalidInput, OperatorSubspace, TolerancePolicy,
                      canonical_basis, cluster_eigenvalues, frob, hermitian_part, nullspace,
                      unvec, vec)


def _as_kraus(kraus) -> np.ndarray:
    arr = np.asarray(kraus, dtype=complex)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[0] == 0 or 0 in arr.shape[1:]:
        raise InvalidInput(f"Kraus operators must form a non-empty (k, m, n) array, "
                           f"got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("Kraus operators have non-finite entries")
    return arr


def kraus_superoperator(kraus: np.ndarray) -> np.ndarray:
    """``sum_i conj(V_i) (x) V_i`` as an ``(m**2, n**2)`` matrix."""
    k, m, n = kraus.shape
    return np.einsum("iab,icd->acbd", kraus.conj(), kraus).reshape(m * m, n * n)


def kraus_choi(kraus: np.ndarray) -> np.ndarray:
    W = np.stack([vec(V) for V in kraus], axis=1)
    return W @ W.conj().T


def choi_from_superoperator(S, dim_in: int, dim_out: int) -> np.ndarray:
    n, m = dim_in, dim_out
    S4 = np.asarray(S).reshape(m, m, n, n)  # [s, r, l, k]
    return np.transpose(S4, (3, 1, 2, 0)).reshape(n * m, n * m)


class CPMap:
    """Completely positive map ``X -> sum_i V_i X V_i^*``.

    The superoperator and Choi matrix are computed once at construction.
    """

    def __init__(self, kraus, label: str = ""):
        arr = _as_kraus(kraus).copy()
        arr.flags.writeable = False
        self.kraus = arr
        self.dim_out, self.dim_in = arr.shape[1:]
        self.label = label
        self._superop = kraus_superoperator(arr)
        self._superop.flags.writeable = False
        self._choi = kraus_choi(arr)
        self._choi.flags.writeable = False

    @property
    def n_kraus(self) -> int:
        return self.kraus.shape[0]

    @property
    def superoperator(self) -> np.ndarray:
        return self._superop

    @property
    def choi_matrix(self) -> np.ndarray:
        return self._choi

    def __call__(self, X) -> np.ndarray:
        return apply(self, X)

    def kraus_products(self) -> np.ndarray:
        """Array ``P[i, j] = V_i^* V_j`` of shape ``(k, k, n, n)``."""
        return np.einsum("iba,jbc->ijac", self.kraus.conj(), self.kraus)

    def kraus_gram(self) -> np.ndarray:
        """``G[i, j] = tr(V_j^* V_i)``."""
        flat = self.kraus.reshape(self.n_kraus, -1)
        return flat @ flat.conj().T

    def trace_preservation_error(self) -> float:
        return frob(np.einsum("iba,ibc->ac", self.kraus.conj(), self.kraus) - np.eye(self.dim_in))

    def unitality_error(self) -> float:
        if self.dim_in != self.dim_out:
            return np.inf
        return frob(np.einsum("iab,icb->ac", self.kraus, self.kraus.conj()) - np.eye(self.dim_out))

    def is_unital(self, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        return self.unitality_error() <= tol.equality_abs * np.sqrt(self.dim_in)

    def compose(self, first: "CPMap") -> "CPMap":
        """The map ``self o first``."""
        if first.dim_out != self.dim_in:
            raise InvalidInput("dimension mismatch in composition")
        kraus = np.einsum("iab,jbc->ijac", self.kraus, first.kraus).reshape(
            -1, self.dim_out, first.dim_in)
        cls = QuantumChannel if isinstance(self, QuantumChannel) and \
            isinstance(first, QuantumChannel) else CPMap
        return cls(kraus, label=f"{self.label}*{first.label}")

    def __repr__(self):
        return (f"{type(self).__name__}(label={self.label!r}, dim_in={self.dim_in}, "
                f"dim_out={self.dim_out}, n_kraus={self.n_kraus})")


class QuantumChannel(CPMap):
    """Completely positive trace-preserving map in Kraus form."""

    def __init__(self, kraus, label: str = "", tol: TolerancePolicy = DEFAULT_TOL):
        super().__init__(kraus, label)
        err = self.trace_preservation_error()
        if err > tol.equality_abs * np.sqrt(self.dim_in):
            raise InvalidInput(f"Kraus operators are not trace preserving "
                               f"(|sum V^*V - I| = {err:.3e})")

    def is_unital(self, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        return self.dim_in == self.dim_out and super().is_unital(tol)


@dataclass(frozen=True)
class ChoiMatrix:
    matrix: np.ndarray
    dim_in: int
    dim_out: int

    def rank(self, tol: TolerancePolicy = DEFAULT_TOL) -> int:
        return len(_choi_spectrum(self.matrix, tol)[0])

    def partial_trace_output(self) -> np.ndarray:
        n, m = self.dim_in, self.dim_out
        return np.einsum("krlr->kl", self.matrix.reshape(n, m, n, m))


def apply(channel: CPMap, X) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.shape != (channel.dim_in, channel.dim_in):
        raise InvalidInput(f"expected a {channel.dim_in}x{channel.dim_in} input, got {X.shape}")
    V = channel.kraus
    return np.einsum("iab,bc,idc->ad", V, X, V.conj())


def dual(channel: CPMap) -> CPMap:
    """Adjoint map ``Y -> sum_i V_i^* Y V_i`` for the trace inner product."""
    return CPMap(np.conj(np.transpose(channel.kraus, (0, 2, 1))),
                 label=f"{channel.label}^dag")


def choi(channel: CPMap) -> ChoiMatrix:
    return ChoiMatrix(channel.choi_matrix, channel.dim_in, channel.dim_out)


def superoperator_matrix(channel: CPMap) -> np.ndarray:
    return channel.superoperator


def _choi_spectrum(J, tol: TolerancePolicy):
    w, U = np.linalg.eigh(hermitian_part(J))
    lam_max = w[-1] if w.size else 0.0
    keep = w > tol.rank_rel * lam_max if lam_max > 0 else np.zeros_like(w, dtype=bool)
    return w[keep], U[:, keep]


def kraus_from_choi(J, dim_in: int, dim_out: int,
                    tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Minimal, mutually orthogonal Kraus operators of a CP map's Choi matrix.

    Eigenvalue clusters are taken in descending order.  Inside a degenerate
    cluster the eigenvectors are replaced by the span-canonical basis of
    :func:`canonical_basis`, which makes the result independent of the
    eigensolver's choice of basis.
    """
    w, U = _choi_spectrum(J, tol)
    if w.size == 0:
        raise InvalidInput("the map is zero; it has no Kraus representation")
    Jh = hermitian_part(J)
    columns = []
    for idx in reversed(cluster_eigenvalues(w, tol.eig_cluster)):
        G = canonical_basis(U[:, idx])
        M = hermitian_part(G.conj().T @ Jh @ G)
        mw, mv = np.linalg.eigh(M)
        columns.append(G @ ((mv * np.sqrt(np.clip(mw, 0, None))) @ mv.conj().T))
    K = np.concatenate(columns, axis=1)
    return np.stack([unvec(K[:, i], dim_out, dim_in) for i in range(K.shape[1])])


def canonical_kraus(channel: QuantumChannel, tol: TolerancePolicy = DEFAULT_TOL) -> QuantumChannel:
    """Equivalent channel with exactly Choi-rank many orthogonal Kraus operators."""
    kraus = kraus_from_choi(channel.choi_matrix, channel.dim_in, channel.dim_out, tol)
    return QuantumChannel(kraus, label=channel.label, tol=tol)


def channel_from_superoperator(S, dim_in: int, dim_out: int, label: str = "",
                               tol: TolerancePolicy = DEFAULT_TOL) -> QuantumChannel:
    J = choi_from_superoperator(S, dim_in, dim_out)
    return QuantumChannel(kraus_from_choi(J, dim_in, dim_out, tol), label=label, tol=tol)


def complement(channel: QuantumChannel, tol: TolerancePolicy = DEFAULT_TOL) -> QuantumChannel:
    """Minimal complementary channel ``rho -> sum_ij tr(rho V_j^* V_i) |i><j|``.

    The channel is canonicalized first, so the environment dimension equals
    the Choi rank.  Kraus operator ``r`` of the complement collects row ``r``
    of every canonical Kraus operator of ``channel``.
    """
    canon = canonical_kraus(channel, tol)
    W = np.transpose(canon.kraus, (1, 0, 2))
    return QuantumChannel(W, label=f"{channel.label}^C", tol=tol)


def complement_entries(channel: CPMap, rho) -> np.ndarray:
    """``[tr(rho V_j^* V_i)]_ij`` computed entry by entry from the given Kraus set."""
    V = channel.kraus
    d = V.shape[0]
    out = np.empty((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            out[i, j] = np.trace(rho @ V[j].conj().T @ V[i])
    return out


def kernel(channel: CPMap, tol: TolerancePolicy = DEFAULT_TOL) -> OperatorSubspace:
    return nullspace(channel.superoperator, tol)


def superoperator_distance(a: CPMap, b: CPMap) -> float:
    if a.superoperator.shape != b.superoperator.shape:
        return np.inf
    return frob(a.superoperator - b.superoperator)
