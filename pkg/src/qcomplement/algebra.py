"""Finite-dimensional *-algebras of matrices.

A :class:`MatrixAlgebra` is an adjoint- and product-closed subspace of
``M_n``, possibly without the identity.  Up to a unitary it has the form
``(+)_k I_{m_k} (x) M_{n_k}  (+)  0_K``; :func:`block_signature` recovers
the integers ``(m_k, n_k)`` and ``K`` without building the unitary.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .channel import QuantumChannel, channel_from_superoperator
from .opspace import (DEFAULT_TOL, InvalidInput, OperatorSubspace, StructureError,
                      TolerancePolicy, as_matrix, cluster_eigenvalues, column_span, frob,
                      hermitian_part, joint_nullspace, random_hermitian_in, support_projection,
                      uniform_symmetric, vec)

# Exhaustive pairwise closure checks are skipped above this many flops.
_EXHAUSTIVE_BUDGET = 5e7


class MatrixAlgebra:
    """A *-subalgebra of ``M_n`` with its unit projection.

    ``unit_projection`` is the largest central projection ``P``, so that
    ``P A = A P = A`` for every element; the algebra is unital exactly when
    ``P`` is the identity.
    """

    def __init__(self, basis: OperatorSubspace, tol: TolerancePolicy = DEFAULT_TOL,
                 label: str = "", check: bool = True):
        self.basis = basis
        self.ambient_dim = basis.ambient_dim
        self.label = label
        if check:
            _check_closure(basis, tol)
        self.unit_projection = _unit_projection(basis, tol)
        self.unit_projection.flags.writeable = False
        n = self.ambient_dim
        self.is_unital = frob(self.unit_projection - np.eye(n)) <= tol.equality_abs * n

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def elements(self) -> np.ndarray:
        return self.basis.basis

    def contains(self, X, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        return self.basis.residual(X) <= tol.equality_abs * (1 + frob(X))

    def is_abelian(self, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        E = self.elements
        comm = np.einsum("iab,jbc->ijac", E, E) - np.einsum("jab,ibc->ijac", E, E)
        return bool(comm.size == 0 or np.max(np.abs(comm)) <= tol.equality_abs)

    def __repr__(self):
        return (f"MatrixAlgebra(label={self.label!r}, ambient_dim={self.ambient_dim}, "
                f"dim={self.dim}, unital={self.is_unital})")


def _generic_pairs(S: OperatorSubspace, tol: TolerancePolicy, count: int = 3):
    coef = uniform_symmetric(tol.seed, 4 * count * S.dim).reshape(count, 2, 2, S.dim)
    E = S.basis
    for c in coef:
        a = np.tensordot(c[0, 0] + 1j * c[0, 1], E, axes=1)
        b = np.tensordot(c[1, 0] + 1j * c[1, 1], E, axes=1)
        yield a, b


def _check_closure(S: OperatorSubspace, tol: TolerancePolicy):
    if S.dim == 0:
        return
    atol = 10 * tol.equality_abs
    if not S.is_adjoint_closed(tol):
        raise StructureError("subspace is not closed under the adjoint")
    d, n = S.dim, S.ambient_dim
    if d ** 3 * n ** 2 <= _EXHAUSTIVE_BUDGET:
        E = S.basis
        for i in range(d):
            prods = np.einsum("ab,jbc->jac", E[i], E)
            flat = prods.transpose(0, 2, 1).reshape(d, n * n).T  # columns are vec(E_i E_j)
            resid = flat - S.vectors @ (S.vectors.conj().T @ flat)
            if np.max(np.linalg.norm(resid, axis=0)) > atol * (1 + np.max(np.abs(flat))):
                raise StructureError("subspace is not closed under multiplication")
    else:
        # A bilinear map that is nonzero is nonzero at generic points.
        for a, b in _generic_pairs(S, tol):
            if S.residual(a @ b) > atol * (1 + frob(a) * frob(b)):
                raise StructureError("subspace is not closed under multiplication")


def _unit_projection(S: OperatorSubspace, tol: TolerancePolicy) -> np.ndarray:
    n = S.ambient_dim
    if S.dim == 0:
        return np.zeros((n, n), dtype=complex)
    E = S.basis
    total = np.einsum("iab,icb->ac", E, E.conj()) + np.einsum("iba,ibc->ac", E.conj(), E)
    P = support_projection(total, tol)
    atol = 10 * tol.equality_abs
    for B in E:
        if frob(P @ B - B) > atol * (1 + frob(B)) or frob(B @ P - B) > atol * (1 + frob(B)):
            raise StructureError("support projection does not act as a unit on the algebra")
    return P


def algebra_from_generators(gens: Sequence, include_identity: bool = False,
                            tol: TolerancePolicy = DEFAULT_TOL, label: str = "") -> MatrixAlgebra:
    """Smallest *-algebra containing ``gens`` (and the identity if requested).

    Closure is by repeated right multiplication with the generators and
    their adjoints until the dimension stops growing.
    """
    mats = [as_matrix(g, "generator", square=True) for g in gens]
    if not mats:
        raise InvalidInput("at least one generator is required")
    n = mats[0].shape[0]
    if any(g.shape != (n, n) for g in mats):
        raise InvalidInput("generators must all be n x n")
    letters = mats + [g.conj().T for g in mats]
    seed = list(letters) + ([np.eye(n)] if include_identity else [])
    S = OperatorSubspace.span(seed, n, tol)
    while True:
        words = [B @ g for B in S.basis for g in letters]
        M = np.concatenate([S.vectors, np.stack([vec(w) for w in words], axis=1)], axis=1)
        grown = OperatorSubspace(n, column_span(M, tol), tol, check=False)
        if grown.dim == S.dim:
            break
        S = grown
    return MatrixAlgebra(S, tol, label=label)


def from_subspace(S: OperatorSubspace, tol: TolerancePolicy = DEFAULT_TOL,
                  label: str = "") -> MatrixAlgebra:
    return MatrixAlgebra(S, tol, label=label)


def _commutator_scale(mats) -> float:
    return 2.0 * max((frob(G) for G in mats), default=0.0)


def _commutator_superops(mats):
    for G in mats:
        n = G.shape[0]
        eye = np.eye(n)
        yield np.kron(eye, G) - np.kron(G.T, eye)


def commutant(S, tol: TolerancePolicy = DEFAULT_TOL, label: str = "") -> MatrixAlgebra:
    """``{X : [X, G] = [X, G^*] = 0 for every G in S}``.

    ``S`` may be a :class:`MatrixAlgebra`, an :class:`OperatorSubspace` or a
    sequence of square matrices.
    """
    if isinstance(S, MatrixAlgebra):
        n, mats = S.ambient_dim, list(S.elements)
    elif isinstance(S, OperatorSubspace):
        n, mats = S.ambient_dim, list(S.basis)
        mats += [B.conj().T for B in mats]
    else:
        mats = [as_matrix(g, "element", square=True) for g in S]
        if not mats:
            raise InvalidInput("commutant of an empty set needs an explicit ambient dimension")
        n = mats[0].shape[0]
        mats += [g.conj().T for g in mats]
    closed = joint_nullspace(_commutator_superops(mats), n, tol, scale=_commutator_scale(mats))
    return MatrixAlgebra(closed, tol, label=label)


def commutant_subspace(mats: Sequence[np.ndarray], n: int,
                       tol: TolerancePolicy = DEFAULT_TOL,
                       adjoint_closed: bool = False) -> OperatorSubspace:
    """Commutant of an arbitrary set as a plain subspace (no closure checks).

    Pass ``adjoint_closed=True`` when the set already spans a
    self-adjoint space, to skip the adjoint constraints.
    """
    mats = list(mats)
    if not adjoint_closed:
        mats += [g.conj().T for g in mats]
    return joint_nullspace(_commutator_superops(mats), n, tol, scale=_commutator_scale(mats))


def center(A: MatrixAlgebra, tol: TolerancePolicy = DEFAULT_TOL) -> MatrixAlgebra:
    """``A`` intersected with its commutant."""
    Z = A.basis.intersection(commutant(A, tol).basis, tol)
    return MatrixAlgebra(Z, tol, label=f"Z({A.label})" if A.label else "")


@dataclass(frozen=True)
class BlockSignature:
    """Wedderburn data: blocks ``(m_k, n_k)`` and the annihilated dimension ``K``."""

    blocks: tuple[tuple[int, int], ...]
    K: int

    @property
    def N(self) -> int:
        return len(self.blocks)

    @property
    def ambient_dim(self) -> int:
        return sum(m * k for m, k in self.blocks) + self.K

    @property
    def algebra_dim(self) -> int:
        return sum(k * k for _, k in self.blocks)

    @property
    def commutant_dim(self) -> int:
        return sum(m * m for m, _ in self.blocks) + self.K ** 2

    def to_dict(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks], "K": self.K}


def minimal_central_projections(A: MatrixAlgebra,
                                tol: TolerancePolicy = DEFAULT_TOL) -> list[np.ndarray]:
    """Minimal central projections, ordered by ascending eigenvalue of a generic central element."""
    Z = center(A, tol)
    if Z.dim == 0:
        return []
    H = random_hermitian_in(Z.basis, tol.seed, tol)
    w, V = np.linalg.eigh(hermitian_part(A.unit_projection))
    Up = V[:, w > 0.5]
    hw, hv = np.linalg.eigh(hermitian_part(Up.conj().T @ H @ Up))
    clusters = cluster_eigenvalues(hw, tol.eig_cluster)
    if len(clusters) != Z.dim:
        raise StructureError(f"found {len(clusters)} eigenvalue clusters for a center of "
                             f"dimension {Z.dim}")
    return [Up @ hv[:, idx] @ hv[:, idx].conj().T @ Up.conj().T for idx in clusters]


def block_signature(A: MatrixAlgebra, tol: TolerancePolicy = DEFAULT_TOL) -> BlockSignature:
    n = A.ambient_dim
    blocks = []
    for P in minimal_central_projections(A, tol):
        compressed = OperatorSubspace.span([P @ B @ P for B in A.elements], n, tol)
        size = int(round(np.sqrt(compressed.dim)))
        if size * size != compressed.dim or size == 0:
            raise StructureError(f"block of dimension {compressed.dim} is not a full matrix algebra")
        rank = float(np.real(np.trace(P)))
        mult = rank / size
        if abs(mult - round(mult)) > 1e-6:
            raise StructureError(f"non-integer multiplicity {mult} for block size {size}")
        blocks.append((int(round(mult)), size))
    blocks.sort(key=lambda b: (b[1], b[0]))
    K = n - sum(m * k for m, k in blocks)
    sig = BlockSignature(tuple(blocks), K)
    if sig.algebra_dim != A.dim:
        raise StructureError(f"signature predicts dimension {sig.algebra_dim}, algebra has {A.dim}")
    return sig


def conditional_expectation(A: MatrixAlgebra, tol: TolerancePolicy = DEFAULT_TOL) -> QuantumChannel:
    """Trace-preserving conditional expectation onto a unital algebra.

    With the unnormalized trace this is the Hilbert-Schmidt orthogonal
    projection ``X -> sum_i tr(B_i^* X) B_i``.
    """
    if not A.is_unital:
        raise InvalidInput("conditional expectations are defined onto unital algebras only")
    n = A.ambient_dim
    label = f"E[{A.label}]" if A.label else "E"
    return channel_from_superoperator(A.basis.projector(), n, n, label=label, tol=tol)


class QuasiOrthogonality(NamedTuple):
    quasiorthogonal: bool
    deviation: float
    scalar_deviation: float  # how far E_A(C_j) is from the scalars, worst case

    def __bool__(self):
        return self.quasiorthogonal


def _require_unital(*algebras):
    for A in algebras:
        if not A.is_unital:
            raise InvalidInput(f"{A!r} is not unital")
    if len({A.ambient_dim for A in algebras}) != 1:
        raise InvalidInput("algebras live in different matrix sizes")


def quasiorthogonal(A: MatrixAlgebra, B: MatrixAlgebra,
                    tol: TolerancePolicy = DEFAULT_TOL) -> QuasiOrthogonality:
    """Check ``tr(XY) = tr(X) tr(Y) / n`` on basis pairs of two unital algebras."""
    _require_unital(A, B)
    n = A.ambient_dim
    EA, EB = A.elements, B.elements
    prod = np.einsum("irs,jsr->ij", EA, EB)
    traces = np.outer(np.trace(EA, axis1=1, axis2=2), np.trace(EB, axis1=1, axis2=2)) / n
    deviation = float(np.max(np.abs(prod - traces)))
    scalar_dev = 0.0
    for C in EB:
        Y = A.basis.project(C)
        scalar_dev = max(scalar_dev, frob(Y - np.trace(Y) / n * np.eye(n)))
    return QuasiOrthogonality(deviation <= tol.equality_abs, deviation, scalar_dev)


def complementarity_measure(A: MatrixAlgebra, B: MatrixAlgebra,
                            tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Superoperator trace of ``E_A o E_B``, i.e. ``sum_ij |tr(A_i^* B_j)|**2``."""
    _require_unital(A, B)
    return float(np.linalg.norm(A.basis.vectors.conj().T @ B.basis.vectors) ** 2)


# --- constructors ---------------------------------------------------------

def full_algebra(n: int, label: str = "") -> MatrixAlgebra:
    return MatrixAlgebra(OperatorSubspace.full(n), label=label or f"M{n}", check=False)


def scalar_algebra(n: int, label: str = "") -> MatrixAlgebra:
    return MatrixAlgebra(OperatorSubspace.span([np.eye(n)]), label=label or "CI", check=False)


def diagonal_algebra(n: int, label: str = "") -> MatrixAlgebra:
    mats = []
    for k in range(n):
        E = np.zeros((n, n))
        E[k, k] = 1
        mats.append(E)
    return MatrixAlgebra(OperatorSubspace.span(mats), label=label or f"D{n}", check=False)


def subspace_algebra(vectors, n: int | None = None, label: str = "",
                     tol: TolerancePolicy = DEFAULT_TOL) -> MatrixAlgebra:
    """``L(C)`` for the subspace ``C`` spanned by the given vectors, embedded in ``M_n``."""
    return direct_sum_algebra([vectors], n, label, tol)


def direct_sum_algebra(subspaces, n: int | None = None, label: str = "",
                       tol: TolerancePolicy = DEFAULT_TOL) -> MatrixAlgebra:
    """``L(C_1) (+) L(C_2) (+) ...`` for mutually orthogonal subspaces ``C_i``."""
    mats = []
    for vectors in subspaces:
        V = np.atleast_2d(np.asarray(vectors, dtype=complex))  # one vector per row
        if n is not None and V.shape[1] != n:
            raise InvalidInput(f"vectors have length {V.shape[1]}, expected {n}")
        Q = column_span(V.T, tol)
        mats += [np.outer(Q[:, a], Q[:, b].conj()) for a in range(Q.shape[1])
                 for b in range(Q.shape[1])]
    S = OperatorSubspace.span(mats, tol=tol)
    return MatrixAlgebra(S, tol, label=label)


def tensor_factor_algebra(dims: Sequence[int], factor: int, label: str = "") -> MatrixAlgebra:
    """``I (x) ... (x) M_{dims[factor]} (x) ... (x) I``."""
    mats = []
    d = dims[factor]
    for a in range(d):
        for b in range(d):
            E = np.zeros((d, d))
            E[a, b] = 1
            op = np.eye(1)
            for i, di in enumerate(dims):
                op = np.kron(op, E if i == factor else np.eye(di))
            mats.append(op / np.sqrt(np.prod(dims) / d))
    n = int(np.prod(dims))
    return MatrixAlgebra(OperatorSubspace(n, np.stack([vec(m) for m in mats], axis=1)),
                         label=label, check=False)


def compress_to_unit(A: MatrixAlgebra, tol: TolerancePolicy = DEFAULT_TOL) -> MatrixAlgebra:
    """``A`` as a unital algebra on the range of its unit projection.

    Returns ``{W^* B W}`` in ``M_r``, where the columns of ``W`` are an
    orthonormal basis of ``range(P_A)`` and ``r`` is its rank.
    """
    w, V = np.linalg.eigh(hermitian_part(A.unit_projection))
    W = V[:, w > 0.5]
    r = W.shape[1]
    if r == 0:
        raise InvalidInput("the zero algebra has no unit")
    mats = [W.conj().T @ B @ W for B in A.elements]
    vectors = np.stack([vec(m) for m in mats], axis=1)
    return MatrixAlgebra(OperatorSubspace(r, vectors, tol), tol, label=A.label)


def conjugated(A: MatrixAlgebra, U, label: str = "",
               tol: TolerancePolicy = DEFAULT_TOL) -> MatrixAlgebra:
    """``U A U^*`` for a unitary ``U``."""
    U = as_matrix(U, "U", square=True)
    mats = [U @ B @ U.conj().T for B in A.elements]
    if not mats:
        return A
    return MatrixAlgebra(OperatorSubspace(A.ambient_dim, np.stack([vec(m) for m in mats], 1),
                                          tol), tol, label=label)
