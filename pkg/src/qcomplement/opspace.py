"""Dense operator-space linear algebra.

Operators on an ``n``-dimensional space are handled as vectors in the
``n**2``-dimensional operator space with the trace inner product
``<A, B> = tr(A^* B)``.  Vectorization is column stacking, so the
superoperator of ``X -> A X B`` is ``kron(B.T, A)``.

Every rank, kernel and pseudo-inverse decision in the package goes through
:func:`rank_cutoff`, so dimensions computed by different routes are
comparable with each other.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


class InvalidInput(ValueError):
    """Raised when an argument violates the documented preconditions."""


class StructureError(RuntimeError):
    """Raised when a computed structure fails its own consistency checks.

    This almost always signals that the tolerance policy is inappropriate
    for the conditioning of the input.
    """


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical thresholds shared by every routine.

    Attributes:
        rank_rel: singular values below ``rank_rel * s_max * max(shape)``
            count as zero.
        eig_cluster: eigenvalues closer than this are one cluster.
        equality_abs: absolute tolerance for matrix equality checks.
        seed: seed of the splitmix64 stream used for generic elements.
    """

    rank_rel: float = 1e-10
    eig_cluster: float = 1e-8
    equality_abs: float = 1e-9
    seed: int = 0x5EED

    def __post_init__(self):
        for name in ("rank_rel", "eig_cluster", "equality_abs"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidInput(f"{name} must be a positive finite number, got {value!r}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0 or self.seed >= 2**64:
            raise InvalidInput(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")

    def replace(self, **changes) -> "TolerancePolicy":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_TOL = TolerancePolicy()


def as_matrix(X, name: str = "matrix", square: bool = False) -> np.ndarray:
    """Return ``X`` as a finite complex 2-d array or raise :class:`InvalidInput`."""
    arr = np.asarray(X, dtype=complex)
    if arr.ndim != 2 or 0 in arr.shape:
        raise InvalidInput(f"{name} must be a non-empty 2-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} has non-finite entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise InvalidInput(f"{name} must be square, got shape {arr.shape}")
    return arr


def vec(X) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(X).reshape(-1, order="F")


def unvec(v, rows: int, cols: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`."""
    cols = rows if cols is None else cols
    return np.asarray(v).reshape((rows, cols), order="F")


def frob(X) -> float:
    return float(np.linalg.norm(X))


def square_root_dim(size: int) -> int:
    n = int(round(np.sqrt(size)))
    if n * n != size:
        raise InvalidInput(f"{size} is not the dimension of a square operator space")
    return n


# --- rank decisions -------------------------------------------------------

def rank_cutoff(singular_values: np.ndarray, shape: Sequence[int], tol: TolerancePolicy,
                scale: float = 0.0) -> float:
    """Threshold below which a singular value counts as zero.

    ``scale`` is a lower bound on the reference magnitude.  Maps built as
    differences (commutators, intertwiners) can cancel to rounding noise,
    and the noise must not become its own reference.
    """
    if singular_values.size == 0:
        return 0.0
    return tol.rank_rel * max(float(np.max(singular_values)), scale) * max(shape)


def _significant(s: np.ndarray, shape, tol: TolerancePolicy, scale: float = 0.0) -> int:
    cut = rank_cutoff(s, shape, tol, scale)
    return int(np.count_nonzero((s >= cut) & (s > 0)))


def numerical_rank(M, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return _significant(s, M.shape, tol)


def _stacked_r(blocks: Iterable[np.ndarray], ncols: int) -> tuple[np.ndarray, int]:
    # QR-accumulate a tall stack so memory stays O(ncols**2); the singular
    # values of R equal those of the full stack.
    R = np.zeros((0, ncols), dtype=complex)
    rows = 0
    for block in blocks:
        block = np.asarray(block, dtype=complex)
        if block.size == 0:
            continue
        if block.ndim != 2 or block.shape[1] != ncols:
            raise InvalidInput(f"block of shape {block.shape} does not have {ncols} columns")
        if not np.all(np.isfinite(block)):
            raise InvalidInput("map matrix has non-finite entries")
        rows += block.shape[0]
        R = np.vstack([R, block])
        if R.shape[0] > 4 * ncols:
            R = np.linalg.qr(R, mode="r")
    return R, rows


def joint_nullspace_vectors(blocks: Iterable[np.ndarray], ncols: int,
                            tol: TolerancePolicy = DEFAULT_TOL,
                            row_count: int | None = None, scale: float = 0.0) -> np.ndarray:
    """Orthonormal columns spanning the common kernel of vertically stacked blocks.

    ``row_count`` overrides the row count used in the rank cutoff; callers
    that solve a compressed form of a taller system pass the taller count.
    ``scale`` is passed on to :func:`rank_cutoff`.
    """
    R, rows = _stacked_r(blocks, ncols)
    if rows == 0:
        return np.eye(ncols, dtype=complex)
    if R.shape[0] > ncols:
        # only V is needed; a full U of a tall matrix is very expensive
        R = np.linalg.qr(R, mode="r")
    _, s, vh = np.linalg.svd(R, full_matrices=True)
    rank = _significant(s, (row_count or rows, ncols), tol, scale)
    return vh[rank:].conj().T


def column_span(M, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the column space of ``M``."""
    M = np.asarray(M, dtype=complex)
    if M.shape[1] == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    return u[:, :_significant(s, M.shape, tol)]


# --- operator subspaces ---------------------------------------------------

class OperatorSubspace:
    """Subspace of ``n x n`` matrices with a trace-orthonormal basis.

    Stored as an ``(n**2, d)`` array of orthonormal vectorized basis
    elements.  Instances are immutable.
    """

    def __init__(self, ambient_dim: int, vectors, tol: TolerancePolicy = DEFAULT_TOL,
                 check: bool = True):
        n = int(ambient_dim)
        if n < 1:
            raise InvalidInput("ambient_dim must be positive")
        V = np.asarray(vectors, dtype=complex).reshape(n * n, -1)
        if check:
            if V.shape[1] > n * n:
                raise InvalidInput("more basis vectors than the operator space dimension")
            gram = V.conj().T @ V
            if frob(gram - np.eye(V.shape[1])) > 1e3 * tol.equality_abs:
                raise InvalidInput("basis is not orthonormal in the trace inner product")
        V = V.copy()
        V.flags.writeable = False
        self.ambient_dim = n
        self.vectors = V

    @classmethod
    def span(cls, matrices, ambient_dim: int | None = None,
             tol: TolerancePolicy = DEFAULT_TOL) -> "OperatorSubspace":
        """Orthonormalized span of the given ``n x n`` matrices."""
        mats = [as_matrix(m, square=True) for m in matrices]
        if not mats:
            if ambient_dim is None:
                raise InvalidInput("ambient_dim is required for an empty span")
            return cls.zero(ambient_dim)
        n = mats[0].shape[0]
        if ambient_dim is not None and ambient_dim != n:
            raise InvalidInput(f"matrices are {n}x{n}, expected {ambient_dim}")
        if any(m.shape != (n, n) for m in mats):
            raise InvalidInput("all matrices must have the same shape")
        M = np.stack([vec(m) for m in mats], axis=1)
        return cls(n, column_span(M, tol), tol, check=False)

    @classmethod
    def zero(cls, n: int) -> "OperatorSubspace":
        return cls(n, np.zeros((n * n, 0), dtype=complex), check=False)

    @classmethod
    def full(cls, n: int) -> "OperatorSubspace":
        return cls(n, np.eye(n * n, dtype=complex), check=False)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.dim

    @property
    def basis(self) -> np.ndarray:
        """Basis elements as an array of shape ``(dim, n, n)``."""
        n = self.ambient_dim
        return np.stack([unvec(v, n) for v in self.vectors.T]) if self.dim else \
            np.zeros((0, n, n), dtype=complex)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.basis)

    def projector(self) -> np.ndarray:
        return self.vectors @ self.vectors.conj().T

    def coordinates(self, X) -> np.ndarray:
        return self.vectors.conj().T @ vec(X)

    def project(self, X) -> np.ndarray:
        return unvec(self.vectors @ self.coordinates(X), self.ambient_dim)

    def residual(self, X) -> float:
        """Frobenius norm of the component of ``X`` orthogonal to the subspace."""
        X = np.asarray(X, dtype=complex)
        return frob(X - self.project(X))

    def contains(self, X, atol: float) -> bool:
        return self.residual(X) <= atol

    def is_adjoint_closed(self, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        return all(self.residual(B.conj().T) <= tol.equality_abs * 10 for B in self.basis)

    def distance(self, other: "OperatorSubspace") -> float:
        """Frobenius distance between the orthogonal projectors.

        Uses ``|P1 - P2|^2 = |(I - P2) U1|^2 + |(I - P1) U2|^2``, which has no
        cancellation, unlike the overlap formula ``d1 + d2 - 2 |U1^* U2|^2``.
        """
        self._same_ambient(other)
        U, W = self.vectors, other.vectors
        r1 = np.linalg.norm(U - W @ (W.conj().T @ U))
        r2 = np.linalg.norm(W - U @ (U.conj().T @ W))
        return float(np.hypot(r1, r2))

    def containment_residual(self, other: "OperatorSubspace") -> float:
        """Largest residual of ``other``'s basis elements outside ``self``."""
        self._same_ambient(other)
        if other.dim == 0:
            return 0.0
        R = other.vectors - self.vectors @ (self.vectors.conj().T @ other.vectors)
        return float(np.max(np.linalg.norm(R, axis=0)))

    def intersection(self, other: "OperatorSubspace",
                     tol: TolerancePolicy = DEFAULT_TOL) -> "OperatorSubspace":
        self._same_ambient(other)
        if self.dim == 0 or other.dim == 0:
            return OperatorSubspace.zero(self.ambient_dim)
        U, W = self.vectors, other.vectors
        off = U - W @ (W.conj().T @ U)
        coeffs = joint_nullspace_vectors([off], U.shape[1], tol, scale=1.0)
        return OperatorSubspace(self.ambient_dim, U @ coeffs, tol, check=False)

    def _same_ambient(self, other):
        if other.ambient_dim != self.ambient_dim:
            raise InvalidInput(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def __repr__(self):
        return f"OperatorSubspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def nullspace(map_matrix, tol: TolerancePolicy = DEFAULT_TOL) -> OperatorSubspace:
    """Kernel of a linear map given by its matrix on vectorized operators.

    The map must act on ``n x n`` matrices, i.e. have ``n**2`` columns.
    """
    M = np.asarray(map_matrix, dtype=complex)
    if M.ndim != 2:
        raise InvalidInput(f"map matrix must be 2-d, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInput("map matrix has non-finite entries")
    n = square_root_dim(M.shape[1])
    return OperatorSubspace(n, joint_nullspace_vectors([M], M.shape[1], tol), tol, check=False)


def joint_nullspace(blocks: Iterable[np.ndarray], ambient_dim: int,
                    tol: TolerancePolicy = DEFAULT_TOL,
                    row_count: int | None = None, scale: float = 0.0) -> OperatorSubspace:
    """Common kernel of several maps on ``ambient_dim x ambient_dim`` matrices."""
    n = ambient_dim
    vectors = joint_nullspace_vectors(blocks, n * n, tol, row_count, scale)
    return OperatorSubspace(n, vectors, tol, check=False)


def orthogonal_complement(S: OperatorSubspace,
                          tol: TolerancePolicy = DEFAULT_TOL) -> OperatorSubspace:
    n = S.ambient_dim
    if S.dim == 0:
        return OperatorSubspace.full(n)
    return OperatorSubspace(n, joint_nullspace_vectors([S.vectors.conj().T], n * n, tol),
                            tol, check=False)


# --- spectral helpers -----------------------------------------------------

def hermitian_part(R) -> np.ndarray:
    R = np.asarray(R, dtype=complex)
    return (R + R.conj().T) / 2


def psd_sqrt_pinv(R, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Square root and pseudo-inverse square root of a PSD matrix.

    Eigenvalues below ``rank_rel * lambda_max`` are dropped from the
    pseudo-inverse.
    """
    R = as_matrix(R, "R", square=True)
    scale = 1.0 + frob(R)
    if frob(R - R.conj().T) > tol.equality_abs * scale:
        raise InvalidInput("R is not Hermitian")
    w, V = np.linalg.eigh(hermitian_part(R))
    if w[0] < -tol.equality_abs * scale:
        raise InvalidInput(f"R is not positive semidefinite: smallest eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    lam_max = w[-1] if w.size else 0.0
    keep = w > tol.rank_rel * lam_max
    root = (V * np.sqrt(w)) @ V.conj().T
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / np.sqrt(w[keep])
    pinv_root = (V * inv) @ V.conj().T
    return root, pinv_root


def support_projection(R, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Projection onto the range of a PSD matrix (relative eigenvalue cutoff)."""
    w, V = np.linalg.eigh(hermitian_part(R))
    if w.size == 0 or w[-1] <= 0:
        return np.zeros_like(V)
    cols = V[:, w > tol.rank_rel * w[-1]]
    return cols @ cols.conj().T


def cluster_eigenvalues(w: np.ndarray, width: float) -> list[np.ndarray]:
    """Group ascending eigenvalues into clusters separated by gaps above ``width``.

    Clusters come back in ascending order of their midpoints.
    """
    w = np.asarray(w)
    if w.size == 0:
        return []
    breaks = np.nonzero(np.diff(w) > width)[0] + 1
    return np.split(np.arange(w.size), breaks)


def canonical_basis(U: np.ndarray, rel: float = 1e-6) -> np.ndarray:
    """Basis-independent orthonormal basis for the column span of ``U``.

    Pivoted Gram-Schmidt on the columns of the projector ``U U^*``: at each
    step the column with the largest residual wins, ties going to the
    lowest index.  The result depends only on the span, and the pivot entry
    of every output vector is real and positive.
    """
    U = np.asarray(U, dtype=complex)
    c = U.shape[1]
    if c == 0:
        return U.copy()
    A = U.conj().T.copy()  # column j holds U^* e_j in the coordinates of U
    Q = np.zeros((c, c), dtype=complex)
    for k in range(c):
        norms = np.linalg.norm(A, axis=0)
        j = int(np.argmax(norms >= (1 - rel) * norms.max()))
        q = A[:, j] / norms[j]
        Q[:, k] = q
        A -= np.outer(q, q.conj() @ A)
    return U @ Q


# --- deterministic generic elements ---------------------------------------

_MASK64 = (1 << 64) - 1


def splitmix64(seed: int) -> Iterator[int]:
    """The splitmix64 generator as an infinite stream of 64-bit integers."""
    state = int(seed) & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def uniform_symmetric(seed: int, count: int) -> np.ndarray:
    """``count`` doubles in [-1, 1) from the top 53 bits of splitmix64 outputs."""
    stream = splitmix64(seed)
    return np.array([2.0 * ((next(stream) >> 11) * 2.0**-53) - 1.0 for _ in range(count)])


def random_hermitian_in(S: OperatorSubspace, seed: int,
                        tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Seeded generic Hermitian element of an adjoint-closed subspace.

    Returns ``sum_i a_i (B_i + B_i^*) + b_i * 1j * (B_i - B_i^*)`` where the
    coefficients are drawn in the order ``a_0, b_0, a_1, b_1, ...``.
    """
    if not S.is_adjoint_closed(tol):
        raise InvalidInput("subspace is not closed under the adjoint")
    n = S.ambient_dim
    coef = uniform_symmetric(seed, 2 * S.dim)
    H = np.zeros((n, n), dtype=complex)
    for i, B in enumerate(S.basis):
        Bh = B.conj().T
        H += coef[2 * i] * (B + Bh) + coef[2 * i + 1] * 1j * (B - Bh)
    return hermitian_part(H)
