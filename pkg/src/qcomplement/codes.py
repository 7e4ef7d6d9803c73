"""Correctable and private algebras, multiplicative domains and the map pi.

All tests accept a projection ``Q``; ``None`` means the identity.  Kraus
operators are canonicalized (made trace-orthogonal) wherever a derivation
needs them to be linearly independent.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import MatrixAlgebra, center, commutant_subspace
from .channel import (CPMap, QuantumChannel, apply, complement, dual, kernel, kraus_choi,
                      kraus_from_choi)
from .opspace import (DEFAULT_TOL, InvalidInput, OperatorSubspace, StructureError,
                      TolerancePolicy, as_matrix, frob, joint_nullspace, joint_nullspace_vectors,
                      nullspace, orthogonal_complement, psd_sqrt_pinv, uniform_symmetric)
from .serialize import encode_report_matrix, round_float

# Structural identities (round trips, route agreement) are held to this.
IDENTITY_ATOL = 1e-8
_EXHAUSTIVE_BUDGET = 5e7


@dataclass
class CodeVerdict:
    kind: str  # "correctable", "private" or "neither"
    deviation: float
    witness: np.ndarray | None = None
    details: str = ""

    def __bool__(self):
        return self.kind != "neither"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "deviation": round_float(self.deviation),
                "witness": None if self.witness is None else encode_report_matrix(self.witness),
                "details": self.details}


def _projection(Q, n: int, tol: TolerancePolicy) -> np.ndarray:
    if Q is None:
        return np.eye(n, dtype=complex)
    Q = as_matrix(Q, "Q", square=True)
    if Q.shape != (n, n):
        raise InvalidInput(f"Q must be {n}x{n}, got {Q.shape}")
    atol = 10 * tol.equality_abs * (1 + frob(Q))
    if frob(Q @ Q - Q) > atol or frob(Q - Q.conj().T) > atol:
        raise InvalidInput("Q is not an orthogonal projection")
    return Q


def _check_inputs(channel: CPMap, A: MatrixAlgebra, Q, tol: TolerancePolicy) -> np.ndarray:
    n = channel.dim_in
    if A.ambient_dim != n:
        raise InvalidInput(f"algebra lives in M_{A.ambient_dim}, channel input is M_{n}")
    Q = _projection(Q, n, tol)
    for B in A.elements:
        if frob(Q @ B @ Q - B) > 10 * tol.equality_abs * (1 + frob(B)):
            raise InvalidInput("algebra is not supported on the range of Q")
    return Q


def _orthogonal_kraus(kraus: np.ndarray, tol: TolerancePolicy) -> np.ndarray:
    _, m, n = kraus.shape
    return kraus_from_choi(kraus_choi(kraus), n, m, tol)


def test_correctable(channel: QuantumChannel, A: MatrixAlgebra, Q=None,
                     tol: TolerancePolicy = DEFAULT_TOL) -> CodeVerdict:
    """Correctable iff every ``Q V_j^* V_i Q`` commutes with ``A``."""
    Q = _check_inputs(channel, A, Q, tol)
    k, n = channel.n_kraus, channel.dim_in
    P = channel.kraus_products().reshape(k * k, n, n)
    scale = 1 + np.linalg.norm(P, axis=(1, 2))
    QPQ = Q @ P @ Q
    E = A.elements
    worst, witness = 0.0, None
    for X in E:
        C = QPQ @ X - X @ QPQ
        dev = np.linalg.norm(C, axis=(1, 2)) / scale
        j = int(np.argmax(dev)) if dev.size else 0
        if dev.size and dev[j] > worst:
            worst, witness = float(dev[j]), C[j]
    ok = worst <= tol.equality_abs
    kind = "correctable" if ok else "neither"
    details = (f"max |[Q V_j^* V_i Q, X]| / (1 + |V_j^* V_i|) over {k * k} products "
               f"and {A.dim} basis elements")
    return CodeVerdict(kind, worst, None if ok else witness, details)


def _dual_images(channel: CPMap, Q: np.ndarray) -> np.ndarray:
    # Q Phi^dag(E_kl) Q for every matrix unit of the output space.
    V = channel.kraus
    m, n = channel.dim_out, channel.dim_in
    imgs = np.einsum("ika,ilb->klab", V.conj(), V).reshape(m * m, n, n)
    return Q @ imgs @ Q


def test_private(channel: QuantumChannel, A: MatrixAlgebra, Q=None,
                 tol: TolerancePolicy = DEFAULT_TOL) -> CodeVerdict:
    """Private iff ``Q Phi^dag(E_kl) Q`` lies in the commutant of ``A`` for every ``E_kl``."""
    Q = _check_inputs(channel, A, Q, tol)
    n = channel.dim_in
    comm = commutant_subspace(list(A.elements), n, tol, adjoint_closed=True)
    imgs = _dual_images(channel, Q)
    flat = imgs.transpose(0, 2, 1).reshape(len(imgs), n * n).T
    resid = flat - comm.vectors @ (comm.vectors.conj().T @ flat)
    dev = np.linalg.norm(resid, axis=0) / (1 + np.linalg.norm(flat, axis=0))
    j = int(np.argmax(dev))
    worst = float(dev[j])
    ok = worst <= tol.equality_abs
    witness = None if ok else resid[:, j].reshape(n, n, order="F")
    details = (f"residual of Q Phi^dag(E_kl) Q outside A' (dim {comm.dim}) "
               f"over {len(imgs)} matrix units")
    return CodeVerdict("private" if ok else "neither", worst, witness, details)


def privacy_kernel_test(channel: QuantumChannel, A: MatrixAlgebra, Q=None,
                        tol: TolerancePolicy = DEFAULT_TOL) -> CodeVerdict:
    """Private iff ``A`` commutes with ``(ker(Phi o P_Q))^perp``."""
    Q = _check_inputs(channel, A, Q, tol)
    K = nullspace(channel.superoperator @ np.kron(Q.T, Q), tol)
    perp = orthogonal_complement(K, tol)
    worst, witness = 0.0, None
    Y = perp.basis
    for X in A.elements:
        C = X @ Y - Y @ X
        dev = np.linalg.norm(C, axis=(1, 2)) / (1 + frob(X))
        if dev.size and dev.max() > worst:
            j = int(np.argmax(dev))
            worst, witness = float(dev[j]), C[j]
    ok = worst <= tol.equality_abs
    details = f"ker(Phi o P_Q) has dim {K.dim}; commutators against its complement (dim {perp.dim})"
    return CodeVerdict("private" if ok else "neither", worst, None if ok else witness, details)


def kraus_product_span(channel: CPMap, Q=None, tol: TolerancePolicy = DEFAULT_TOL
                       ) -> OperatorSubspace:
    """``span{Q V_j^* V_i Q}``."""
    n = channel.dim_in
    Q = _projection(Q, n, tol)
    P = channel.kraus_products().reshape(-1, n, n)
    return OperatorSubspace.span(list(Q @ P @ Q), n, tol)


def privacy_lemma_distance(channel: QuantumChannel, Q=None,
                           tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Projector distance between ``span{Q V_j^* V_i Q}`` and ``(ker(Phi^C o P_Q))^perp``."""
    n = channel.dim_in
    Q = _projection(Q, n, tol)
    comp = complement(channel, tol)
    K = nullspace(comp.superoperator @ np.kron(Q.T, Q), tol)
    return orthogonal_complement(K, tol).distance(kraus_product_span(channel, Q, tol))


# The names read naturally but must not be collected as tests.
test_correctable.__test__ = False
test_private.__test__ = False


# --- multiplicative domains -----------------------------------------------

def _intertwiner_blocks(kraus: np.ndarray, src: np.ndarray, tgt: np.ndarray):
    """Rows of ``V_i A = T(A) V_i`` and ``A V_i^* = V_i^* T(A)``, weighted by ``|V_i|``.

    ``src`` and ``tgt`` map the unknown coordinates to ``vec A`` and ``vec T(A)``.
    """
    _, m, n = kraus.shape
    In, Im = np.eye(n), np.eye(m)
    for V in kraus:
        w = frob(V)
        yield w * (np.kron(In, V) @ src - np.kron(V.T, Im) @ tgt)
        yield w * (np.kron(V.conj(), In) @ src - np.kron(Im, V.conj().T) @ tgt)


def _intertwiner_scale(kraus: np.ndarray, tgt: np.ndarray) -> float:
    return float(np.sum(np.abs(kraus) ** 2)) * (1.0 + np.linalg.norm(tgt, 2))


def _nullspace_route(channel: QuantumChannel, tol: TolerancePolicy) -> OperatorSubspace:
    # With trace-orthogonal Kraus operators, Phi(AX) = Phi(A)Phi(X) for all X
    # holds iff V_i A = Phi(A) V_i for every i; same on the other side.  The
    # weighted rows have the Gram matrix of the literal system, whose row
    # count sets the rank cutoff.
    kraus = _orthogonal_kraus(channel.kraus, tol)
    n, m = channel.dim_in, channel.dim_out
    S = channel.superoperator
    blocks = _intertwiner_blocks(kraus, np.eye(n * n), S)
    return joint_nullspace(blocks, n, tol, row_count=2 * n * n * m * m,
                           scale=_intertwiner_scale(kraus, S))


def literal_mult_domain(channel: QuantumChannel,
                        tol: TolerancePolicy = DEFAULT_TOL) -> OperatorSubspace:
    """``{A : Phi(A X_k) = Phi(A) Phi(X_k), Phi(X_k A) = Phi(X_k) Phi(A)}`` over all matrix units.

    Quadratic in memory; meant as a reference for small ``n``.
    """
    n, m = channel.dim_in, channel.dim_out
    S = channel.superoperator
    Im = np.eye(m)
    blocks = []
    for k in range(n * n):
        X = np.zeros(n * n)
        X[k] = 1
        X = X.reshape(n, n, order="F")
        PX = apply(channel, X)
        # Phi(A X) = S kron(X^T, I) vec A ; Phi(A) Phi(X) = kron(PX^T, I) S vec A
        blocks.append(S @ np.kron(X.T, np.eye(n)) - np.kron(PX.T, Im) @ S)
        blocks.append(S @ np.kron(np.eye(n), X) - np.kron(Im, PX) @ S)
    return joint_nullspace(blocks, n, tol, scale=2 * np.linalg.norm(S, 2) ** 2)


def fixed_point_route(channel: QuantumChannel,
                      tol: TolerancePolicy = DEFAULT_TOL) -> OperatorSubspace:
    """Fixed points of ``Phi^dag o Phi``."""
    S = channel.superoperator
    n = channel.dim_in
    return joint_nullspace([S.conj().T @ S - np.eye(n * n)], n, tol, scale=1.0)


def kraus_commutant_route(channel: QuantumChannel,
                          tol: TolerancePolicy = DEFAULT_TOL) -> OperatorSubspace:
    """``{V_i^* V_j}'``."""
    span = kraus_product_span(channel, None, tol)
    return commutant_subspace(list(span.basis), channel.dim_in, tol, adjoint_closed=True)


def multiplicative_domain_routes(channel: QuantumChannel,
                                 tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    routes = {"nullspace": _nullspace_route(channel, tol)}
    if channel.is_unital(tol):
        routes["kraus_commutant"] = kraus_commutant_route(channel, tol)
        routes["fixed_points"] = fixed_point_route(channel, tol)
    return routes


def multiplicative_domain(channel: QuantumChannel, tol: TolerancePolicy = DEFAULT_TOL,
                          label: str = "", routes: dict | None = None) -> MatrixAlgebra:
    """Largest *-subalgebra on which ``channel`` is multiplicative.

    For unital channels the result is cross-checked against the two other
    characterizations; disagreement raises :class:`StructureError`.
    Precomputed ``routes`` from :func:`multiplicative_domain_routes` may be
    passed in.
    """
    routes = multiplicative_domain_routes(channel, tol) if routes is None else routes
    S = routes["nullspace"]
    for name, other in routes.items():
        d = S.distance(other)
        if d > IDENTITY_ATOL:
            raise StructureError(f"multiplicative domain routes disagree: nullspace (dim {S.dim}) "
                                 f"vs {name} (dim {other.dim}), projector distance {d:.3e}")
    return MatrixAlgebra(S, tol, label=label or f"M({channel.label})")


class Representation:
    """Linear map on a matrix algebra, fixed by its images of the basis elements.

    Construction verifies multiplicativity and *-preservation on basis
    pairs (or on seeded generic pairs for large algebras).
    """

    def __init__(self, domain: MatrixAlgebra, images, tol: TolerancePolicy = DEFAULT_TOL,
                 check: bool = True):
        imgs = np.asarray(images, dtype=complex)
        if imgs.ndim != 3 or imgs.shape[0] != domain.dim or imgs.shape[1] != imgs.shape[2]:
            raise InvalidInput(f"expected {domain.dim} square images, got shape {imgs.shape}")
        imgs = imgs.copy()
        imgs.flags.writeable = False
        self.domain = domain
        self.images = imgs
        self.dim_out = imgs.shape[1]
        if check:
            self.multiplicativity_error, self.adjoint_error = self._defects(tol)
            scale = 1 + float(np.max(np.linalg.norm(imgs, axis=(1, 2)), initial=0.0)) ** 2
            if self.multiplicativity_error > IDENTITY_ATOL * scale:
                raise InvalidInput(f"map is not multiplicative (error "
                                   f"{self.multiplicativity_error:.3e})")
            if self.adjoint_error > IDENTITY_ATOL * scale:
                raise InvalidInput(f"map does not preserve adjoints (error {self.adjoint_error:.3e})")

    def __call__(self, A) -> np.ndarray:
        c = self.domain.basis.coordinates(A)
        return np.tensordot(c, self.images, axes=1)

    def _defects(self, tol: TolerancePolicy) -> tuple[float, float]:
        E, d, n = self.domain.elements, self.domain.dim, self.domain.ambient_dim
        if d == 0:
            return 0.0, 0.0
        adj = max(frob(self(B.conj().T) - P.conj().T) for B, P in zip(E, self.images))
        if d * d * (n ** 3 + d * n * n) <= _EXHAUSTIVE_BUDGET:
            pairs = ((E[i], E[j], self.images[i], self.images[j])
                     for i in range(d) for j in range(d))
        else:
            coef = uniform_symmetric(tol.seed, 8 * d).reshape(2, 4, d)
            pairs = []
            for c in coef:
                a, b = c[0] + 1j * c[1], c[2] + 1j * c[3]
                pairs.append((np.tensordot(a, E, 1), np.tensordot(b, E, 1),
                              np.tensordot(a, self.images, 1), np.tensordot(b, self.images, 1)))
        mult = max(frob(self(X @ Y) - PX @ PY) for X, Y, PX, PY in pairs)
        return float(mult), float(adj)

    def __repr__(self):
        return f"Representation(domain={self.domain!r}, dim_out={self.dim_out})"


def representation_from_kraus(domain: MatrixAlgebra, kraus,
                              tol: TolerancePolicy = DEFAULT_TOL) -> Representation:
    """``pi(A) = sum_i W_i A W_i^*`` restricted to ``domain``."""
    W = np.asarray(kraus, dtype=complex)
    imgs = np.einsum("iab,kbc,idc->kad", W, domain.elements, W.conj())
    return Representation(domain, imgs, tol)


def generalized_mult_domain(channel: QuantumChannel, pi: Representation, Q=None,
                            tol: TolerancePolicy = DEFAULT_TOL) -> OperatorSubspace:
    """``{A in dom(pi) : Phi(AX) = pi(A)Phi(X), Phi(XA) = Phi(X)pi(A)}``.

    ``X`` ranges over ``Q L(H) Q``.
    """
    A = pi.domain
    n, m = channel.dim_in, channel.dim_out
    if A.ambient_dim != n or pi.dim_out != m:
        raise InvalidInput("representation does not match the channel dimensions")
    Q = _projection(Q, n, tol)
    if A.dim == 0:
        return OperatorSubspace.zero(n)
    kraus = _orthogonal_kraus(channel.kraus @ Q, tol)
    src = A.basis.vectors
    tgt = pi.images.transpose(0, 2, 1).reshape(A.dim, m * m).T
    coeffs = joint_nullspace_vectors(_intertwiner_blocks(kraus, src, tgt), A.dim, tol,
                                     row_count=2 * n * n * m * m,
                                     scale=_intertwiner_scale(kraus, tgt))
    return OperatorSubspace(n, src @ coeffs, tol, check=False)


def construct_pi(channel: QuantumChannel, A: MatrixAlgebra, Q=None,
                 tol: TolerancePolicy = DEFAULT_TOL) -> Representation:
    """``pi(B) = R^{+1/2} Phi(B) R^{+1/2}`` with ``R = Phi(Q)``.

    ``A`` must be correctable with respect to ``Q``.  The round trip
    ``Q Phi^dag(pi(B)) Q = B`` is verified on the basis.
    """
    verdict = test_correctable(channel, A, Q, tol)
    if not verdict:
        raise InvalidInput(f"algebra is not correctable (deviation {verdict.deviation:.3e})")
    Q = _projection(Q, channel.dim_in, tol)
    _, S = psd_sqrt_pinv(apply(channel, Q), tol)
    imgs = np.stack([S @ apply(channel, B) @ S for B in A.elements]) if A.dim else \
        np.zeros((0, channel.dim_out, channel.dim_out), dtype=complex)
    try:
        pi = Representation(A, imgs, tol)
    except InvalidInput as exc:
        raise StructureError(f"constructed map is not a representation: {exc}") from None
    err = round_trip_error(channel, pi, Q)
    if err > IDENTITY_ATOL:
        raise StructureError(f"round trip Q Phi^dag(pi(B)) Q = B fails by {err:.3e}")
    return pi


def round_trip_error(channel: QuantumChannel, pi: Representation, Q=None) -> float:
    n = channel.dim_in
    Q = np.eye(n) if Q is None else np.asarray(Q)
    adj = dual(channel)
    errs = [frob(Q @ apply(adj, P) @ Q - B) for B, P in zip(pi.domain.elements, pi.images)]
    return float(max(errs, default=0.0))


def complementarity_identity_check(channel: QuantumChannel, A: MatrixAlgebra, Q=None,
                                   tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Compare ``M_pi(Phi)`` with ``((ker Phi^C o P_Q)^perp)'`` compressed to ``Q``.

    ``M_pi`` is searched inside ``A``, so it can only reach the commutant
    side when ``A`` is the largest algebra correctable with respect to ``Q``.
    The report therefore separates ``A = M_pi`` and ``A`` being contained in
    the commutant (both required) from full equality (``maximal``).
    """
    n = channel.dim_in
    Q = _check_inputs(channel, A, Q, tol)
    pi = construct_pi(channel, A, Q, tol)
    m_pi = generalized_mult_domain(channel, pi, Q, tol)
    comp = complement(channel, tol)
    K = nullspace(comp.superoperator @ np.kron(Q.T, Q), tol)
    perp = orthogonal_complement(K, tol)
    rhs = commutant_subspace(list(perp.basis), n, tol, adjoint_closed=True)
    corner = OperatorSubspace.span([Q @ B @ Q for B in rhs.basis], n, tol) if rhs.dim else rhs
    rhs_q = rhs.intersection(corner, tol)
    lemma = perp.distance(kraus_product_span(channel, Q, tol))
    mpi_vs_a = m_pi.distance(A.basis)
    contained = rhs_q.containment_residual(A.basis)
    equality = m_pi.distance(rhs_q)
    return {
        "lemma_distance": lemma,
        "mpi_dim": m_pi.dim,
        "algebra_dim": A.dim,
        "commutant_side_dim": rhs_q.dim,
        "mpi_vs_algebra_distance": mpi_vs_a,
        "containment_residual": contained,
        "equality_distance": equality,
        "maximal": equality <= IDENTITY_ATOL,
        "passed": bool(lemma <= IDENTITY_ATOL and mpi_vs_a <= IDENTITY_ATOL
                       and contained <= IDENTITY_ATOL),
    }


def _scalar_distance(X: np.ndarray) -> float:
    k = X.shape[0]
    return frob(X - np.trace(X) / k * np.eye(k))


def unital_extras(channel: QuantumChannel, tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Dimension count, bimodule property and commutation facts for unital channels."""
    if not channel.is_unital(tol):
        raise InvalidInput("channel is not unital")
    n = channel.dim_in
    M = multiplicative_domain(channel, tol)
    ker = kernel(channel, tol)
    S = channel.superoperator
    ev = np.linalg.eigvalsh(S.conj().T @ S)
    projection = bool(np.all(np.minimum(np.abs(ev), np.abs(ev - 1)) <= tol.eig_cluster))
    comp = complement(channel, tol)
    Sc = comp.superoperator
    I = np.eye(n)
    bimodule = 0.0
    for A in M.elements:
        D = Sc @ (np.kron(I, A) - np.kron(A.T, I))
        bimodule = max(bimodule, float(np.max(np.linalg.norm(D, axis=0))))
    report = {
        "dim_mult_domain": M.dim,
        "dim_kernel": ker.dim,
        "n_squared": n * n,
        "dim_sum": M.dim + ker.dim,
        "inequality_holds": M.dim + ker.dim <= n * n,
        "saturated": M.dim + ker.dim == n * n,
        "projection": projection,
        "bimodule_deviation": bimodule,
    }
    Z = center(M, tol) if M.dim else None
    report["factor"] = bool(Z is not None and Z.dim == 1)
    if report["factor"]:
        traceless = [A - np.trace(A) / n * I for A in M.elements]
        report["factor_traceless_deviation"] = max(frob(apply(comp, T)) for T in traceless)
        report["unit_image_scalar_distance"] = _scalar_distance(apply(comp, I))
    MC = multiplicative_domain(comp, tol)
    left = [apply(comp, A) for A in M.elements]
    right = [apply(comp, X) for X in MC.elements]
    report["dim_mult_domain_complement"] = MC.dim
    report["commutation_deviation"] = max(
        (frob(a @ b - b @ a) for a in left for b in right), default=0.0)
    return report
