"""Correctable/private trade-offs: privatization to a state and dimension bounds."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (MatrixAlgebra, center, commutant, commutant_subspace,
                      complementarity_measure, conditional_expectation, quasiorthogonal)
from .channel import QuantumChannel, apply, complement, kernel
from .codes import (IDENTITY_ATOL, kraus_commutant_route, multiplicative_domain,
                    test_correctable)
from .opspace import DEFAULT_TOL, InvalidInput, TolerancePolicy, frob, numerical_rank, vec
from .serialize import round_float


@dataclass
class InequalityAudit:
    name: str
    lhs: float
    rhs: float
    holds: bool
    saturated: bool
    applicable: bool = True
    notes: str = ""

    @property
    def violated(self) -> bool:
        return self.applicable and not self.holds

    def to_dict(self) -> dict:
        num = (lambda x: x if isinstance(x, int) else round_float(x))
        return {"name": self.name, "lhs": num(self.lhs), "rhs": num(self.rhs),
                "holds": self.holds, "saturated": self.saturated,
                "applicable": self.applicable, "notes": self.notes}


def make_audit(name: str, lhs, rhs, applicable: bool = True, notes: str = "",
               tol: TolerancePolicy = DEFAULT_TOL) -> InequalityAudit:
    return InequalityAudit(name, lhs, rhs, bool(lhs <= rhs + tol.equality_abs),
                           bool(abs(lhs - rhs) <= tol.equality_abs), applicable, notes)


def privatized_to_state(channel: QuantumChannel, B: MatrixAlgebra,
                        tol: TolerancePolicy = DEFAULT_TOL) -> tuple[bool, np.ndarray | None]:
    """Whether ``Phi(X) = tr(X) rho`` on ``B``, with ``rho = Phi(P_B) / tr(P_B)``."""
    if B.ambient_dim != channel.dim_in:
        raise InvalidInput(f"algebra lives in M_{B.ambient_dim}, channel input is "
                           f"M_{channel.dim_in}")
    if B.dim == 0:
        raise InvalidInput("the zero algebra has no unit to privatize")
    P = B.unit_projection
    rho = apply(channel, P) / np.real(np.trace(P))
    for X in B.elements:
        if frob(apply(channel, X) - np.trace(X) * rho) > tol.equality_abs * (1 + frob(X)):
            return False, None
    return True, rho


def correctable_for(channel: QuantumChannel, A: MatrixAlgebra,
                    tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Correctability with respect to the unit projection of ``A``."""
    return bool(test_correctable(channel, A, A.unit_projection, tol))


def product_basis_gram_error(A: MatrixAlgebra, B: MatrixAlgebra) -> float:
    """How far ``{sqrt(n) A_i B_j}`` is from an orthonormal set."""
    n = A.ambient_dim
    prods = np.sqrt(n) * np.einsum("iab,jbc->ijac", A.elements, B.elements)
    flat = prods.reshape(-1, n * n)
    return frob(flat.conj() @ flat.T - np.eye(flat.shape[0]))


def quasiorthogonality_equivalence_check(A: MatrixAlgebra, B: MatrixAlgebra,
                                         tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Compare quasiorthogonality with what the conditional expectation onto ``A`` does.

    ``A`` and ``B`` are quasiorthogonal exactly when ``E_A`` corrects ``A``
    and privatizes ``B`` to a state; the report carries both sides.
    """
    if not (A.is_unital and B.is_unital):
        raise InvalidInput("both algebras must be unital")
    q = quasiorthogonal(A, B, tol)
    E = conditional_expectation(A, tol)
    corrects = bool(test_correctable(E, A, None, tol))
    privatizes, rho = privatized_to_state(E, B, tol)
    c = complementarity_measure(A, B, tol)
    report = {
        "quasiorthogonal": bool(q),
        "deviation": q.deviation,
        "corrects": corrects,
        "privatizes": privatizes,
        "state": rho,
        "c": c,
        "c_is_one": abs(c - 1) <= IDENTITY_ATOL,
        "consistent": bool(q) == (corrects and privatizes),
    }
    report["c_consistent"] = report["c_is_one"] == bool(q)
    if q:
        report["product_gram_error"] = product_basis_gram_error(A, B)
    return report


def _contains_masa(X: MatrixAlgebra, Xc: MatrixAlgebra, tol) -> bool:
    n = X.ambient_dim
    return bool(X.is_unital and Xc.is_abelian(tol) and Xc.dim <= n and X.dim >= n)


def _is_masa(X: MatrixAlgebra, Xc: MatrixAlgebra, tol) -> bool:
    n = X.ambient_dim
    return bool(X.is_abelian(tol) and X.dim == n and X.basis.distance(Xc.basis) <= IDENTITY_ATOL)


def audit_inequalities(channel: QuantumChannel, A: MatrixAlgebra | None = None,
                       B: MatrixAlgebra | None = None,
                       tol: TolerancePolicy = DEFAULT_TOL) -> list[InequalityAudit]:
    """Every dimension inequality whose ingredients are available.

    ``A`` is meant to be correctable (with respect to its unit projection)
    and ``B`` privatized to a state.  Entries whose hypotheses fail are kept
    with ``applicable=False`` and a note.
    """
    n = channel.dim_in
    audits = []
    a_ok = A is not None and correctable_for(channel, A, tol)
    b_ok = B is not None and privatized_to_state(channel, B, tol)[0]
    Ac = commutant(A, tol) if A is not None else None
    Bc = commutant(B, tol) if B is not None else None

    def why(need_a: bool, a_unital: bool, b_unital: bool) -> str:
        reasons = []
        if need_a and not a_ok:
            reasons.append("A is not correctable")
        elif need_a and a_unital and not A.is_unital:
            reasons.append("A is not unital")
        if not b_ok:
            reasons.append("B is not privatized to a state")
        elif b_unital and not B.is_unital:
            reasons.append("B is not unital")
        return "; ".join(reasons)

    if A is not None and B is not None:
        notes = why(True, False, True)
        audits.append(make_audit("dim(A)*dim(B) <= n^2", A.dim * B.dim, n * n,
                                 not notes, notes, tol))
        notes = why(True, True, True)
        audits.append(make_audit("dim(B) <= dim(A')", B.dim, Ac.dim, not notes, notes, tol))
        audits.append(make_audit("dim(A) <= dim(B')", A.dim, Bc.dim, not notes, notes, tol))
        flags = {"A_contains_masa": _contains_masa(A, Ac, tol), "A_is_masa": _is_masa(A, Ac, tol),
                 "B_contains_masa": _contains_masa(B, Bc, tol), "B_is_masa": _is_masa(B, Bc, tol)}
        both_masa = flags["A_is_masa"] and flags["B_is_masa"]
        flag_text = ", ".join(f"{k}={v}" for k, v in flags.items())
        audits.append(make_audit(
            "algebras containing a MASA", int(flags["A_contains_masa"]) +
            int(flags["B_contains_masa"]), 2 if both_masa else 1, not notes,
            "; ".join(x for x in (notes, flag_text) if x), tol))
    if B is not None:
        notes = why(False, False, True)
        generated = commutant_subspace(list(kraus_commutant_route(channel, tol).basis), n, tol,
                                       adjoint_closed=True)
        audits.append(make_audit("dim(B) <= dim({V_i^* V_j}'')", B.dim, generated.dim,
                                 not notes, notes, tol))
    if channel.dim_in == channel.dim_out:
        unital = channel.is_unital(tol)
        if unital:
            lhs = multiplicative_domain(channel, tol).dim + kernel(channel, tol).dim
            audits.append(make_audit("dim(M(Phi)) + dim(ker Phi) <= n^2", lhs, n * n, True, "", tol))
        else:
            audits.append(InequalityAudit("dim(M(Phi)) + dim(ker Phi) <= n^2", 0, n * n,
                                          True, False, False, "channel is not unital"))
    return audits


def complement_rank_bound(channel: QuantumChannel, A: MatrixAlgebra,
                          tol: TolerancePolicy = DEFAULT_TOL) -> InequalityAudit:
    """``rank(Phi^C restricted to A) <= dim Z(A)`` for correctable ``A``."""
    if not correctable_for(channel, A, tol):
        raise InvalidInput("algebra is not correctable with respect to its unit projection")
    comp = complement(channel, tol)
    if A.dim == 0:
        return make_audit("rank(Phi^C|A) <= dim Z(A)", 0, 0, tol=tol)
    cols = np.stack([vec(apply(comp, B)) for B in A.elements], axis=1)
    return make_audit("rank(Phi^C|A) <= dim Z(A)", numerical_rank(cols, tol),
                      center(A, tol).dim, tol=tol)
