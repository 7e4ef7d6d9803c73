"""Full analysis of a channel (and optional algebras) as a JSON-ready report."""
from __future__ import annotations

import numpy as np

from . import codes, tradeoff
from .algebra import MatrixAlgebra, block_signature, commutant
from .channel import QuantumChannel, choi, complement, kernel, superoperator_distance
from .opspace import DEFAULT_TOL, StructureError, TolerancePolicy
from .serialize import encode_report_matrix, round_float

# Residuals below this are rounding noise; zeroing them keeps reports
# byte-stable across BLAS builds.
NOISE_FLOOR = 1e-13


def _clean(obj):
    """Round floats and convert numpy scalars and arrays for JSON output."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return 0.0 if abs(obj) < NOISE_FLOOR else round_float(obj)
    if isinstance(obj, np.ndarray):
        A = np.where(np.abs(obj) < NOISE_FLOOR, 0, obj)
        return encode_report_matrix(np.where(np.abs(A.imag) < NOISE_FLOOR, A.real, A))
    if hasattr(obj, "to_dict"):
        return _clean(obj.to_dict())
    return obj


def algebra_summary(A: MatrixAlgebra, tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    out = {"label": A.label, "dim": A.dim, "unital": A.is_unital,
           "commutant_dim": commutant(A, tol).dim}
    try:
        out["signature"] = block_signature(A, tol).to_dict()
    except StructureError as exc:  # reported, not fatal
        out["signature"] = {"error": str(exc)}
    return out


def channel_section(channel: QuantumChannel, tol: TolerancePolicy) -> dict:
    comp = complement(channel, tol)
    out = {
        "label": channel.label,
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "n_kraus": channel.n_kraus,
        "choi_rank": choi(channel).rank(tol),
        "unital": channel.is_unital(tol),
        "kernel_dim": kernel(channel, tol).dim,
        "complement": {"dim_out": comp.dim_out,
                       "kernel_dim": kernel(comp, tol).dim,
                       "equals_channel": superoperator_distance(comp, channel) <= codes.IDENTITY_ATOL},
        "privacy_lemma_distance": codes.privacy_lemma_distance(channel, None, tol),
    }
    routes = codes.multiplicative_domain_routes(channel, tol)
    M = codes.multiplicative_domain(channel, tol, routes=routes)
    out["multiplicative_domain"] = {
        **algebra_summary(M, tol),
        "route_distances": {k: v.distance(routes["nullspace"]) for k, v in routes.items()
                            if k != "nullspace"},
    }
    return out


def algebra_section(channel: QuantumChannel, A: MatrixAlgebra, Q, tol: TolerancePolicy) -> dict:
    Q = A.unit_projection if Q is None else Q
    comp = complement(channel, tol)
    correctable = codes.test_correctable(channel, A, Q, tol)
    out = {
        **algebra_summary(A, tol),
        "Q_rank": int(round(float(np.real(np.trace(Q))))),
        "correctable": correctable,
        "private": codes.test_private(channel, A, Q, tol),
        "private_by_kernel": codes.privacy_kernel_test(channel, A, Q, tol),
        "private_for_complement": codes.test_private(comp, A, Q, tol),
        "privacy_lemma_distance": codes.privacy_lemma_distance(channel, Q, tol),
    }
    out["complementarity_agrees"] = bool(correctable) == bool(out["private_for_complement"])
    out["kernel_test_agrees"] = bool(out["private"]) == bool(out["private_by_kernel"])
    if correctable:
        pi = codes.construct_pi(channel, A, Q, tol)
        out["pi_round_trip_error"] = codes.round_trip_error(channel, pi, Q)
        out["complementarity_identity"] = codes.complementarity_identity_check(channel, A, Q, tol)
        if np.allclose(Q, A.unit_projection):
            out["complement_rank_bound"] = tradeoff.complement_rank_bound(channel, A, tol)
    return out


def analyze(channel: QuantumChannel, algebra: MatrixAlgebra | None = None, Q=None,
            private_algebra: MatrixAlgebra | None = None,
            tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Everything the package can say about ``channel`` and the given algebras.

    ``Q`` defaults to the unit projection of ``algebra``.  Raises
    :class:`InvalidInput` for bad inputs and :class:`StructureError` when a
    computed structure fails its own checks.
    """
    report = {"channel": channel_section(channel, tol)}
    if algebra is not None:
        report["algebra"] = algebra_section(channel, algebra, Q, tol)
    if private_algebra is not None:
        ok, rho = tradeoff.privatized_to_state(channel, private_algebra, tol)
        report["private_algebra"] = {**algebra_summary(private_algebra, tol),
                                     "privatized_to_state": ok, "state": rho}
    if channel.is_unital(tol):
        report["unital_extras"] = codes.unital_extras(channel, tol)
    report["audits"] = tradeoff.audit_inequalities(channel, algebra, private_algebra, tol)
    return {"tolerance": tol.to_dict(), **_clean(report)}
