"""JSON encodings for matrices, channels, algebras and reports.

A complex matrix is a list of rows, each row a list of ``[re, im]`` pairs.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .opspace import InvalidInput, TolerancePolicy

# Reported floats are rounded so that last-bit BLAS noise cannot leak into
# byte-level comparisons of reports.
REPORT_DIGITS = 6


def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(data, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name}: not a numeric nested list ({exc})") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or 0 in arr.shape:
        raise InvalidInput(f"{name}: expected rows of [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name}: non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def round_float(x, digits: int = REPORT_DIGITS):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    if x == 0:
        return 0.0
    return float(f"{x:.{digits}g}")


def encode_report_matrix(M, digits: int = 12) -> list:
    """Matrix encoding for reports; entries rounded, negative zeros removed."""
    M = np.asarray(M, dtype=complex)
    return [[[round_float(z.real, digits) + 0.0, round_float(z.imag, digits) + 0.0]
             for z in row] for row in M]


def channel_to_dict(channel) -> dict:
    return {"label": channel.label, "dim_in": channel.dim_in, "dim_out": channel.dim_out,
            "kraus": [encode_matrix(V) for V in channel.kraus]}


def channel_from_dict(data: dict, tol: TolerancePolicy | None = None):
    from .channel import QuantumChannel

    if not isinstance(data, dict):
        raise InvalidInput("channel JSON must be an object")
    missing = {"dim_in", "dim_out", "kraus"} - set(data)
    if missing:
        raise InvalidInput(f"channel JSON lacks {sorted(missing)}")
    kraus = [decode_matrix(V, f"kraus[{i}]") for i, V in enumerate(data["kraus"])]
    if not kraus:
        raise InvalidInput("channel JSON has no Kraus operators")
    shape = (int(data["dim_out"]), int(data["dim_in"]))
    for i, V in enumerate(kraus):
        if V.shape != shape:
            raise InvalidInput(f"kraus[{i}] has shape {V.shape}, expected {shape}")
    kwargs = {} if tol is None else {"tol": tol}
    return QuantumChannel(np.stack(kraus), label=str(data.get("label", "")), **kwargs)


def algebra_to_dict(A, generators=None, include_identity: bool = False) -> dict:
    gens = A.elements if generators is None else generators
    return {"ambient_dim": A.ambient_dim, "label": A.label,
            "generators": [encode_matrix(G) for G in gens],
            "include_identity": bool(include_identity)}


def algebra_from_dict(data: dict, tol: TolerancePolicy | None = None):
    from .algebra import algebra_from_generators

    if not isinstance(data, dict) or "generators" not in data:
        raise InvalidInput("algebra JSON must be an object with 'generators'")
    gens = [decode_matrix(G, f"generators[{i}]") for i, G in enumerate(data["generators"])]
    n = data.get("ambient_dim")
    if n is not None and any(G.shape != (int(n), int(n)) for G in gens):
        raise InvalidInput(f"generators must be {n}x{n}")
    kwargs = {} if tol is None else {"tol": tol}
    return algebra_from_generators(gens, bool(data.get("include_identity", False)),
                                   label=str(data.get("label", "")), **kwargs)


def projection_from_json(data) -> np.ndarray:
    if isinstance(data, dict):
        data = data.get("matrix")
    return decode_matrix(data, "Q")


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
