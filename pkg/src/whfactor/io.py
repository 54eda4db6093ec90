"""JSON encodings.

Complex scalars are ``[re, im]`` pairs; matrices are row-major nested lists of
pairs; vectors are flat lists of pairs. Floats go through ``repr`` so values
round-trip exactly. Non-finite reals (empty spectra) are written as ``null``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch
from .kyp_krein import KypCertificate
from .realization import RationalSymbolSpec, StateSpaceSystem
from .wiener_hopf import (
    Domain,
    DSplit,
    FactorRealization,
    Side,
    SplitStrategy,
    WienerHopfFactorization,
)


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ValueError(f"expected [re, im] pair, got {v!r}")


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[complex_to_json(x) for x in row] for row in M]


def matrix_from_json(data, shape: tuple[int | None, int | None] = (None, None)) -> np.ndarray:
    """Parse a nested list of pairs; ``shape`` fills in sizes an empty list cannot carry."""
    if not isinstance(data, list) or any(not isinstance(row, list) for row in data):
        raise ValueError("matrix must be a list of rows")
    rows, cols = shape
    if len(data) == 0:
        return np.zeros((rows or 0, cols or 0), dtype=complex)
    width = {len(row) for row in data}
    if len(width) != 1:
        raise DimensionMismatch("ragged matrix rows")
    out = np.array([[complex_from_json(x) for x in row] for row in data], dtype=complex)
    if out.shape[1] == 0 and cols:
        raise DimensionMismatch(f"expected {cols} columns")
    return out.reshape(len(data), width.pop())


def vector_to_json(v) -> list:
    return [complex_to_json(x) for x in np.asarray(v, dtype=complex).ravel()]


def vector_from_json(data) -> np.ndarray:
    if not isinstance(data, list):
        raise ValueError("vector must be a list of [re, im] pairs")
    return np.array([complex_from_json(x) for x in data], dtype=complex)


def _real(x):
    return None if x is None or not math.isfinite(x) else float(x)


# ---------------------------------------------------------------- systems


def system_to_json(sys: StateSpaceSystem) -> dict:
    return {k: matrix_to_json(getattr(sys, k)) for k in "ABCD"}


def system_from_json(data: dict) -> StateSpaceSystem:
    if not isinstance(data, dict) or set(data) != set("ABCD"):
        raise ValueError("system must be an object with exactly the keys A, B, C, D")
    D = matrix_from_json(data["D"])
    A = matrix_from_json(data["A"])
    n = A.shape[0]
    p, m = D.shape
    B = matrix_from_json(data["B"], (n, m))
    C = matrix_from_json(data["C"], (p, n))
    return StateSpaceSystem(A, B, C, D)


def spec_to_json(spec: RationalSymbolSpec) -> dict:
    return {
        "constant": matrix_to_json(spec.constant),
        "poly_coeffs": [matrix_to_json(c) for c in spec.poly_coeffs],
        "simple_poles": [{"q": complex_to_json(q), "residue": matrix_to_json(r)} for q, r in spec.simple_poles],
    }


def spec_from_json(data: dict) -> RationalSymbolSpec:
    unknown = set(data) - {"constant", "poly_coeffs", "simple_poles"}
    if unknown:
        raise ValueError(f"unknown keys in rational symbol: {sorted(unknown)}")
    return RationalSymbolSpec(
        matrix_from_json(data["constant"]),
        tuple(matrix_from_json(c) for c in data.get("poly_coeffs", [])),
        tuple((complex_from_json(t["q"]), matrix_from_json(t["residue"])) for t in data.get("simple_poles", [])),
    )


# ---------------------------------------------------------------- factorizations


def factor_to_json(f: FactorRealization) -> dict:
    return {
        "dterm": matrix_to_json(f.dterm),
        "cvec": matrix_to_json(f.cvec),
        "amat": matrix_to_json(f.amat),
        "bvec": matrix_to_json(f.bvec),
        "domain": f.domain.value,
        "spectrum_bound": _real(f.spectrum_bound),
    }


def factor_from_json(data: dict) -> FactorRealization:
    dterm = matrix_from_json(data["dterm"])
    m = dterm.shape[0]
    amat = matrix_from_json(data["amat"])
    k = amat.shape[0]
    cvec = matrix_from_json(data["cvec"], (m, k))
    bvec = matrix_from_json(data["bvec"], (k, m))
    domain = Domain(data["domain"])
    bound = data.get("spectrum_bound")
    if bound is None:
        bound = math.inf if domain is Domain.OUTER else 0.0
    return FactorRealization(dterm, cvec, amat, bvec, domain, float(bound))


def factorization_to_json(wh: WienerHopfFactorization) -> dict:
    return {
        "side": wh.side.value,
        "factors": {name: factor_to_json(f) for name, f in wh.factors().items()},
        "projection": matrix_to_json(wh.projection),
        "basis_cond": _real(wh.basis_cond),
        "dsplit": {
            "strategy": wh.dsplit.strategy.value,
            "d1": matrix_to_json(wh.dsplit.d1),
            "d2": matrix_to_json(wh.dsplit.d2),
        },
        "spectral_bounds": {name: _real(f.spectrum_bound) for name, f in wh.factors().items()},
    }


def factorization_from_json(data: dict) -> WienerHopfFactorization:
    f = {name: factor_from_json(v) for name, v in data["factors"].items()}
    ds = data["dsplit"]
    n = len(data["projection"])
    return WienerHopfFactorization(
        Side(data["side"]),
        f["factor_outer"], f["factor_inner"], f["inverse_outer"], f["inverse_inner"],
        matrix_from_json(data["projection"], (n, n)),
        float(data["basis_cond"]),
        DSplit(matrix_from_json(ds["d1"]), matrix_from_json(ds["d2"]), SplitStrategy(ds["strategy"])),
    )


def certificate_to_json(cert: KypCertificate) -> dict:
    return {
        "H": matrix_to_json(cert.H),
        "margin": _real(cert.margin),
        "adjoint_margin": _real(cert.adjoint_margin),
        "inertia": list(cert.inertia),
    }


# ---------------------------------------------------------------- files


def load_json(path) -> object:
    with open(Path(path)) as fh:
        return json.load(fh)


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, allow_nan=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
