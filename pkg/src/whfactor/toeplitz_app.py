"""Finite sections of block Toeplitz operators and their inversion via the factors.

Convention: block ``(i, j)`` of ``T_N(G)`` is the Laurent coefficient
``g_{i-j}``, so positive powers sit below the diagonal. For a right canonical
factorization ``G = V_- V_+`` the infinite operator satisfies
``T(G)^{-1} = T(V_+^{-1}) T(V_-^{-1})``, an upper triangular factor followed
by a lower triangular one. Applied to data supported on the first ``N``
blocks this gives the first ``N`` blocks of ``T(G)^{-1} b`` exactly (up to
coefficient truncation); it differs from ``T_N(G)^{-1} b`` only near the
truncation edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularSection, TailTooShort
from .realization import DichotomyInfo, StateSpaceSystem, fourier_coefficients
from .tolerances import Tolerances, resolve
from .wiener_hopf import Side, WienerHopfFactorization, factor_laurent


@dataclass(frozen=True)
class ToeplitzSection:
    symbol_coeffs: dict[int, np.ndarray]
    n_blocks: int
    matrix: np.ndarray
    truncation_estimate: float = 0.0  # bound on the dropped coefficient tail

    @property
    def block_shape(self) -> tuple[int, int]:
        return next(iter(self.symbol_coeffs.values())).shape


def assemble_blocks(coeffs: dict[int, np.ndarray], n_blocks: int, shape: tuple[int, int]) -> np.ndarray:
    p, m = shape
    out = np.zeros((n_blocks * p, n_blocks * m), dtype=complex)
    for i in range(n_blocks):
        for j in range(n_blocks):
            c = coeffs.get(i - j)
            if c is not None:
                out[i * p:(i + 1) * p, j * m:(j + 1) * m] = c
    return out


def build_section(sys: StateSpaceSystem, info: DichotomyInfo, n_blocks: int,
                  k_range: tuple[int, int] | None = None) -> ToeplitzSection:
    """``T_N(G)`` for ``G = I + F`` from the Laurent coefficients of ``F``."""
    if n_blocks < 1:
        raise ValueError("n_blocks must be positive")
    k_min, k_max = k_range if k_range is not None else (-(n_blocks - 1), n_blocks - 1)
    if k_min > -(n_blocks - 1) or k_max < n_blocks - 1:
        raise ValueError("k_range must cover all offsets of the section")
    coeffs = fourier_coefficients(sys, info, k_min, k_max)
    table = {k: c for k, c in zip(range(k_min, k_max + 1), coeffs)}
    table[0] = table[0] + np.eye(sys.m)
    # geometric tail beyond the stored range; rho bounds the decay rate
    rho = max(1.0 - info.margin, 1.0 / (1.0 + info.margin)) if np.isfinite(info.margin) else 0.0
    edge = np.linalg.norm(table[k_min], 2) + np.linalg.norm(table[k_max], 2) if k_min or k_max else 0.0
    estimate = float(edge * rho / (1.0 - rho)) if rho < 1 else np.inf
    return ToeplitzSection(table, n_blocks, assemble_blocks(table, n_blocks, (sys.p, sys.m)), estimate)


def _as_block_vector(rhs, n_blocks: int, m: int) -> np.ndarray:
    b = np.asarray(rhs, dtype=complex).ravel()
    if b.size != n_blocks * m:
        raise DimensionMismatch(f"rhs has length {b.size}, expected {n_blocks * m}")
    return b


def _inverse_coeffs(f, n_blocks: int, tail: int, tol: Tolerances) -> list[np.ndarray]:
    coeffs = factor_laurent(f, min(tail, n_blocks - 1) + 1)
    if tail < n_blocks - 1:
        # offsets tail+1 .. n_blocks-1 are dropped; the last kept one must be negligible
        scale = max(1.0, float(np.linalg.norm(coeffs[0], 2)))
        last = float(np.linalg.norm(coeffs[-1], 2))
        if last > tol.tail * scale:
            raise TailTooShort(f"coefficient {tail} has norm {last:.3g}; increase tail")
    return coeffs


def solve_via_factorization(wh: WienerHopfFactorization, rhs, n_blocks: int, tail: int = 200,
                            tol: Tolerances | None = None) -> np.ndarray:
    """First ``n_blocks`` blocks of ``T(V_+^{-1}) T(V_-^{-1}) b``.

    ``tail`` caps the number of Laurent coefficients taken from each inverse
    factor. Offsets beyond ``n_blocks - 1`` never enter the section, so the
    cap only bites when ``tail < n_blocks - 1``; the last kept coefficient
    must then be below ``tol.tail``.
    """
    tol = resolve(tol)
    if wh.side is not Side.RIGHT:
        raise ValueError("Toeplitz inversion uses the right factorization")
    if tail < 0:
        raise ValueError("tail must be nonnegative")
    m = wh.factor_inner.dterm.shape[0]
    b = _as_block_vector(rhs, n_blocks, m)
    plus = _inverse_coeffs(wh.inverse_inner, n_blocks, tail, tol)
    minus = _inverse_coeffs(wh.inverse_outer, n_blocks, tail, tol)
    upper = assemble_blocks({-k: c for k, c in enumerate(minus)}, n_blocks, (m, m))
    lower = assemble_blocks({k: c for k, c in enumerate(plus)}, n_blocks, (m, m))
    return lower @ (upper @ b)


def solve_direct(section: ToeplitzSection, rhs) -> np.ndarray:
    """Dense LU solve of ``T_N(G) x = b``."""
    M = section.matrix
    b = _as_block_vector(rhs, section.n_blocks, section.block_shape[1])
    if M.shape[0] != M.shape[1] or 1.0 / np.linalg.cond(M) < 1e-14:
        raise SingularSection("finite section is numerically singular")
    return np.linalg.solve(M, b)


def interior_slice(n_blocks: int, m: int) -> slice:
    """Coordinates of the middle third of the blocks."""
    lo = n_blocks // 3
    hi = n_blocks - n_blocks // 3
    return slice(lo * m, hi * m)
