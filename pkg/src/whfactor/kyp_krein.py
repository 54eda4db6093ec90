"""Strict KYP inequality and Krein-space bicontractions.

For a system matrix ``S = [[A, B], [C, D]]`` and selfadjoint invertible ``H``
the strict KYP inequality is ``S* diag(H, I) S < diag(H, I)``. Margins are
reported as the smallest eigenvalue of the (Hermitian) gap, so a positive
number certifies the strict inequality with that slack.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (
    CertificationFailed,
    DimensionMismatch,
    NormNotStrictlyContractive,
    NotSelfadjoint,
    PencilSelectionFailed,
    SingularGram,
)
from .realization import (
    DichotomyInfo,
    StateSpaceSystem,
    _frozen,
    _require_dichotomous,
    as_matrix,
    sup_norm_on_circle,
)
from .tolerances import Tolerances, resolve


@dataclass(frozen=True)
class KreinSpace:
    """``C^n`` with indefinite inner product ``[x, y] = <gram x, y>``."""

    gram: np.ndarray

    def __post_init__(self):
        H = as_matrix(self.gram, "gram")
        if H.shape[0] != H.shape[1]:
            raise DimensionMismatch("Gram operator must be square")
        object.__setattr__(self, "gram", _frozen(H))

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    def inner(self, x, y) -> complex:
        return complex(np.vdot(np.asarray(y), self.gram @ np.asarray(x)))

    def gram_inverse(self, tol: Tolerances | None = None) -> np.ndarray:
        return _checked_inverse(self.gram, resolve(tol))


@dataclass(frozen=True)
class KypCertificate:
    H: np.ndarray
    margin: float
    adjoint_margin: float
    inertia: tuple[int, int]  # (positive, negative) eigenvalue counts

    def to_krein(self) -> KreinSpace:
        return KreinSpace(self.H)


def _hermitian_min_eig(M: np.ndarray) -> float:
    if M.shape[0] == 0:
        return np.inf
    return float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0])


def _check_selfadjoint(H: np.ndarray, tol: Tolerances) -> None:
    scale = max(1.0, float(np.linalg.norm(H, 2))) if H.size else 1.0
    if H.size and np.linalg.norm(H - H.conj().T, 2) > tol.sym * scale:
        raise NotSelfadjoint("H is not selfadjoint")


def _checked_inverse(H: np.ndarray, tol: Tolerances) -> np.ndarray:
    if H.shape[0] == 0:
        return H.copy()
    if not 1.0 / np.linalg.cond(H) >= tol.sing:
        raise SingularGram("Gram operator is numerically singular")
    return np.linalg.inv(H)


def _kyp_inputs(sys: StateSpaceSystem, H, tol: Tolerances) -> np.ndarray:
    H = as_matrix(H, "H") if sys.n else np.zeros((0, 0), dtype=complex)
    if H.shape != (sys.n, sys.n):
        raise DimensionMismatch(f"H must be {sys.n}x{sys.n}, got {H.shape}")
    _check_selfadjoint(H, tol)
    return (H + H.conj().T) / 2


def verify_kyp(sys: StateSpaceSystem, H, tol: Tolerances | None = None) -> float:
    """Smallest eigenvalue of ``diag(H, I_U) - S* diag(H, I_Y) S``."""
    tol = resolve(tol)
    H = _kyp_inputs(sys, H, tol)
    S = sys.system_matrix()
    left = sla.block_diag(H, np.eye(sys.m))
    right = sla.block_diag(H, np.eye(sys.p))
    return _hermitian_min_eig(left - S.conj().T @ right @ S)


def verify_adjoint_kyp(sys: StateSpaceSystem, H, tol: Tolerances | None = None) -> float:
    """Smallest eigenvalue of ``diag(H^-1, I_Y) - S diag(H^-1, I_U) S*``."""
    tol = resolve(tol)
    H = _kyp_inputs(sys, H, tol)
    Hinv = _checked_inverse(H, tol)
    S = sys.system_matrix()
    left = sla.block_diag(Hinv, np.eye(sys.p))
    right = sla.block_diag(Hinv, np.eye(sys.m))
    return _hermitian_min_eig(left - S @ right @ S.conj().T)


def inertia(H, tol: Tolerances | None = None) -> tuple[int, int]:
    tol = resolve(tol)
    H = as_matrix(H, "H") if np.size(H) else np.zeros((0, 0))
    ev = np.linalg.eigvalsh((H + H.conj().T) / 2)
    scale = max(1.0, float(np.max(np.abs(ev)))) if ev.size else 1.0
    if np.any(np.abs(ev) <= tol.sing * scale):
        raise SingularGram("H has a (numerically) zero eigenvalue")
    return int(np.sum(ev > 0)), int(np.sum(ev < 0))


# ---------------------------------------------------------------- solver


def _riccati_pencil_solution(A, B, Q, R, S, tol: Tolerances) -> np.ndarray:
    """Stabilizing solution of ``A*XA - X - (A*XB + S)(R + B*XB)^{-1}(B*XA + S*) + Q = 0``.

    Extended ``(2n+k)`` pencil, compressed to ``2n x 2n`` by a QR of its input
    columns, then reordered by QZ so the ``n`` eigenvalues inside the unit
    disc come first. ``X = X2 X1^{-1}`` from the leading Schur vectors.
    """
    n, k = B.shape
    N = 2 * n + k
    M = np.zeros((N, N), dtype=complex)
    L = np.zeros((N, N), dtype=complex)
    M[:n, :n] = A
    M[:n, 2 * n:] = B
    M[n:2 * n, :n] = -Q
    M[n:2 * n, n:2 * n] = np.eye(n)
    M[n:2 * n, 2 * n:] = -S
    M[2 * n:, :n] = S.conj().T
    M[2 * n:, 2 * n:] = R
    L[:n, :n] = np.eye(n)
    L[n:2 * n, n:2 * n] = A.conj().T
    L[2 * n:, n:2 * n] = -B.conj().T

    q, _ = np.linalg.qr(M[:, 2 * n:], mode="complete")
    Mc = q[:, k:].conj().T @ M[:, :2 * n]
    Lc = q[:, k:].conj().T @ L[:, :2 * n]

    _, _, alpha, beta, _, Z = sla.ordqz(Mc, Lc, sort="iuc", output="complex")
    with np.errstate(divide="ignore", invalid="ignore"):
        inside = np.abs(alpha) < np.abs(beta)
    if int(np.sum(inside)) != n:
        raise PencilSelectionFailed(
            f"pencil has {int(np.sum(inside))} eigenvalues inside the disc, expected {n}"
        )
    X1, X2 = Z[:n, :n], Z[n:, :n]
    if not 1.0 / np.linalg.cond(X1) >= tol.sing:
        raise PencilSelectionFailed("deflating subspace is not a graph (X1 singular)")
    return np.linalg.solve(X1.conj().T, X2.conj().T).conj().T


def _augmented_riccati_data(sys: StateSpaceSystem, eta: float):
    """DARE data for the system padded with ``sqrt(eta)`` state/input channels.

    Extra inputs ``w`` enter as ``sqrt(eta) w`` in the state equation; extra
    outputs are ``sqrt(eta) x`` and ``sqrt(eta) u``. Any solution of the
    resulting KYP equality satisfies the original KYP inequality with
    slack ``eta``.
    """
    n, m, p = sys.n, sys.m, sys.p
    r = np.sqrt(eta)
    Ba = np.hstack([sys.B, r * np.eye(n)])
    Ca = np.vstack([sys.C, r * np.eye(n), np.zeros((m, n))])
    Da = np.zeros((p + n + m, m + n), dtype=complex)
    Da[:p, :m] = sys.D
    Da[p + n:, :m] = r * np.eye(m)
    Q = Ca.conj().T @ Ca
    R = Da.conj().T @ Da - np.eye(m + n)
    S = Ca.conj().T @ Da
    return np.array(sys.A), Ba, Q, R, S


def solve_kyp(sys: StateSpaceSystem, tol: Tolerances | None = None,
              grid_points: int = 512) -> KypCertificate:
    """Invertible selfadjoint ``H`` solving the strict KYP inequality.

    The Riccati equation of a slightly padded system is solved through its
    matrix pencil for a decreasing sequence of padding levels; the first ``H``
    whose KYP and adjoint KYP margins are both positive is returned.

    Raises
    ------
    NormNotStrictlyContractive
        If the sup norm of ``F`` on the circle is not below ``1 - tol.norm``.
    PencilSelectionFailed
        If no padding level yields a graph subspace.
    CertificationFailed
        If a solution was computed but never certified.
    """
    tol = resolve(tol)
    _require_dichotomous(sys.A, tol)
    gamma = sup_norm_on_circle(sys, grid_points, refine=True, tol=tol)
    if not gamma < 1.0 - tol.norm:
        raise NormNotStrictlyContractive(f"sup norm on the circle is {gamma:.6g}")
    if sys.n == 0:
        margin = verify_kyp(sys, np.zeros((0, 0)), tol)
        return KypCertificate(_frozen(np.zeros((0, 0))), margin, np.inf, (0, 0))

    scale = 1.0 + np.linalg.norm(sys.B, 2) ** 2 + np.linalg.norm(sys.C, 2) ** 2
    last_error = None
    best = None
    for j in range(12):
        eta = 0.5 * (1.0 - gamma) / scale * 4.0 ** (-j)
        try:
            H = _riccati_pencil_solution(*_augmented_riccati_data(sys, eta), tol)
        except (PencilSelectionFailed, np.linalg.LinAlgError) as exc:
            last_error = exc
            continue
        H = (H + H.conj().T) / 2
        try:
            margin = verify_kyp(sys, H, tol)
            adj = verify_adjoint_kyp(sys, H, tol)
        except SingularGram as exc:
            last_error = exc
            continue
        if margin > 0 and adj > 0:
            return KypCertificate(_frozen(H), margin, adj, inertia(H, tol))
        best = (margin, adj)
    if best is not None:
        raise CertificationFailed(f"KYP margins {best} are not both positive")
    raise PencilSelectionFailed(f"no admissible Riccati solution: {last_error}")


def inertia_check(cert: KypCertificate, info: DichotomyInfo) -> bool:
    """Positive/negative eigenvalue counts of H match dim X_+ / dim X_-."""
    n_pos, n_neg = cert.inertia
    return n_pos == info.dim_plus and n_neg == info.dim_minus


# ---------------------------------------------------------------- Krein geometry


def _as_krein(K) -> KreinSpace:
    return K if isinstance(K, KreinSpace) else KreinSpace(K)


def krein_adjoint(S, K, tol: Tolerances | None = None) -> np.ndarray:
    """``H^{-1} S* H`` for the Gram operator ``H`` of ``K``."""
    K = _as_krein(K)
    S = as_matrix(S, "S")
    if S.shape != (K.n, K.n):
        raise DimensionMismatch("operator and Krein space dimensions differ")
    return K.gram_inverse(tol) @ S.conj().T @ K.gram


def bicontraction_margins(M, K, tol: Tolerances | None = None) -> tuple[float, float]:
    """``(lambda_min(H - M*HM), lambda_min(H^{-1} - M H^{-1} M*))``."""
    K = _as_krein(K)
    M = as_matrix(M, "M") if K.n else np.zeros((0, 0))
    if M.shape != (K.n, K.n):
        raise DimensionMismatch("operator and Krein space dimensions differ")
    H = K.gram
    Hinv = K.gram_inverse(tol)
    return (
        _hermitian_min_eig(H - M.conj().T @ H @ M),
        _hermitian_min_eig(Hinv - M @ Hinv @ M.conj().T),
    )
