"""Discrete-time systems, transfer functions and dichotomy of the main operator.

A system ``(A, B, C, D)`` has transfer function ``F(z) = D + z C (I - z A)^{-1} B``.
``A`` is dichotomous when it has no eigenvalue on the unit circle; the state
space then splits into the spectral subspaces ``X_-`` (eigenvalues outside the
closed disc) and ``X_+`` (eigenvalues inside the open disc).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.optimize import minimize_scalar

from .errors import (
    DimensionMismatch,
    NotDichotomous,
    PoleAtOrigin,
    PoleOnCircle,
    RankDeficiencyTolerance,
    SingularResolvent,
)
from .tolerances import Tolerances, resolve


def as_matrix(x, name="matrix") -> np.ndarray:
    """Return ``x`` as a finite 2-D complex array (scalars become 1x1)."""
    arr = np.asarray(x, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateSpaceSystem:
    """Realization ``(A, B, C, D)``; arrays are complex and read-only."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        C = as_matrix(self.C, "C")
        D = as_matrix(self.D, "D")
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionMismatch(f"A must be square, got {A.shape}")
        p, m = D.shape
        if B.shape != (n, m):
            raise DimensionMismatch(f"B must be {n}x{m}, got {B.shape}")
        if C.shape != (p, n):
            raise DimensionMismatch(f"C must be {p}x{n}, got {C.shape}")
        for name, arr in zip("ABCD", (A, B, C, D)):
            object.__setattr__(self, name, _frozen(arr))

    @classmethod
    def static(cls, D) -> "StateSpaceSystem":
        """System with no states and constant transfer function ``D``."""
        D = as_matrix(D, "D")
        p, m = D.shape
        return cls(np.zeros((0, 0)), np.zeros((0, m)), np.zeros((p, 0)), D)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.D.shape[1]

    @property
    def p(self) -> int:
        return self.D.shape[0]

    def system_matrix(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]])

    def scaled(self, factor: float) -> "StateSpaceSystem":
        """Realization of ``factor * F``."""
        return StateSpaceSystem(self.A, factor * self.B, self.C, factor * self.D)


@dataclass(frozen=True)
class DichotomyInfo:
    """Spectral splitting of a dichotomous matrix.

    ``basis_minus`` and ``basis_plus`` have orthonormal columns spanning
    ``X_-`` (outside the disc) and ``X_+`` (inside). ``p_plus`` projects onto
    ``X_+`` along ``X_-``. ``cross_check_error`` is the distance to the
    quadrature projection, or None when the cross-check was skipped.
    """

    p_plus: np.ndarray
    basis_minus: np.ndarray
    basis_plus: np.ndarray
    margin: float
    cross_check_error: float | None = None

    @property
    def dim_minus(self) -> int:
        return self.basis_minus.shape[1]

    @property
    def dim_plus(self) -> int:
        return self.basis_plus.shape[1]

    @property
    def n(self) -> int:
        return self.p_plus.shape[0]


@dataclass(frozen=True)
class RationalSymbolSpec:
    """``constant + sum_k poly_coeffs[k-1] z^k + sum_j residue_j / (z - q_j)``."""

    constant: np.ndarray
    poly_coeffs: tuple = ()
    simple_poles: tuple = ()  # (q, residue) pairs

    def __post_init__(self):
        const = as_matrix(self.constant, "constant")
        polys = tuple(_frozen(as_matrix(c, "poly coefficient")) for c in self.poly_coeffs)
        poles = tuple((complex(q), _frozen(as_matrix(r, "residue"))) for q, r in self.simple_poles)
        for mat in polys + tuple(r for _, r in poles):
            if mat.shape != const.shape:
                raise DimensionMismatch(f"term of shape {mat.shape} in symbol of shape {const.shape}")
        object.__setattr__(self, "constant", _frozen(const))
        object.__setattr__(self, "poly_coeffs", polys)
        object.__setattr__(self, "simple_poles", poles)

    @property
    def dims(self) -> tuple[int, int]:
        return self.constant.shape

    def evaluate(self, z: complex) -> np.ndarray:
        """Direct partial-fraction evaluation (independent of any realization)."""
        val = self.constant.copy()
        for k, c in enumerate(self.poly_coeffs, start=1):
            val = val + c * z**k
        for q, r in self.simple_poles:
            val = val + r / (z - q)
        return val

    def scaled(self, factor: float) -> "RationalSymbolSpec":
        return RationalSymbolSpec(
            factor * self.constant,
            tuple(factor * c for c in self.poly_coeffs),
            tuple((q, factor * r) for q, r in self.simple_poles),
        )


# ---------------------------------------------------------------- evaluation


def eval_transfer(sys: StateSpaceSystem, z: complex, tol: Tolerances | None = None) -> np.ndarray:
    """Evaluate ``D + z C (I - z A)^{-1} B``.

    Raises
    ------
    SingularResolvent
        If ``I - zA`` has reciprocal condition number below ``tol.sing``.
    """
    tol = resolve(tol)
    z = complex(z)
    if z == 0 or sys.n == 0:
        return np.array(sys.D)
    M = np.eye(sys.n) - z * sys.A
    if 1.0 / np.linalg.cond(M) < tol.sing:
        raise SingularResolvent(f"I - zA is singular at z = {z}", pole=z)
    return sys.D + z * sys.C @ np.linalg.solve(M, sys.B)


def eval_transfer_many(sys: StateSpaceSystem, zs, tol: Tolerances | None = None) -> np.ndarray:
    """Vectorized :func:`eval_transfer`; returns an array of shape ``(len(zs), p, m)``."""
    tol = resolve(tol)
    zs = np.asarray(zs, dtype=complex).ravel()
    out = np.broadcast_to(sys.D, (zs.size,) + sys.D.shape).copy()
    if sys.n == 0 or zs.size == 0:
        return out
    M = np.eye(sys.n)[None] - zs[:, None, None] * sys.A[None]
    rc = 1.0 / np.linalg.cond(M)
    bad = ~(rc >= tol.sing)
    if np.any(bad):
        z = zs[np.argmax(bad)]
        raise SingularResolvent(f"I - zA is singular at z = {z}", pole=z)
    X = np.linalg.solve(M, np.broadcast_to(sys.B, (zs.size,) + sys.B.shape))
    return out + zs[:, None, None] * (sys.C[None] @ X)


def circle_nodes(count: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(count) / count)


# ---------------------------------------------------------------- dichotomy


def spectral_margin(A) -> float:
    """Distance of the spectrum of ``A`` to the unit circle (in modulus)."""
    A = as_matrix(A, "A")
    if A.shape[0] == 0:
        return math.inf
    return float(np.min(np.abs(np.abs(np.linalg.eigvals(A)) - 1.0)))


def _require_dichotomous(A, tol: Tolerances) -> float:
    margin = spectral_margin(A)
    if not margin > tol.dichotomy:
        raise NotDichotomous(f"eigenvalue within {margin:.3g} of the unit circle")
    return margin


def spectral_projection_riesz(A, quadrature_order: int = 256, tol: Tolerances | None = None) -> np.ndarray:
    """Spectral projection onto the invariant subspace for the open unit disc.

    Trapezoidal rule for ``(1/2 pi i) \\oint_T (zI - A)^{-1} dz`` on
    ``quadrature_order`` equispaced nodes. With nodes ``z_j`` and
    ``dz = i z dtheta`` the sum is ``mean_j z_j (z_j I - A)^{-1}``; the error
    decays like ``rho**quadrature_order`` where ``rho`` is the largest of
    ``|lambda|`` (inside) and ``1/|lambda|`` (outside).
    """
    tol = resolve(tol)
    A = as_matrix(A, "A")
    if quadrature_order < 16:
        raise ValueError("quadrature_order must be at least 16")
    _require_dichotomous(A, tol)
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    z = circle_nodes(quadrature_order)
    out = np.zeros((n, n), dtype=complex)
    # chunk the nodes so memory stays bounded for large orders
    for start in range(0, z.size, 1024):
        zc = z[start:start + 1024]
        M = zc[:, None, None] * np.eye(n)[None] - A[None]
        out += np.einsum("k,kij->ij", zc, np.linalg.inv(M))
    return out / quadrature_order


def _schur_basis(A: np.ndarray, inside: bool) -> np.ndarray:
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    sort = (lambda x: abs(x) < 1.0) if inside else (lambda x: abs(x) > 1.0)
    _, Z, sdim = sla.schur(A, output="complex", sort=sort)
    return Z[:, :sdim]


def invariant_bases(A, tol: Tolerances | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases ``(basis_minus, basis_plus)`` from ordered Schur forms."""
    tol = resolve(tol)
    A = as_matrix(A, "A")
    _require_dichotomous(A, tol)
    return _schur_basis(A, inside=False), _schur_basis(A, inside=True)


def oblique_projection(along: np.ndarray, onto: np.ndarray) -> tuple[np.ndarray, float]:
    """Projection onto ``span(onto)`` along ``span(along)`` and ``cond([along | onto])``."""
    n = along.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex), 1.0
    T = np.hstack([along, onto])
    if T.shape != (n, n):
        raise DimensionMismatch(f"bases do not add up to dimension {n}")
    cond = float(np.linalg.cond(T))
    if not np.isfinite(cond):
        return np.full((n, n), np.nan, dtype=complex), math.inf
    k = along.shape[1]
    Tinv = np.linalg.inv(T)
    return onto @ Tinv[k:, :], cond


def spectral_projection_ordered(A, tol: Tolerances | None = None) -> np.ndarray:
    """Spectral projection onto ``X_+`` along ``X_-`` via ordered Schur forms."""
    bm, bp = invariant_bases(A, tol)
    return oblique_projection(bm, bp)[0]


def riesz_order_for(margin: float, target: float, cap: int = 8192) -> int | None:
    """Quadrature order whose predicted error ``(1 - margin)**order`` is below ``target``."""
    rho = max(1.0 - margin, 1.0 / (1.0 + margin))
    if rho <= 0.0:
        return 256
    order = max(256, math.ceil(math.log(target) / math.log(rho)))
    return order if order <= cap else None


def dichotomy_info(A, tol: Tolerances | None = None, cross_check: bool = True) -> DichotomyInfo:
    """Dichotomous splitting of ``A``.

    The projection comes from ordered Schur forms and is cross-checked against
    the Riesz quadrature at an order chosen from the spectral margin. The
    check is skipped (``cross_check_error=None``) when the margin is so small
    that more than 8192 nodes would be needed.
    """
    tol = resolve(tol)
    A = as_matrix(A, "A")
    margin = _require_dichotomous(A, tol)
    bm, bp = invariant_bases(A, tol)
    P, cond = oblique_projection(bm, bp)
    err = None
    if cross_check and A.shape[0] > 0:
        order = riesz_order_for(margin, tol.cross * 1e-2)
        if order is not None:
            err = float(np.linalg.norm(P - spectral_projection_riesz(A, order, tol), 2))
            if err > tol.cross * (1.0 + cond):
                raise NotDichotomous(
                    f"ordered and quadrature projections disagree by {err:.3g}; "
                    "splitting is numerically unreliable"
                )
    return DichotomyInfo(_frozen(P), _frozen(bm), _frozen(bp), margin, err)


# ---------------------------------------------------------------- sup norm


def sup_norm_on_circle(sys: StateSpaceSystem, grid_points: int = 512, refine: bool = True,
                       tol: Tolerances | None = None) -> float:
    """Largest singular value of ``F`` over the unit circle.

    A grid estimate, optionally sharpened by golden-section search around the
    grid maximizer. The result is a lower bound for the true maximum.
    """
    if grid_points < 64:
        raise ValueError("grid_points must be at least 64")
    vals = eval_transfer_many(sys, circle_nodes(grid_points), tol)
    sv = np.linalg.svd(vals, compute_uv=False)[:, 0] if vals.size else np.zeros(grid_points)
    k = int(np.argmax(sv))
    best = float(sv[k])
    if not refine or vals.size == 0:
        return best
    h = 2 * np.pi / grid_points

    def neg(theta):
        F = eval_transfer(sys, np.exp(1j * theta), tol)
        return -np.linalg.norm(F, 2)

    try:
        res = minimize_scalar(neg, bracket=(k * h - h, k * h, k * h + h), method="golden",
                              options={"xtol": 1e-10})
        best = max(best, -float(res.fun))
    except ValueError:
        # flat neighbourhood: no valid bracket, the grid value stands
        pass
    return best


# ---------------------------------------------------------------- construction


def _rank_factor(R: np.ndarray, tol: Tolerances) -> tuple[np.ndarray, np.ndarray]:
    """Full-rank factorization ``R = U @ V`` with rank from a relative SVD cutoff."""
    Us, s, Vh = np.linalg.svd(R)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((R.shape[0], 0)), np.zeros((0, R.shape[1]))
    cut = tol.rank * s[0]
    ambiguous = (s > cut / 100) & (s < cut * 100)
    if np.any(ambiguous):
        raise RankDeficiencyTolerance(
            f"singular value {s[ambiguous][0]:.3g} too close to the rank cutoff {cut:.3g}"
        )
    r = int(np.sum(s > cut))
    return Us[:, :r] * s[:r], Vh[:r]


def _poly_block(coeffs, p: int, m: int):
    d = len(coeffs)
    if m <= p:
        # controller form: state carries delayed inputs
        k = m
        A = np.kron(np.eye(d, k=-1), np.eye(k))
        B = np.zeros((d * k, m), dtype=complex)
        B[:m] = np.eye(m)
        C = np.hstack(coeffs)
    else:
        # observer form
        k = p
        A = np.kron(np.eye(d, k=1), np.eye(k))
        C = np.zeros((p, d * k), dtype=complex)
        C[:, :p] = np.eye(p)
        B = np.vstack(coeffs)
    return A, B, C


def realize_rational(spec: RationalSymbolSpec, tol: Tolerances | None = None) -> StateSpaceSystem:
    """Dichotomous realization of a rational symbol with simple poles.

    Blocks, in order: a nilpotent shift for the polynomial part, then one
    block ``(1/q) I_r`` per pole. ``R / (z - q) = -R/q + z U (1 - z/q)^{-1} (-V/q^2)``
    with ``R = U V``, so poles outside the disc give eigenvalues inside it and
    vice versa.
    """
    tol = resolve(tol)
    p, m = spec.dims
    D = np.array(spec.constant)
    As, Bs, Cs = [], [], []
    if spec.poly_coeffs:
        a, b, c = _poly_block(list(spec.poly_coeffs), p, m)
        As.append(a)
        Bs.append(b)
        Cs.append(c)
    inner = sorted((pq for pq in spec.simple_poles if abs(pq[0]) > 1), key=lambda pq: -abs(pq[0]))
    outer = sorted((pq for pq in spec.simple_poles if abs(pq[0]) <= 1), key=lambda pq: -abs(pq[0]))
    for q, R in inner + outer:
        if q == 0:
            raise PoleAtOrigin("pole at z = 0")
        if abs(abs(q) - 1.0) <= tol.dichotomy:
            raise PoleOnCircle(f"pole {q} on the unit circle")
        U, V = _rank_factor(np.array(R), tol)
        r = U.shape[1]
        if r == 0:
            continue
        As.append(np.eye(r) / q)
        Bs.append(-V / q**2)
        Cs.append(U)
        D = D - R / q
    if not As:
        return StateSpaceSystem.static(D)
    return StateSpaceSystem(sla.block_diag(*As), np.vstack(Bs), np.hstack(Cs), D)


# ---------------------------------------------------------------- Laurent data


@dataclass(frozen=True)
class _SplitBlocks:
    A_minus: np.ndarray
    B_minus: np.ndarray
    C_minus: np.ndarray
    A_plus: np.ndarray
    B_plus: np.ndarray
    C_plus: np.ndarray
    D: np.ndarray = field(repr=False)


def _split_blocks(sys: StateSpaceSystem, info: DichotomyInfo) -> _SplitBlocks:
    if info.n != sys.n:
        raise DimensionMismatch("dichotomy info does not match the system")
    bm, bp = info.basis_minus, info.basis_plus
    k = bm.shape[1]
    T = np.hstack([bm, bp])
    Tinv = np.linalg.inv(T) if sys.n else T
    return _SplitBlocks(
        Tinv[:k] @ sys.A @ bm, Tinv[:k] @ sys.B, sys.C @ bm,
        Tinv[k:] @ sys.A @ bp, Tinv[k:] @ sys.B, sys.C @ bp,
        np.array(sys.D),
    )


def fourier_coefficients(sys: StateSpaceSystem, info: DichotomyInfo, k_min: int, k_max: int) -> list[np.ndarray]:
    """Laurent coefficients of ``F`` on the circle for ``k_min <= k <= k_max``.

    ``coeff(k) = C+ A+^{k-1} B+`` for ``k >= 1``, ``coeff(0) = D - C- A-^{-1} B-``
    and ``coeff(-k) = -C- A-^{-k-1} B-``.
    """
    if not k_min <= 0 <= k_max:
        raise ValueError("need k_min <= 0 <= k_max")
    s = _split_blocks(sys, info)
    out = {}
    if s.A_minus.shape[0]:
        Ainv = np.linalg.inv(s.A_minus)
        v = Ainv @ s.B_minus  # A-^{-1} B-
        out[0] = s.D - s.C_minus @ v
        for k in range(1, -k_min + 1):
            v = Ainv @ v
            out[-k] = -s.C_minus @ v
    else:
        out[0] = s.D.copy()
        for k in range(1, -k_min + 1):
            out[-k] = np.zeros_like(s.D)
    v = s.B_plus
    for k in range(1, k_max + 1):
        out[k] = s.C_plus @ v
        v = s.A_plus @ v
    return [out[k] for k in range(k_min, k_max + 1)]
