"""Canonical Wiener-Hopf factorization of ``G(z) = I + F(z)`` on the unit circle.

Right factorization ``G = V_- V_+`` uses the decomposition
``X = X_- (+) X_+^x`` of the state space into the exterior spectral subspace
of ``A`` and the interior spectral subspace of ``A^x = A - B (I+D)^{-1} C``.
The left factorization ``G = W_+ W_-`` uses ``X = X_+ (+) X_-^x``.

In a basis adapted to ``X = L (+) L^x`` (``L`` invariant under ``A``, ``L^x``
invariant under ``A^x``) the matrix ``A`` is block upper triangular and
``A^x`` is block lower triangular, and with ``I + D = D1 D2``::

    W1(z)    = D1 + z C1 (I - z A11)^{-1} B1 D2^{-1}
    W2(z)    = D2 + z D1^{-1} C2 (I - z A22)^{-1} B2
    W1(z)^-1 = D1^{-1} - z D1^{-1} C1 (I - z A11x)^{-1} B1 (I+D)^{-1}
    W2(z)^-1 = D2^{-1} - z (I+D)^{-1} C2 (I - z A22x)^{-1} B2 D2^{-1}

with ``G = W1 W2``. For the right side ``L = X_-`` so ``W1 = V_-`` and
``W2 = V_+``; for the left side ``L = X_+`` so ``W1 = W_+`` and ``W2 = W_-``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (
    DimensionMismatch,
    MatchingFailed,
    NormNotStrictlyContractive,
    SingularIPlusD,
    SingularResolvent,
    SpectralContainmentViolated,
    SqrtBranchCut,
)
from .realization import (
    DichotomyInfo,
    StateSpaceSystem,
    _frozen,
    _require_dichotomous,
    as_matrix,
    dichotomy_info,
    eval_transfer_many,
    oblique_projection,
    sup_norm_on_circle,
)
from .tolerances import Tolerances, resolve


class Side(str, enum.Enum):
    RIGHT = "right"
    LEFT = "left"


class SplitStrategy(str, enum.Enum):
    LEFT_IDENTITY = "left_identity"
    RIGHT_IDENTITY = "right_identity"
    SYMMETRIC_SQRT = "symmetric_sqrt"


class Domain(str, enum.Enum):
    INNER = "inner"  # analytic on a neighbourhood of the closed disc
    OUTER = "outer"  # analytic on a neighbourhood of the closed exterior


@dataclass(frozen=True)
class CrossData:
    a_cross: np.ndarray
    info_cross: DichotomyInfo
    id_plus_d_inv: np.ndarray


@dataclass(frozen=True)
class DSplit:
    d1: np.ndarray
    d2: np.ndarray
    strategy: SplitStrategy


@dataclass(frozen=True)
class FactorRealization:
    """``dterm + z cvec (I - z amat)^{-1} bvec`` with a certified analyticity domain."""

    dterm: np.ndarray
    cvec: np.ndarray
    amat: np.ndarray
    bvec: np.ndarray
    domain: Domain
    spectrum_bound: float

    @property
    def states(self) -> int:
        return self.amat.shape[0]

    def as_system(self) -> StateSpaceSystem:
        return StateSpaceSystem(self.amat, self.bvec, self.cvec, self.dterm)


@dataclass(frozen=True)
class WienerHopfFactorization:
    """Both factors and both inverse factors of one canonical factorization.

    For ``side == RIGHT`` the product is ``G = factor_outer @ factor_inner``;
    for ``LEFT`` it is ``G = factor_inner @ factor_outer``.
    """

    side: Side
    factor_outer: FactorRealization
    factor_inner: FactorRealization
    inverse_outer: FactorRealization
    inverse_inner: FactorRealization
    projection: np.ndarray
    basis_cond: float
    dsplit: DSplit

    def factors(self) -> dict[str, FactorRealization]:
        return {
            "factor_outer": self.factor_outer,
            "factor_inner": self.factor_inner,
            "inverse_outer": self.inverse_outer,
            "inverse_inner": self.inverse_inner,
        }

    def ordered_factors(self) -> tuple[FactorRealization, FactorRealization]:
        """The two factors in product order."""
        if self.side is Side.RIGHT:
            return self.factor_outer, self.factor_inner
        return self.factor_inner, self.factor_outer


# ---------------------------------------------------------------- building blocks


def _id_plus_d_inverse(D: np.ndarray, tol: Tolerances) -> np.ndarray:
    D = as_matrix(D, "D")
    if D.shape[0] != D.shape[1]:
        raise DimensionMismatch("G must be square: D is not")
    E = np.eye(D.shape[0]) + D
    if not 1.0 / np.linalg.cond(E) >= tol.sing:
        raise SingularIPlusD("I + D is singular")
    return np.linalg.inv(E)


def a_cross(sys: StateSpaceSystem, tol: Tolerances | None = None) -> np.ndarray:
    """Main operator ``A - B (I+D)^{-1} C`` of the inverse system."""
    tol = resolve(tol)
    E_inv = _id_plus_d_inverse(sys.D, tol)
    return sys.A - sys.B @ E_inv @ sys.C


def cross_data(sys: StateSpaceSystem, tol: Tolerances | None = None) -> CrossData:
    tol = resolve(tol)
    E_inv = _id_plus_d_inverse(sys.D, tol)
    Ax = sys.A - sys.B @ E_inv @ sys.C
    return CrossData(_frozen(Ax), dichotomy_info(Ax, tol), _frozen(E_inv))


def inverse_system(sys: StateSpaceSystem, tol: Tolerances | None = None) -> StateSpaceSystem:
    """Realization of ``G^{-1} - I`` where ``G = I + F``.

    Main operator ``A^x``, control ``B (I+D)^{-1}``, observation
    ``-(I+D)^{-1} C``, feedthrough ``(I+D)^{-1} - I``.
    """
    tol = resolve(tol)
    E_inv = _id_plus_d_inverse(sys.D, tol)
    return StateSpaceSystem(
        sys.A - sys.B @ E_inv @ sys.C,
        sys.B @ E_inv,
        -E_inv @ sys.C,
        E_inv - np.eye(sys.m),
    )


def matching_projection(info: DichotomyInfo, cross: CrossData, side: Side | str,
                        tol: Tolerances | None = None) -> tuple[np.ndarray, float]:
    """Projection matching the dichotomous pairs of ``A`` and ``A^x``.

    Right: onto ``X_+^x`` along ``X_-``. Left: onto ``X_-^x`` along ``X_+``.
    Returns the projection and the condition number of the basis matrix.
    """
    tol = resolve(tol)
    along, onto = _matched_bases(info, cross, Side(side))
    if along.shape[1] + onto.shape[1] != info.n:
        raise MatchingFailed(
            f"dimensions {along.shape[1]} + {onto.shape[1]} do not add up to {info.n}"
        )
    P, cond = oblique_projection(along, onto)
    if not cond <= tol.match:
        raise MatchingFailed(f"matched basis has condition number {cond:.3g}")
    return P, cond


def _matched_bases(info: DichotomyInfo, cross: CrossData, side: Side):
    if info.n != cross.info_cross.n:
        raise DimensionMismatch("dichotomy infos have different sizes")
    if side is Side.RIGHT:
        return info.basis_minus, cross.info_cross.basis_plus
    return info.basis_plus, cross.info_cross.basis_minus


def split_identity_plus_d(D, strategy: SplitStrategy | str = SplitStrategy.LEFT_IDENTITY,
                          tol: Tolerances | None = None) -> DSplit:
    """Factor ``I + D = D1 D2`` with both factors invertible."""
    tol = resolve(tol)
    D = as_matrix(D, "D")
    strategy = SplitStrategy(strategy)
    _id_plus_d_inverse(D, tol)
    E = np.eye(D.shape[0]) + D
    I = np.eye(D.shape[0], dtype=complex)
    if strategy is SplitStrategy.LEFT_IDENTITY:
        return DSplit(_frozen(E), _frozen(I), strategy)
    if strategy is SplitStrategy.RIGHT_IDENTITY:
        return DSplit(_frozen(I), _frozen(E), strategy)
    ev = np.linalg.eigvals(E)
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.any((ev.real <= 0) & (np.abs(ev.imag) <= 1e-12 * scale)):
        raise SqrtBranchCut("I + D has an eigenvalue on the closed negative real axis")
    R = sla.sqrtm(E)
    return DSplit(_frozen(R), _frozen(R), strategy)


def _spectral_bound(amat: np.ndarray, domain: Domain) -> float:
    if amat.shape[0] == 0:
        return 0.0 if domain is Domain.INNER else math.inf
    mods = np.abs(np.linalg.eigvals(amat))
    return float(mods.max() if domain is Domain.INNER else mods.min())


def _factor(dterm, cvec, amat, bvec, domain: Domain, tol: Tolerances) -> FactorRealization:
    bound = _spectral_bound(amat, domain)
    ok = bound <= 1.0 - tol.dichotomy if domain is Domain.INNER else bound >= 1.0 + tol.dichotomy
    if not ok:
        raise SpectralContainmentViolated(
            f"{domain.value} factor has eigenvalue modulus {bound:.6g} on the wrong side of T"
        )
    return FactorRealization(_frozen(dterm), _frozen(cvec), _frozen(amat), _frozen(bvec), domain, bound)


# ---------------------------------------------------------------- factorization


def factorize(sys: StateSpaceSystem, side: Side | str = Side.RIGHT, dsplit: DSplit | None = None,
              tol: Tolerances | None = None, grid_points: int = 512) -> WienerHopfFactorization:
    """Right (``G = V_- V_+``) or left (``G = W_+ W_-``) canonical factorization of ``I + F``.

    Raises
    ------
    NotDichotomous, SingularIPlusD, NormNotStrictlyContractive, MatchingFailed
        When a hypothesis fails numerically.
    SpectralContainmentViolated
        When a computed factor lands on the wrong side of the circle; this
        signals a tolerance breach rather than a failure of the theory.
    """
    tol = resolve(tol)
    side = Side(side)
    if sys.p != sys.m:
        raise DimensionMismatch("factorization needs a square symbol")
    _require_dichotomous(sys.A, tol)
    E_inv = _id_plus_d_inverse(sys.D, tol)
    gamma = sup_norm_on_circle(sys, grid_points, refine=True, tol=tol)
    if not gamma < 1.0 - tol.norm:
        raise NormNotStrictlyContractive(f"sup norm on the circle is {gamma:.6g}")
    if dsplit is None:
        dsplit = split_identity_plus_d(sys.D, SplitStrategy.LEFT_IDENTITY, tol)

    info = dichotomy_info(sys.A, tol)
    cross = cross_data(sys, tol)
    projection, cond = matching_projection(info, cross, side, tol)
    L, Lx = _matched_bases(info, cross, side)

    k = L.shape[1]
    n = sys.n
    if n:
        T = np.hstack([L, Lx])
        Tinv = np.linalg.inv(T)
        At = Tinv @ sys.A @ T
        Axt = Tinv @ cross.a_cross @ T
        Bt = Tinv @ sys.B
        Ct = sys.C @ T
    else:
        At = Axt = np.zeros((0, 0), dtype=complex)
        Bt, Ct = np.array(sys.B), np.array(sys.C)
    A11, A22 = At[:k, :k], At[k:, k:]
    Ax11, Ax22 = Axt[:k, :k], Axt[k:, k:]
    B1, B2 = Bt[:k], Bt[k:]
    C1, C2 = Ct[:, :k], Ct[:, k:]

    D1, D2 = dsplit.d1, dsplit.d2
    if np.linalg.norm(D1 @ D2 - (np.eye(sys.m) + sys.D)) > 1e-12 * max(1.0, np.linalg.norm(D1 @ D2)):
        raise DimensionMismatch("D-split does not multiply to I + D")
    D1i, D2i = np.linalg.inv(D1), np.linalg.inv(D2)

    # W1 lives on L (first block), W2 on L^x (second block)
    first_domain, second_domain = (
        (Domain.OUTER, Domain.INNER) if side is Side.RIGHT else (Domain.INNER, Domain.OUTER)
    )
    W1 = _factor(D1, C1, A11, B1 @ D2i, first_domain, tol)
    W2 = _factor(D2, D1i @ C2, A22, B2, second_domain, tol)
    W1inv = _factor(D1i, -D1i @ C1, Ax11, B1 @ E_inv, first_domain, tol)
    W2inv = _factor(D2i, -E_inv @ C2, Ax22, B2 @ D2i, second_domain, tol)

    if side is Side.RIGHT:
        outer, inner, outer_inv, inner_inv = W1, W2, W1inv, W2inv
    else:
        inner, outer, inner_inv, outer_inv = W1, W2, W1inv, W2inv
    return WienerHopfFactorization(side, outer, inner, outer_inv, inner_inv,
                                   _frozen(projection), cond, dsplit)


def eval_factor(f: FactorRealization, z: complex, tol: Tolerances | None = None) -> np.ndarray:
    """Evaluate ``dterm + z cvec (I - z amat)^{-1} bvec``.

    Raises
    ------
    SingularResolvent
        At a pole ``z = 1/lambda`` of the factor; the pole is attached.
    """
    tol = resolve(tol)
    z = complex(z)
    if z == 0 or f.states == 0:
        return np.array(f.dterm)
    M = np.eye(f.states) - z * f.amat
    if not 1.0 / np.linalg.cond(M) >= tol.sing:
        lam = np.linalg.eigvals(f.amat)
        lam = lam[np.argmin(np.abs(1 - z * lam))]
        raise SingularResolvent(f"z = {z} is a pole of the factor", pole=1.0 / lam)
    return f.dterm + z * f.cvec @ np.linalg.solve(M, f.bvec)


def eval_factor_many(f: FactorRealization, zs, tol: Tolerances | None = None) -> np.ndarray:
    return eval_transfer_many(f.as_system(), zs, tol)


def factor_laurent(f: FactorRealization, count: int) -> list[np.ndarray]:
    """First ``count`` Laurent coefficients on the circle.

    Inner factors expand in nonnegative powers (entry ``k`` is the
    coefficient of ``z^k``); outer factors in nonpositive powers (entry ``k``
    is the coefficient of ``z^{-k}``).
    """
    out = []
    if f.domain is Domain.INNER:
        out.append(np.array(f.dterm))
        v = f.bvec
        for _ in range(1, count):
            out.append(f.cvec @ v)
            v = f.amat @ v
        return out
    if f.states == 0:
        return [np.array(f.dterm)] + [np.zeros_like(f.dterm) for _ in range(1, count)]
    Ainv = np.linalg.inv(f.amat)
    v = Ainv @ f.bvec
    out.append(f.dterm - f.cvec @ v)
    for _ in range(1, count):
        v = Ainv @ v
        out.append(-f.cvec @ v)
    return out
