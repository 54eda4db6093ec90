"""Diagnostics for computed factorizations.

Everything here re-derives quantities from the realizations themselves, by
pointwise evaluation on the circle and by eigenvalue computations, so it can
serve as an independent check of :mod:`whfactor.wiener_hopf`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import WHError
from .kyp_krein import (
    KypCertificate,
    bicontraction_margins,
    inertia_check,
    verify_adjoint_kyp,
    verify_kyp,
)
from .realization import StateSpaceSystem, circle_nodes, dichotomy_info, eval_transfer_many, sup_norm_on_circle
from .tolerances import Tolerances, resolve
from .wiener_hopf import Domain, FactorRealization, WienerHopfFactorization, a_cross, eval_factor_many


def _max_spectral_norm(stack: np.ndarray) -> float:
    if stack.size == 0:
        return 0.0
    return float(np.max(np.linalg.svd(stack, compute_uv=False)[:, 0]))


def residual_on_circle(sys: StateSpaceSystem, wh: WienerHopfFactorization,
                       grid_points: int = 512, tol: Tolerances | None = None) -> tuple[float, float]:
    """``(max |G - product|, max |factor * inverse - I|)`` over equispaced circle nodes.

    The second number is the worst of the two factor/inverse pairs.
    """
    if grid_points < 64:
        raise ValueError("grid_points must be at least 64")
    z = circle_nodes(grid_points)
    m = sys.m
    G = np.eye(m) + eval_transfer_many(sys, z, tol)
    first, second = wh.ordered_factors()
    prod = eval_factor_many(first, z, tol) @ eval_factor_many(second, z, tol)
    res = _max_spectral_norm(G - prod)
    inv = 0.0
    for f, finv in ((wh.factor_outer, wh.inverse_outer), (wh.factor_inner, wh.inverse_inner)):
        e = eval_factor_many(f, z, tol) @ eval_factor_many(finv, z, tol) - np.eye(m)
        inv = max(inv, _max_spectral_norm(e))
    return res, inv


@dataclass(frozen=True)
class FactorDomainReport:
    name: str
    pole_moduli: tuple[float, ...]
    domain: Domain
    ok: bool


def analyticity_report(wh: WienerHopfFactorization, tol: Tolerances | None = None) -> list[FactorDomainReport]:
    """Pole moduli (reciprocal eigenvalue moduli of ``amat``) of the four factors.

    Inner factors need every pole outside the closed disc, outer factors
    every pole inside the open disc, both with margin ``tol.dichotomy``.
    """
    tol = resolve(tol)
    out = []
    for name, f in wh.factors().items():
        lam = np.abs(np.linalg.eigvals(f.amat)) if f.states else np.zeros(0)
        with np.errstate(divide="ignore"):
            poles = np.sort(np.where(lam > 0, 1.0 / np.where(lam > 0, lam, 1.0), np.inf))
        if f.domain is Domain.INNER:
            ok = bool(np.all(poles >= 1.0 + tol.dichotomy))
        else:
            ok = bool(np.all(poles <= 1.0 - tol.dichotomy))
        out.append(FactorDomainReport(name, tuple(float(p) for p in poles), f.domain, ok))
    return out


def containment_margin(f: FactorRealization) -> float:
    """Distance by which the spectrum of ``amat`` clears the unit circle on the required side."""
    if f.states == 0:
        return 1.0 if f.domain is Domain.INNER else math.inf
    mods = np.abs(np.linalg.eigvals(f.amat))
    return float(1.0 - mods.max()) if f.domain is Domain.INNER else float(mods.min() - 1.0)


@dataclass
class DiagnosticsReport:
    sup_norm: float | None = None
    norm_margin: float | None = None
    factor_residual_max: float | None = None
    inverse_residual_max: float | None = None
    containment_margins: dict[str, float] | None = None
    kyp_margin: float | None = None
    adjoint_kyp_margin: float | None = None
    bicontraction_margins_a: tuple[float, float] | None = None
    bicontraction_margins_across: tuple[float, float] | None = None
    inertia_ok: bool | None = None
    basis_cond: float | None = None
    grid_points: int = 512
    checks: dict[str, bool] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.errors and all(self.checks.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return _jsonable(d)

    def to_text(self) -> str:
        """Stable ``key: value`` lines, keys padded to a common width."""
        rows = []
        for key, value in self.to_dict().items():
            if isinstance(value, dict):
                for sub, v in value.items():
                    rows.append((f"{key}.{sub}", v))
            else:
                rows.append((key, value))
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)} : {_fmt(v)}" for k, v in rows)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6e}"
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v)
    if v is None:
        return "-"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return _jsonable(obj.item())
    if isinstance(obj, Domain):
        return obj.value
    return obj


def full_report(sys: StateSpaceSystem, wh: WienerHopfFactorization | None,
                cert: KypCertificate | None = None, grid_points: int = 512,
                tol: Tolerances | None = None) -> DiagnosticsReport:
    """Run every diagnostic; a failing or crashing check is recorded and the rest still run."""
    tol = resolve(tol)
    rep = DiagnosticsReport(grid_points=grid_points)

    def attempt(name, fn):
        try:
            fn()
        except (WHError, ValueError, np.linalg.LinAlgError) as exc:
            rep.errors[name] = f"{type(exc).__name__}: {exc}"

    def norm():
        rep.sup_norm = sup_norm_on_circle(sys, grid_points, refine=True, tol=tol)
        rep.norm_margin = 1.0 - rep.sup_norm
        rep.checks["norm"] = rep.norm_margin > tol.norm

    attempt("norm", norm)

    if wh is not None:
        rep.basis_cond = wh.basis_cond

        def residuals():
            res, inv = residual_on_circle(sys, wh, grid_points, tol)
            rep.factor_residual_max, rep.inverse_residual_max = res, inv
            bound = 1e-8 * (1.0 + wh.basis_cond)
            rep.checks["factor_residual"] = res <= bound
            rep.checks["inverse_residual"] = inv <= bound

        def containment():
            rep.containment_margins = {k: containment_margin(f) for k, f in wh.factors().items()}
            rep.checks["containment"] = all(v >= tol.dichotomy for v in rep.containment_margins.values())

        attempt("residuals", residuals)
        attempt("containment", containment)

    if cert is not None:
        def kyp():
            rep.kyp_margin = verify_kyp(sys, cert.H, tol)
            rep.adjoint_kyp_margin = verify_adjoint_kyp(sys, cert.H, tol)
            rep.checks["kyp"] = rep.kyp_margin > 0
            rep.checks["adjoint_kyp"] = rep.adjoint_kyp_margin > 0

        def bicontraction():
            rep.bicontraction_margins_a = bicontraction_margins(sys.A, cert.H, tol)
            rep.checks["bicontraction_a"] = min(rep.bicontraction_margins_a) > 0
            rep.bicontraction_margins_across = bicontraction_margins(a_cross(sys, tol), cert.H, tol)
            rep.checks["bicontraction_across"] = min(rep.bicontraction_margins_across) > 0

        def inertia():
            rep.inertia_ok = inertia_check(cert, dichotomy_info(sys.A, tol))
            rep.checks["inertia"] = rep.inertia_ok

        attempt("kyp", kyp)
        attempt("bicontraction", bicontraction)
        attempt("inertia", inertia)
    return rep
