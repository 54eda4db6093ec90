"""Canonical Wiener-Hopf factorization of I + F(z) on the unit circle via state-space realizations."""

from .errors import *  # noqa: F401,F403
from .kyp_krein import (
    KreinSpace,
    KypCertificate,
    bicontraction_margins,
    inertia_check,
    krein_adjoint,
    solve_kyp,
    verify_adjoint_kyp,
    verify_kyp,
)
from .realization import (
    DichotomyInfo,
    RationalSymbolSpec,
    StateSpaceSystem,
    dichotomy_info,
    eval_transfer,
    fourier_coefficients,
    realize_rational,
    spectral_projection_ordered,
    spectral_projection_riesz,
    sup_norm_on_circle,
)
from .tolerances import DEFAULT as DEFAULT_TOLERANCES, Tolerances
from .toeplitz_app import ToeplitzSection, build_section, solve_direct, solve_via_factorization
from .verification import DiagnosticsReport, analyticity_report, full_report, residual_on_circle
from .wiener_hopf import (
    CrossData,
    Domain,
    DSplit,
    FactorRealization,
    Side,
    SplitStrategy,
    WienerHopfFactorization,
    a_cross,
    eval_factor,
    factorize,
    inverse_system,
    matching_projection,
    split_identity_plus_d,
)

__version__ = "0.1.0"
