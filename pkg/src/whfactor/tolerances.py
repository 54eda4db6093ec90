"""Numerical tolerances shared by all modules."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    dichotomy: float = 1e-6   # reject eigenvalues of A closer than this to T
    proj: float = 1e-8        # idempotence of spectral projections
    cross: float = 1e-8       # Riesz vs ordered projection agreement
    rank: float = 1e-12       # relative singular value cutoff for residues
    sing: float = 1e-13       # reciprocal condition number cutoff
    sym: float = 1e-10        # selfadjointness of Gram operators
    norm: float = 1e-6        # required gap of sup norm below 1
    match: float = 1e8        # max condition number of matched basis
    tail: float = 1e-12       # truncated Laurent coefficient norm

    def replace(self, **changes) -> "Tolerances":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_env(cls, environ=None, prefix: str = "WHFACTOR_TOL_") -> "Tolerances":
        """Defaults overridden by ``WHFACTOR_TOL_<NAME>`` variables."""
        environ = os.environ if environ is None else environ
        names = {f.name for f in dataclasses.fields(cls)}
        changes = {}
        for key, value in environ.items():
            if not key.startswith(prefix):
                continue
            name = key[len(prefix):].lower()
            if name not in names:
                raise ValueError(f"unknown tolerance override {key}")
            changes[name] = float(value)
        return cls(**changes)


DEFAULT = Tolerances()


def resolve(tol: Tolerances | None) -> Tolerances:
    return DEFAULT if tol is None else tol
