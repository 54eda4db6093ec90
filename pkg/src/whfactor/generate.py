"""Random rational symbols and dichotomous matrices for tests and experiments."""

from __future__ import annotations

import numpy as np

from .realization import RationalSymbolSpec, StateSpaceSystem, realize_rational, sup_norm_on_circle


def _cgauss(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _low_rank(rng, p, m, r):
    return _cgauss(rng, p, r) @ _cgauss(rng, r, m)


def random_symbol(rng: np.random.Generator, max_states: int = 20, max_dim: int = 4,
                  pole_gap: float = 0.2, max_modulus: float = 3.0) -> RationalSymbolSpec:
    """Random square rational symbol with simple poles at least ``pole_gap`` from T.

    The realization of the result has at most ``max_states`` states.
    """
    m = int(rng.integers(1, max_dim + 1))
    budget = int(rng.integers(1, max_states + 1))
    poly = []
    if budget >= m and rng.random() < 0.3:
        degree = int(rng.integers(1, min(2, budget // m) + 1))
        poly = [_cgauss(rng, m, m) for _ in range(degree)]
        budget -= degree * m
    poles = []
    while budget > 0:
        r = int(rng.integers(1, min(m, budget) + 1))
        if rng.random() < 0.5:
            mod = rng.uniform(1.0 / max_modulus, 1.0 - pole_gap)
        else:
            mod = rng.uniform(1.0 + pole_gap, max_modulus)
        q = mod * np.exp(2j * np.pi * rng.random())
        poles.append((q, _low_rank(rng, m, m, r)))
        budget -= r
    return RationalSymbolSpec(_cgauss(rng, m, m), tuple(poly), tuple(poles))


def random_contractive_system(rng: np.random.Generator, target_norm: float = 0.9,
                              **kwargs) -> tuple[RationalSymbolSpec, StateSpaceSystem]:
    """Random symbol rescaled so its sup norm on the circle equals ``target_norm``."""
    spec = random_symbol(rng, **kwargs)
    sys = realize_rational(spec)
    gamma = sup_norm_on_circle(sys, 1024, refine=True)
    factor = target_norm / gamma
    return spec.scaled(factor), sys.scaled(factor)


def random_dichotomous_matrix(rng: np.random.Generator, n: int, margin: float = 0.05,
                              max_modulus: float = 3.0, cond: float = 10.0) -> np.ndarray:
    """Non-normal matrix whose eigenvalue moduli avoid ``(1 - margin, 1 + margin)``.

    Moduli are drawn uniformly from ``[0, 1 - margin]`` and
    ``[1 + margin, max_modulus]`` (each side with probability 1/2); the
    eigenvector matrix has condition number about ``cond``.
    """
    inside = rng.random(n) < 0.5
    mods = np.where(inside, rng.uniform(0.0, 1.0 - margin, n), rng.uniform(1.0 + margin, max_modulus, n))
    lam = mods * np.exp(2j * np.pi * rng.random(n))
    U, _ = np.linalg.qr(_cgauss(rng, n, n))
    W, _ = np.linalg.qr(_cgauss(rng, n, n))
    V = U @ np.diag(np.geomspace(1.0, cond, n)) @ W
    return V @ np.diag(lam) @ np.linalg.inv(V)
