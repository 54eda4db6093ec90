"""Interior gap between the factorized solve and the finite-section solve as N grows.

The gap decays like ``rho^(N/3)``, where ``1 - rho`` is the smaller of the
spectral margins of ``A`` and ``A^x``. Symbols whose ``A^x`` sits near the
circle need many blocks.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from whfactor.generate import random_contractive_system
from whfactor.realization import dichotomy_info
from whfactor.toeplitz_app import build_section, interior_slice, solve_direct, solve_via_factorization
from whfactor.wiener_hopf import a_cross, factorize


@dataclass
class Config:
    count: int = 10
    seed: int = 9
    min_margin: float = 0.3
    sizes: tuple[int, ...] = (32, 64, 128, 256)


def run(cfg: Config) -> None:
    rng = np.random.default_rng(cfg.seed)
    print(f"{'margin A':>9} {'margin Ax':>10} " + " ".join(f"{'N=' + str(n):>9}" for n in cfg.sizes))
    done = 0
    while done < cfg.count:
        _, sys = random_contractive_system(rng, pole_gap=0.3)
        info = dichotomy_info(sys.A)
        if info.margin < cfg.min_margin:
            continue
        done += 1
        wh = factorize(sys)
        gaps = []
        for n in cfg.sizes:
            b = rng.standard_normal(n * sys.m) + 1j * rng.standard_normal(n * sys.m)
            x = solve_via_factorization(wh, b, n, tail=max(200, n))
            y = solve_direct(build_section(sys, info, n), b)
            mid = interior_slice(n, sys.m)
            gaps.append(np.abs(x[mid] - y[mid]).max())
        cross = dichotomy_info(a_cross(sys)).margin
        print(f"{info.margin:9.3f} {cross:10.3f} " + " ".join(f"{g:9.1e}" for g in gaps))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=Config.count)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    run(Config(count=a.count, seed=a.seed))
