"""Quadrature error of the trapezoidal Riesz projection against the ordered Schur projection.

Prints, for each spectral margin, the worst error over random matrices at
each quadrature order next to the prediction ``(1 - margin)^order``.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from whfactor.generate import random_dichotomous_matrix
from whfactor.realization import spectral_projection_ordered, spectral_projection_riesz


@dataclass
class Config:
    margins: tuple[float, ...] = (0.05, 0.1, 0.2)
    orders: tuple[int, ...] = (64, 128, 256, 512, 1024)
    trials: int = 50
    max_n: int = 20
    seed: int = 0


def run(cfg: Config) -> None:
    rng = np.random.default_rng(cfg.seed)
    print(f"{'margin':>7} {'order':>6} {'max error':>10} {'predicted':>10}")
    for margin in cfg.margins:
        mats = [random_dichotomous_matrix(rng, int(rng.integers(1, cfg.max_n + 1)), margin) for _ in range(cfg.trials)]
        exact = [spectral_projection_ordered(A) for A in mats]
        for order in cfg.orders:
            err = max(np.linalg.norm(spectral_projection_riesz(A, order) - P, 2) for A, P in zip(mats, exact))
            print(f"{margin:7.2f} {order:6d} {err:10.2e} {(1 - margin) ** order:10.2e}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    run(Config(trials=a.trials, seed=a.seed))
