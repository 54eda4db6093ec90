"""Factorize a family of random contractive symbols and summarize the diagnostics."""

import argparse
import time
from dataclasses import dataclass

import numpy as np

from whfactor.generate import random_contractive_system
from whfactor.kyp_krein import solve_kyp
from whfactor.verification import full_report
from whfactor.wiener_hopf import factorize


@dataclass
class Config:
    count: int = 100
    seed: int = 20240601
    max_states: int = 20
    max_dim: int = 4
    pole_gap: float = 0.2
    grid_points: int = 512


def run(cfg: Config) -> int:
    rng = np.random.default_rng(cfg.seed)
    start = time.perf_counter()
    failed = 0
    rows = []
    for i in range(cfg.count):
        _, sys = random_contractive_system(rng, max_states=cfg.max_states, max_dim=cfg.max_dim,
                                           pole_gap=cfg.pole_gap)
        cert = solve_kyp(sys)
        for side in ("right", "left"):
            rep = full_report(sys, factorize(sys, side), cert, cfg.grid_points)
            failed += not rep.passed
            rows.append((rep.factor_residual_max / (1 + rep.basis_cond), min(rep.containment_margins.values()),
                         rep.kyp_margin, rep.basis_cond))
    rows = np.array(rows)
    print(f"factorizations      : {len(rows)} ({failed} with failed checks)")
    print(f"residual/(1+cond)   : max {rows[:, 0].max():.2e}")
    print(f"containment margin  : min {rows[:, 1].min():.3f}")
    print(f"kyp margin          : min {rows[:, 2].min():.2e}")
    print(f"basis cond          : max {rows[:, 3].max():.2e}")
    print(f"elapsed             : {time.perf_counter() - start:.1f} s")
    return failed


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=Config.count)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    raise SystemExit(1 if run(Config(count=a.count, seed=a.seed)) else 0)
