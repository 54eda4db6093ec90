"""Command-line entry point: ``whfactor <command> ...``.

JSON results go to stdout (or ``--output``); the human-readable report goes
to stderr. Exit codes: 0 success, 2 a mathematical check failed, 1 I/O or
computational error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import io
from .errors import CheckFailure, PencilSelectionFailed, WHError
from .generate import random_contractive_system, random_dichotomous_matrix, random_symbol
from .kyp_krein import inertia_check, solve_kyp, verify_adjoint_kyp, verify_kyp
from .realization import (
    dichotomy_info,
    realize_rational,
    spectral_projection_riesz,
    sup_norm_on_circle,
)
from .tolerances import Tolerances
from .toeplitz_app import build_section, interior_slice, solve_direct, solve_via_factorization
from .verification import analyticity_report, full_report
from .wiener_hopf import a_cross, factorize, split_identity_plus_d

EXIT_OK, EXIT_ERROR, EXIT_CHECK = 0, 1, 2


@dataclass
class JobConfig:
    command: str
    input: str | None = None
    output: str | None = None
    grid_points: int = 512
    quadrature_order: int = 256
    dsplit: str = "left_identity"
    side: str = "right"
    tolerances: dict = field(default_factory=dict)
    verify: str | None = None
    rhs: str | None = None
    n_blocks: int = 64
    tail: int = 200
    kyp: bool = True
    seed: int = 0
    kind: str = "system"

    @classmethod
    def from_mapping(cls, data: dict) -> "JobConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown job config keys: {sorted(unknown)}")
        return cls(**data)

    def tol(self) -> Tolerances:
        return Tolerances.from_env().replace(**{k: float(v) for k, v in self.tolerances.items()})


class _Failed(Exception):
    """A command finished but one of its checks did not pass."""


def _emit(cfg: JobConfig, payload) -> None:
    text = io.dump_json(payload, cfg.output)
    if cfg.output is None:
        print(text)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_system(cfg: JobConfig):
    return io.system_from_json(io.load_json(cfg.input))


# ---------------------------------------------------------------- commands


def cmd_check(cfg: JobConfig) -> None:
    tol = cfg.tol()
    sys_ = _load_system(cfg)
    info = dichotomy_info(sys_.A, tol)
    riesz_err = None
    if sys_.n:
        P = spectral_projection_riesz(sys_.A, cfg.quadrature_order, tol)
        riesz_err = float(np.linalg.norm(P - info.p_plus, 2))
    gamma = sup_norm_on_circle(sys_, cfg.grid_points, refine=True, tol=tol)
    out = {
        "dim_minus": info.dim_minus,
        "dim_plus": info.dim_plus,
        "margin": io._real(info.margin),
        "riesz_difference": riesz_err,
        "sup_norm": gamma,
        "norm_margin": 1.0 - gamma,
    }
    if sys_.p == sys_.m:
        cinfo = dichotomy_info(a_cross(sys_, tol), tol)
        out["a_cross"] = {"dim_minus": cinfo.dim_minus, "dim_plus": cinfo.dim_plus,
                          "margin": io._real(cinfo.margin)}
    out["ok"] = bool(gamma < 1.0 - tol.norm)
    _emit(cfg, out)
    for k, v in out.items():
        _log(f"{k:16s}: {v}")
    if not out["ok"]:
        raise _Failed(f"sup norm {gamma:.6g} is not below 1")


def cmd_factorize(cfg: JobConfig) -> None:
    tol = cfg.tol()
    sys_ = _load_system(cfg)
    split = split_identity_plus_d(sys_.D, cfg.dsplit, tol)
    wh = factorize(sys_, cfg.side, split, tol, cfg.grid_points)
    cert = None
    if cfg.kyp:
        try:
            cert = solve_kyp(sys_, tol, cfg.grid_points)
        except WHError as exc:
            _log(f"KYP certificate unavailable: {exc}")
    report = full_report(sys_, wh, cert, cfg.grid_points, tol)
    payload = {
        "factorization": io.factorization_to_json(wh),
        "report": report.to_dict(),
        "analyticity": [
            {"name": r.name, "pole_moduli": [io._real(p) for p in r.pole_moduli],
             "domain": r.domain.value, "ok": r.ok}
            for r in analyticity_report(wh, tol)
        ],
    }
    _emit(cfg, payload)
    _log(report.to_text())
    if not report.passed:
        raise _Failed("factorization diagnostics failed")


def cmd_kyp(cfg: JobConfig) -> None:
    tol = cfg.tol()
    sys_ = _load_system(cfg)
    if cfg.verify is not None:
        H = io.matrix_from_json(io.load_json(cfg.verify), (sys_.n, sys_.n))
        margin = verify_kyp(sys_, H, tol)
        adj = verify_adjoint_kyp(sys_, H, tol)
        out = {"margin": margin, "adjoint_margin": adj, "ok": bool(margin > 0 and adj > 0)}
        _emit(cfg, out)
        _log(f"kyp margin        : {margin:.6e}\nadjoint kyp margin: {adj:.6e}")
        if not out["ok"]:
            raise _Failed("supplied H does not solve the strict KYP inequality")
        return
    try:
        cert = solve_kyp(sys_, tol, cfg.grid_points)
    except PencilSelectionFailed as exc:
        raise PencilSelectionFailed(f"{exc}; supply a candidate with --verify H.json") from exc
    out = io.certificate_to_json(cert)
    out["inertia_ok"] = inertia_check(cert, dichotomy_info(sys_.A, tol))
    _emit(cfg, out)
    _log(f"kyp margin        : {cert.margin:.6e}\nadjoint kyp margin: {cert.adjoint_margin:.6e}\n"
         f"inertia (pos, neg): {cert.inertia}")
    if not out["inertia_ok"]:
        raise _Failed("inertia does not match the dichotomy")


def cmd_realize(cfg: JobConfig) -> None:
    spec = io.spec_from_json(io.load_json(cfg.input))
    sys_ = realize_rational(spec, cfg.tol())
    _emit(cfg, io.system_to_json(sys_))
    _log(f"realized with {sys_.n} states, {sys_.p}x{sys_.m} symbol")


def cmd_toeplitz(cfg: JobConfig) -> None:
    tol = cfg.tol()
    sys_ = _load_system(cfg)
    if cfg.rhs is None:
        raise ValueError("toeplitz needs --rhs")
    b = io.vector_from_json(io.load_json(cfg.rhs))
    wh = factorize(sys_, "right", split_identity_plus_d(sys_.D, cfg.dsplit, tol), tol, cfg.grid_points)
    x = solve_via_factorization(wh, b, cfg.n_blocks, cfg.tail, tol)
    section = build_section(sys_, dichotomy_info(sys_.A, tol), cfg.n_blocks)
    y = solve_direct(section, b)
    diff = np.abs(x - y)
    out = {
        "solution": io.vector_to_json(x),
        "direct": io.vector_to_json(y),
        "max_abs_diff": float(diff.max()),
        "interior_max_abs_diff": float(diff[interior_slice(cfg.n_blocks, sys_.m)].max(initial=0.0)),
    }
    _emit(cfg, out)
    _log(f"max |x - x_direct|          : {out['max_abs_diff']:.3e}\n"
         f"interior max |x - x_direct| : {out['interior_max_abs_diff']:.3e}")


def cmd_generate(cfg: JobConfig) -> None:
    rng = np.random.default_rng(cfg.seed)
    if cfg.kind == "system":
        _, sys_ = random_contractive_system(rng)
        payload = io.system_to_json(sys_)
    elif cfg.kind == "symbol":
        payload = io.spec_to_json(random_symbol(rng))
    elif cfg.kind == "matrix":
        payload = io.matrix_to_json(random_dichotomous_matrix(rng, int(rng.integers(1, 21))))
    else:
        raise ValueError(f"unknown kind {cfg.kind!r}")
    _emit(cfg, payload)


COMMANDS = {
    "check": cmd_check,
    "factorize": cmd_factorize,
    "kyp": cmd_kyp,
    "realize": cmd_realize,
    "toeplitz": cmd_toeplitz,
    "generate": cmd_generate,
}


# ---------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="whfactor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="input JSON file")
        p.add_argument("--output", "-o", help="write JSON here instead of stdout")
        p.add_argument("--config", help="JSON job config; command-line flags take precedence")
        p.add_argument("--grid-points", type=int)
        p.add_argument("--quadrature-order", type=int)
        p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                       help="tolerance override, e.g. --tol dichotomy=1e-8")
        return p

    common(sub.add_parser("check", help="dichotomy and norm checks"))
    p = common(sub.add_parser("factorize", help="canonical Wiener-Hopf factorization"))
    p.add_argument("--side", choices=["right", "left"])
    p.add_argument("--dsplit", choices=["left_identity", "right_identity", "symmetric_sqrt"])
    p.add_argument("--no-kyp", dest="kyp", action="store_false", default=None)
    p = common(sub.add_parser("kyp", help="solve or verify the strict KYP inequality"))
    p.add_argument("--verify", metavar="H_FILE")
    common(sub.add_parser("realize", help="realize a rational symbol"))
    p = common(sub.add_parser("toeplitz", help="solve a block Toeplitz section"))
    p.add_argument("--rhs", required=True)
    p.add_argument("--n-blocks", type=int)
    p.add_argument("--tail", type=int)
    p.add_argument("--dsplit", choices=["left_identity", "right_identity", "symmetric_sqrt"])
    p = common(sub.add_parser("generate", help="random test data"), needs_input=False)
    p.add_argument("--seed", type=int)
    p.add_argument("--kind", choices=["system", "symbol", "matrix"])
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    data = {}
    if args.config:
        data.update(io.load_json(args.config))
    data["command"] = args.command
    tol = dict(data.get("tolerances", {}))
    for item in args.tol:
        name, _, value = item.partition("=")
        tol[name] = float(value)
    data["tolerances"] = tol
    for key, value in vars(args).items():
        if key in ("config", "tol", "command") or value is None:
            continue
        data[key] = value
    cfg = JobConfig.from_mapping(data)
    cfg.tol()  # reject bad tolerance names early
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        COMMANDS[cfg.command](cfg)
    except (_Failed, CheckFailure) as exc:
        _log(f"check failed: {type(exc).__name__}: {exc}")
        return EXIT_CHECK
    except (WHError, OSError, ValueError, TypeError, KeyError, json.JSONDecodeError,
            np.linalg.LinAlgError) as exc:
        _log(f"error: {type(exc).__name__}: {exc}")
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
