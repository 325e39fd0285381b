"""Seeded consistency checks between the fast builders and the oracles."""

from __future__ import annotations

import math

import numpy as np

from .channels import build_channel, build_deriv
from .core import PARAM_NAMES, PathParams, PathSet, Scheme, SystemConfig, generate_pilots
from .fim import assemble_fim
from .oracle import compare, elementwise_channel, fd_derivative, numeric_fim

EQUIV_TOL = 1e-12
FD_TOL = 1e-6
FIM_TOL = 1e-5


def random_path(rng: np.random.Generator, cfg: SystemConfig, scheme) -> PathParams:
    """A path whose delay and Doppler sit away from grid points.

    The fractional parts of ``tau*M/T`` and ``nu*N*T`` are drawn from
    ``[0.1, 0.9]`` so that finite-difference stencils stay on one branch.
    """
    scheme = Scheme.parse(scheme)
    max_bin = cfg.M - 1
    if scheme is Scheme.CP_OFDM:
        max_bin = max(int(cfg.T_cp * cfg.M / cfg.T) - 1, 0)
    tau = (rng.integers(0, max_bin + 1) + rng.uniform(0.1, 0.9)) * cfg.T / cfg.M
    nu = (rng.integers(-cfg.N // 2, cfg.N // 2) + rng.uniform(0.1, 0.9)) * cfg.delta_f / cfg.N
    return PathParams(float(rng.uniform(0.2, 1.5)), float(rng.uniform(0, 2 * math.pi)), float(tau), float(nu))


def random_config(rng: np.random.Generator, M: int = 8, N: int = 8) -> SystemConfig:
    scs = float(rng.choice([15e3, 30e3, 60e3]))
    return SystemConfig(M, N, scs, T_cp=0.25 / scs)


def check_equivalence(scheme, n_configs=20, M=8, N=8, seed=0):
    """Largest relative Frobenius error of fast vs element-wise builders."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_configs):
        cfg = random_config(rng, M, N)
        path = random_path(rng, cfg, scheme)
        rep = compare(build_channel(scheme, cfg, path), elementwise_channel(scheme, cfg, path), EQUIV_TOL)
        worst = max(worst, rep.relative_frobenius_error)
    return worst


def check_derivatives(scheme, n_configs=10, M=8, N=8, seed=1):
    """``{param: worst relative error}`` of analytic vs finite-difference derivatives."""
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(PARAM_NAMES, 0.0)
    for _ in range(n_configs):
        cfg = random_config(rng, M, N)
        path = random_path(rng, cfg, scheme)
        for which in PARAM_NAMES:
            rep = compare(build_deriv(scheme, cfg, path, which), fd_derivative(scheme, cfg, path, which), FD_TOL)
            worst[which] = max(worst[which], rep.relative_frobenius_error)
    return worst


def check_fim(scheme, n_paths=2, M=8, N=8, seed=2):
    rng = np.random.default_rng(seed)
    cfg = random_config(rng, M, N)
    paths = PathSet(random_path(rng, cfg, scheme) for _ in range(n_paths))
    x = generate_pilots(M, N, 42)
    return compare(assemble_fim(scheme, cfg, paths, x, 1.0), numeric_fim(scheme, cfg, paths, x, 1.0), FIM_TOL)


def run_selfcheck(n_equiv=5, n_deriv=3, M=6, N=6, echo=print) -> bool:
    ok = True
    for scheme in Scheme:
        err = check_equivalence(scheme, n_equiv, M, N)
        passed = err <= EQUIV_TOL
        ok &= passed
        echo(f"{'PASS' if passed else 'FAIL'} equivalence {scheme.value}: {err:.2e} (tol {EQUIV_TOL:g})")
        for which, err in check_derivatives(scheme, n_deriv, M, N).items():
            passed = err <= FD_TOL
            ok &= passed
            echo(f"{'PASS' if passed else 'FAIL'} d/d{which} {scheme.value}: {err:.2e} (tol {FD_TOL:g})")
        rep = check_fim(scheme, 2, M, N)
        ok &= rep.passed
        echo(f"{'PASS' if rep.passed else 'FAIL'} fim {scheme.value}: {rep.relative_frobenius_error:.2e} (tol {FIM_TOL:g})")
    return bool(ok)
