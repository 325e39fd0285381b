"""Reference implementations used to cross-check the fast builders.

The element-wise builders evaluate every closed form with scalar loops and
:mod:`cmath`; they deliberately share no helpers with the vectorised code.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import Scheme, SystemConfig, PathParams, PathSet
from .channels import build_channel

__all__ = [
    "ComparisonReport",
    "BranchCrossingError",
    "elementwise_channel",
    "fd_derivative",
    "numeric_fim",
    "compare",
    "DEFAULT_STEPS",
]


class BranchCrossingError(ValueError):
    """A finite-difference stencil straddles a summation-limit breakpoint."""


@dataclass(frozen=True)
class ComparisonReport:
    max_abs_error: float
    relative_frobenius_error: float
    worst_entry_index: tuple
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.relative_frobenius_error <= self.tolerance


def _ceil_bins(tau, M, T):
    x = tau * M / T
    if abs(x - round(x)) < 1e-9:
        return int(round(x))
    return math.ceil(x)


def _e(x):
    return cmath.exp(2j * math.pi * x)


def _dir(phi, Z):
    s = 0j
    for z in range(Z):
        s += _e(phi * z / Z)
    return s


def _cpfree_loop(cfg, path):
    M, N = cfg.M, cfg.N
    T = 1.0 / cfg.delta_f
    h = path.a * cmath.exp(1j * path.phi)
    c = _ceil_bins(path.tau, M, T)
    out = np.zeros((M * N, M * N), dtype=complex)
    for n1 in range(N):
        for m1 in range(M):
            for n in (n1 - 1, n1):
                if n < 0:
                    continue
                lo, hi = (0, c - 1) if n == n1 - 1 else (c, M - 1)
                for m in range(M):
                    s = 0j
                    for i in range(lo, hi + 1):
                        s += _e((m - m1 + path.nu * T) * i / M)
                    coef = h / math.sqrt(M) * _e(path.nu * n1 * T - m * cfg.delta_f * path.tau)
                    out[n1 * M + m1, n * M + m] = coef * s
    return out


def _cpofdm_loop(cfg, path):
    M, N = cfg.M, cfg.N
    T = 1.0 / cfg.delta_f
    Tp = T + cfg.T_cp
    h = path.a * cmath.exp(1j * path.phi)
    out = np.zeros((M * N, M * N), dtype=complex)
    for n1 in range(N):
        for m1 in range(M):
            for m in range(M):
                val = (h / math.sqrt(M) * _e(-m * cfg.delta_f * path.tau)
                       * _e(path.nu * (n1 * Tp + cfg.T_cp)) * _dir(m - m1 + path.nu * T, M))
                out[n1 * M + m1, n1 * M + m] = val
    return out


def _zak_loop(cfg, path):
    M, N = cfg.M, cfg.N
    T = 1.0 / cfg.delta_f
    h = path.a * cmath.exp(1j * path.phi)
    c = _ceil_bins(path.tau, M, T)
    out = np.zeros((M * N, M * N), dtype=complex)
    for k1 in range(N):
        for l1 in range(M):
            for k in range(N):
                for l in range(M):
                    val = (h / math.sqrt(M * N) * _e(path.nu * l1 * T / M)
                           * _dir(l1 - l - path.tau * cfg.delta_f * M, M)
                           * _dir(k - k1 + path.nu * T * N, N))
                    if l1 < c:
                        val *= _e(path.nu * T) * _e(-k1 / N)
                    out[k1 * M + l1, k * M + l] = val
    return out


def _twostep_loop(cfg, path):
    M, N = cfg.M, cfg.N
    T = 1.0 / cfg.delta_f
    h = path.a * cmath.exp(1j * path.phi)
    c = _ceil_bins(path.tau, M, T)
    out = np.zeros((M * N, M * N), dtype=complex)
    for k1 in range(N):
        for l1 in range(M):
            for k in range(N):
                for l in range(M):
                    val = (h / (M * N) * _e(path.nu * path.tau)
                           * _dir(path.nu * N * T - k1 + k, N)
                           * _dir(l1 - l - path.tau * M * cfg.delta_f, M)
                           * _e(path.nu * l / (M * cfg.delta_f)))
                    if l >= M - c:
                        val *= _e(-(path.nu * T + k / N))
                    out[k1 * M + l1, k * M + l] = val
    return out


_LOOPS = {
    Scheme.CP_FREE_OFDM: _cpfree_loop,
    Scheme.CP_OFDM: _cpofdm_loop,
    Scheme.ZAK_OTFS: _zak_loop,
    Scheme.TWO_STEP_OTFS: _twostep_loop,
}


def elementwise_channel(scheme, cfg: SystemConfig, path: PathParams) -> np.ndarray:
    """Channel matrix from the closed forms, one entry at a time."""
    scheme = Scheme.parse(scheme)
    T = 1.0 / cfg.delta_f
    if path.tau < 0:
        raise ValueError("tau must be >= 0")
    if scheme is Scheme.CP_OFDM:
        if path.tau > cfg.T_cp:
            raise ValueError("CP-OFDM needs tau <= T_cp")
    elif path.tau >= T:
        raise ValueError("tau < T required")
    return _LOOPS[scheme](cfg, path)


DEFAULT_STEPS = {
    "tau": lambda cfg, path: 1e-4 * cfg.T / cfg.M,
    "nu": lambda cfg, path: 1e-4 * cfg.delta_f / cfg.N,
    "amp": lambda cfg, path: 1e-6 * path.a,
    "phase": lambda cfg, path: 1e-6,
}

_FIELD = {"amp": "a", "phase": "phi", "tau": "tau", "nu": "nu"}


def fd_derivative(scheme, cfg: SystemConfig, path: PathParams, which: str, step: float | None = None) -> np.ndarray:
    """Central finite difference ``(Psi(theta+h) - Psi(theta-h)) / 2h``.

    Raises :class:`BranchCrossingError` when ``tau +- h`` fall on different
    sides of a delay-bin breakpoint.
    """
    if which not in _FIELD:
        raise ValueError(f"unknown parameter {which!r}")
    if step is None:
        step = DEFAULT_STEPS[which](cfg, path)
    if not step > 0:
        raise ValueError("step must be positive")
    attr = _FIELD[which]
    x0 = getattr(path, attr)
    lo = path.replace(**{attr: x0 - step})
    hi = path.replace(**{attr: x0 + step})
    if which == "tau":
        if _ceil_bins(lo.tau, cfg.M, cfg.T) != _ceil_bins(hi.tau, cfg.M, cfg.T):
            raise BranchCrossingError(
                f"tau={path.tau} +- {step} crosses a delay-bin boundary; pick another point"
            )
    return (build_channel(scheme, cfg, hi) - build_channel(scheme, cfg, lo)) / (2 * step)


def numeric_fim(scheme, cfg: SystemConfig, paths: PathSet, pilots: np.ndarray, sigma2: float) -> np.ndarray:
    """FIM from finite-difference derivative matrices (Slepian-Bangs form)."""
    cols = []
    for path in paths:
        for which in ("amp", "phase", "tau", "nu"):
            cols.append(fd_derivative(scheme, cfg, path, which) @ pilots)
    U = np.stack(cols, axis=1)
    G = np.real(U.conj().T @ U) * (2.0 / sigma2)
    return np.triu(G) + np.triu(G, 1).T


def compare(A, B, tol: float) -> ComparisonReport:
    """Compare ``A`` against reference ``B``."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    diff = np.abs(A - B)
    worst = np.unravel_index(int(np.argmax(diff)), diff.shape) if diff.size else ()
    ref = np.linalg.norm(B)
    err = np.linalg.norm(A - B)
    rel = err / ref if ref > 0 else err
    return ComparisonReport(
        max_abs_error=float(diff.max()) if diff.size else 0.0,
        relative_frobenius_error=float(rel),
        worst_entry_index=tuple(int(i) for i in worst),
        tolerance=tol,
    )
