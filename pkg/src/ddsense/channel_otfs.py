"""Delay-Doppler channel matrices for Zak-OTFS and two-step OTFS.

Row index ``k'*M + l'`` (received Doppler bin, delay bin), column index
``k*M + l`` (transmitted Doppler bin, delay bin).  Both closed forms assume a
rectangular pulse and ``tau < T`` so that only the current and the preceding
symbol overlap.
"""

from __future__ import annotations

import numpy as np

from .channel_ofdm import trivial_deriv, _check_which
from .core import SystemConfig, PathParams, delay_bins
from .kernels import difference_table

__all__ = ["build_zak", "build_zak_deriv", "build_twostep", "build_twostep_deriv"]


def _check_delay(cfg, path, name):
    if path.tau < 0 or path.tau >= cfg.T:
        raise ValueError(f"{name} needs 0 <= tau < T (tau={path.tau}, T={cfg.T})")


def _zak(cfg: SystemConfig, path: PathParams, which: str | None) -> np.ndarray:
    M, N, T = cfg.M, cfg.N, cfg.T
    _check_delay(cfg, path, "Zak-OTFS")
    c = delay_bins(cfg, path.tau)
    l = np.arange(M)
    k = np.arange(N)
    off_delay = -path.tau * cfg.delta_f * M  # sums over l' - l - tau*M*df
    off_dopp = path.nu * T * N  # sums over k - k' + nu*N*T

    lead = np.exp(2j * np.pi * path.nu * l * T / M)  # [l']
    # delay bins l' < c wrap into the previous symbol
    wrap = np.exp(2j * np.pi * (path.nu * T - k / N))  # [k']
    branch = np.where(l[None, :] < c, wrap[:, None], 1.0)  # [k', l']

    dl = difference_table(off_delay, M, 0, M - 1).T
    dk = difference_table(off_dopp, N, 0, N - 1)
    scale = path.gain / np.sqrt(M * N)

    if which is None:
        blk = (scale * lead[:, None] * dl)[None, :, None, :] * dk[:, None, :, None]
        blk = blk * branch[:, :, None, None]
    elif which == "tau":
        dl_tau = (-2j * np.pi * cfg.delta_f) * difference_table(off_delay, M, 0, M - 1, 0.0, 1.0).T
        blk = (scale * lead[:, None] * dl_tau)[None, :, None, :] * dk[:, None, :, None]
        blk = blk * branch[:, :, None, None]
    else:  # nu
        dk_nu = (2j * np.pi * T) * difference_table(off_dopp, N, 0, N - 1, 0.0, 1.0)
        base = (scale * lead[:, None] * dl)[None, :, None, :]  # [1, l', 1, l]
        rate = 2j * np.pi * (l * T / M)[None, :] + np.where(l[None, :] < c, 2j * np.pi * T, 0.0)  # [1, l']
        blk = base * (dk[:, None, :, None] * rate[:, :, None, None] + dk_nu[:, None, :, None])
        blk = blk * branch[:, :, None, None]
    return blk.reshape(M * N, M * N)


def build_zak(cfg: SystemConfig, path: PathParams) -> np.ndarray:
    """Zak-OTFS channel matrix for one path.

    Delay bins ``l' < ceil(tau*M/T)`` take the extra phase
    ``exp(j2pi(nu*T - k'/N))``; an integer ``tau*M/T = k`` puts ``l' = k``
    in the unwrapped branch.
    """
    return _zak(cfg, path, None)


def build_zak_deriv(cfg: SystemConfig, path: PathParams, which: str) -> np.ndarray:
    _check_which(which)
    if which in ("amp", "phase"):
        return trivial_deriv(build_zak(cfg, path), path, which)
    return _zak(cfg, path, which)


def _twostep(cfg: SystemConfig, path: PathParams, which: str | None) -> np.ndarray:
    M, N, T = cfg.M, cfg.N, cfg.T
    _check_delay(cfg, path, "two-step OTFS")
    c = delay_bins(cfg, path.tau)
    l = np.arange(M)
    k = np.arange(N)
    off_delay = -path.tau * M * cfg.delta_f  # sums over l' - l - tau*M*df
    off_dopp = path.nu * N * T

    in_tail = l >= M - c  # column delay bins overlapping the next symbol
    tail = np.exp(-2j * np.pi * (path.nu * T + k / N))  # [k]
    branch = np.where(in_tail[None, :], tail[:, None], 1.0)  # [k, l]
    col = np.exp(2j * np.pi * path.nu * l * T / M)  # [l]

    scale = path.gain / (M * N) * np.exp(2j * np.pi * path.nu * path.tau)
    dl = difference_table(off_delay, M, 0, M - 1).T
    dk = difference_table(off_dopp, N, 0, N - 1)
    colb = (col[None, :] * branch)[None, None, :, :]  # [1, 1, k, l]

    if which is None:
        blk = scale * dk[:, None, :, None] * dl[None, :, None, :] * colb
    elif which == "tau":
        # d/dtau of exp(j2pi nu tau) * Dir(l'-l-tau*M*df, M)
        dl_tau = 2j * np.pi * (
            path.nu * dl - cfg.delta_f * difference_table(off_delay, M, 0, M - 1, 0.0, 1.0).T
        )
        blk = scale * dk[:, None, :, None] * dl_tau[None, :, None, :] * colb
    else:  # nu
        dk_nu = (2j * np.pi * T) * difference_table(off_dopp, N, 0, N - 1, 0.0, 1.0)
        rate = 2j * np.pi * (path.tau + l * T / M - np.where(in_tail, T, 0.0))  # [l]
        blk = scale * dl[None, :, None, :] * colb * (
            dk[:, None, :, None] * rate[None, None, None, :] + dk_nu[:, None, :, None]
        )
    return blk.reshape(M * N, M * N)


def build_twostep(cfg: SystemConfig, path: PathParams) -> np.ndarray:
    """Two-step (OFDM demodulator + SFFT) OTFS channel matrix for one path.

    Column delay bins ``l >= M - ceil(tau*M/T)`` carry the phase
    ``exp(-j2pi(nu*T + k/N))``.
    """
    return _twostep(cfg, path, None)


def build_twostep_deriv(cfg: SystemConfig, path: PathParams, which: str) -> np.ndarray:
    _check_which(which)
    if which in ("amp", "phase"):
        return trivial_deriv(build_twostep(cfg, path), path, which)
    return _twostep(cfg, path, which)
