"""Channel matrices for CP-free OFDM and CP-OFDM.

Matrices are ``MN x MN`` with row index ``n'*M + m'`` (received symbol,
subcarrier) and column index ``n*M + m`` (transmitted symbol, subcarrier).
"""

from __future__ import annotations

import numpy as np

from .core import SystemConfig, PathParams, delay_bins
from .kernels import difference_table

__all__ = ["build_cpfree", "build_cpfree_deriv", "build_cpofdm", "build_cpofdm_deriv", "trivial_deriv"]

_WHICH = ("amp", "phase", "tau", "nu")


def _check_which(which):
    if which not in _WHICH:
        raise ValueError(f"unknown parameter {which!r}; expected one of {_WHICH}")


def trivial_deriv(psi: np.ndarray, path: PathParams, which: str) -> np.ndarray:
    """Amplitude and phase derivatives, which only rescale the channel."""
    if which == "amp":
        if path.a == 0:
            raise ValueError("amplitude derivative undefined for a = 0")
        return psi / path.a
    return 1j * psi


def _cpfree_blocks(cfg: SystemConfig, path: PathParams, which: str | None):
    M, N, T = cfg.M, cfg.N, cfg.T
    if path.tau < 0 or path.tau >= T:
        raise ValueError(f"CP-free OFDM needs 0 <= tau < T (tau={path.tau}, T={T})")
    c = delay_bins(cfg, path.tau)
    m = np.arange(M)
    n = np.arange(N)
    off = path.nu * T  # inner sums depend on m - m' + nu*T
    pre = (path.gain / np.sqrt(M)) * np.exp(
        2j * np.pi * (path.nu * n[:, None] * T - m[None, :] * cfg.delta_f * path.tau)
    )  # [n', m]

    isi = difference_table(off, M, 0, c - 1)
    cur = difference_table(off, M, c, M - 1)
    blk_isi = pre[:, None, :] * isi[None, :, :]  # [n', m', m]
    blk_cur = pre[:, None, :] * cur[None, :, :]

    if which == "tau":
        w = -2j * np.pi * m * cfg.delta_f
        blk_isi = blk_isi * w
        blk_cur = blk_cur * w
    elif which == "nu":
        step = 2j * np.pi * T / M
        isi_i = difference_table(off, M, 0, c - 1, 0.0, 1.0)
        cur_i = difference_table(off, M, c, M - 1, 0.0, 1.0)
        sym = (2j * np.pi * n * T)[:, None, None]
        blk_isi = sym * blk_isi + step * pre[:, None, :] * isi_i[None, :, :]
        blk_cur = sym * blk_cur + step * pre[:, None, :] * cur_i[None, :, :]
    return blk_isi, blk_cur


def _assemble_bidiagonal(blk_isi, blk_cur):
    N, M, _ = blk_cur.shape
    out = np.zeros((N, M, N, M), dtype=np.complex128)
    idx = np.arange(N)
    out[idx, :, idx, :] = blk_cur
    out[idx[1:], :, idx[:-1], :] = blk_isi[1:]
    return out.reshape(N * M, N * M)


def build_cpfree(cfg: SystemConfig, path: PathParams) -> np.ndarray:
    """CP-free OFDM channel matrix for one path.

    The block at ``(n', n')`` carries samples ``ceil(tau*M/T)..M-1`` of the
    current symbol, the block at ``(n', n'-1)`` the leading samples that still
    overlap the previous symbol.  When ``tau*M/T`` is an integer ``k`` the
    sample ``i = k`` goes to the current symbol, so ``tau = 0`` has no ISI.
    """
    return _assemble_bidiagonal(*_cpfree_blocks(cfg, path, None))


def build_cpfree_deriv(cfg: SystemConfig, path: PathParams, which: str) -> np.ndarray:
    """Partial derivative of :func:`build_cpfree` w.r.t. ``which``.

    Summation limits are held fixed, so tau derivatives are one-sided at
    integer ``tau*M/T``.
    """
    _check_which(which)
    if which in ("amp", "phase"):
        return trivial_deriv(build_cpfree(cfg, path), path, which)
    return _assemble_bidiagonal(*_cpfree_blocks(cfg, path, which))


def _cpofdm_blocks(cfg: SystemConfig, path: PathParams, which: str | None):
    M, N, T = cfg.M, cfg.N, cfg.T
    if path.tau < 0 or path.tau > cfg.T_cp:
        raise ValueError(f"CP-OFDM needs 0 <= tau <= T_cp (tau={path.tau}, T_cp={cfg.T_cp})")
    m = np.arange(M)
    n = np.arange(N)
    off = path.nu * T
    start = n * cfg.T_prime + cfg.T_cp  # time of first kept sample of symbol n'
    pre = (path.gain / np.sqrt(M)) * np.exp(
        2j * np.pi * (path.nu * start[:, None] - m[None, :] * cfg.delta_f * path.tau)
    )
    dirk = difference_table(off, M, 0, M - 1)
    blk = pre[:, None, :] * dirk[None, :, :]
    if which == "tau":
        blk = blk * (-2j * np.pi * m * cfg.delta_f)
    elif which == "nu":
        dirk_i = difference_table(off, M, 0, M - 1, 0.0, 1.0)
        blk = (2j * np.pi * start)[:, None, None] * blk + (2j * np.pi * T / M) * pre[:, None, :] * dirk_i[None, :, :]
    return blk


def _assemble_diagonal(blk):
    N, M, _ = blk.shape
    out = np.zeros((N, M, N, M), dtype=np.complex128)
    idx = np.arange(N)
    out[idx, :, idx, :] = blk
    return out.reshape(N * M, N * M)


def build_cpofdm(cfg: SystemConfig, path: PathParams) -> np.ndarray:
    """Block-diagonal CP-OFDM channel matrix for one path (``tau <= T_cp``)."""
    return _assemble_diagonal(_cpofdm_blocks(cfg, path, None))


def build_cpofdm_deriv(cfg: SystemConfig, path: PathParams, which: str) -> np.ndarray:
    _check_which(which)
    if which in ("amp", "phase"):
        return trivial_deriv(build_cpofdm(cfg, path), path, which)
    return _assemble_diagonal(_cpofdm_blocks(cfg, path, which))
