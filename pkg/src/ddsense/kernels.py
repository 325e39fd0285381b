"""Finite complex exponential sums shared by the channel builders.

Both kernels are evaluated term by term.  The Dirichlet kernel

    Dir(phi, Z) = sum_{z=0}^{Z-1} exp(j 2 pi phi z / Z)

has a closed form, but it has removable singularities at integer multiples of
``Z``; for the grid sizes used here (Z up to a few hundred) the direct sum is
cheap and needs no special cases.

Array inputs are dispatched to a numba kernel or to a numpy fallback, see
:mod:`ddsense._accel`.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = ["dirichlet", "weighted_exp_sum", "exp_sum_table", "difference_table", "backend"]


@njit(cache=False)
def _exp_sum_numba(phi, Z, i_lo, i_hi, alpha, beta):
    out = np.zeros(phi.shape[0], dtype=np.complex128)
    two_pi_over_z = 2.0 * np.pi / Z
    for k in range(phi.shape[0]):
        acc = 0.0 + 0.0j
        w = two_pi_over_z * phi[k]
        for i in range(i_lo, i_hi + 1):
            ang = w * i
            acc += (alpha + beta * i) * (np.cos(ang) + 1j * np.sin(ang))
        out[k] = acc
    return out


def _exp_sum_numpy(phi, Z, i_lo, i_hi, alpha, beta):
    if i_hi < i_lo:
        return np.zeros(phi.shape[0], dtype=np.complex128)
    i = np.arange(i_lo, i_hi + 1, dtype=np.float64)
    ang = np.multiply.outer(phi, i) * (2.0 * np.pi / Z)
    terms = np.cos(ang) + 1j * np.sin(ang)
    return terms @ (alpha + beta * i)


def backend() -> str:
    """Name of the active array backend (``"numba"`` or ``"numpy"``)."""
    return "numba" if USE_NUMBA else "numpy"


def exp_sum_table(phi, Z, i_lo, i_hi, alpha=1.0, beta=0.0, use_numba=None):
    """Evaluate ``sum_{i=i_lo}^{i_hi} (alpha + beta*i) exp(j 2 pi phi i / Z)``
    for every element of ``phi``.

    Parameters
    ----------
    phi : array_like of float
        Phases, any shape.
    Z : int
        Normalising length of the sum.
    i_lo, i_hi : int
        Inclusive index range; ``i_hi < i_lo`` yields zeros.
    alpha, beta : complex
        Affine weight ``alpha + beta*i``.
    use_numba : bool, optional
        Override the process-wide backend choice.

    Returns
    -------
    numpy.ndarray of complex128, same shape as ``phi``.
    """
    phi = np.asarray(phi, dtype=np.float64)
    flat = np.ascontiguousarray(phi.ravel())
    if use_numba is None:
        use_numba = USE_NUMBA
    fn = _exp_sum_numba if use_numba else _exp_sum_numpy
    out = fn(flat, int(Z), int(i_lo), int(i_hi), complex(alpha), complex(beta))
    return out.reshape(phi.shape)


def difference_table(offset, Z, i_lo, i_hi, alpha=1.0, beta=0.0):
    """``Z x Z`` table ``T[r, c] = S(c - r + offset)`` of exponential sums.

    ``S`` is the weighted sum of :func:`exp_sum_table` over ``i_lo..i_hi``.
    Only the ``2Z - 1`` distinct differences are evaluated.
    """
    d = np.arange(-(Z - 1), Z, dtype=np.float64) + offset
    vals = exp_sum_table(d, Z, i_lo, i_hi, alpha, beta)
    idx = np.arange(Z)
    return vals[idx[None, :] - idx[:, None] + Z - 1]


def weighted_exp_sum(phi, Z, i_lo, i_hi, alpha=1.0, beta=0.0):
    """Index-weighted exponential sum over ``i_lo..i_hi`` (inclusive).

    Scalar ``phi`` returns a Python complex, arrays return arrays.
    """
    if not (0 <= i_lo and i_hi <= Z - 1 and i_lo <= i_hi + 1):
        raise ValueError(f"invalid summation range {i_lo}..{i_hi} for Z={Z}")
    out = exp_sum_table(phi, Z, i_lo, i_hi, alpha, beta)
    return complex(out) if out.ndim == 0 else out


def dirichlet(phi, Z):
    """Dirichlet kernel ``Dir(phi, Z)`` as an explicit ``Z``-term sum."""
    if Z < 1:
        raise ValueError("Z must be >= 1")
    return weighted_exp_sum(phi, Z, 0, Z - 1)
