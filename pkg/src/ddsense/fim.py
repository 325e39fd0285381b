"""Fisher information and Cramer-Rao bounds under white Gaussian noise."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .channels import build_channel, build_deriv
from .core import PARAM_NAMES, PathSet, Scheme

__all__ = [
    "NoiseModel",
    "CrlbReport",
    "SingularFimError",
    "received_signal",
    "received_power",
    "snr_db",
    "sigma2_for_snr",
    "derivative_vectors",
    "assemble_fim",
    "crlb",
    "evaluate",
]

# eigenvalue floor (relative to trace) before the FIM counts as indefinite
NEG_EIG_TOL = 1e-9
# condition number of the equilibrated FIM above which it counts as singular
MAX_CONDITION = 1e12


class SingularFimError(np.linalg.LinAlgError):
    def __init__(self, msg, condition=np.inf, min_eigenvalue=np.nan):
        super().__init__(msg)
        self.condition = condition
        self.min_eigenvalue = min_eigenvalue


@dataclass(frozen=True)
class NoiseModel:
    """Circular white noise with covariance ``sigma2 * I``."""

    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive (got {self.sigma2})")


@dataclass
class CrlbReport:
    """Per-path bounds; arrays are indexed by path."""

    tau: np.ndarray
    nu: np.ndarray
    amp: np.ndarray
    phase: np.ndarray
    condition: float
    scheme: Scheme | None = None
    snr_db: float | None = None
    inverse: np.ndarray = field(default=None, repr=False)

    @property
    def n_paths(self) -> int:
        return len(self.tau)

    def rows(self):
        for p in range(self.n_paths):
            yield p, float(self.tau[p]), float(self.nu[p]), float(self.amp[p]), float(self.phase[p])


def _sigma2(noise) -> float:
    return noise.sigma2 if isinstance(noise, NoiseModel) else float(noise)


def received_signal(scheme, cfg, paths: PathSet, pilots) -> np.ndarray:
    """Noiseless observation ``sum_p Psi_p x``."""
    y = np.zeros(cfg.M * cfg.N, dtype=np.complex128)
    for path in paths:
        y += build_channel(scheme, cfg, path) @ pilots
    return y


def received_power(scheme, cfg, paths, pilots) -> float:
    y = received_signal(scheme, cfg, paths, pilots)
    return float(np.vdot(y, y).real)


def snr_db(scheme, cfg, paths, pilots, noise) -> float:
    """Mean received power per sample over the noise variance, in dB."""
    power = received_power(scheme, cfg, paths, pilots)
    if power <= 0:
        raise ValueError("received signal has zero power")
    return 10.0 * np.log10(power / (cfg.M * cfg.N * _sigma2(noise)))


def sigma2_for_snr(scheme, cfg, paths, pilots, target_db: float) -> float:
    power = received_power(scheme, cfg, paths, pilots)
    if power <= 0:
        raise ValueError("received signal has zero power")
    return power / (cfg.M * cfg.N) / 10.0 ** (target_db / 10.0)


def derivative_vectors(scheme, cfg, paths, pilots) -> np.ndarray:
    """``MN x 4P`` matrix whose column ``i`` is ``(dPsi/dtheta_i) x``."""
    cols = [
        build_deriv(scheme, cfg, path, which) @ pilots
        for path in paths
        for which in PARAM_NAMES
    ]
    return np.stack(cols, axis=1)


def assemble_fim(scheme, cfg, paths, pilots, noise) -> np.ndarray:
    """Fisher information ``J_ij = (2/sigma2) Re{u_j^H u_i}``.

    Only the upper triangle is computed, so the result is exactly symmetric.
    """
    U = derivative_vectors(scheme, cfg, paths, pilots)
    G = np.real(U.conj().T @ U) * (2.0 / _sigma2(noise))
    return np.triu(G) + np.triu(G, 1).T


def crlb(J, precondition: bool = True, scheme=None, snr=None) -> CrlbReport:
    """Invert the FIM and collect the diagonal as per-path bounds.

    The FIM is equilibrated with ``D = diag(1/sqrt(J_ii))`` before the
    Cholesky factorisation; delay and Doppler entries otherwise differ by
    many orders of magnitude.

    Raises
    ------
    SingularFimError
        If ``J`` is indefinite, has a zero diagonal, or its equilibrated
        condition number exceeds ``MAX_CONDITION``.
    """
    J = np.asarray(J, dtype=np.float64)
    if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 4:
        raise ValueError(f"FIM must be square with size divisible by 4, got {J.shape}")
    if not np.array_equal(J, J.T):
        raise ValueError("FIM must be symmetric")
    diag = np.diag(J)
    if np.any(diag <= 0):
        raise SingularFimError("FIM has a non-positive diagonal entry", min_eigenvalue=float(diag.min()))

    d = 1.0 / np.sqrt(diag) if precondition else np.ones_like(diag)
    Js = J * np.outer(d, d)
    eig = np.linalg.eigvalsh(Js)
    cond = float(eig[-1] / eig[0]) if eig[0] > 0 else np.inf
    if eig[0] < -NEG_EIG_TOL * np.trace(Js):
        raise SingularFimError(
            f"FIM is indefinite (min eigenvalue {eig[0]:.3e})", cond, float(eig[0])
        )
    if cond > MAX_CONDITION:
        raise SingularFimError(
            f"FIM is singular to working precision (condition {cond:.3e})", cond, float(eig[0])
        )
    try:
        factor = scipy.linalg.cho_factor(Js, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularFimError(f"Cholesky factorisation failed: {exc}", cond, float(eig[0])) from None
    inv = scipy.linalg.cho_solve(factor, np.eye(len(Js))) * np.outer(d, d)
    bounds = np.diag(inv).reshape(-1, 4)
    return CrlbReport(
        amp=bounds[:, 0].copy(),
        phase=bounds[:, 1].copy(),
        tau=bounds[:, 2].copy(),
        nu=bounds[:, 3].copy(),
        condition=cond,
        scheme=Scheme.parse(scheme) if scheme is not None else None,
        snr_db=snr,
        inverse=inv,
    )


def evaluate(scheme, cfg, paths, pilots, target_snr_db: float) -> CrlbReport:
    """Bounds for ``scheme`` with the noise set to reach ``target_snr_db``."""
    sigma2 = sigma2_for_snr(scheme, cfg, paths, pilots, target_snr_db)
    J = assemble_fim(scheme, cfg, paths, pilots, sigma2)
    return crlb(J, scheme=scheme, snr=target_snr_db)
