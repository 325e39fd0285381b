"""System configuration, multipath parameters, pilots and parameter packing."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Scheme",
    "SystemConfig",
    "PathParams",
    "PathSet",
    "validate_config",
    "splitmix64",
    "generate_pilots",
    "pack_params",
    "unpack_params",
    "delay_bins",
    "PARAM_NAMES",
]

PARAM_NAMES = ("amp", "phase", "tau", "nu")

# tau*M/T closer than this to an integer is treated as that integer
_BIN_SNAP = 1e-9


class Scheme(str, enum.Enum):
    CP_FREE_OFDM = "cp_free_ofdm"
    CP_OFDM = "cp_ofdm"
    ZAK_OTFS = "zak_otfs"
    TWO_STEP_OTFS = "two_step_otfs"

    @classmethod
    def parse(cls, value) -> "Scheme":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower().replace("-", "_"))
        except ValueError:
            names = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown scheme {value!r}; expected one of {names}") from None

    @property
    def is_otfs(self) -> bool:
        return self in (Scheme.ZAK_OTFS, Scheme.TWO_STEP_OTFS)


@dataclass(frozen=True)
class SystemConfig:
    """Time-frequency grid of ``N`` symbols by ``M`` subcarriers.

    ``T`` is always ``1/delta_f``.  ``T_cp`` defaults to ``T/4`` and only
    matters for CP-OFDM.
    """

    M: int
    N: int
    delta_f: float
    f_c: float = 3e9
    T_cp: float | None = None

    def __post_init__(self):
        if self.T_cp is None:
            object.__setattr__(self, "T_cp", 0.25 / self.delta_f if self.delta_f > 0 else 0.0)

    @property
    def T(self) -> float:
        return 1.0 / self.delta_f

    @property
    def T_prime(self) -> float:
        """CP-OFDM symbol period ``T + T_cp``."""
        return self.T + self.T_cp

    @property
    def bandwidth(self) -> float:
        return self.M * self.delta_f

    @property
    def size(self) -> int:
        return self.M * self.N


@dataclass(frozen=True)
class PathParams:
    a: float
    phi: float
    tau: float
    nu: float

    @property
    def gain(self) -> complex:
        return self.a * complex(math.cos(self.phi), math.sin(self.phi))

    def replace(self, **changes) -> "PathParams":
        values = {"a": self.a, "phi": self.phi, "tau": self.tau, "nu": self.nu}
        values.update(changes)
        return PathParams(**values)


@dataclass(frozen=True)
class PathSet:
    paths: tuple[PathParams, ...] = field(default_factory=tuple)

    def __init__(self, paths: Iterable[PathParams]):
        object.__setattr__(self, "paths", tuple(paths))

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def __getitem__(self, i):
        return self.paths[i]


def delay_bins(cfg: SystemConfig, tau: float) -> int:
    """Number of leading samples hit by the previous symbol, ``ceil(tau*M/T)``.

    Integer ``tau*M/T`` is snapped first, so ``tau = k*T/M`` gives exactly ``k``.
    """
    k = tau * cfg.M * cfg.delta_f
    r = round(k)
    if abs(k - r) < _BIN_SNAP:
        return int(r)
    return int(math.ceil(k))


def validate_config(cfg: SystemConfig, paths: PathSet | Sequence[PathParams], scheme) -> list[str]:
    """Check the modelling assumptions for one scheme.

    Returns a list of human readable violations; an empty list means the
    configuration is usable.
    """
    scheme = Scheme.parse(scheme)
    problems = []
    if not isinstance(cfg.M, (int, np.integer)) or cfg.M < 2:
        problems.append(f"M: M >= 2 required (got {cfg.M})")
    if not isinstance(cfg.N, (int, np.integer)) or cfg.N < 2:
        problems.append(f"N: N >= 2 required (got {cfg.N})")
    if not cfg.delta_f > 0:
        problems.append(f"delta_f: delta_f > 0 required (got {cfg.delta_f})")
        return problems
    if cfg.T_cp < 0:
        problems.append(f"T_cp: T_cp >= 0 required (got {cfg.T_cp})")

    paths = list(paths)
    if not paths:
        problems.append("paths: at least one path required")
    seen = {}
    for p, path in enumerate(paths):
        tag = f"paths[{p}]"
        if not path.a > 0:
            problems.append(f"{tag}.a: a > 0 required (got {path.a})")
        if not 0 <= path.phi < 2 * math.pi:
            problems.append(f"{tag}.phi: 0 <= phi < 2*pi required (got {path.phi})")
        if not path.tau >= 0:
            problems.append(f"{tag}.tau: tau >= 0 required (got {path.tau})")
        elif scheme is Scheme.CP_OFDM:
            if path.tau > cfg.T_cp:
                problems.append(f"{tag}.tau: tau <= T_cp required (tau={path.tau}, T_cp={cfg.T_cp})")
        elif path.tau >= cfg.T:
            problems.append(f"{tag}.tau: tau < T required (tau={path.tau}, T={cfg.T})")
        if not math.isfinite(path.nu):
            problems.append(f"{tag}.nu: finite value required")
        key = (path.tau, path.nu)
        if key in seen:
            problems.append(f"{tag}: duplicates (tau, nu) of paths[{seen[key]}]")
        else:
            seen[key] = p
    return problems


_MASK64 = (1 << 64) - 1


def splitmix64(state: int):
    """Infinite generator of splitmix64 outputs starting from ``state``."""
    x = state & _MASK64
    while True:
        x = (x + 0x9E3779B97F4A7C15) & _MASK64
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def generate_pilots(M: int, N: int, seed: int = 42) -> np.ndarray:
    """Deterministic unit-modulus QPSK grid of length ``M*N``.

    Entry ``n*M + m`` belongs to symbol (or Doppler bin) ``n`` and subcarrier
    (or delay bin) ``m``.  Bits 63 and 62 of each splitmix64 word select the
    signs of the real and imaginary parts.
    """
    gen = splitmix64(seed)
    words = [next(gen) for _ in range(M * N)]
    re = np.array([1 - 2 * ((w >> 63) & 1) for w in words], dtype=np.float64)
    im = np.array([1 - 2 * ((w >> 62) & 1) for w in words], dtype=np.float64)
    return (re + 1j * im) / math.sqrt(2.0)


def pack_params(paths: PathSet | Sequence[PathParams]) -> np.ndarray:
    """Stack ``[a, phi, tau, nu]`` per path into one real vector."""
    return np.array([v for p in paths for v in (p.a, p.phi, p.tau, p.nu)], dtype=np.float64)


def unpack_params(theta, P: int | None = None) -> PathSet:
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 1 or theta.size % 4:
        raise ValueError(f"parameter vector length must be a multiple of 4 (got {theta.size})")
    if P is not None and theta.size != 4 * P:
        raise ValueError(f"expected {4 * P} parameters for P={P}, got {theta.size}")
    return PathSet(
        PathParams(float(a), float(phi), float(tau), float(nu))
        for a, phi, tau, nu in theta.reshape(-1, 4)
    )
