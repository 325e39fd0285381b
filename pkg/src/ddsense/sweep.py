"""Scenario files, single-point evaluation and parameter sweeps."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .core import PathParams, PathSet, Scheme, SystemConfig, generate_pilots, validate_config
from .fim import CrlbReport, evaluate

log = logging.getLogger(__name__)

__all__ = [
    "ScenarioError",
    "SweepSpec",
    "ResultRow",
    "load_scenario",
    "parse_scenario",
    "recipe_path",
    "run_point",
    "run_sweep",
    "CSV_COLUMNS",
]

AXES = ("snr_db", "scs_hz", "grid_mn")
DEFAULT_SNR_DB = 10.0
RECIPES = ("fig1", "fig2", "fig3")

CSV_COLUMNS = (
    "scheme", "M", "N", "scs_hz", "snr_db", "path_index", "crlb_tau_s2", "crlb_nu_hz2",
    "crlb_amp", "crlb_phase_rad2", "fim_condition", "error",
)

_TOP_KEYS = {"schemes", "config", "paths", "seed", "snr_db", "axis", "values", "output"}
_CONFIG_KEYS = {"M", "N", "delta_f", "f_c", "T_cp"}
_PATH_KEYS = {"a", "phi", "tau", "nu"}


class ScenarioError(ValueError):
    """Malformed scenario document."""


@dataclass(frozen=True)
class SweepSpec:
    schemes: tuple[Scheme, ...]
    M: int
    N: int
    delta_f: float
    f_c: float
    T_cp: float | None
    paths: PathSet
    seed: int = 42
    snr_db: float = DEFAULT_SNR_DB
    axis: str | None = None
    values: tuple = ()
    output: str | None = None

    def base_config(self) -> SystemConfig:
        return SystemConfig(self.M, self.N, self.delta_f, self.f_c, self.T_cp)

    def points(self):
        """Yield ``(cfg, snr_db)`` for each axis value, in axis order."""
        if self.axis is None:
            yield self.base_config(), self.snr_db
            return
        for v in self.values:
            if self.axis == "snr_db":
                yield self.base_config(), float(v)
            elif self.axis == "scs_hz":
                yield SystemConfig(self.M, self.N, float(v), self.f_c, self.T_cp), self.snr_db
            else:
                M, N = v
                yield SystemConfig(int(M), int(N), self.delta_f, self.f_c, self.T_cp), self.snr_db

    def with_seed(self, seed: int) -> "SweepSpec":
        return SweepSpec(**{**self.__dict__, "seed": int(seed)})


@dataclass(frozen=True)
class ResultRow:
    scheme: str
    M: int
    N: int
    scs_hz: float
    snr_db: float
    path_index: int
    crlb_tau_s2: float | None = None
    crlb_nu_hz2: float | None = None
    crlb_amp: float | None = None
    crlb_phase_rad2: float | None = None
    fim_condition: float | None = None
    error: str = ""


def _reject_unknown(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ScenarioError(f"{where}: unknown field(s) {', '.join(extra)}")


def _number(obj, key, where, default=None, required=True):
    if key not in obj or obj[key] is None:
        if required and default is None:
            raise ScenarioError(f"{where}.{key}: required")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ScenarioError(f"{where}.{key}: expected a number, got {val!r}")
    return val


def parse_scenario(doc: dict) -> SweepSpec:
    """Build a :class:`SweepSpec` from a decoded JSON document."""
    _reject_unknown(doc, _TOP_KEYS, "scenario")
    cfg = doc.get("config")
    _reject_unknown(cfg, _CONFIG_KEYS, "config")
    M = _number(cfg, "M", "config")
    N = _number(cfg, "N", "config")
    if not (isinstance(M, int) and isinstance(N, int)):
        raise ScenarioError("config.M and config.N must be integers")
    delta_f = float(_number(cfg, "delta_f", "config"))
    f_c = float(_number(cfg, "f_c", "config", default=3e9))
    T_cp = _number(cfg, "T_cp", "config", required=False)

    raw_paths = doc.get("paths")
    if not isinstance(raw_paths, list) or not raw_paths:
        raise ScenarioError("paths: expected a non-empty list")
    paths = []
    for i, p in enumerate(raw_paths):
        where = f"paths[{i}]"
        _reject_unknown(p, _PATH_KEYS, where)
        paths.append(PathParams(*(float(_number(p, k, where)) for k in ("a", "phi", "tau", "nu"))))

    try:
        schemes = tuple(Scheme.parse(s) for s in doc.get("schemes", [s.value for s in Scheme]))
    except ValueError as exc:
        raise ScenarioError(f"schemes: {exc}") from None
    if not schemes:
        raise ScenarioError("schemes: at least one scheme required")

    seed = doc.get("seed", 42)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ScenarioError("seed: expected an unsigned 64-bit integer")
    snr = float(_number(doc, "snr_db", "scenario", default=DEFAULT_SNR_DB))

    axis = doc.get("axis")
    values = doc.get("values")
    if axis is None:
        if values is not None:
            raise ScenarioError("values given without axis")
        values = ()
    else:
        if axis not in AXES:
            raise ScenarioError(f"axis: expected one of {', '.join(AXES)}, got {axis!r}")
        if not isinstance(values, list) or not values:
            raise ScenarioError("values: expected a non-empty list")
        if axis == "grid_mn":
            try:
                values = tuple((int(m), int(n)) for m, n in values)
            except (TypeError, ValueError):
                raise ScenarioError("values: grid_mn entries must be [M, N] pairs") from None
            if any(m < 2 or n < 2 for m, n in values):
                raise ScenarioError("values: grid_mn entries need M, N >= 2")
            keys = [m * n for m, n in values]
        else:
            if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in values):
                raise ScenarioError("values: expected numbers")
            values = tuple(float(v) for v in values)
            keys = list(values)
        if any(b <= a for a, b in zip(keys, keys[1:])):
            raise ScenarioError("values: must be strictly increasing")

    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        raise ScenarioError("output: expected a string")
    return SweepSpec(
        schemes=schemes, M=M, N=N, delta_f=delta_f, f_c=f_c, T_cp=T_cp,
        paths=PathSet(paths), seed=seed, snr_db=snr, axis=axis, values=values, output=output,
    )


def recipe_path(name: str) -> Path:
    """Location of a bundled figure recipe (``fig1``, ``fig2``, ``fig3``)."""
    if name not in RECIPES:
        raise KeyError(name)
    return Path(str(resources.files("ddsense") / "recipes" / f"{name}.json"))


def load_scenario(source) -> SweepSpec:
    """Read a scenario from a path, or from a bundled recipe name."""
    path = Path(source)
    if not path.exists() and str(source) in RECIPES:
        path = recipe_path(str(source))
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: invalid JSON ({exc})") from None
    return parse_scenario(doc)


def _evaluate_scheme(scheme, cfg, paths, pilots, snr):
    problems = validate_config(cfg, paths, scheme)
    if problems:
        raise ValueError("; ".join(problems))
    return evaluate(scheme, cfg, paths, pilots, snr)


def run_point(spec: SweepSpec) -> dict:
    """Evaluate every scheme at the scenario's base point.

    Returns ``{scheme: CrlbReport or Exception}``; a failing scheme does not
    stop the others.
    """
    cfg = spec.base_config()
    pilots = generate_pilots(cfg.M, cfg.N, spec.seed)
    out = {}
    for scheme in spec.schemes:
        try:
            out[scheme] = _evaluate_scheme(scheme, cfg, spec.paths, pilots, spec.snr_db)
        except (ValueError, np.linalg.LinAlgError) as exc:
            log.warning("%s: %s", scheme.value, exc)
            out[scheme] = exc
    return out


def _rows_for(scheme, cfg, snr, n_paths, result):
    common = dict(scheme=scheme.value, M=cfg.M, N=cfg.N, scs_hz=cfg.delta_f, snr_db=snr)
    if isinstance(result, CrlbReport):
        return [
            ResultRow(**common, path_index=p, crlb_tau_s2=tau, crlb_nu_hz2=nu,
                      crlb_amp=amp, crlb_phase_rad2=ph, fim_condition=result.condition)
            for p, tau, nu, amp, ph in result.rows()
        ]
    msg = f"{type(result).__name__}: {result}"
    return [ResultRow(**common, path_index=p, error=msg) for p in range(n_paths)]


def run_sweep(spec: SweepSpec) -> list[ResultRow]:
    """Cross product of schemes, axis values and paths, ordered in that order."""
    rows = []
    pilot_cache = {}
    for scheme in spec.schemes:
        for cfg, snr in spec.points():
            key = (cfg.M, cfg.N)
            if key not in pilot_cache:
                pilot_cache[key] = generate_pilots(cfg.M, cfg.N, spec.seed)
            try:
                result = _evaluate_scheme(scheme, cfg, spec.paths, pilot_cache[key], snr)
            except (ValueError, np.linalg.LinAlgError) as exc:
                log.warning("%s at M=%d N=%d scs=%g snr=%g: %s", scheme.value, cfg.M, cfg.N, cfg.delta_f, snr, exc)
                result = exc
            rows.extend(_rows_for(scheme, cfg, snr, len(spec.paths), result))
    return rows
