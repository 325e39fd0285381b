"""Scheme dispatch for channel builders."""

from __future__ import annotations

from .channel_ofdm import build_cpfree, build_cpfree_deriv, build_cpofdm, build_cpofdm_deriv
from .channel_otfs import build_twostep, build_twostep_deriv, build_zak, build_zak_deriv
from .core import Scheme

_BUILDERS = {
    Scheme.CP_FREE_OFDM: (build_cpfree, build_cpfree_deriv),
    Scheme.CP_OFDM: (build_cpofdm, build_cpofdm_deriv),
    Scheme.ZAK_OTFS: (build_zak, build_zak_deriv),
    Scheme.TWO_STEP_OTFS: (build_twostep, build_twostep_deriv),
}


def build_channel(scheme, cfg, path):
    return _BUILDERS[Scheme.parse(scheme)][0](cfg, path)


def build_deriv(scheme, cfg, path, which):
    return _BUILDERS[Scheme.parse(scheme)][1](cfg, path, which)
