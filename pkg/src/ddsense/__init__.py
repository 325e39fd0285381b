"""Cramer-Rao bounds for multipath delay and Doppler estimation with
CP-free OFDM, CP-OFDM, Zak-OTFS and two-step OTFS."""

from .core import (
    Scheme,
    SystemConfig,
    PathParams,
    PathSet,
    validate_config,
    generate_pilots,
    pack_params,
    unpack_params,
)
from .channels import build_channel, build_deriv
from .fim import NoiseModel, CrlbReport, SingularFimError, assemble_fim, crlb, evaluate, snr_db, sigma2_for_snr

__version__ = "0.1.0"
