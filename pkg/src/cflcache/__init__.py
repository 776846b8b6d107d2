"""Coded caching with coded prefetching, plus an error-correcting delivery layer."""

from .caching import CachingParams, Placement, Regime, cfl_place
from .delivery import TransmissionSchedule, cfl_deliver, verify_decodable
from .ec_delivery import EcSchedule, build_ec_schedule, end_to_end_sim
from .ecc import LinearCode, best_code, decode_bounded, encode
from .f2 import BitMatrix, BitVector
from .gic import build_gic_instance, constructive_subspace, kappa_closed_form
from .rates import average_rate, peak_rate, rate_report

__all__ = [
    "BitMatrix", "BitVector", "CachingParams", "EcSchedule", "LinearCode", "Placement",
    "Regime", "TransmissionSchedule", "average_rate", "best_code", "build_ec_schedule",
    "build_gic_instance", "cfl_deliver", "cfl_place", "constructive_subspace",
    "decode_bounded", "encode", "end_to_end_sim", "kappa_closed_form", "peak_rate",
    "rate_report", "verify_decodable",
]
