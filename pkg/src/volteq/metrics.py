"""Voice-call quality metrics over the final episode's SINR trace.

Retainability is the fraction of the frame's TTIs whose effective SINR
stayed above the drop threshold:

    1 - (1/tau) * sum_t 1[sinr[t] <= threshold]

summed over the TTIs actually executed (an episode that reached its target
early simply contributes fewer indicator terms).

Voice quality is estimated through a QPSK symbol-error chain: per-TTI
effective SINR (linear) -> symbol error probability -> packet error rate
over the symbols of one voice packet -> mean opinion score via a monotone
clamped curve. The MOS curve is configuration, not ground truth; only its
range, endpoints, and monotonicity are contractual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def qfunc(x: float) -> float:
    """Gaussian tail probability Q(x) = P(N(0,1) > x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def retainability(sinr_db_series, threshold_db: float, tau: int) -> float:
    """Fraction of the frame's TTIs above the drop threshold, clipped to [0,1]."""
    series = np.asarray(sinr_db_series, dtype=np.float64)
    if series.size == 0:
        raise ValueError("retainability of an empty SINR series is undefined")
    if tau < 1:
        raise ValueError(f"tau must be >= 1, got {tau}")
    if series.size > tau:
        raise ValueError(f"series has {series.size} samples but tau={tau}")
    dropped = int(np.count_nonzero(series <= threshold_db))
    return float(min(1.0, max(0.0, 1.0 - dropped / tau)))


@dataclass(frozen=True)
class VoicePacketModel:
    """VoLTE packetization: codec rate, activity factor, frame length, QPSK."""

    codec_rate_bps: float = 23850.0
    activity_factor: float = 0.7
    frame_duration_s: float = 0.020
    bits_per_symbol: int = 2

    def __post_init__(self):
        if self.codec_rate_bps <= 0 or self.frame_duration_s <= 0 or self.bits_per_symbol <= 0:
            raise ValueError("voice packet model parameters must be positive")
        if not (0.0 < self.activity_factor <= 1.0):
            raise ValueError(f"activity_factor must be in (0,1], got {self.activity_factor}")

    @property
    def symbols_per_packet(self) -> int:
        bits = self.codec_rate_bps * self.frame_duration_s * self.activity_factor
        return math.ceil(bits / self.bits_per_symbol)


def qpsk_ser(gamma_lin: float, convention: str = "symbol") -> float:
    """QPSK error probability at linear SNR gamma.

    "symbol": P_s = 2 Q(sqrt(g)) (1 - Q(sqrt(g))/2), the symbol error rate in
    symbol SNR. "bit": Q(sqrt(2 g)), the Gray-coded bit error rate.
    """
    if gamma_lin < 0:
        raise ValueError(f"linear SINR must be >= 0, got {gamma_lin}")
    if convention == "symbol":
        q = qfunc(math.sqrt(gamma_lin))
        return 2.0 * q * (1.0 - 0.5 * q)
    if convention == "bit":
        return qfunc(math.sqrt(2.0 * gamma_lin))
    raise ValueError(f"unknown error-rate convention {convention!r}")


def packet_error_rate(p_symbol: float, model: VoicePacketModel) -> float:
    """Packet error rate for one voice packet: 1 - (1 - P_s)^K."""
    if not (0.0 <= p_symbol <= 1.0):
        raise ValueError(f"symbol error probability must be in [0,1], got {p_symbol}")
    return 1.0 - (1.0 - p_symbol) ** model.symbols_per_packet


@dataclass(frozen=True)
class MosCurveConfig:
    """Monotone PER -> MOS mapping, log-shaped, exact at both endpoints:
    mos(0) = mos_max, mos(1) = mos_min."""

    mos_min: float = 1.0
    mos_max: float = 4.5
    shape: float = 9.0

    def __post_init__(self):
        if not (self.mos_min < self.mos_max):
            raise ValueError("mos_min must be below mos_max")
        if self.shape <= 0:
            raise ValueError(f"shape must be positive, got {self.shape}")


def mos(per: float, curve: MosCurveConfig = MosCurveConfig()) -> float:
    """Mean opinion score for a packet error rate, clamped to the curve range."""
    if not (0.0 <= per <= 1.0):
        raise ValueError(f"packet error rate must be in [0,1], got {per}")
    span = curve.mos_max - curve.mos_min
    value = curve.mos_max - span * math.log1p(curve.shape * per) / math.log1p(curve.shape)
    return min(curve.mos_max, max(curve.mos_min, value))


def per_series(sinr_db_series, model: VoicePacketModel,
               convention: str = "symbol") -> list[float]:
    """Per-TTI packet error rates from the calibrated effective SINR trace."""
    out = []
    for db in np.asarray(sinr_db_series, dtype=np.float64):
        gamma = 10.0 ** (db / 10.0)
        out.append(packet_error_rate(qpsk_ser(gamma, convention), model))
    return out


def arm_metrics(sinr_db_series, tau: int, threshold_db: float,
                model: VoicePacketModel, curve: MosCurveConfig,
                convention: str = "symbol") -> dict:
    """Retainability, PER series/mean, and MOS for one arm's final episode."""
    pers = per_series(sinr_db_series, model, convention)
    mean_per = float(np.mean(pers))
    return {
        "retainability": retainability(sinr_db_series, threshold_db, tau),
        "per_series": pers,
        "mean_per": mean_per,
        "mos": mos(mean_per, curve),
    }
