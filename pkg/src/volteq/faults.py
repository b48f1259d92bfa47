"""Network fault process for the small-cell cluster.

Seven network actions: normal operation, three fault raises (feeder fault
with a fixed 3 dB signal loss, neighboring cell down, VSWR out of range with
a drawn return-loss penalty) and their three clears. Clears are only legal
while the matching fault is active, a fault cannot be raised twice before
clearing, and every clear reverses its raise bit-exactly.

The register keeps one bit per fault class plus the dB loss each active
fault currently contributes to the serving cell's miscellaneous loss. While
the neighbor-down bit is set, effective SINR is evaluated through the
pessimistic lower bound P_UE / (sigma_n^2 + (|C|-2) * P_BS^max) instead of
the exact interference sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import ConfigurationError


class NetworkAction(IntEnum):
    NORMAL = 0
    FEEDER_FAULT = 1
    NEIGHBOR_DOWN = 2
    VSWR_OUT = 3
    FEEDER_CLEARED = 4
    NEIGHBOR_UP = 5
    VSWR_BACK = 6


FEEDER_LOSS_DB = 3.0

# fault class -> (raise action, clear action)
_FAULT_ACTIONS = {
    "feeder": (NetworkAction.FEEDER_FAULT, NetworkAction.FEEDER_CLEARED),
    "neighbor": (NetworkAction.NEIGHBOR_DOWN, NetworkAction.NEIGHBOR_UP),
    "vswr": (NetworkAction.VSWR_OUT, NetworkAction.VSWR_BACK),
}


@dataclass(frozen=True)
class ActionDistribution:
    """Sampling probabilities p_0..p_6 for the seven network actions."""

    p: tuple[float, ...]

    def __post_init__(self):
        if len(self.p) != len(NetworkAction):
            raise ConfigurationError(f"expected {len(NetworkAction)} probabilities, got {len(self.p)}")
        for i, v in enumerate(self.p):
            if not (0.0 <= v <= 1.0):
                raise ConfigurationError(f"p{i}={v} outside [0, 1]")
        if abs(sum(self.p) - 1.0) > 1e-12:
            raise ConfigurationError(f"action probabilities sum to {sum(self.p)!r}, not 1")

    @classmethod
    def default(cls) -> "ActionDistribution":
        return cls((5 / 11,) + (1 / 11,) * 6)

    @classmethod
    def no_faults(cls) -> "ActionDistribution":
        return cls((1.0,) + (0.0,) * 6)


@dataclass
class FaultRegister:
    """Per-fault-class bits plus the dB losses the active faults contribute.

    Losses are stored per class and summed in a fixed order, so a raise
    followed by its clear restores the budget bit-exactly.
    """

    feeder_fault: bool = False
    neighbor_down: bool = False
    vswr_out: bool = False
    vswr_nominal: float = 1.5
    vswr_current: float = 1.5
    feeder_loss_db: float = 0.0
    vswr_loss_db: float = 0.0

    @property
    def extra_misc_loss_db(self) -> float:
        return self.feeder_loss_db + self.vswr_loss_db

    @property
    def bits(self) -> tuple[int, int, int]:
        return (int(self.feeder_fault), int(self.neighbor_down), int(self.vswr_out))

    def bits_str(self) -> str:
        return "".join(str(b) for b in self.bits)

    def any_set(self) -> bool:
        return self.feeder_fault or self.neighbor_down or self.vswr_out


def legal_actions(register: FaultRegister) -> list[NetworkAction]:
    """Normal is always legal; raises require a clear bit, clears a set bit."""
    legal = [NetworkAction.NORMAL]
    for name, (raise_a, clear_a) in _FAULT_ACTIONS.items():
        active = getattr(register, _BIT_FIELD[name])
        legal.append(clear_a if active else raise_a)
    return sorted(legal)


_BIT_FIELD = {"feeder": "feeder_fault", "neighbor": "neighbor_down", "vswr": "vswr_out"}


def sample_action(register: FaultRegister, dist: ActionDistribution,
                  rng: np.random.Generator) -> NetworkAction:
    """Draw a network action from dist restricted to the currently legal set,
    with the removed probability mass renormalized over the legal actions."""
    legal = legal_actions(register)
    mass = sum(dist.p[a] for a in legal)
    if mass <= 0.0:
        return NetworkAction.NORMAL
    u = rng.random() * mass
    acc = 0.0
    for a in legal:
        acc += dist.p[a]
        if u < acc:
            return a
    return legal[-1]


def vswr_delta(v_nominal: float, v: float) -> float:
    """Signal-loss change (dB) when the VSWR moves from v_nominal to v:

        delta = 10*log10( (|(v0+1)/(v0-1)| * |(v-1)/(v+1)|)^2 )

    Positive for a degraded (larger) VSWR. Both ratios must exceed 1; a
    perfect match (v = 1) would make the return loss singular.
    """
    if v_nominal <= 1.0 or v <= 1.0:
        raise ValueError(f"VSWR values must exceed 1, got v_nominal={v_nominal}, v={v}")
    ratio = abs((v_nominal + 1.0) / (v_nominal - 1.0)) * abs((v - 1.0) / (v + 1.0))
    return 10.0 * math.log10(ratio * ratio)


def neighbor_down_sinr_bound(p_ue_mw, noise_mw: float, cluster_size: int,
                             p_bs_max_mw: float):
    """Pessimistic per-UE SINR while a neighbor is down: the surviving
    |C|-2 interferers are taken at full transmit power with no path loss."""
    if cluster_size < 2:
        raise ValueError(f"cluster_size must be >= 2, got {cluster_size}")
    return np.asarray(p_ue_mw, dtype=np.float64) / (noise_mw + (cluster_size - 2) * p_bs_max_mw)


@dataclass(frozen=True)
class VswrDrawConfig:
    nominal: float = 1.5
    degraded_low: float = 2.0
    degraded_high: float = 3.0

    def __post_init__(self):
        if self.nominal <= 1.0:
            raise ConfigurationError(f"vswr_nominal must exceed 1, got {self.nominal}")
        if not (1.0 < self.degraded_low <= self.degraded_high):
            raise ConfigurationError("VSWR draw range must satisfy 1 < low <= high")


def apply_action(action: NetworkAction, register: FaultRegister,
                 vswr: VswrDrawConfig, rng: np.random.Generator | None = None) -> None:
    """Apply a network action to the register in place.

    Raises set the class bit and record the dB loss (feeder: fixed 3 dB;
    VSWR: |vswr_delta| for a degraded ratio drawn uniformly from the
    configured range). Clears reset bit, loss, and VSWR ratio. An illegal
    action for the current register state is a caller bug.
    """
    if action == NetworkAction.NORMAL:
        return
    if action == NetworkAction.FEEDER_FAULT:
        _require(not register.feeder_fault, action, register)
        register.feeder_fault = True
        register.feeder_loss_db = FEEDER_LOSS_DB
    elif action == NetworkAction.FEEDER_CLEARED:
        _require(register.feeder_fault, action, register)
        register.feeder_fault = False
        register.feeder_loss_db = 0.0
    elif action == NetworkAction.NEIGHBOR_DOWN:
        _require(not register.neighbor_down, action, register)
        register.neighbor_down = True
    elif action == NetworkAction.NEIGHBOR_UP:
        _require(register.neighbor_down, action, register)
        register.neighbor_down = False
    elif action == NetworkAction.VSWR_OUT:
        _require(not register.vswr_out, action, register)
        if rng is None:
            raise ValueError("VSWR_OUT requires an rng to draw the degraded ratio")
        v = float(rng.uniform(vswr.degraded_low, vswr.degraded_high))
        register.vswr_out = True
        register.vswr_current = v
        register.vswr_loss_db = abs(vswr_delta(register.vswr_nominal, v))
    elif action == NetworkAction.VSWR_BACK:
        _require(register.vswr_out, action, register)
        register.vswr_out = False
        register.vswr_current = register.vswr_nominal
        register.vswr_loss_db = 0.0
    else:  # pragma: no cover - IntEnum exhausts the cases
        raise ValueError(f"unknown network action {action!r}")


def _require(ok: bool, action: NetworkAction, register: FaultRegister) -> None:
    if not ok:
        raise ValueError(
            f"action {action.name} is illegal for register bits {register.bits_str()}")
