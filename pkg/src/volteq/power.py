"""Downlink transmit-power control.

Fixed power allocation (FPA) spreads the cell's maximum power evenly over
all PRBs and never moves. The closed loop applies per-TTI power commands
c in {-1, 0, +1} dB with a repetition factor eta, clamped so that the
per-PRB transmit power never exceeds the cell maximum:

    P_TX[t] = min(P_BS_max, P_TX[t-1] + eta*c)   (dBm)

Power is tracked as an exact offset from the initial setting (commands are
integer dB), so command/inverse-command pairs cancel without float drift.
There is no lower clamp unless min_power_dbm is configured.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import IntEnum


@dataclass(frozen=True)
class PcAction:
    action_id: int
    command: int      # c: -1, 0, +1 dB
    repetitions: int  # eta: commands issued within the TTI


# Table of agent actions: id -> (c, eta). The hold action keeps eta = 1;
# any repetition of a zero command is the same no-op.
PC_ACTIONS: tuple[PcAction, ...] = (
    PcAction(0, 0, 1),
    PcAction(1, -1, 3),
    PcAction(2, -1, 1),
    PcAction(3, +1, 1),
    PcAction(4, +1, 3),
)


class PcState(IntEnum):
    """Last applied command direction."""

    UNCHANGED = 0
    INCREASED = 1
    DECREASED = 2


def state_for_command(command: int) -> PcState:
    if command == 0:
        return PcState.UNCHANGED
    return PcState.INCREASED if command > 0 else PcState.DECREASED


@dataclass(frozen=True)
class PowerSetting:
    """Per-PRB transmit power as initial setting plus accumulated offset."""

    initial_dbm: float
    max_dbm: float
    offset_db: float = 0.0
    min_dbm: float | None = None

    def __post_init__(self):
        if self.initial_dbm > self.max_dbm:
            raise ValueError(
                f"initial power {self.initial_dbm} dBm exceeds max {self.max_dbm} dBm")

    @property
    def tx_dbm(self) -> float:
        return self.initial_dbm + self.offset_db


def fpa_power(p_bs_max_dbm: float, n_prb: int) -> float:
    """Fixed power allocation per PRB: P_BS_max - 10*log10(N_PRB) in dBm."""
    if n_prb < 1:
        raise ValueError(f"n_prb must be >= 1, got {n_prb}")
    return p_bs_max_dbm - 10.0 * math.log10(n_prb)


def apply_pc_action(action: PcAction, power: PowerSetting) -> tuple[PowerSetting, PcState]:
    """Apply one agent action; returns the new power and the resulting state.

    The state depends only on the command sign, not on the repetition factor.
    """
    offset = power.offset_db + action.repetitions * action.command
    cap = power.max_dbm - power.initial_dbm
    if offset > cap:
        offset = cap
    if power.min_dbm is not None:
        floor = power.min_dbm - power.initial_dbm
        if offset < floor:
            offset = floor
    return replace(power, offset_db=offset), state_for_command(action.command)
