"""Tabular Q-learning agent for closed-loop power control, and the per-TTI
episode loop shared by the learning and fixed-power arms.

One episode covers one VoLTE frame of at most tau TTIs. Every TTI: decay the
exploration rate, sample and apply a network action, pick a power-control
action (epsilon-greedy over the 3x5 value table), apply it, re-evaluate the
effective downlink SINR, grant a reward, and update the table with

    Q(s,a) <- (1-alpha) Q(s,a) + alpha (r + gamma * max_a' Q(s',a')).

The episode ends as soon as the effective SINR reaches the target, or after
tau TTIs (timeout). Rewards are the terminal extremes r_max/r_min for
target/timeout and otherwise the sign of the per-TTI SINR change.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import ConfigurationError
from .faults import ActionDistribution, FaultRegister, VswrDrawConfig, apply_action, sample_action
from .power import PC_ACTIONS, PowerSetting, apply_pc_action
from .radio import SinrEvaluator

N_STATES = 3
N_ACTIONS = 5

SINR_EQUALITY_TOL_DB = 1e-6


@dataclass
class LearningParams:
    """Agent hyperparameters and the episode/reward frame."""

    alpha: float = 0.001
    gamma: float = 0.95
    epsilon: float = 1.0
    decay: float = 0.99
    epsilon_min: float = 0.01
    tau: int = 20                 # TTIs per episode (one 20 ms VoLTE frame)
    episodes: int = 707
    r_min: float = -20.0
    r_max: float = 20.0
    target_db: float = 6.0
    initial_db: float = 4.0
    decay_scope: str = "tti"      # "tti" (inside the loop) or "episode"
    q_init: float = 0.0
    reset_table_each_episode: bool = False

    def __post_init__(self):
        checks = [
            (0.0 < self.alpha < 1.0, f"alpha must be in (0,1), got {self.alpha}"),
            (0.0 < self.gamma < 1.0, f"gamma must be in (0,1), got {self.gamma}"),
            (0.0 < self.epsilon <= 1.0, f"epsilon must be in (0,1], got {self.epsilon}"),
            (0.0 < self.decay <= 1.0, f"decay must be in (0,1], got {self.decay}"),
            (0.0 < self.epsilon_min <= self.epsilon,
             f"epsilon_min must be in (0, epsilon], got {self.epsilon_min}"),
            (self.tau >= 1, f"tau must be >= 1, got {self.tau}"),
            (self.episodes >= 1, f"episodes must be >= 1, got {self.episodes}"),
            (self.r_min < -1.0, f"r_min must be < -1, got {self.r_min}"),
            (self.r_max > 1.0, f"r_max must be > 1, got {self.r_max}"),
            (self.decay_scope in ("tti", "episode"),
             f"decay_scope must be 'tti' or 'episode', got {self.decay_scope!r}"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigurationError(msg)


class QTable:
    """3x5 state-action value table."""

    def __init__(self, init_value: float = 0.0):
        self.values = np.full((N_STATES, N_ACTIONS), float(init_value), dtype=np.float64)

    def greedy_action(self, state: int) -> int:
        return int(kernels.row_argmax(self.values, state))

    def copy(self) -> "QTable":
        t = QTable()
        t.values = self.values.copy()
        return t


def q_update(table: QTable, s: int, a: int, r: float, s_next: int,
             alpha: float, gamma: float) -> float:
    """Bellman update of the visited entry; returns the new Q(s,a)."""
    return float(kernels.q_update(table.values, s, a, r, s_next, alpha, gamma))


def select_action(table: QTable, state: int, epsilon: float,
                  rng: np.random.Generator) -> int:
    """Epsilon-greedy: uniform random action with probability epsilon, else
    the greedy row argmax (ties to the lowest action id)."""
    if rng.random() <= epsilon:
        return int(rng.integers(N_ACTIONS))
    return table.greedy_action(state)


def decay_epsilon(epsilon: float, decay: float, epsilon_min: float) -> float:
    return max(epsilon * decay, epsilon_min)


def reward(now_db: float, prev_db: float, target_db: float, t: int, tau: int,
           r_min: float, r_max: float) -> float:
    """Per-TTI reward: r_max on reaching the target, r_min on frame timeout
    without it, otherwise the sign of the SINR change (small-change tolerance
    treats |delta| <= 1e-6 dB as unchanged)."""
    if now_db >= target_db:
        return r_max
    if t >= tau:
        return r_min
    delta = now_db - prev_db
    if delta > SINR_EQUALITY_TOL_DB:
        return 1.0
    if delta < -SINR_EQUALITY_TOL_DB:
        return -1.0
    return 0.0


class QAgent:
    """Learning state that persists across episodes: table and exploration rate."""

    def __init__(self, params: LearningParams, table: QTable | None = None):
        self.params = params
        self.table = table if table is not None else QTable(params.q_init)
        self.epsilon = params.epsilon


class TtiRecord(NamedTuple):
    """One executed TTI of the trace."""

    episode: int
    t: int
    state: int
    action: int
    command: int
    repetitions: int
    p_tx_dbm: float
    sinr_db: float
    fault_action: int
    register: str
    reward: float


@dataclass
class EpisodeResult:
    episode: int
    records: list[TtiRecord]
    target_met: bool
    final_sinr_db: float

    @property
    def ttis(self) -> int:
        return len(self.records)


@dataclass
class EpisodeContext:
    """Everything one episode needs from the harness."""

    evaluator: SinrEvaluator
    register: FaultRegister
    power: PowerSetting
    base_misc_loss_db: float
    dist: ActionDistribution | None       # None disables fault sampling
    vswr: VswrDrawConfig = field(default_factory=VswrDrawConfig)
    fault_rng: np.random.Generator | None = None
    explore_rng: np.random.Generator | None = None
    ici_rng: np.random.Generator | None = None  # set for per-TTI ICI resampling
    n_neighbors: int = 4


def run_episode(ctx: EpisodeContext, agent: QAgent | None, params: LearningParams,
                episode: int) -> EpisodeResult:
    """Run one episode (one VoLTE frame).

    With an agent, this is the closed-loop learning iteration described in
    the module docstring. With agent=None the arm is fixed power allocation:
    no commands are sent, no learning happens, and the loop only tracks the
    fault process and the resulting SINR (the reward column is logged as 0).
    """
    power = ctx.power
    register = ctx.register
    sinr_prev = params.initial_db
    state = 0
    records: list[TtiRecord] = []
    target_met = False
    sinr = sinr_prev

    if agent is not None and params.reset_table_each_episode:
        agent.table = QTable(params.q_init)

    for t in range(1, params.tau + 1):
        if agent is not None and (params.decay_scope == "tti" or t == 1):
            agent.epsilon = decay_epsilon(agent.epsilon, params.decay, params.epsilon_min)

        if ctx.dist is not None:
            nu = sample_action(register, ctx.dist, ctx.fault_rng)
            apply_action(nu, register, ctx.vswr, ctx.fault_rng)
        else:
            nu = 0

        if ctx.ici_rng is not None:
            ctx.evaluator.set_ici(ctx.ici_rng.random(ctx.n_neighbors))

        if agent is not None:
            action_id = select_action(agent.table, state, agent.epsilon, ctx.explore_rng)
            pc = PC_ACTIONS[action_id]
            power, next_state = apply_pc_action(pc, power)
        else:
            action_id, pc, next_state = 0, PC_ACTIONS[0], 0

        misc_loss = ctx.base_misc_loss_db + register.extra_misc_loss_db
        sinr = ctx.evaluator.calibrated_db(power.tx_dbm, misc_loss, register.neighbor_down)

        if agent is not None:
            r = reward(sinr, sinr_prev, params.target_db, t, params.tau,
                       params.r_min, params.r_max)
            q_update(agent.table, state, action_id, r, int(next_state),
                     params.alpha, params.gamma)
        else:
            r = 0.0

        records.append(TtiRecord(
            episode=episode, t=t, state=state, action=action_id,
            command=pc.command if agent is not None else 0,
            repetitions=pc.repetitions if agent is not None else 0,
            p_tx_dbm=power.tx_dbm, sinr_db=sinr, fault_action=int(nu),
            register=register.bits_str(), reward=r,
        ))

        state = int(next_state)
        sinr_prev = sinr
        if sinr >= params.target_db:
            target_met = True
            break

    return EpisodeResult(episode=episode, records=records,
                         target_met=target_met, final_sinr_db=sinr)
