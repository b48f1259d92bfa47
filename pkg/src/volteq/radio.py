"""Indoor small-cell radio environment.

Builds the square-tessellated cluster (serving cell at the origin plus one
tier of four edge-adjacent neighbors), scatters VoLTE UEs with a homogeneous
Poisson point process, and evaluates the forward link budget

    P_UE = P_TX + G_TX - L_m - L_a + G_UE   (dBm)

per UE, the per-UE downlink SINR

    gamma_i = P_UE,i / (sigma_n^2 + sum_j k_j * P_UE,j)   (linear)

against the same-PRB neighbor collisions, and the effective downlink SINR
10*log10(mean_i gamma_i) in dB, which is the closed-loop control objective.

UEs are stationary and the channel is deterministic path loss (no fast
fading), so per-episode link terms are precomputed once and per-TTI changes
reduce to dB shifts of the serving links; see EpisodeGeometry/SinrEvaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigurationError

PRB_BANDWIDTH_HZ = 180_000.0
THERMAL_NOISE_DBM_PER_HZ = -174.0
SPEED_OF_LIGHT_M_S = 299_792_458.0


def default_noise_dbm(noise_figure_db: float = 7.0,
                      bandwidth_hz: float = PRB_BANDWIDTH_HZ) -> float:
    """Thermal noise over one PRB allocation plus the UE noise figure."""
    return THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


# ---------------------------------------------------------------------------
# Cluster and UE population
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    cell_id: int
    position: tuple[float, float]
    max_power_dbm: float
    tx_gain_dbi: float
    height_m: float


@dataclass(frozen=True)
class ClusterLayout:
    """Serving cell at the origin plus one tier of square-tessellation neighbors."""

    cells: tuple[Cell, ...]
    serving_cell_id: int
    side_length_m: float

    @property
    def serving_cell(self) -> Cell:
        return self.cells[self.serving_cell_id]

    @property
    def neighbor_cells(self) -> tuple[Cell, ...]:
        return tuple(c for c in self.cells if c.cell_id != self.serving_cell_id)

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class ClusterConfig:
    side_length_m: float = 10.0
    max_power_dbm: float = 33.0
    tx_gain_dbi: float = 16.0
    bs_height_m: float = 10.0


def generate_cluster(config: ClusterConfig) -> ClusterLayout:
    """Five-cell layout: serving cell at (0,0), neighbors at (+-L,0),(0,+-L)."""
    L = config.side_length_m
    if not (math.isfinite(L) and L > 0):
        raise ConfigurationError(f"side_length_m must be positive and finite, got {L}")
    for name in ("max_power_dbm", "tx_gain_dbi", "bs_height_m"):
        v = getattr(config, name)
        if not math.isfinite(v):
            raise ConfigurationError(f"{name} must be finite, got {v}")
    if config.bs_height_m <= 0:
        raise ConfigurationError(f"bs_height_m must be positive, got {config.bs_height_m}")
    positions = [(0.0, 0.0), (L, 0.0), (-L, 0.0), (0.0, L), (0.0, -L)]
    cells = tuple(
        Cell(i, pos, config.max_power_dbm, config.tx_gain_dbi, config.bs_height_m)
        for i, pos in enumerate(positions)
    )
    return ClusterLayout(cells=cells, serving_cell_id=0, side_length_m=L)


@dataclass(frozen=True)
class Ue:
    ue_id: int
    position: tuple[float, float]
    gain_dbi: float
    height_m: float


@dataclass(frozen=True)
class UePopulation:
    """Per-cell UE lists, indexed like the layout's cells."""

    per_cell: tuple[tuple[Ue, ...], ...]
    intensity_per_m2: float
    max_per_cell: int

    def serving_ues(self, layout: ClusterLayout) -> tuple[Ue, ...]:
        return self.per_cell[layout.serving_cell_id]


def sample_ues(layout: ClusterLayout, intensity_per_m2: float, max_per_cell: int,
               rng: np.random.Generator, *, ue_gain_dbi: float = -1.0,
               ue_height_m: float = 1.5) -> UePopulation:
    """Homogeneous PPP per cell: N ~ Poisson(lambda*L^2) truncated to
    [1, max_per_cell], positions i.i.d. uniform over the cell square."""
    if not (intensity_per_m2 > 0):
        raise ConfigurationError(f"intensity_per_m2 must be positive, got {intensity_per_m2}")
    if max_per_cell < 1:
        raise ConfigurationError(f"max_per_cell must be >= 1, got {max_per_cell}")
    L = layout.side_length_m
    mean = intensity_per_m2 * L * L
    per_cell = []
    ue_id = 0
    for cell in layout.cells:
        n = int(min(max(rng.poisson(mean), 1), max_per_cell))
        cx, cy = cell.position
        xs = cx + L * (rng.random(n) - 0.5)
        ys = cy + L * (rng.random(n) - 0.5)
        ues = []
        for x, y in zip(xs, ys):
            ues.append(Ue(ue_id, (float(x), float(y)), ue_gain_dbi, ue_height_m))
            ue_id += 1
        per_cell.append(tuple(ues))
    return UePopulation(tuple(per_cell), intensity_per_m2, max_per_cell)


# ---------------------------------------------------------------------------
# Path loss
# ---------------------------------------------------------------------------

class Cost231Hata:
    """COST 231-Hata path loss, urban with the small/medium-city mobile
    antenna correction and C = 0:

        PL = 46.3 + 33.9 log10(f) - 13.82 log10(h_b) - a(h_m)
             + (44.9 - 6.55 log10(h_b)) log10(d_km) + C
        a(h_m) = (1.1 log10(f) - 0.7) h_m - (1.56 log10(f) - 0.8)

    with f in MHz, heights in meters. The model is applied at the configured
    carrier even above its nominal 2 GHz validity ceiling; distances are
    clamped at min_distance_m and the returned loss is floored at 0 dB.
    """

    name = "cost231-hata"

    def __init__(self, frequency_mhz: float, bs_height_m: float, ue_height_m: float,
                 min_distance_m: float = 1.0, correction_db: float = 0.0):
        if frequency_mhz <= 0 or bs_height_m <= 0 or ue_height_m <= 0:
            raise ConfigurationError("frequency and antenna heights must be positive")
        if min_distance_m <= 0:
            raise ConfigurationError("min_distance_m must be positive")
        lf = math.log10(frequency_mhz)
        a_hm = (1.1 * lf - 0.7) * ue_height_m - (1.56 * lf - 0.8)
        self.min_distance_m = min_distance_m
        self.slope = 44.9 - 6.55 * math.log10(bs_height_m)
        self.intercept = (46.3 + 33.9 * lf - 13.82 * math.log10(bs_height_m)
                          - a_hm + correction_db)

    def loss_db(self, distance_m):
        d_km = np.maximum(np.asarray(distance_m, dtype=np.float64), self.min_distance_m) / 1000.0
        return np.maximum(self.intercept + self.slope * np.log10(d_km), 0.0)


class LogDistance:
    """Log-distance path loss PL(d) = PL(d0) + 10*n*log10(d/d0); the default
    reference is free-space loss at d0 = 1 m for the configured carrier."""

    name = "log-distance"

    def __init__(self, frequency_mhz: float, exponent: float = 2.0,
                 reference_loss_db: float | None = None,
                 reference_distance_m: float = 1.0, min_distance_m: float = 1.0):
        if exponent <= 0 or reference_distance_m <= 0 or min_distance_m <= 0:
            raise ConfigurationError("log-distance parameters must be positive")
        if reference_loss_db is None:
            f_hz = frequency_mhz * 1e6
            reference_loss_db = 20.0 * math.log10(
                4.0 * math.pi * reference_distance_m * f_hz / SPEED_OF_LIGHT_M_S)
        self.exponent = exponent
        self.reference_loss_db = reference_loss_db
        self.reference_distance_m = reference_distance_m
        self.min_distance_m = min_distance_m

    def loss_db(self, distance_m):
        d = np.maximum(np.asarray(distance_m, dtype=np.float64), self.min_distance_m)
        pl = self.reference_loss_db + 10.0 * self.exponent * np.log10(d / self.reference_distance_m)
        return np.maximum(pl, 0.0)


PATH_LOSS_MODELS = {Cost231Hata.name: Cost231Hata, LogDistance.name: LogDistance}


def make_path_loss_model(name: str, *, frequency_ghz: float, bs_height_m: float,
                         ue_height_m: float, min_distance_m: float = 1.0,
                         exponent: float = 2.0, reference_loss_db: float | None = None):
    key = name.strip().lower()
    if key == Cost231Hata.name:
        return Cost231Hata(frequency_ghz * 1000.0, bs_height_m, ue_height_m, min_distance_m)
    if key == LogDistance.name:
        return LogDistance(frequency_ghz * 1000.0, exponent, reference_loss_db,
                           min_distance_m=min_distance_m)
    raise ConfigurationError(
        f"unsupported path loss model {name!r}; supported: {sorted(PATH_LOSS_MODELS)}")


def path_loss(tx_pos, rx_pos, model) -> float:
    """Path loss in dB between two planar positions under the given model."""
    dx = tx_pos[0] - rx_pos[0]
    dy = tx_pos[1] - rx_pos[1]
    return float(model.loss_db(math.hypot(dx, dy)))


# ---------------------------------------------------------------------------
# Link budget and SINR
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinkBudgetParams:
    """Static forward-link terms; misc_loss_db is the no-fault baseline (the
    fault process adds time-varying loss on top of it, serving cell only)."""

    misc_loss_db: float = 0.0
    noise_dbm: float = field(default_factory=default_noise_dbm)
    frequency_ghz: float = 2.6
    n_prb: int = 100

    def __post_init__(self):
        if self.misc_loss_db < 0:
            raise ConfigurationError(f"misc_loss_db must be >= 0, got {self.misc_loss_db}")
        if not math.isfinite(self.noise_dbm):
            raise ConfigurationError(f"noise_dbm must be finite, got {self.noise_dbm}")
        if self.n_prb < 1:
            raise ConfigurationError(f"n_prb must be >= 1, got {self.n_prb}")

    @property
    def noise_mw(self) -> float:
        return kernels.dbm_to_mw(self.noise_dbm)


@dataclass(frozen=True)
class IciProfile:
    """Same-PRB collision proportion k_j per neighbor, in layout neighbor order."""

    k: np.ndarray
    resample: str = "episode"  # "episode" or "tti"

    def __post_init__(self):
        k = np.asarray(self.k, dtype=np.float64)
        if np.any(k < 0) or np.any(k > 1):
            raise ConfigurationError("ICI coefficients must lie in [0, 1]")
        object.__setattr__(self, "k", k)
        if self.resample not in ("episode", "tti"):
            raise ConfigurationError(f"unknown ICI resample policy {self.resample!r}")


def sample_ici(n_neighbors: int, rng: np.random.Generator,
               resample: str = "episode") -> IciProfile:
    return IciProfile(rng.random(n_neighbors), resample)


def received_power(p_tx_dbm: float, tx_gain_dbi: float, misc_loss_db: float,
                   path_loss_db: float, ue_gain_dbi: float) -> float:
    """Forward link budget: P_TX + G_TX - L_m - L_a + G_UE in dBm."""
    return p_tx_dbm + tx_gain_dbi - misc_loss_db - path_loss_db + ue_gain_dbi


def sinr_per_ue(p_serving_mw, p_interf_mw, k, noise_mw: float) -> np.ndarray:
    """Per-UE linear SINR from per-cell received powers (mW).

    p_interf_mw has shape (n_ue, n_neighbors) and k one collision coefficient
    per neighbor; the denominator noise term keeps the quotient finite.
    """
    if noise_mw <= 0:
        raise ValueError(f"noise power must be positive, got {noise_mw}")
    p_serving = np.ascontiguousarray(p_serving_mw, dtype=np.float64)
    p_interf = np.ascontiguousarray(p_interf_mw, dtype=np.float64)
    kk = np.ascontiguousarray(k, dtype=np.float64)
    return kernels.sinr_per_ue(p_serving, p_interf, kk, float(noise_mw))


def effective_sinr(gamma_lin) -> float:
    """Serving-cell effective downlink SINR: 10*log10(mean of linear SINRs)."""
    g = np.ascontiguousarray(gamma_lin, dtype=np.float64)
    if g.size == 0:
        raise ValueError("effective SINR of an empty UE list is undefined")
    if np.any(g <= 0):
        raise ValueError("per-UE linear SINRs must be positive")
    return kernels.effective_sinr_db(g)


def sinr_delta(now_db: float, prev_db: float) -> float:
    """Effective SINR gain (or loss) between consecutive TTIs, in dB."""
    return now_db - prev_db


# ---------------------------------------------------------------------------
# Per-episode cached geometry and the calibrated evaluator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpisodeGeometry:
    """Link terms fixed for one episode (stationary UEs, static neighbors).

    serving_dbm_base excludes P_TX and L_m: per TTI the serving received power
    is serving_dbm_base + (P_TX - L_m). interf_mw holds each neighbor's
    received power (mW) at its fixed transmit power, per serving-cell UE.
    """

    serving_dbm_base: np.ndarray        # (n_ue,)
    interf_mw: np.ndarray               # (n_ue, n_neighbors)
    noise_mw: float
    bound_denom_mw: float               # noise + (|C|-2) * P_BS^max, in mW

    @property
    def n_ue(self) -> int:
        return int(self.serving_dbm_base.shape[0])

    def denominators_mw(self, k) -> np.ndarray:
        return self.noise_mw + self.interf_mw @ np.asarray(k, dtype=np.float64)


def build_episode_geometry(layout: ClusterLayout, ues: tuple[Ue, ...], model,
                           budget: LinkBudgetParams,
                           neighbor_power_dbm: float) -> EpisodeGeometry:
    """Precompute link terms for the serving cell's UEs for one episode."""
    serving = layout.serving_cell
    pos = np.array([ue.position for ue in ues], dtype=np.float64)
    gains = np.array([ue.gain_dbi for ue in ues], dtype=np.float64)

    d_serv = np.hypot(pos[:, 0] - serving.position[0], pos[:, 1] - serving.position[1])
    serving_dbm_base = serving.tx_gain_dbi - model.loss_db(d_serv) + gains

    neighbors = layout.neighbor_cells
    interf_dbm = np.empty((len(ues), len(neighbors)), dtype=np.float64)
    for j, cell in enumerate(neighbors):
        d = np.hypot(pos[:, 0] - cell.position[0], pos[:, 1] - cell.position[1])
        interf_dbm[:, j] = received_power(neighbor_power_dbm, cell.tx_gain_dbi,
                                          budget.misc_loss_db, 0.0, 0.0) - model.loss_db(d) + gains
    interf_mw = 10.0 ** (interf_dbm / 10.0)

    pmax_mw = kernels.dbm_to_mw(serving.max_power_dbm)
    bound_denom = budget.noise_mw + (len(layout) - 2) * pmax_mw
    return EpisodeGeometry(
        serving_dbm_base=np.ascontiguousarray(serving_dbm_base),
        interf_mw=np.ascontiguousarray(interf_mw),
        noise_mw=budget.noise_mw,
        bound_denom_mw=bound_denom,
    )


class SinrEvaluator:
    """Per-episode effective-SINR evaluator, calibrated so that the no-fault
    value at the initial transmit power reports exactly the configured
    starting SINR; all dynamics (power commands, fault losses, the
    neighbor-down bound) then move the reported value from that anchor.
    """

    def __init__(self, geometry: EpisodeGeometry, ici: IciProfile,
                 initial_power_dbm: float, base_misc_loss_db: float, anchor_db: float):
        self._geom = geometry
        self._base_misc_loss_db = base_misc_loss_db
        self._anchor_db = anchor_db
        self._denom_mw = np.ascontiguousarray(geometry.denominators_mw(ici.k))
        self._raw0 = kernels.shifted_effective_sinr_db(
            geometry.serving_dbm_base, self._denom_mw,
            initial_power_dbm - base_misc_loss_db)

    def set_ici(self, k) -> None:
        """Swap collision coefficients (per-TTI resampling policy)."""
        self._denom_mw = np.ascontiguousarray(self._geom.denominators_mw(k))

    def raw_db(self, p_tx_dbm: float, misc_loss_db: float, neighbor_down: bool) -> float:
        delta = p_tx_dbm - misc_loss_db
        if neighbor_down:
            return kernels.bound_effective_sinr_db(
                self._geom.serving_dbm_base, delta, self._geom.bound_denom_mw)
        return kernels.shifted_effective_sinr_db(
            self._geom.serving_dbm_base, self._denom_mw, delta)

    def calibrated_db(self, p_tx_dbm: float, misc_loss_db: float,
                      neighbor_down: bool = False) -> float:
        """Reported effective SINR: anchor + (raw - raw at episode start)."""
        return self._anchor_db + (self.raw_db(p_tx_dbm, misc_loss_db, neighbor_down)
                                  - self._raw0)
