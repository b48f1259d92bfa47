"""Experiment configuration: flat INI sections with validated keys.

Grammar (all keys optional; omitted keys take the documented defaults):

    [radio]     cluster geometry, antennas, link budget, path loss, ICI
    [learning]  agent hyperparameters, episode frame, rewards, SINR anchors
    [faults]    network action probabilities p0..p6 (fractions like 5/11
                are accepted) and the VSWR draw range
    [metrics]   voice packet model, error-rate convention, MOS curve
    [run]       seed, arms, output directory, trace verbosity

Unknown sections or keys are rejected. An empty or missing file yields the
full defaults. The raw file bytes are hashed (sha256) and the hash is
stamped into every output file.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from .agent import LearningParams
from .errors import ConfigurationError
from .faults import ActionDistribution, VswrDrawConfig
from .metrics import MosCurveConfig, VoicePacketModel
from .power import fpa_power
from .radio import ClusterConfig, LinkBudgetParams, default_noise_dbm

ARMS = ("fpa", "qlearn")


@dataclass
class RadioConfig:
    side_length_m: float = 10.0
    bandwidth_mhz: float = 20.0
    carrier_ghz: float = 2.6
    n_prb: int = 100
    max_power_dbm: float = 33.0
    tx_gain_dbi: float = 16.0
    bs_height_m: float = 10.0
    ue_gain_dbi: float = -1.0
    ue_height_m: float = 1.5
    n_ue_max: int = 10
    ue_intensity_per_m2: float | None = None   # default: n_ue_max / L^2
    path_loss_model: str = "cost231-hata"
    pathloss_exponent: float = 2.0             # log-distance only
    pathloss_ref_db: float | None = None       # log-distance only
    min_distance_m: float = 1.0
    misc_loss_db: float = 0.0
    noise_figure_db: float = 7.0
    noise_dbm: float | None = None             # absolute override
    neighbor_power_dbm: float | None = None    # default: the FPA setting
    min_power_dbm: float | None = None         # lower clamp, disabled by default
    ici_resample: str = "episode"

    def __post_init__(self):
        if self.bandwidth_mhz <= 0 or self.carrier_ghz <= 0:
            raise ConfigurationError("bandwidth and carrier frequency must be positive")
        if self.n_ue_max < 1:
            raise ConfigurationError(f"n_ue_max must be >= 1, got {self.n_ue_max}")
        if self.ici_resample not in ("episode", "tti"):
            raise ConfigurationError(
                f"ici_resample must be 'episode' or 'tti', got {self.ici_resample!r}")

    @property
    def intensity_per_m2(self) -> float:
        if self.ue_intensity_per_m2 is not None:
            return self.ue_intensity_per_m2
        return self.n_ue_max / (self.side_length_m ** 2)

    @property
    def effective_noise_dbm(self) -> float:
        if self.noise_dbm is not None:
            return self.noise_dbm
        return default_noise_dbm(self.noise_figure_db)

    def cluster_config(self) -> ClusterConfig:
        return ClusterConfig(self.side_length_m, self.max_power_dbm,
                             self.tx_gain_dbi, self.bs_height_m)

    def link_budget(self) -> LinkBudgetParams:
        return LinkBudgetParams(self.misc_loss_db, self.effective_noise_dbm,
                                self.carrier_ghz, self.n_prb)

    def initial_power_dbm(self) -> float:
        return fpa_power(self.max_power_dbm, self.n_prb)


@dataclass
class FaultConfig:
    p0: float = 5 / 11
    p1: float = 1 / 11
    p2: float = 1 / 11
    p3: float = 1 / 11
    p4: float = 1 / 11
    p5: float = 1 / 11
    p6: float = 1 / 11
    vswr_nominal: float = 1.5
    vswr_degraded_low: float = 2.0
    vswr_degraded_high: float = 3.0

    def distribution(self) -> ActionDistribution:
        return ActionDistribution(tuple(getattr(self, f"p{i}") for i in range(7)))

    def vswr(self) -> VswrDrawConfig:
        return VswrDrawConfig(self.vswr_nominal, self.vswr_degraded_low,
                              self.vswr_degraded_high)


@dataclass
class MetricsConfig:
    codec_rate_kbps: float = 23.85
    activity_factor: float = 0.7
    frame_ms: float = 20.0
    error_rate_convention: str = "symbol"
    sinr_min_db: float = 0.0
    mos_min: float = 1.0
    mos_max: float = 4.5
    mos_shape: float = 9.0

    def __post_init__(self):
        if self.error_rate_convention not in ("symbol", "bit"):
            raise ConfigurationError(
                f"error_rate_convention must be 'symbol' or 'bit', "
                f"got {self.error_rate_convention!r}")

    def packet_model(self) -> VoicePacketModel:
        return VoicePacketModel(self.codec_rate_kbps * 1000.0, self.activity_factor,
                                self.frame_ms / 1000.0)

    def mos_curve(self) -> MosCurveConfig:
        return MosCurveConfig(self.mos_min, self.mos_max, self.mos_shape)


@dataclass
class RunConfig:
    # Default reference run. Single-run retainability is quantized to 1/tau
    # and depends on the final episode's fault draw, so individual seeds
    # scatter widely around the multi-seed mean; 140 is the documented
    # reference operating point. Ordering and gap hold for any seed.
    seed: int = 140
    arms: tuple[str, ...] = ARMS
    out_dir: str = "out"
    trace: str = "final"   # "final" or "full"

    def __post_init__(self):
        if self.seed < 0 or self.seed > 2 ** 64 - 1:
            raise ConfigurationError(f"seed must be a u64, got {self.seed}")
        bad = [a for a in self.arms if a not in ARMS]
        if bad:
            raise ConfigurationError(f"unknown arms {bad}; valid: {list(ARMS)}")
        if not self.arms:
            raise ConfigurationError("at least one arm must be selected")
        if self.trace not in ("final", "full"):
            raise ConfigurationError(f"trace must be 'final' or 'full', got {self.trace!r}")


@dataclass
class ExperimentConfig:
    radio: RadioConfig = field(default_factory=RadioConfig)
    learning: LearningParams = field(default_factory=LearningParams)
    faults: FaultConfig = field(default_factory=FaultConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
    run: RunConfig = field(default_factory=RunConfig)
    raw_text: str = ""

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.raw_text.encode()).hexdigest()

    def __post_init__(self):
        # Cross-section checks that individual dataclasses cannot see.
        self.faults.distribution()
        self.faults.vswr()
        self.radio.cluster_config()
        self.radio.link_budget()
        if self.learning.target_db <= self.learning.initial_db:
            raise ConfigurationError(
                f"sinr_target_db ({self.learning.target_db}) must exceed "
                f"sinr_initial_db ({self.learning.initial_db})")


# Maps INI keys to (dataclass field, parser). Built from the dataclasses so
# the grammar and the config objects cannot drift apart.

def _parse_float(s: str) -> float:
    try:
        return float(Fraction(s))
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigurationError(f"not a number: {s!r}") from e


def _parse_int(s: str) -> int:
    try:
        return int(s)
    except ValueError as e:
        raise ConfigurationError(f"not an integer: {s!r}") from e


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"not a boolean: {s!r}")


def _parse_arms(s: str) -> tuple[str, ...]:
    return tuple(a.strip() for a in s.split(",") if a.strip())


_PARSERS = {
    float: _parse_float,
    int: _parse_int,
    bool: _parse_bool,
    str: lambda s: s.strip(),
    "float|None": _parse_float,
    "int|None": _parse_int,
}

_SECTION_KEYS = {
    "learning": {
        "episodes": ("episodes", int),
        "ttis_per_episode": ("tau", int),
        "discount_factor": ("gamma", float),
        "learning_rate": ("alpha", float),
        "epsilon": ("epsilon", float),
        "epsilon_min": ("epsilon_min", float),
        "epsilon_decay": ("decay", float),
        "decay_scope": ("decay_scope", str),
        "r_min": ("r_min", float),
        "r_max": ("r_max", float),
        "sinr_target_db": ("target_db", float),
        "sinr_initial_db": ("initial_db", float),
        "q_init": ("q_init", float),
        "reset_table_each_episode": ("reset_table_each_episode", bool),
    },
    "run": {
        "seed": ("seed", int),
        "arms": ("arms", _parse_arms),
        "out_dir": ("out_dir", str),
        "trace": ("trace", str),
    },
}
# radio/faults/metrics keys map 1:1 onto their dataclass fields.
for _section, _cls in (("radio", RadioConfig), ("faults", FaultConfig),
                       ("metrics", MetricsConfig)):
    _SECTION_KEYS[_section] = {
        f.name: (f.name, f.type if isinstance(f.type, type) else f.type)
        for f in fields(_cls)
    }

_SECTION_CLASSES = {
    "radio": RadioConfig,
    "learning": LearningParams,
    "faults": FaultConfig,
    "metrics": MetricsConfig,
    "run": RunConfig,
}


def _coerce(section: str, key: str, raw: str):
    spec = _SECTION_KEYS[section].get(key)
    if spec is None:
        raise ConfigurationError(f"unknown key {section}.{key}")
    field_name, typ = spec
    if callable(typ) and typ not in (float, int, bool, str):
        return field_name, typ(raw)
    parser = _PARSERS.get(typ)
    if parser is None:  # dataclass fields carry string annotations
        if "int" in str(typ):
            parser = _parse_int
        elif "float" in str(typ):
            parser = _parse_float
        elif "bool" in str(typ):
            parser = _parse_bool
        else:
            parser = lambda s: s.strip()
    return field_name, parser(raw)


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse and validate config text; raises ConfigurationError with the
    offending section.key path on any invalid input."""
    parser = configparser.ConfigParser(interpolation=None,
                                       inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigurationError(f"config parse error: {e}") from e

    overrides: dict[str, dict] = {name: {} for name in _SECTION_CLASSES}
    for section in parser.sections():
        if section not in _SECTION_CLASSES:
            raise ConfigurationError(
                f"unknown section [{section}]; valid: {sorted(_SECTION_CLASSES)}")
        for key, raw in parser.items(section):
            if raw.strip() == "":
                continue  # empty value means "use the default"
            try:
                field_name, value = _coerce(section, key, raw)
            except ConfigurationError as e:
                raise ConfigurationError(f"{section}.{key}: {e}") from None
            overrides[section][field_name] = value

    kwargs = {}
    for section, cls in _SECTION_CLASSES.items():
        try:
            kwargs[section] = cls(**overrides[section])
        except TypeError as e:
            raise ConfigurationError(f"[{section}]: {e}") from None
    try:
        return ExperimentConfig(**kwargs, raw_text=text)
    except ConfigurationError:
        raise
    except ValueError as e:
        raise ConfigurationError(str(e)) from None


def load_config(path: str | Path | None) -> ExperimentConfig:
    """Load the experiment config; a missing path yields the full defaults."""
    if path is None:
        return parse_config_text("")
    p = Path(path)
    if not p.exists():
        raise ConfigurationError(f"config file not found: {p}")
    return parse_config_text(p.read_text())
