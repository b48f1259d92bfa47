"""Shared helpers for building small episode environments."""

import pytest

from volteq.agent import EpisodeContext
from volteq.config import ExperimentConfig
from volteq.faults import FaultRegister
from volteq.power import PowerSetting
from volteq.radio import (Cost231Hata, SinrEvaluator, build_episode_geometry,
                          generate_cluster, sample_ici, sample_ues)
from volteq.sim import substream


def make_context(seed=0, episode=1, dist=None, arm="qlearn",
                 config: ExperimentConfig | None = None) -> EpisodeContext:
    """One-episode context wired exactly like the harness does it."""
    cfg = config if config is not None else ExperimentConfig()
    radio = cfg.radio
    layout = generate_cluster(radio.cluster_config())
    budget = radio.link_budget()
    model = Cost231Hata(radio.carrier_ghz * 1000.0, radio.bs_height_m,
                        radio.ue_height_m, radio.min_distance_m)
    initial_power = radio.initial_power_dbm()

    placement_rng = substream(seed, "placement", episode)
    ici_rng = substream(seed, "ici", episode)
    ues = sample_ues(layout, radio.intensity_per_m2, radio.n_ue_max, placement_rng,
                     ue_gain_dbi=radio.ue_gain_dbi, ue_height_m=radio.ue_height_m)
    geometry = build_episode_geometry(layout, ues.serving_ues(layout), model,
                                      budget, initial_power)
    ici = sample_ici(len(layout) - 1, ici_rng)
    evaluator = SinrEvaluator(geometry, ici, initial_power, budget.misc_loss_db,
                              cfg.learning.initial_db)
    vswr = cfg.faults.vswr()
    return EpisodeContext(
        evaluator=evaluator,
        register=FaultRegister(vswr_nominal=vswr.nominal, vswr_current=vswr.nominal),
        power=PowerSetting(initial_power, radio.max_power_dbm),
        base_misc_loss_db=budget.misc_loss_db,
        dist=dist,
        vswr=vswr,
        fault_rng=substream(seed, "faults", episode),
        explore_rng=substream(seed, "exploration", episode, arm),
        n_neighbors=len(layout) - 1,
    )


@pytest.fixture
def default_config() -> ExperimentConfig:
    return ExperimentConfig()
