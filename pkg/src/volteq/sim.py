"""Experiment harness: runs the FPA and Q-learning arms over the configured
episodes, collects traces, computes final-episode metrics, and writes the
trace/metrics/figure files.

RNG discipline: one master seed feeds named Philox (counter-based)
substreams keyed by (seed, stream, episode) -- placement, ici, faults --
plus an exploration stream additionally keyed by arm. Environment streams
carry no arm component, so both arms face identical per-episode environment
realizations and adding an arm never perturbs the other's trajectory.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .agent import EpisodeContext, EpisodeResult, QAgent, TtiRecord, run_episode
from .config import ExperimentConfig
from .faults import FaultRegister
from .metrics import arm_metrics
from .power import PowerSetting
from .radio import (SinrEvaluator, build_episode_geometry, generate_cluster,
                    make_path_loss_model, sample_ici, sample_ues)

log = logging.getLogger("volteq")

STREAM_IDS = {"placement": 0, "ici": 1, "faults": 2, "exploration": 3}
ARM_IDS = {"fpa": 0, "qlearn": 1}

TRACE_COLUMNS = ("episode", "t", "s", "a", "c", "eta", "p_tx_dbm",
                 "sinr_eff_db", "nu", "register", "reward")


def substream(seed: int, stream: str, episode: int,
              arm: str | None = None) -> np.random.Generator:
    """Named counter-based substream; see the module docstring for keying."""
    entropy = [seed, STREAM_IDS[stream], episode]
    if arm is not None:
        entropy.append(ARM_IDS[arm])
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


@dataclass
class ArmResult:
    arm: str
    summary: dict
    final_records: list[TtiRecord]
    all_records: list[TtiRecord] | None   # populated when trace verbosity is "full"
    episodes_target_met: list[bool]
    agent: QAgent | None = None


def run_experiment(config: ExperimentConfig, arm: str,
                   seed: int | None = None) -> ArmResult:
    """Run one arm for the configured number of episodes.

    The Q-learning arm trains one agent across all episodes; the FPA arm
    sends no commands. Metrics come from the final episode's trace.
    """
    if arm not in ARM_IDS:
        raise ValueError(f"unknown arm {arm!r}; valid: {sorted(ARM_IDS)}")
    started = time.perf_counter()
    seed = config.run.seed if seed is None else seed
    radio = config.radio
    params = config.learning
    layout = generate_cluster(radio.cluster_config())
    budget = radio.link_budget()
    model = make_path_loss_model(
        radio.path_loss_model, frequency_ghz=radio.carrier_ghz,
        bs_height_m=radio.bs_height_m, ue_height_m=radio.ue_height_m,
        min_distance_m=radio.min_distance_m, exponent=radio.pathloss_exponent,
        reference_loss_db=radio.pathloss_ref_db)
    initial_power = radio.initial_power_dbm()
    neighbor_power = (radio.neighbor_power_dbm if radio.neighbor_power_dbm is not None
                      else initial_power)
    dist = config.faults.distribution()
    vswr = config.faults.vswr()
    n_neighbors = len(layout) - 1

    agent = QAgent(params) if arm == "qlearn" else None
    keep_all = config.run.trace == "full"
    all_records: list[TtiRecord] | None = [] if keep_all else None
    final: EpisodeResult | None = None
    episodes_target_met: list[bool] = []
    total_ttis = 0

    for z in range(1, params.episodes + 1):
        placement_rng = substream(seed, "placement", z)
        ici_rng = substream(seed, "ici", z)
        fault_rng = substream(seed, "faults", z)
        explore_rng = substream(seed, "exploration", z, arm) if agent else None

        ues = sample_ues(layout, radio.intensity_per_m2, radio.n_ue_max,
                         placement_rng, ue_gain_dbi=radio.ue_gain_dbi,
                         ue_height_m=radio.ue_height_m)
        geometry = build_episode_geometry(layout, ues.serving_ues(layout), model,
                                          budget, neighbor_power)
        ici = sample_ici(n_neighbors, ici_rng, radio.ici_resample)
        evaluator = SinrEvaluator(geometry, ici, initial_power,
                                  budget.misc_loss_db, params.initial_db)
        ctx = EpisodeContext(
            evaluator=evaluator,
            register=FaultRegister(vswr_nominal=vswr.nominal, vswr_current=vswr.nominal),
            power=PowerSetting(initial_power, radio.max_power_dbm,
                               min_dbm=radio.min_power_dbm),
            base_misc_loss_db=budget.misc_loss_db,
            dist=dist,
            vswr=vswr,
            fault_rng=fault_rng,
            explore_rng=explore_rng,
            ici_rng=ici_rng if radio.ici_resample == "tti" else None,
            n_neighbors=n_neighbors,
        )
        result = run_episode(ctx, agent, params, z)
        total_ttis += result.ttis
        episodes_target_met.append(result.target_met)
        if keep_all:
            all_records.extend(result.records)
        final = result

    m = arm_metrics([rec.sinr_db for rec in final.records], params.tau,
                    config.metrics.sinr_min_db, config.metrics.packet_model(),
                    config.metrics.mos_curve(), config.metrics.error_rate_convention)
    summary = {
        "arm": arm,
        "seed": seed,
        "episodes": params.episodes,
        "total_ttis": total_ttis,
        "final_episode_ttis": final.ttis,
        "final_episode_target_met": final.target_met,
        "retainability": m["retainability"],
        "mos": m["mos"],
        "mean_per": m["mean_per"],
        "per_series": m["per_series"],
        "wall_clock_s": time.perf_counter() - started,
    }
    log.info("arm=%s seed=%d retainability=%.4f mos=%.3f ttis=%d (%.2fs)",
             arm, seed, m["retainability"], m["mos"], total_ttis,
             summary["wall_clock_s"])
    return ArmResult(arm=arm, summary=summary, final_records=final.records,
                     all_records=all_records, episodes_target_met=episodes_target_met,
                     agent=agent)


# ---------------------------------------------------------------------------
# Output files
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _header(config: ExperimentConfig) -> str:
    return f"# volteq config_hash={config.config_hash} seed={config.run.seed}\n"


def _trace_csv(records: list[TtiRecord], config: ExperimentConfig) -> str:
    lines = [_header(config).rstrip("\n"), ",".join(TRACE_COLUMNS)]
    for r in records:
        lines.append(",".join((
            str(r.episode), str(r.t), str(r.state), str(r.action), str(r.command),
            str(r.repetitions), _fmt(r.p_tx_dbm), _fmt(r.sinr_db),
            str(r.fault_action), r.register, _fmt(r.reward))))
    return "\n".join(lines) + "\n"


def write_outputs(results: dict[str, ArmResult], config: ExperimentConfig,
                  out_dir: str | Path) -> dict[str, Path]:
    """Write trace CSVs, metrics JSON, and the three figure-data CSVs.

    Files are written atomically (temp file + rename). Returns the paths
    keyed by logical name.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    for arm, res in results.items():
        records = res.all_records if res.all_records is not None else res.final_records
        p = out / f"trace_{arm}.csv"
        _atomic_write(p, _trace_csv(records, config))
        paths[f"trace_{arm}"] = p
        res.summary["trace_path"] = str(p)

    metrics_doc = {
        "config_hash": config.config_hash,
        "seed": config.run.seed,
        "episodes": config.learning.episodes,
        "sinr_target_db": config.learning.target_db,
        "sinr_min_db": config.metrics.sinr_min_db,
        "arms": {arm: res.summary for arm, res in results.items()},
    }
    p = out / "metrics.json"
    _atomic_write(p, json.dumps(metrics_doc, indent=2) + "\n")
    paths["metrics"] = p

    hdr = _header(config)

    lines = [hdr + "arm,episode,t,c,eta,command_db"]
    for arm, res in results.items():
        for r in res.final_records:
            lines.append(f"{arm},{r.episode},{r.t},{r.command},{r.repetitions},"
                         f"{r.command * r.repetitions}")
    p = out / "fig_pc_sequence.csv"
    _atomic_write(p, "\n".join(lines) + "\n")
    paths["fig_pc_sequence"] = p

    target = config.learning.target_db
    floor = config.metrics.sinr_min_db
    lines = [hdr + "arm,episode,t,sinr_db,target_db,min_db"]
    for arm, res in results.items():
        for r in res.final_records:
            lines.append(f"{arm},{r.episode},{r.t},{_fmt(r.sinr_db)},"
                         f"{_fmt(target)},{_fmt(floor)}")
    p = out / "fig_sinr_timeline.csv"
    _atomic_write(p, "\n".join(lines) + "\n")
    paths["fig_sinr_timeline"] = p

    lines = [hdr + "arm,mos,retainability,mean_per"]
    for arm, res in results.items():
        s = res.summary
        lines.append(f"{arm},{_fmt(s['mos'])},{_fmt(s['retainability'])},"
                     f"{_fmt(s['mean_per'])}")
    p = out / "fig_mos_comparison.csv"
    _atomic_write(p, "\n".join(lines) + "\n")
    paths["fig_mos_comparison"] = p

    return paths
