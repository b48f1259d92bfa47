"""Command-line interface.

    volteq simulate --config cfg.ini --seed 1 --arms fpa,qlearn --out out/
                    [--episodes N] [--quiet]
    volteq validate --config cfg.ini

Exit codes: 0 success, 2 configuration error, 3 runtime error. The VOLTEQ_LOG
environment variable sets the log level (DEBUG/INFO/WARNING/ERROR).
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys

from .config import ExperimentConfig, load_config
from .errors import ConfigurationError
from .sim import run_experiment, write_outputs

log = logging.getLogger("volteq")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _setup_logging(quiet: bool) -> None:
    level_name = os.environ.get("VOLTEQ_LOG", "INFO").upper()
    level = getattr(logging, level_name, logging.INFO)
    if quiet:
        level = logging.ERROR
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="volteq",
        description="Indoor small-cell VoLTE downlink power control simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the configured experiment arms")
    sim.add_argument("--config", default=None, help="experiment config (INI); defaults apply if omitted")
    sim.add_argument("--seed", type=int, default=None, help="master seed (u64), overrides [run] seed")
    sim.add_argument("--arms", default=None, help="comma-separated arms: fpa,qlearn")
    sim.add_argument("--out", default=None, help="output directory, overrides [run] out_dir")
    sim.add_argument("--episodes", type=int, default=None, help="episode count override")
    sim.add_argument("--quiet", action="store_true", help="only log errors")

    val = sub.add_parser("validate", help="parse and validate a config file")
    val.add_argument("--config", required=True)
    return parser


def _apply_overrides(config: ExperimentConfig, args) -> ExperimentConfig:
    run = config.run
    if args.seed is not None:
        run = dataclasses.replace(run, seed=args.seed)
    if args.arms is not None:
        run = dataclasses.replace(
            run, arms=tuple(a.strip() for a in args.arms.split(",") if a.strip()))
    if args.out is not None:
        run = dataclasses.replace(run, out_dir=args.out)
    learning = config.learning
    if args.episodes is not None:
        learning = dataclasses.replace(learning, episodes=args.episodes)
    return dataclasses.replace(config, run=run, learning=learning)


def cmd_simulate(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    results = {arm: run_experiment(config, arm) for arm in config.run.arms}
    paths = write_outputs(results, config, config.run.out_dir)
    for arm, res in results.items():
        s = res.summary
        log.info("%s: retainability=%.2f%% mos=%.3f -> %s",
                 arm, 100.0 * s["retainability"], s["mos"], paths[f"trace_{arm}"])
    log.info("outputs in %s", config.run.out_dir)
    return EXIT_OK


def cmd_validate(args) -> int:
    config = load_config(args.config)
    print(f"OK config_hash={config.config_hash} seed={config.run.seed} "
          f"arms={','.join(config.run.arms)} episodes={config.learning.episodes}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(getattr(args, "quiet", False))
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        return cmd_validate(args)
    except ConfigurationError as e:
        log.error("configuration error: %s", e)
        return EXIT_CONFIG
    except (OSError, ValueError, RuntimeError) as e:
        log.error("runtime error: %s", e)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
