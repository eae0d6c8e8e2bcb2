"""Experiment harness: input generators, games, reports, acceptance suites and CLI."""

from .generators import GENERATORS, CertificationFailed, Generated, generate
from .runner import (
    ConfigError,
    ExperimentConfig,
    ExperimentReport,
    config_from_mapping,
    load_config,
    play_game,
    run_experiment,
    write_reports,
)
from .stats import wilson

__all__ = [
    "GENERATORS",
    "CertificationFailed",
    "Generated",
    "generate",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentReport",
    "config_from_mapping",
    "load_config",
    "play_game",
    "run_experiment",
    "write_reports",
    "wilson",
]
