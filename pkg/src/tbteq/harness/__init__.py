"""Experiment runner, metrics and command-line interface."""

from .config import ExperimentConfig, load_config, paper_scale, parse_config_text
from .metrics import MetricsSummary, ber, nmse_curve, offline_best_weights, regret_curve, summarize
from .sweep import SWEEP_HEADER, SweepRow, run_sweep
from .trial import ExperimentRecord, record_csv, run_trial, write_record_csv

__all__ = [
    "SWEEP_HEADER",
    "ExperimentConfig",
    "ExperimentRecord",
    "MetricsSummary",
    "SweepRow",
    "ber",
    "load_config",
    "nmse_curve",
    "offline_best_weights",
    "paper_scale",
    "parse_config_text",
    "record_csv",
    "regret_curve",
    "run_sweep",
    "run_trial",
    "summarize",
    "write_record_csv",
]
