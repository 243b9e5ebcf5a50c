"""Experiment orchestration: config parsing, grid running, report emission, CLI."""

from fraudbench.harness.config import CsvSource, ExperimentConfig, SyntheticSource, parse_config
from fraudbench.harness.runner import (
    REPORT_COLUMNS,
    EvalRecord,
    emit_projection,
    noise_study,
    run_benchmark,
    sweep_dimensions,
    top_f1_curve,
    write_report,
)

__all__ = [
    "CsvSource",
    "SyntheticSource",
    "ExperimentConfig",
    "parse_config",
    "EvalRecord",
    "REPORT_COLUMNS",
    "run_benchmark",
    "sweep_dimensions",
    "noise_study",
    "top_f1_curve",
    "emit_projection",
    "write_report",
]
