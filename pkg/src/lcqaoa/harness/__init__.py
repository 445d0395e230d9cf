"""Experiment plumbing: configs, solve/sweep runs, report files and the CLI."""

from .config import ExperimentConfig, config_from_mapping, dump_config, load_config
from .run import Report, SweepResult, emit_report, run_solve, run_sweep

SCHEMA_PATH = __file__.rsplit("/", 1)[0] + "/report.schema.json"
