"""
Reproducible experiments and the command-line harness.
"""

from .config import ExperimentConfig, load_config
from .report import ExperimentReport, GoldenCheck, Histogram
from .runners import (
    EXPERIMENTS,
    cmd_dynamics_fuzz,
    cmd_er_experiment,
    cmd_figure1_regression,
    cmd_identity_fuzz,
    cmd_pruning_audit,
    cmd_table1,
    cmd_seven_member_configs,
    cmd_triangle_claim,
    cmd_verify_theorems,
)

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentReport",
    "GoldenCheck",
    "Histogram",
    "cmd_dynamics_fuzz",
    "cmd_er_experiment",
    "cmd_figure1_regression",
    "cmd_identity_fuzz",
    "cmd_pruning_audit",
    "cmd_table1",
    "cmd_seven_member_configs",
    "cmd_triangle_claim",
    "cmd_verify_theorems",
    "load_config",
]
