"""Monte-Carlo campaigns, statistics and report output."""

from .campaign import (
    ExperimentReport, RealizationResult, UserSummary, build_program, realization_channel, run_alpha_sweep,
    run_campaign, run_realization, summarize, user_priorities,
)
from .config import ALPHA_SWEEP, DEFAULT_P_VOTING, ExperimentConfig
from .oracle_check import OracleCheck, check_instance, oracle_agreement, toy_instance
from .output import emit_csv, emit_plotdata, emit_sweep, read_summary, render_figure, render_sweep_figure
from .stats import confidence_interval, fairness_sd

__all__ = [
    "ALPHA_SWEEP", "DEFAULT_P_VOTING", "ExperimentConfig", "ExperimentReport", "OracleCheck",
    "RealizationResult", "UserSummary", "build_program", "check_instance", "confidence_interval",
    "emit_csv", "emit_plotdata", "emit_sweep", "fairness_sd", "oracle_agreement", "read_summary",
    "realization_channel", "render_figure", "render_sweep_figure", "run_alpha_sweep", "run_campaign",
    "run_realization", "summarize", "toy_instance", "user_priorities",
]
