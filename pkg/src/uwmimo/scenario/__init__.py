"""Deployments, Monte-Carlo sweeps and CSV tables for the experiments."""

from .ber import ber_spread, run_baseband_ber
from .config import ConfigError, ScenarioConfig, load_config, parse_config, render_config
from .geometry import DeploymentGeometry, deploy_random
from .runner import (
    hybrid_pure_ratio,
    run_comm_time_sweep,
    run_snr_trace,
    run_sync_error_sweep,
    run_throughput_sweep,
    simulate_deployment,
)
from .table import CsvTable

__all__ = [
    "ConfigError",
    "CsvTable",
    "DeploymentGeometry",
    "ScenarioConfig",
    "ber_spread",
    "deploy_random",
    "hybrid_pure_ratio",
    "load_config",
    "parse_config",
    "render_config",
    "run_baseband_ber",
    "run_comm_time_sweep",
    "run_snr_trace",
    "run_sync_error_sweep",
    "run_throughput_sweep",
    "simulate_deployment",
]
