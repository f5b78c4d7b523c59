"""Monte-Carlo sweeps behind the CLI subcommands.

Every trial draws from its own generator seeded with ``(seed, n_nodes,
trial)``, so results do not depend on evaluation order.  Within a trial the
MI and acoustic rounds share one beacon-error draw and one deployment; the
only difference between the two media is the synchronization link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..acoustic_channel import MultipathChannel, sample_envelope, surface_bottom_paths
from ..clock_drift import GaussianEstimationError
from ..mimo_analysis import (
    LinkBudget,
    Scheme,
    TransmitterState,
    capacity,
    channel_matrix,
    coherence_time,
    csi_time,
    effective_time,
    linear_to_db,
    optimal_phase_vector,
    snr_ideal,
    snr_with_errors,
    throughput_upper_bound,
)
from ..sync_protocol import NodeLink, drift_to_seconds, run_sync_round
from .geometry import deploy_random
from .table import CsvTable

MEDIA = ("mi", "acoustic")
SCHEMES = (Scheme.BF, Scheme.STBC)


def _seed(config, seed):
    return config.rng_seed if seed is None else int(seed)


def trial_rng(seed, n_nodes, trial):
    return np.random.default_rng([int(seed), int(n_nodes), int(trial)])


def _medium(config, name):
    return config.mi_medium if name == "mi" else config.acoustic_medium


def link_budget(config, max_distance_m=0.0):
    return LinkBudget.from_powers(
        config.tx_power_mw,
        config.noise_power_mw,
        config.acoustic_frequency_hz,
        config.snr_threshold_db,
        config.doppler_scale,
        csi_bits=config.csi_bits,
        max_distance_m=max_distance_m,
    )


@dataclass(frozen=True)
class DeploymentTrial:
    """One deployment plus its synchronization outcome in both media."""

    geometry: object
    states: dict
    sync_time_s: dict
    budget: LinkBudget


def simulate_deployment(config, n_nodes, rng):
    geometry = deploy_random(
        n_nodes - 1, config.radius_m, rng, config.min_spacing_m, config.bs_depth_m, config.bs_offset_m
    )
    f = config.acoustic_frequency_hz
    absorption = config.absorption_model()
    d_bs = geometry.distances_to_base()
    envelopes = []
    for d in d_bs:
        paths = surface_bottom_paths(
            d, config.path_excess_m, config.reflection_loss, config.spreading_exponent, absorption
        )
        envelopes.append(sample_envelope(MultipathChannel.from_paths(f, paths, config.acoustic_speed_mps), rng, f))
    links = [NodeLink(d, config.uplink_bits, config.downlink_bits) for d in geometry.slave_distances()]
    sync_seed = int(rng.integers(2**63))
    error_model = GaussianEstimationError(config.estimation_error_std_hz)

    states, sync_time = {}, {}
    for name in MEDIA:
        report = run_sync_round(n_nodes, links, _medium(config, name), error_model, sync_seed)
        eps_t = drift_to_seconds(report.time_errors, config.crystal_hz)
        base = [TransmitterState(e.envelope, e.phase_delay_s) for e in envelopes]
        phases = optimal_phase_vector(base, f)
        states[name] = [
            TransmitterState(e.envelope, e.phase_delay_s, float(p), float(ef), float(et))
            for e, p, ef, et in zip(envelopes, phases, report.freq_errors, eps_t)
        ]
        sync_time[name] = report.total_sync_time_s
    return DeploymentTrial(geometry, states, sync_time, link_budget(config, float(d_bs.max())))


def run_sync_error_sweep(config, seed=None):
    """Mean |frequency error| (Hz) and |time error| (s) of the slaves per estimation-error level."""
    seed = _seed(config, seed)
    links = NodeLink(config.sync_distance_m, config.uplink_bits, config.downlink_bits)
    rows = []
    for i, sigma in enumerate(config.estimation_error_sweep_hz):
        sums = {name: [0.0, 0.0] for name in MEDIA}
        for trial in range(config.trials):
            sync_seed = int(trial_rng(seed, i, trial).integers(2**63))
            for name in MEDIA:
                report = run_sync_round(config.sync_nodes, links, _medium(config, name), sigma, sync_seed)
                slaves = report.nodes[1:]
                sums[name][0] += np.mean(np.abs([n.freq_error_hz for n in slaves])) if slaves else 0.0
                t_s = drift_to_seconds([n.time_error for n in slaves], config.crystal_hz)
                sums[name][1] += np.mean(np.abs(t_s)) if slaves else 0.0
        n = config.trials
        rows.append([sigma, sums["mi"][0] / n, sums["acoustic"][0] / n, sums["mi"][1] / n, sums["acoustic"][1] / n])
    header = ["estimation_error_hz", "mi_freq_error_hz", "acoustic_freq_error_hz", "mi_time_error_s",
              "acoustic_time_error_s"]
    return CsvTable(header, rows)


def run_snr_trace(config, seed=None):
    """SNR (dB) over time for one deployment of ``n_slaves`` slaves."""
    seed = _seed(config, seed)
    n_nodes = config.n_slaves + 1
    trial = simulate_deployment(config, n_nodes, trial_rng(seed, n_nodes, 0))
    n_steps = int(round(config.trace_duration_s / config.trace_step_s))
    times = np.arange(n_steps + 1) * config.trace_step_s
    envelopes = [s.envelope for s in trial.states["mi"]]
    columns = [times]
    header = ["time_s"]
    for scheme in SCHEMES:
        bound = snr_ideal(envelopes, trial.budget, scheme)
        columns.append(np.full(times.shape, linear_to_db(bound)))
        header.append(f"{scheme.value}_bound_db")
        for name in MEDIA:
            snr = snr_with_errors(trial.states[name], trial.budget, scheme, times, config.stbc_model)
            columns.append(linear_to_db(snr))
            header.append(f"{scheme.value}_{name}_db")
    return CsvTable(header, np.column_stack(columns))


def evaluate_trial(config, n_nodes, trial_index, seed):
    """Effective time and throughput per (scheme, medium) for one deployment."""
    trial = simulate_deployment(config, n_nodes, trial_rng(seed, n_nodes, trial_index))
    t_csi = csi_time(trial.budget, config.acoustic_medium)
    out = {}
    for scheme in SCHEMES:
        for name in MEDIA:
            states = trial.states[name]
            t_eff = effective_time(states, trial.budget, scheme, config.time_step_s, config.stbc_model)
            snr0 = snr_with_errors(states, trial.budget, scheme, 0.0, config.stbc_model)
            c = capacity(snr0, channel_matrix(states, config.acoustic_frequency_hz), 1)
            out[scheme.value, name] = (
                t_eff,
                throughput_upper_bound(t_eff, c, trial.sync_time_s[name], t_csi),
            )
    return out


def _node_sweep(config, seed, pick):
    seed = _seed(config, seed)
    rows = []
    for n_nodes in range(config.min_nodes, config.max_nodes + 1):
        acc = {}
        for t in range(config.trials):
            for key, value in evaluate_trial(config, n_nodes, t, seed).items():
                acc[key] = acc.get(key, 0.0) + pick(value)
        rows.append([n_nodes] + [acc[s.value, m] / config.trials for s in SCHEMES for m in MEDIA])
    return rows


def run_comm_time_sweep(config, seed=None):
    """Mean effective communication time (s) per node count, scheme and sync medium."""
    rows = _node_sweep(config, seed, lambda v: v[0])
    tc = coherence_time(config.acoustic_frequency_hz, config.doppler_scale)
    header = ["n_nodes"] + [f"{s.value}_{m}_s" for s in SCHEMES for m in MEDIA] + ["coherence_time_s"]
    return CsvTable(header, [row + [tc] for row in rows])


def run_throughput_sweep(config, seed=None):
    """Mean throughput upper bound (bit/s/Hz) for hybrid (MI sync) and pure acoustic systems."""
    rows = _node_sweep(config, seed, lambda v: v[1])
    label = {"mi": "hybrid", "acoustic": "pure"}
    header = ["n_nodes"] + [f"{s.value}_{label[m]}" for s in SCHEMES for m in MEDIA]
    return CsvTable(header, rows)


def hybrid_pure_ratio(table, scheme):
    """Per-row hybrid/pure throughput ratio; ``inf`` where pure acoustic delivers nothing."""
    hybrid = table.column(f"{Scheme(scheme).value}_hybrid")
    pure = table.column(f"{Scheme(scheme).value}_pure")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = hybrid / pure
    return np.where(pure > 0, ratio, np.where(hybrid > 0, math.inf, math.nan))
