"""Simulated tank experiment: two transmitters, one receiver, distance sweep.

Transmitter 1 is the master.  Transmitter 2 was synchronized to it over MI
or acoustics, so it carries a residual carrier offset and a clock offset
(an integer sample delay plus the matching carrier phase).  The receiver
has its own small offset from the master, which it estimates from the
preamble.  Beamforming weights come from a noisy estimate of each channel
taken from ``ber_bf_estimate_symbols`` beacon symbols; Alamouti decoding
uses the in-frame silent pilots.
"""

from __future__ import annotations

import math

import numpy as np

from ..acoustic_channel import MultipathChannel, path_attenuation, sample_envelope, surface_bottom_paths
from ..baseband import (
    AntennaPath,
    ModemConfig,
    alamouti_transmit,
    bf_transmit,
    propagate,
    receive_alamouti,
    receive_bf,
)
from ..exceptions import InvalidFrameError, PacketNotFoundError
from ..sync_protocol import NodeLink, drift_to_seconds, run_sync_round
from .runner import MEDIA, _medium, _seed, trial_rng
from .table import CsvTable

LEAD_SAMPLES = 100


def _link_gain(config, distance_m, rng):
    paths = surface_bottom_paths(
        distance_m, config.ber_path_excess_m, config.reflection_loss, config.spreading_exponent,
        config.absorption_model(),
    )
    channel = MultipathChannel.from_paths(config.ber_carrier_hz, paths, config.acoustic_speed_mps)
    draw = sample_envelope(channel, rng, config.ber_carrier_hz)
    return draw.envelope * np.exp(-2j * math.pi * config.ber_carrier_hz * draw.phase_delay_s)


def _slave_offsets(config, medium_name, sync_seed, fs):
    """Carrier offset (Hz), sample delay and carrier phase of transmitter 2."""
    link = NodeLink(config.ber_tx_spacing_m, config.uplink_bits, config.downlink_bits)
    report = run_sync_round(2, [link], _medium(config, medium_name), config.estimation_error_std_hz, sync_seed)
    eps_f = report.freq_errors[1]
    eps_t = float(drift_to_seconds(report.time_errors[1], config.crystal_hz))
    cfo = eps_f * config.ber_carrier_hz / config.crystal_hz
    return cfo, int(round(eps_t * fs)), 2 * math.pi * config.ber_carrier_hz * eps_t


def _count_errors(bits, receive):
    try:
        result = receive()
    except (PacketNotFoundError, InvalidFrameError):
        # a lost packet is scored as a coin flip per bit
        return bits.size / 2
    return int(np.count_nonzero(result.bits != bits))


def ber_trial(config, distance_m, rng, modem=None):
    """Bit errors per (scheme, medium) for one channel draw."""
    modem = modem or ModemConfig(pilot_length=config.ber_pilot_length)
    fs = modem.sample_rate_hz
    noise = 10 ** (-config.ber_reference_snr_db / 10) if config.ber_noise else 0.0
    bits = rng.integers(0, 2, config.ber_payload_bits)
    gains = [_link_gain(config, distance_m, rng) for _ in range(2)]
    est_std = math.sqrt(noise / (2 * config.ber_bf_estimate_symbols))
    estimates = [g + est_std * complex(rng.standard_normal(), rng.standard_normal()) for g in gains]
    rx_cfo = rng.uniform(-config.ber_rx_cfo_max_hz, config.ber_rx_cfo_max_hz)
    sync_seed = int(rng.integers(2**63))
    frame_seed = int(rng.integers(2**63))
    noise_seeds = rng.integers(2**63, size=4)

    out = {}
    k = 0
    for name in MEDIA:
        cfo2, delay, phase2 = _slave_offsets(config, name, sync_seed, fs)
        d1, d2 = (0, delay) if delay >= 0 else (-delay, 0)
        paths = [
            AntennaPath(gains[0], rx_cfo, d1),
            AntennaPath(gains[1] * np.exp(1j * phase2), rx_cfo + cfo2, d2),
        ]
        streams = bf_transmit(bits, modem, estimates)
        rx = propagate(streams, paths, fs, noise, noise_seeds[k], LEAD_SAMPLES)
        out["bf", name] = _count_errors(bits, lambda: receive_bf(rx, bits.size, modem))
        streams, frame = alamouti_transmit(bits, modem, rng=frame_seed)
        rx_stbc = propagate(streams, paths, fs, noise, noise_seeds[k + 1], LEAD_SAMPLES)
        out["stbc", name] = _count_errors(bits, lambda: receive_alamouti(rx_stbc, bits.size, frame, modem))
        k += 2
    return out


def run_baseband_ber(config, seed=None):
    """BER per TX-RX distance for beamforming and Alamouti, MI vs acoustic sync."""
    seed = _seed(config, seed)
    modem = ModemConfig(pilot_length=config.ber_pilot_length)
    keys = [(s, m) for s in ("bf", "stbc") for m in MEDIA]
    rows = []
    for i, d in enumerate(config.ber_distances_m):
        errors = dict.fromkeys(keys, 0.0)
        for t in range(config.ber_trials):
            for key, n in ber_trial(config, d, trial_rng(seed, i, t), modem).items():
                errors[key] += n
        total = config.ber_trials * config.ber_payload_bits
        # per-sample SNR of the direct path alone, for orientation
        direct = surface_bottom_paths(d, (0.0,), 1.0, config.spreading_exponent, config.absorption_model())[0]
        snr_db = config.ber_reference_snr_db - 10 * math.log10(path_attenuation(config.ber_carrier_hz, direct))
        rows.append([d, snr_db] + [errors[k] / total for k in keys])
    header = ["distance_m", "direct_snr_db"] + [f"{s}_{m}_ber" for s, m in keys]
    return CsvTable(header, rows)


def ber_spread(table, scheme, medium="mi"):
    """max/min BER along the sweep (``inf`` if the best point is error-free)."""
    col = table.column(f"{scheme}_{medium}_ber")
    lo = col.min()
    return math.inf if lo == 0 else float(col.max() / lo)

