"""SNR, effective communication time, capacity and throughput of the
distributed array, for maximum-SNR beamforming and space-time coding.

Residual synchronization errors enter every transmitter's carrier phase as
``2*pi*(f + eps_f)*(t + eps_t)``.  Beamforming adds the phasors coherently,
so any spread in those phases costs SNR; the clock keeps drifting, so the
SNR eventually drops below the threshold and the array must resynchronize.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._validation import check_non_negative, check_positive

COHERENCE_CONSTANT = 0.423


class Scheme(str, enum.Enum):
    BF = "bf"
    STBC = "stbc"


class StbcModel(str, enum.Enum):
    #: per-term modulus as printed; phase errors cancel identically
    PRINTED = "printed"
    #: receiver combines with channel estimates taken at t = 0, so phase
    #: drift between transmitters costs combining gain (not the printed law)
    COHERENT = "coherent"


@dataclass(frozen=True)
class TransmitterState:
    """One transmitter as seen from the base station.

    ``time_error_s`` is the clock offset in seconds; use
    :func:`uwmimo.sync_protocol.drift_to_seconds` on protocol output.
    """

    envelope: float
    delay_s: float = 0.0
    phase_control_rad: float = 0.0
    freq_error_hz: float = 0.0
    time_error_s: float = 0.0

    def __post_init__(self):
        if not self.envelope >= 0:
            raise ValueError("envelope must be non-negative")


@dataclass(frozen=True)
class LinkBudget:
    amplitude: float
    noise_power: float
    carrier_hz: float
    snr_threshold: float
    doppler_scale: float
    n_base_stations: int = 1
    csi_bits: float = 200.0
    max_distance_m: float = 100.0

    def __post_init__(self):
        for name in ("amplitude", "noise_power", "carrier_hz", "snr_threshold", "doppler_scale"):
            check_positive(getattr(self, name), name)
        if int(self.n_base_stations) != self.n_base_stations or self.n_base_stations < 1:
            raise ValueError("n_base_stations must be a positive integer")
        check_non_negative(self.csi_bits, "csi_bits")
        check_non_negative(self.max_distance_m, "max_distance_m")

    @classmethod
    def from_powers(cls, tx_power, noise_power, carrier_hz, threshold_db, doppler_scale, **kwargs):
        """Budget with ``A**2`` equal to the per-transmitter power."""
        return cls(
            amplitude=math.sqrt(tx_power),
            noise_power=noise_power,
            carrier_hz=carrier_hz,
            snr_threshold=db_to_linear(threshold_db),
            doppler_scale=doppler_scale,
            **kwargs,
        )

    @property
    def snr_scale(self):
        return self.amplitude**2 / self.noise_power


@dataclass(frozen=True)
class SnrTrace:
    times_s: np.ndarray
    snr_linear: np.ndarray
    scheme: Scheme


def db_to_linear(db):
    if np.ndim(db):
        return 10.0 ** (np.asarray(db, dtype=float) / 10.0)
    return 10.0 ** (db / 10.0)


def linear_to_db(x, floor=1e-30):
    return 10.0 * np.log10(np.maximum(x, floor))


def optimal_phase_vector(states: Sequence[TransmitterState], carrier_hz):
    """Phase control that cancels each transmitter's channel delay."""
    if not states:
        raise ValueError("need at least one transmitter")
    tau = np.array([s.delay_s for s in states])
    return np.mod(2 * math.pi * carrier_hz * tau, 2 * math.pi)


def beamforming_objective(states, phases, budget, t=0.0):
    """Received SNR for an arbitrary phase-control vector (perfect sync)."""
    h = np.array([s.envelope for s in states])
    tau = np.array([s.delay_s for s in states])
    f = budget.carrier_hz
    terms = h * np.exp(1j * 2 * math.pi * f * (t - tau)) * np.exp(1j * np.asarray(phases))
    return budget.snr_scale * abs(terms.sum()) ** 2


def snr_ideal(envelopes, budget, scheme):
    """Perfectly synchronized SNR: coherent sum (BF) or power sum (STBC)."""
    h = np.asarray(envelopes, dtype=float)
    if h.size == 0:
        raise ValueError("need at least one envelope")
    if np.any(h < 0):
        raise ValueError("envelopes must be non-negative")
    if Scheme(scheme) is Scheme.BF:
        return budget.snr_scale * h.sum() ** 2
    return budget.snr_scale * np.sum(h**2)


def _residual_phases(states, carrier_hz, t):
    # the common 2*pi*f*t term has unit modulus and is dropped; this keeps
    # the phases small when f*t is large
    eps_f = np.array([s.freq_error_hz for s in states])
    eps_t = np.array([s.time_error_s for s in states])
    t = np.asarray(t, dtype=float)[..., None]
    return 2 * math.pi * (carrier_hz * eps_t + eps_f * (t + eps_t))


def snr_with_errors(states, budget, scheme, t, stbc_model=StbcModel.PRINTED):
    """SNR at time ``t`` (scalar or array) after synchronization."""
    scheme = Scheme(scheme)
    h = np.array([s.envelope for s in states])
    t_arr = np.asarray(t, dtype=float)
    if scheme is Scheme.STBC and StbcModel(stbc_model) is StbcModel.PRINTED:
        out = np.full(t_arr.shape, budget.snr_scale * np.sum(h**2))
        return float(out) if out.ndim == 0 else out
    phasors = np.exp(1j * _residual_phases(states, budget.carrier_hz, t_arr))
    if scheme is Scheme.BF:
        out = budget.snr_scale * np.abs(phasors @ h) ** 2
    else:
        power = np.sum(h**2)
        out = budget.snr_scale * np.abs(phasors @ h**2) ** 2 / power if power > 0 else np.zeros(t_arr.shape)
    return float(out) if np.ndim(out) == 0 else out


def snr_trace(states, budget, scheme, times, stbc_model=StbcModel.PRINTED):
    times = np.asarray(times, dtype=float)
    return SnrTrace(times, np.asarray(snr_with_errors(states, budget, scheme, times, stbc_model)), Scheme(scheme))


def coherence_time(carrier_hz, doppler_scale):
    return COHERENCE_CONSTANT / (check_positive(doppler_scale, "doppler_scale") * check_positive(carrier_hz, "carrier_hz"))


#: samples per period of the fastest SNR beat used when refining the scan step
BEAT_OVERSAMPLING = 16
_BISECT_TOL = 1e-6
_SCAN_CHUNK = 4096


def effective_time_snr(states, budget, scheme, t_step=1e-3, horizon=None, stbc_model=StbcModel.PRINTED):
    """First time the SNR drops below the threshold.

    The SNR is scanned from ``t = 0`` on a grid of ``t_step`` (shrunk to a
    sixteenth of the fastest beat period between transmitters, so short
    dips are not stepped over) and the crossing is then bisected to 1 us.
    Returns ``0.0`` if the SNR starts below the threshold and ``math.inf``
    if it never falls below it before ``horizon`` (default ten coherence
    times).
    """
    t_step = check_positive(t_step, "t_step")
    eta = budget.snr_threshold
    if horizon is None:
        horizon = 10 * coherence_time(budget.carrier_hz, budget.doppler_scale)

    def snr(t):
        return snr_with_errors(states, budget, scheme, t, stbc_model)

    if snr(0.0) < eta:
        return 0.0
    eps_f = np.array([s.freq_error_hz for s in states])
    spread = eps_f.max() - eps_f.min()
    printed_stbc = Scheme(scheme) is Scheme.STBC and StbcModel(stbc_model) is StbcModel.PRINTED
    if spread == 0 or printed_stbc:
        # no relative drift: the SNR is constant in t
        return math.inf
    step = min(t_step, 1.0 / (BEAT_OVERSAMPLING * spread))
    n_total = int(math.ceil(horizon / step))
    for start in range(0, n_total + 1, _SCAN_CHUNK):
        k = np.arange(start, min(start + _SCAN_CHUNK, n_total + 1))
        below = np.flatnonzero(snr(k * step) < eta)
        if below.size:
            hi = k[below[0]] * step
            lo = hi - step
            while hi - lo > _BISECT_TOL:
                mid = 0.5 * (lo + hi)
                if snr(mid) < eta:
                    hi = mid
                else:
                    lo = mid
            return hi
    return math.inf


def effective_time(states, budget, scheme, t_step=1e-3, stbc_model=StbcModel.PRINTED):
    """Effective communication time: SNR-limited, capped by the coherence time."""
    tc = coherence_time(budget.carrier_hz, budget.doppler_scale)
    return min(effective_time_snr(states, budget, scheme, t_step, horizon=tc, stbc_model=stbc_model), tc)


def csi_time(budget, acoustic_medium):
    """Duration of the base-station CSI broadcast over the acoustic link."""
    return budget.csi_bits / acoustic_medium.bandwidth_hz + budget.max_distance_m / acoustic_medium.propagation_speed_mps


def channel_matrix(states_per_bs, carrier_hz):
    """N x N_b matrix with entries ``h_i * exp(-j 2 pi f tau_i)``.

    ``states_per_bs`` is either one list of states (single base station)
    or a list of such lists, one per base station.
    """
    if states_per_bs and isinstance(states_per_bs[0], TransmitterState):
        states_per_bs = [states_per_bs]
    cols = [
        np.array([s.envelope * np.exp(-2j * math.pi * carrier_hz * s.delay_s) for s in states])
        for states in states_per_bs
    ]
    return np.column_stack(cols)


def capacity(snr0, channel_matrix, n_base):
    """``log2 det(I_N + snr0/N_b H H*)`` in bits/s/Hz."""
    check_non_negative(snr0, "snr0")
    H = np.atleast_2d(np.asarray(channel_matrix, dtype=complex))
    if H.shape[1] != n_base:
        raise ValueError(f"channel matrix has {H.shape[1]} columns but n_base={n_base}")
    # Sylvester: det(I_N + c H H*) = det(I_Nb + c H* H); the smaller side is cheaper
    gram = H.conj().T @ H if H.shape[1] <= H.shape[0] else H @ H.conj().T
    m = np.eye(gram.shape[0]) + (snr0 / n_base) * gram
    sign, logdet = np.linalg.slogdet(m)
    return float(logdet / math.log(2))


def throughput_upper_bound(effective_time_s, capacity_bits, sync_total_s, csi_time_s):
    """Capacity scaled by the fraction of each cycle spent transmitting."""
    if effective_time_s == 0:
        return 0.0
    return effective_time_s * capacity_bits / (sync_total_s + csi_time_s + effective_time_s)
