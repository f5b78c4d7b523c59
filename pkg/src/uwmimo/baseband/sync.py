"""Packet detection by chirp correlation and CFO estimation from repeated preambles."""

from __future__ import annotations

import math

import numpy as np
from scipy import signal

from .._validation import check_positive, check_samples
from ..exceptions import PacketNotFoundError
from .modulation import SrrcSpec
from .preamble import ChirpSpec, chirp_waveform

DEFAULT_DETECTION_THRESHOLD = 0.25


def chirp_correlation(rx_samples, chirp=None):
    """Magnitude of the sliding cross-correlation with the chirp, one value per start offset."""
    template = chirp_waveform(chirp)
    rx = check_samples(rx_samples, "rx_samples", min_length=template.size)
    # correlate conjugates its second argument
    return np.abs(signal.correlate(rx, template, mode="valid", method="fft"))


def detect_packet_offset(rx_samples, chirp=None, threshold=DEFAULT_DETECTION_THRESHOLD, return_peak=False):
    """Sample offset where the chirp starts.

    The offset is the argmax of the correlation magnitude.  The peak is then
    normalised by the template and window energies (1.0 for a clean match);
    below ``threshold`` no packet is reported.
    """
    chirp = chirp or ChirpSpec()
    template = chirp_waveform(chirp)
    rx = check_samples(rx_samples, "rx_samples", min_length=template.size)
    corr = chirp_correlation(rx, chirp)
    offset = int(np.argmax(corr))
    window = rx[offset:offset + template.size]
    energy = math.sqrt(float(np.vdot(window, window).real) * template.size)
    peak = corr[offset] / energy if energy > 0 else 0.0
    if peak < threshold:
        raise PacketNotFoundError(f"chirp correlation peak {peak:.3f} below threshold {threshold}")
    return (offset, float(peak)) if return_peak else offset


def _lag_phase(x, lag, first, stop):
    seg = x[first:stop]
    later = x[first + lag:stop + lag]
    return float(np.angle(np.vdot(seg, later)))


def preamble_windows(layout, srrc=None):
    """Sample windows (start, stop, lag) inside the short and long repeats.

    Indices are relative to the first shaped preamble sample.  Each window
    skips one filter span so both copies see the same symbols.
    """
    srrc = srrc or SrrcSpec()
    sps = srrc.samples_per_symbol
    guard = srrc.span_symbols * sps
    short_lag = layout.short_length * sps
    long_lag = layout.long_length * sps
    long_start = layout.long_start * sps
    return (guard, short_lag, short_lag), (long_start + guard, long_start + long_lag, long_lag)


def estimate_cfo(rx_samples, layout, sample_rate_hz, srrc=None, refine=True):
    """Carrier offset in Hz of an offset-aligned packet.

    ``rx_samples`` starts at the first shaped preamble sample (just after
    the chirp).  The coarse estimate is the phase of the lag-``D`` product
    between the two short repeats, ``D`` being one repeat; it is unambiguous
    within ``+-fs / (2 D)``.  The long repeats give a finer phase that is
    unwrapped around the coarse value.  Offsets outside the coarse range
    alias silently.
    """
    fs = check_positive(sample_rate_hz, "sample_rate_hz")
    rx = check_samples(rx_samples, "rx_samples")
    (s0, s1, d_short), (l0, l1, d_long) = preamble_windows(layout, srrc)
    need = l1 + d_long if refine else s1 + d_short
    if rx.size < need:
        raise ValueError(f"need {need} preamble samples, got {rx.size}")
    coarse = _lag_phase(rx, d_short, s0, s1) * fs / (2 * math.pi * d_short)
    if not refine:
        return coarse
    fine_phase = _lag_phase(rx, d_long, l0, l1)
    predicted = 2 * math.pi * coarse * d_long / fs
    correction = (fine_phase - predicted + math.pi) % (2 * math.pi) - math.pi
    return coarse + correction * fs / (2 * math.pi * d_long)


def apply_cfo(samples, cfo_hz, sample_rate_hz, start_index=0):
    """Rotate by ``exp(j 2 pi cfo n / fs)``; pass ``-estimate`` to correct."""
    x = check_samples(samples)
    n = np.arange(start_index, start_index + x.size)
    return x * np.exp(2j * math.pi * cfo_hz * n / sample_rate_hz)


def coarse_cfo_range(layout, sample_rate_hz, srrc=None):
    """Largest offset the short repeats resolve without aliasing."""
    srrc = srrc or SrrcSpec()
    return sample_rate_hz / (2 * layout.short_length * srrc.samples_per_symbol)
