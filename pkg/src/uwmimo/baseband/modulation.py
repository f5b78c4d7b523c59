"""BPSK mapping and square-root raised-cosine pulse shaping."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .._validation import check_bits, check_samples

DEFAULT_SAMPLE_RATE = 195312.5


def bpsk_modulate(bits):
    """Bit 1 maps to +1, bit 0 to -1."""
    return 2.0 * check_bits(bits) - 1.0 + 0j


def bpsk_demodulate(symbols):
    return (np.real(np.asarray(symbols)) > 0).astype(np.int8)


def measure_ber(tx_bits, rx_bits):
    tx = check_bits(tx_bits, "tx_bits")
    rx = check_bits(rx_bits, "rx_bits")
    if tx.shape != rx.shape:
        raise ValueError(f"bit sequences differ in length: {tx.size} vs {rx.size}")
    if tx.size == 0:
        raise ValueError("cannot measure BER of an empty sequence")
    return float(np.count_nonzero(tx != rx)) / tx.size


@dataclass(frozen=True)
class SrrcSpec:
    symbol_duration_s: float = 4 / DEFAULT_SAMPLE_RATE
    rolloff: float = 0.3
    samples_per_symbol: int = 4
    span_symbols: int = 8

    def __post_init__(self):
        if not 0 <= self.rolloff <= 1:
            raise ValueError("rolloff must lie in [0, 1]")
        if int(self.samples_per_symbol) != self.samples_per_symbol or self.samples_per_symbol < 2:
            raise ValueError("samples_per_symbol must be an integer >= 2")
        if int(self.span_symbols) != self.span_symbols or self.span_symbols < 2 or self.span_symbols % 2:
            raise ValueError("span_symbols must be an even integer >= 2")
        if not self.symbol_duration_s > 0:
            raise ValueError("symbol_duration_s must be positive")

    @property
    def sample_rate_hz(self):
        return self.samples_per_symbol / self.symbol_duration_s

    @property
    def n_taps(self):
        return self.span_symbols * self.samples_per_symbol + 1

    @property
    def group_delay(self):
        """Delay of one filter in samples."""
        return self.n_taps // 2


def _textbook_srrc(rolloff, sps, span):
    t = np.arange(-(span * sps // 2), span * sps // 2 + 1) / sps
    a = rolloff
    h = np.empty_like(t)
    for i, ti in enumerate(t):
        if abs(ti) < 1e-12:
            h[i] = 1 - a + 4 * a / math.pi
        elif a > 0 and abs(abs(4 * a * ti) - 1) < 1e-12:
            h[i] = a / math.sqrt(2) * (
                (1 + 2 / math.pi) * math.sin(math.pi / (4 * a)) + (1 - 2 / math.pi) * math.cos(math.pi / (4 * a))
            )
        else:
            h[i] = (math.sin(math.pi * ti * (1 - a)) + 4 * a * ti * math.cos(math.pi * ti * (1 + a))) / (
                math.pi * ti * (1 - (4 * a * ti) ** 2)
            )
    return h / np.linalg.norm(h)


def cascade_isi(taps, sps):
    """Largest TX/RX cascade tap at a nonzero symbol offset, relative to the peak."""
    c = np.convolve(taps, taps)
    mid = len(c) // 2
    at_symbols = c[mid % sps::sps]
    return float(np.max(np.abs(np.delete(at_symbols, mid // sps))) / c[mid])


@functools.lru_cache(maxsize=32)
def _refined_taps(rolloff, sps, span):
    # Truncating the SRRC to a few symbols leaves ~1% ISI in the cascade.
    # Nudge the symmetric half of the taps so the cascade hits zero at every
    # nonzero symbol offset, staying as close as possible to the textbook
    # pulse (the weight keeps the ISI terms dominant).
    h0 = _textbook_srrc(rolloff, sps, span)
    half = len(h0) // 2
    p0 = h0[half:]

    def full(p):
        return np.concatenate([p[:0:-1], p])

    def residuals(p):
        h = full(p)
        c = np.convolve(h, h)
        mid = len(c) // 2
        isi = np.delete(c[mid % sps::sps], mid // sps) / c[mid]
        return np.concatenate([1e3 * isi, p - p0])

    fit = least_squares(residuals, p0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    h = full(fit.x)
    return h / np.linalg.norm(h)


def srrc_taps(spec=None):
    """Unit-energy, symmetric SRRC taps of length ``span * sps + 1``."""
    spec = spec or SrrcSpec()
    return _refined_taps(float(spec.rolloff), int(spec.samples_per_symbol), int(spec.span_symbols)).copy()


def pulse_shape(symbols, spec=None):
    """Upsample and filter; the output has unit average power for unit symbols.

    Symbol ``k`` peaks at sample ``k * sps + group_delay``.
    """
    spec = spec or SrrcSpec()
    sps = spec.samples_per_symbol
    symbols = np.asarray(symbols, dtype=complex)
    up = np.zeros(symbols.size * sps, dtype=complex)
    up[::sps] = symbols
    return np.convolve(up, srrc_taps(spec)) * math.sqrt(sps)


def matched_filter(samples, spec=None, n_symbols=None, start=0):
    """Matched-filter ``samples`` and pick one value per symbol.

    ``start`` is the sample index where the shaped block began, so symbol
    ``k`` is read at ``start + k * sps + 2 * group_delay``.
    """
    spec = spec or SrrcSpec()
    sps = spec.samples_per_symbol
    samples = check_samples(samples)
    y = np.convolve(samples, srrc_taps(spec)) / math.sqrt(sps)
    first = start + 2 * spec.group_delay
    available = (y.size - first - 1) // sps + 1
    if n_symbols is None:
        n_symbols = available
    if n_symbols > available:
        raise ValueError(f"only {available} symbols available after sample {start}, asked for {n_symbols}")
    return y[first:first + n_symbols * sps:sps]
