"""Known sequences that open every packet: the detection chirp and the PN preambles."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

SHORT_PN_LENGTH = 127
LONG_PN_LENGTH = 1024
LONG_PN_SEED = 1024


@dataclass(frozen=True)
class ChirpSpec:
    """Linear up-chirp given in generator units.

    The instantaneous frequency sweeps from ``start_frequency`` to
    ``target_frequency`` (both in units of ``sample_rate``) over
    ``length_samples`` samples.  ``target_time`` and ``sweep_time`` are kept
    for reference; with the defaults the sweep covers 0 to 0.2 of the
    sampling rate.
    """

    start_frequency: float = 0.0
    target_frequency: float = 10.0
    target_time: float = 10.0
    sweep_time: float = 100.0
    sample_rate: float = 50.0
    length_samples: int = 500

    def __post_init__(self):
        if int(self.length_samples) != self.length_samples or self.length_samples <= 0:
            raise ValueError("length_samples must be a positive integer")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")

    @property
    def start_fraction(self):
        return self.start_frequency / self.sample_rate

    @property
    def stop_fraction(self):
        return self.target_frequency / self.sample_rate


def chirp_waveform(spec=None):
    """Unit-amplitude complex chirp samples."""
    spec = spec or ChirpSpec()
    n = np.arange(spec.length_samples)
    f0, f1 = spec.start_fraction, spec.stop_fraction
    phase = 2 * math.pi * (f0 * n + (f1 - f0) * n**2 / (2 * spec.length_samples))
    return np.exp(1j * phase)


def lfsr_sequence(taps=(7, 6), length=None, seed=1):
    """Fibonacci LFSR output; taps are the polynomial exponents (x^7 + x^6 + 1)."""
    degree = max(taps)
    if length is None:
        length = 2**degree - 1
    if not 0 < seed < 2**degree:
        raise ValueError("seed must be a nonzero register state")
    state = [(seed >> i) & 1 for i in range(degree)]
    out = np.empty(length, dtype=np.int8)
    for i in range(length):
        out[i] = state[-1]
        fb = 0
        for t in taps:
            fb ^= state[t - 1]
        state = [fb] + state[:-1]
    return out


@functools.lru_cache(maxsize=None)
def _short_pn():
    return lfsr_sequence((7, 6), SHORT_PN_LENGTH, seed=0b1111111)


@functools.lru_cache(maxsize=None)
def _long_pn(seed):
    return np.random.default_rng(seed).integers(0, 2, LONG_PN_LENGTH).astype(np.int8)


def short_pn():
    return _short_pn().copy()


def long_pn(seed=LONG_PN_SEED):
    return _long_pn(seed).copy()


@dataclass(frozen=True)
class PreambleLayout:
    """Two short PN repeats, two long PN repeats, and the chirp that precedes them."""

    short_pn_bits: np.ndarray = field(default_factory=short_pn)
    long_pn_bits: np.ndarray = field(default_factory=long_pn)
    chirp: ChirpSpec = field(default_factory=ChirpSpec)

    def __post_init__(self):
        for name in ("short_pn_bits", "long_pn_bits"):
            bits = np.asarray(getattr(self, name))
            if bits.ndim != 1 or bits.size == 0 or not np.isin(bits, (0, 1)).all():
                raise ValueError(f"{name} must be a non-empty 0/1 sequence")

    @property
    def short_length(self):
        return int(np.size(self.short_pn_bits))

    @property
    def long_length(self):
        return int(np.size(self.long_pn_bits))

    @property
    def n_symbols(self):
        return 2 * (self.short_length + self.long_length)

    def bits(self):
        return np.concatenate([self.short_pn_bits, self.short_pn_bits, self.long_pn_bits, self.long_pn_bits])

    @property
    def long_start(self):
        """Symbol index where the first long repeat begins."""
        return 2 * self.short_length
