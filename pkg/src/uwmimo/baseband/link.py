"""End-to-end frame assembly, a flat per-antenna channel, and the two receivers.

Beamforming frames are ``[chirp | short PN x2 | long PN x2 | payload]`` sent
by every transmitter with its own phase pre-compensation.  Alamouti frames
reuse the same header (sent by transmitter 1 only) followed by the silent
pilot blocks and the coded payload.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .._validation import check_bits, check_non_negative
from ..exceptions import InvalidFrameError
from .alamouti import DEFAULT_PILOT_LENGTH, AlamoutiFrame, alamouti_decode, estimate_channel_from_pilots
from .modulation import SrrcSpec, bpsk_demodulate, bpsk_modulate, matched_filter, pulse_shape
from .preamble import PreambleLayout, chirp_waveform
from .sync import DEFAULT_DETECTION_THRESHOLD, apply_cfo, detect_packet_offset, estimate_cfo


@dataclass(frozen=True)
class ModemConfig:
    srrc: SrrcSpec = field(default_factory=SrrcSpec)
    layout: PreambleLayout = field(default_factory=PreambleLayout)
    pilot_length: int = DEFAULT_PILOT_LENGTH
    detection_threshold: float = DEFAULT_DETECTION_THRESHOLD

    @property
    def sample_rate_hz(self):
        return self.srrc.sample_rate_hz

    @property
    def chirp_length(self):
        return self.layout.chirp.length_samples


@dataclass(frozen=True)
class AntennaPath:
    """Flat channel from one transmitter: complex gain, carrier offset, integer delay."""

    gain: complex = 1.0
    cfo_hz: float = 0.0
    delay_samples: int = 0

    def __post_init__(self):
        if int(self.delay_samples) != self.delay_samples or self.delay_samples < 0:
            raise ValueError("delay_samples must be a non-negative integer")


def _header(config):
    return chirp_waveform(config.layout.chirp), bpsk_modulate(config.layout.bits())


def bf_transmit(payload_bits, config=None, channel_estimates=(1.0,)):
    """One sample stream per transmitter, each rotated by ``exp(-j arg h_i)``."""
    config = config or ModemConfig()
    chirp, preamble = _header(config)
    symbols = np.concatenate([preamble, bpsk_modulate(payload_bits)])
    frame = np.concatenate([chirp, pulse_shape(symbols, config.srrc)])
    return [frame * np.exp(-1j * np.angle(h)) for h in channel_estimates]


def alamouti_transmit(payload_bits, config=None, rng=None):
    """Returns ``([stream_tx1, stream_tx2], frame)``."""
    config = config or ModemConfig()
    bits = check_bits(payload_bits, "payload_bits")
    if bits.size % 2:
        raise ValueError("Alamouti payload needs an even number of bits")
    frame = AlamoutiFrame.build(bpsk_modulate(bits), config.pilot_length, rng=rng)
    chirp, preamble = _header(config)
    s1, s2 = frame.streams()
    sym1 = np.concatenate([preamble, s1])
    sym2 = np.concatenate([np.zeros_like(preamble), s2])
    tx1 = np.concatenate([chirp, pulse_shape(sym1, config.srrc)])
    tx2 = np.concatenate([np.zeros_like(chirp), pulse_shape(sym2, config.srrc)])
    return [tx1, tx2], frame


def propagate(streams, paths, sample_rate_hz, noise_power=0.0, rng=None, lead_samples=0, tail_samples=64):
    """Sum of the delayed, rotated, scaled streams plus complex white noise.

    ``noise_power`` is the per-sample noise variance.
    """
    if len(streams) != len(paths):
        raise ValueError(f"{len(streams)} streams but {len(paths)} paths")
    check_non_negative(noise_power, "noise_power")
    length = lead_samples + max(s.size + p.delay_samples for s, p in zip(streams, paths)) + tail_samples
    rx = np.zeros(length, dtype=complex)
    n = np.arange(length)
    for s, p in zip(streams, paths):
        start = lead_samples + p.delay_samples
        block = np.zeros(length, dtype=complex)
        block[start:start + s.size] = s
        rx += p.gain * block * np.exp(2j * math.pi * p.cfo_hz * n / sample_rate_hz)
    if noise_power > 0:
        rng = np.random.default_rng(rng)
        rx += math.sqrt(noise_power / 2) * (rng.standard_normal(length) + 1j * rng.standard_normal(length))
    return rx


@dataclass(frozen=True)
class ReceiveResult:
    bits: np.ndarray
    offset: int
    cfo_hz: float
    channel: tuple


def _front_end(rx, n_symbols, config):
    """Detect, estimate and remove CFO, matched-filter; symbols start at the preamble."""
    offset = detect_packet_offset(rx, config.layout.chirp, config.detection_threshold)
    block = rx[offset + config.chirp_length:]
    fs = config.sample_rate_hz
    cfo = estimate_cfo(block, config.layout, fs, config.srrc)
    corrected = apply_cfo(block, -cfo, fs)
    try:
        y = matched_filter(corrected, config.srrc, n_symbols=n_symbols)
    except ValueError as exc:
        raise InvalidFrameError(f"frame truncated: {exc}") from None
    return offset, cfo, y


def receive_bf(rx, n_payload_bits, config=None):
    """Demodulate a beamformed frame.

    The combined channel is one complex gain, estimated over the second long
    PN repeat and divided out before slicing.
    """
    config = config or ModemConfig()
    layout = config.layout
    n_pre = layout.n_symbols
    offset, cfo, y = _front_end(rx, n_pre + n_payload_bits, config)
    # the second long repeat sits right before the payload, so residual
    # drift between transmitters has had the least time to act on it
    first = n_pre - layout.long_length
    known = bpsk_modulate(layout.long_pn_bits)
    gain = complex(np.mean(y[first:n_pre] / known))
    if gain == 0:
        raise InvalidFrameError("combined channel estimate is zero")
    bits = bpsk_demodulate(y[n_pre:] * np.conj(gain))
    return ReceiveResult(bits, offset, cfo, (gain,))


def receive_alamouti(rx, n_payload_bits, frame, config=None):
    config = config or ModemConfig()
    n_pre = config.layout.n_symbols
    p = frame.pilot_length
    offset, cfo, y = _front_end(rx, n_pre + 2 * p + n_payload_bits, config)
    h = estimate_channel_from_pilots(y[n_pre:n_pre + 2 * p], frame)
    bits = bpsk_demodulate(alamouti_decode(y[n_pre + 2 * p:], h))
    return ReceiveResult(bits, offset, cfo, h)
