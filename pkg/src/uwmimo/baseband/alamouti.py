"""Two-antenna Alamouti coding with silent-pilot channel estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import InvalidFrameError
from .modulation import bpsk_modulate

DEFAULT_PILOT_LENGTH = 64


def alamouti_encode(symbols):
    """Per pair ``(s1, s2)``: tx1 sends ``[s1, -s2*]`` and tx2 sends ``[s2, s1*]``."""
    s = np.asarray(symbols, dtype=complex)
    if s.ndim != 1 or s.size % 2:
        raise ValueError(f"Alamouti needs an even number of symbols, got {s.size}")
    s1, s2 = s[0::2], s[1::2]
    tx1 = np.empty_like(s)
    tx2 = np.empty_like(s)
    tx1[0::2], tx1[1::2] = s1, -np.conj(s2)
    tx2[0::2], tx2[1::2] = s2, np.conj(s1)
    return tx1, tx2


def alamouti_combine(rx_pairs, h):
    """Linear combining, scaled by ``1/(|h1|^2 + |h2|^2)`` so the output sits on the alphabet."""
    r = np.asarray(rx_pairs, dtype=complex).reshape(-1)
    if r.size % 2:
        raise ValueError("received stream must hold whole symbol pairs")
    h1, h2 = complex(h[0]), complex(h[1])
    gain = abs(h1) ** 2 + abs(h2) ** 2
    if gain == 0:
        raise InvalidFrameError("both channel coefficients are zero")
    r1, r2 = r[0::2], r[1::2]
    out = np.empty_like(r)
    out[0::2] = np.conj(h1) * r1 + h2 * np.conj(r2)
    out[1::2] = np.conj(h2) * r1 - h1 * np.conj(r2)
    return out / gain


def alamouti_decode(rx_pairs, h):
    """Combine and slice to the nearest BPSK point."""
    soft = alamouti_combine(rx_pairs, h)
    return np.where(soft.real >= 0, 1.0, -1.0) + 0j


@dataclass(frozen=True)
class AlamoutiFrame:
    """Symbol-rate layout: ``[pilot1, silence | silence, pilot2 | payload]``."""

    pilot_tx1: np.ndarray
    pilot_tx2: np.ndarray
    encoded_payload: tuple

    def __post_init__(self):
        p1, p2 = np.asarray(self.pilot_tx1), np.asarray(self.pilot_tx2)
        if p1.ndim != 1 or p1.shape != p2.shape or p1.size == 0:
            raise ValueError("pilot blocks must be non-empty and of equal length")
        a, b = (np.asarray(x) for x in self.encoded_payload)
        if a.shape != b.shape or a.size % 2:
            raise ValueError("payload streams must have equal, even length")

    @classmethod
    def build(cls, payload_symbols, pilot_length=DEFAULT_PILOT_LENGTH, rng=None, pilot_bits=None):
        """Encode ``payload_symbols`` and draw random BPSK pilots."""
        if pilot_bits is None:
            rng = np.random.default_rng(rng)
            pilot_bits = rng.integers(0, 2, size=(2, pilot_length))
        pilots = [bpsk_modulate(b) for b in pilot_bits]
        return cls(pilots[0], pilots[1], alamouti_encode(payload_symbols))

    @property
    def pilot_length(self):
        return int(np.size(self.pilot_tx1))

    def streams(self):
        """The two full symbol streams, pilots and silence included."""
        p = self.pilot_length
        z = np.zeros(p, dtype=complex)
        tx1 = np.concatenate([self.pilot_tx1, z, self.encoded_payload[0]])
        tx2 = np.concatenate([z, self.pilot_tx2, self.encoded_payload[1]])
        return tx1, tx2


def estimate_channel_from_pilots(rx, frame):
    """``(h1, h2)`` as the mean of ``rx / pilot`` over each antenna's pilot slots.

    ``rx`` starts at the first pilot symbol.  Each slot sees one antenna
    only, because the other is silent.
    """
    p = frame.pilot_length
    r = np.asarray(rx, dtype=complex)
    if r.size < 2 * p:
        raise InvalidFrameError(f"need {2 * p} pilot symbols, got {r.size}")
    p1, p2 = np.asarray(frame.pilot_tx1), np.asarray(frame.pilot_tx2)
    if np.any(p1 == 0) or np.any(p2 == 0):
        raise InvalidFrameError("pilot symbols must be nonzero")
    return complex(np.mean(r[:p] / p1)), complex(np.mean(r[p:2 * p] / p2))
