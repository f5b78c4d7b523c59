"""Underwater acoustic multipath: per-path attenuation and the envelope law.

Each path loses power as ``xi * d**beta * exp(alpha(f) * d)``.  Paths
arrive with independent uniform phases, so the per-transmitter envelope is
the magnitude of a sum of random phasors.  Its density is a Hankel-type
integral over a product of zeroth-order Bessel functions, evaluated here
by quadrature and cross-checked against direct Monte-Carlo sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy import special

from ._validation import check_positive
from .exceptions import DegenerateChannelError

SOUND_SPEED_MPS = 1.4e3


def thorp_absorption(frequency_hz):
    """Thorp absorption as a natural-log power coefficient in 1/m.

    Thorp's fit gives dB/km with frequency in kHz; it is converted so that
    power decays as ``exp(alpha * d)``.
    """
    f2 = (np.asarray(frequency_hz, dtype=float) / 1e3) ** 2
    db_per_km = 0.11 * f2 / (1 + f2) + 44 * f2 / (4100 + f2) + 2.75e-4 * f2 + 0.003
    return db_per_km * math.log(10) / 10 / 1e3


def constant_absorption(alpha_per_m):
    alpha_per_m = float(alpha_per_m)
    if alpha_per_m < 0:
        raise ValueError("absorption must be non-negative")
    return lambda frequency_hz: alpha_per_m


Absorption = Union[float, Callable[[float], float]]


@dataclass(frozen=True)
class PathSpec:
    distance_m: float
    scattering_loss: float = 1.0
    spreading_exponent: float = 1.5
    absorption: Absorption = 0.0

    def __post_init__(self):
        check_positive(self.distance_m, "distance_m")
        check_positive(self.scattering_loss, "scattering_loss")
        if not self.spreading_exponent >= 0:
            raise ValueError("spreading_exponent must be non-negative")
        if isinstance(self.absorption, (int, float)) and self.absorption < 0:
            raise ValueError("absorption must be non-negative")

    def alpha(self, frequency_hz):
        if callable(self.absorption):
            value = float(self.absorption(frequency_hz))
        else:
            value = float(self.absorption)
        if value < 0:
            raise ValueError("absorption must be non-negative")
        return value


def path_attenuation(frequency_hz, path):
    """Power attenuation of one path (>= 0 dB for ordinary geometries)."""
    check_positive(frequency_hz, "frequency_hz")
    d = path.distance_m
    return path.scattering_loss * d**path.spreading_exponent * math.exp(path.alpha(frequency_hz) * d)


def path_gain(frequency_hz, path):
    """Amplitude gain of one path, ``1 / sqrt(attenuation)``."""
    return 1.0 / math.sqrt(path_attenuation(frequency_hz, path))


@dataclass(frozen=True)
class MultipathChannel:
    """Path amplitudes and delays for one transmitter.

    Path 0 is listed first.  The envelope density treats it as the
    reference path, the remaining entries as the extra arrivals.
    """

    path_gains: tuple
    path_delays: tuple

    def __init__(self, path_gains, path_delays=None):
        gains = tuple(float(g) for g in np.atleast_1d(path_gains))
        if path_delays is None:
            path_delays = (0.0,) * len(gains)
        delays = tuple(float(t) for t in np.atleast_1d(path_delays))
        if len(gains) < 1 or len(gains) != len(delays):
            raise ValueError("need at least one path and one delay per gain")
        if any(g <= 0 or not math.isfinite(g) for g in gains):
            raise ValueError("path gains must be positive")
        if any(t < 0 for t in delays):
            raise ValueError("path delays must be non-negative")
        object.__setattr__(self, "path_gains", gains)
        object.__setattr__(self, "path_delays", delays)

    @classmethod
    def from_paths(cls, frequency_hz, paths: Sequence[PathSpec], speed_mps=SOUND_SPEED_MPS):
        gains = [path_gain(frequency_hz, p) for p in paths]
        delays = [p.distance_m / speed_mps for p in paths]
        return cls(gains, delays)

    @property
    def n_paths(self):
        return len(self.path_gains)

    @property
    def max_envelope(self):
        return float(sum(self.path_gains))


def surface_bottom_paths(direct_distance_m, excess_lengths_m=(0.0, 2.0, 5.0),
                         reflection_loss=2.0, spreading_exponent=1.5, absorption=0.0):
    """Direct path plus reflected paths that travel ``excess`` metres further.

    The first excess length is usually 0 (the direct path, unit scattering
    loss); every other path pays ``reflection_loss``.
    """
    paths = []
    for i, extra in enumerate(excess_lengths_m):
        paths.append(
            PathSpec(
                distance_m=direct_distance_m + extra,
                scattering_loss=1.0 if i == 0 else reflection_loss,
                spreading_exponent=spreading_exponent,
                absorption=absorption,
            )
        )
    return paths


def bessel_j0(x):
    """Zeroth-order Bessel function of the first kind."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("bessel_j0 needs finite input")
    out = special.j0(arr)
    return float(out) if out.ndim == 0 else out


# Envelope density
# ----------------
# The integral converges only conditionally (three J0 factors decay like
# x**-1.5 against the x weight).  It is regularised with a Gaussian factor
# exp(-2 pi^2 s^2 x^2), which is the characteristic function of a tiny
# circular Gaussian added to the phasor sum.  The result is still an exact
# density (of the sum plus that component), so normalisation is preserved,
# and it converges to the envelope law as s -> 0.  s is a fraction of the
# maximum envelope.  Two-path envelopes have inverse-square-root density
# spikes at |a0 - a1| and a0 + a1, where the CDF error grows like sqrt(s),
# so they get a finer default; with three or more paths the density is
# continuous and the coarser value is enough.

ENVELOPE_SMOOTHING = 4e-3
TWO_PATH_SMOOTHING = 4e-4
_TAIL = math.sqrt(math.log(1e13) / (2 * math.pi**2))
_POINTS_PER_UNIT = 32


def _quadrature_grid(channel, smoothing):
    if smoothing is None:
        smoothing = TWO_PATH_SMOOTHING if channel.n_paths == 2 else ENVELOPE_SMOOTHING
    total = channel.max_envelope
    s = smoothing * total
    x_max = _TAIL / s
    n = int(math.ceil(x_max * _POINTS_PER_UNIT * total / 2)) * 2 + 1
    x = np.linspace(0.0, x_max, n)
    w = np.full(n, 2.0)
    w[1:-1:2] = 4.0
    w[0] = w[-1] = 1.0
    w *= (x[1] - x[0]) / 3.0
    kernel = np.exp(-2 * math.pi**2 * s**2 * x**2)
    for g in channel.path_gains:
        kernel = kernel * special.j0(2 * math.pi * g * x)
    return x, w * kernel


def _check_multipath(channel):
    if channel.n_paths < 2:
        raise DegenerateChannelError(
            "a single-path channel has a constant envelope; use its path gain directly"
        )


def envelope_pdf(channel, z, smoothing=None, chunk=64):
    """Density of the channel envelope at ``z`` (scalar or array).

    Negative quadrature residue is clamped to zero.
    """
    _check_multipath(channel)
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z_arr < 0):
        raise ValueError("z must be non-negative")
    x, wk = _quadrature_grid(channel, smoothing)
    wk = wk * x
    out = np.empty_like(z_arr)
    for start in range(0, z_arr.size, chunk):
        zc = z_arr[start:start + chunk]
        out[start:start + chunk] = special.j0(2 * math.pi * np.outer(zc, x)) @ wk
    out *= 4 * math.pi**2 * z_arr
    out = np.maximum(out, 0.0)
    return float(out[0]) if np.ndim(z) == 0 else out


def envelope_cdf(channel, z, smoothing=None, chunk=64):
    """``P(h <= z)`` from the same regularised integral, integrated over z in closed form."""
    _check_multipath(channel)
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    x, wk = _quadrature_grid(channel, smoothing)
    out = np.empty_like(z_arr)
    for start in range(0, z_arr.size, chunk):
        zc = z_arr[start:start + chunk]
        out[start:start + chunk] = special.j1(2 * math.pi * np.outer(zc, x)) @ wk
    out *= 2 * math.pi * z_arr
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if np.ndim(z) == 0 else out


@dataclass(frozen=True)
class EnvelopeSample:
    envelope: float
    phase_delay_s: float


def _random_phasor_sum(channel, rng, size):
    gains = np.asarray(channel.path_gains)
    if gains.size == 1:
        return np.full(size, gains[0])
    theta = rng.uniform(-math.pi, math.pi, size=(size, gains.size))
    return np.abs(np.exp(1j * theta) @ gains)


def sample_envelopes(channel, rng, size):
    """``size`` independent envelope draws as an array."""
    return _random_phasor_sum(channel, rng, int(size))


def sample_envelope(channel, rng, carrier_hz=10e3):
    """One envelope draw plus a delay uniform over one carrier period.

    The delay maps to a phase uniform on ``[-pi, pi)`` at ``carrier_hz``.
    """
    carrier_hz = check_positive(carrier_hz, "carrier_hz")
    envelope = float(_random_phasor_sum(channel, rng, 1)[0])
    delay = rng.uniform(-0.5, 0.5) / carrier_hz
    return EnvelopeSample(envelope=envelope, phase_delay_s=float(delay))
