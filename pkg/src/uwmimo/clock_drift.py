"""Crystal oscillator drift and slave-side frequency synchronization error.

Every slave node carries its own crystal.  Its frequency relative to the
master is a (possibly time-varying) ratio ``a_n(t)``; the radio operating
frequency is the crystal frequency times a per-medium multiplier ``k``.
A slave locks to the master's beacon, and whatever error it makes in
estimating the beacon frequency shows up at the crystal divided by ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from ._validation import check_positive

DriftProfile = Union[float, "AffineDrift", Callable[[float], float]]

#: midpoint panels used for drift profiles that have no closed-form mean
QUADRATURE_PANELS = 1000


@dataclass(frozen=True)
class AffineDrift:
    """Drift ratio ``offset + slope * t``."""

    offset: float = 1.0
    slope: float = 0.0

    def __call__(self, t):
        return self.offset + self.slope * t


@dataclass(frozen=True)
class OscillatorSpec:
    nominal_frequency: float
    drift_profile: DriftProfile = 1.0

    def __post_init__(self):
        check_positive(self.nominal_frequency, "nominal_frequency")
        if isinstance(self.drift_profile, (int, float)) and self.drift_profile <= 0:
            raise ValueError("a constant drift ratio must be positive")


@dataclass(frozen=True)
class FrequencySyncResult:
    estimated_beacon_hz: float
    offset_hz: float
    residual_error_hz: float


def average_relative_drift(profile, interval):
    """Mean of the drift ratio over ``[0, interval]``.

    Constants are returned as-is and :class:`AffineDrift` is averaged in
    closed form.  Any other callable is integrated with the midpoint rule on
    :data:`QUADRATURE_PANELS` panels.  An :class:`OscillatorSpec` may be
    passed in place of its profile.
    """
    interval = check_positive(interval, "interval")
    if isinstance(profile, OscillatorSpec):
        profile = profile.drift_profile
    if isinstance(profile, (int, float)):
        return float(profile)
    if isinstance(profile, AffineDrift):
        return profile.offset + profile.slope * interval / 2.0
    h = interval / QUADRATURE_PANELS
    mid = (np.arange(QUADRATURE_PANELS) + 0.5) * h
    values = np.array([profile(t) for t in mid], dtype=float)
    if np.any(values <= 0):
        raise ValueError("drift profile must stay positive over the interval")
    return float(values.mean())


def operating_frequency(osc, multiplier):
    """Radio frequency synthesised from the crystal: ``k * f_c``."""
    multiplier = check_positive(multiplier, "multiplier")
    return multiplier * osc.nominal_frequency


def frequency_sync_error(estimation_error_hz, multiplier):
    """Residual crystal-frequency error after locking to the beacon.

    Works elementwise on arrays.
    """
    multiplier = check_positive(multiplier, "multiplier")
    if np.ndim(estimation_error_hz):
        return np.asarray(estimation_error_hz, dtype=float) / multiplier
    return float(estimation_error_hz) / multiplier


def beacon_frequency_estimate(beacon_hz, avg_drift, estimation_error_hz, multiplier=1.0):
    """What slave ``n`` measures for the master beacon, and the offset it applies.

    ``beacon_hz`` is the master's operating frequency, so the master crystal
    sits at ``beacon_hz / multiplier``.
    """
    beacon_hz = check_positive(beacon_hz, "beacon_hz")
    multiplier = check_positive(multiplier, "multiplier")
    estimate = avg_drift * beacon_hz + estimation_error_hz
    master_crystal = beacon_hz / multiplier
    offset = (avg_drift - 1.0) * master_crystal + estimation_error_hz / multiplier
    return FrequencySyncResult(
        estimated_beacon_hz=estimate,
        offset_hz=offset,
        residual_error_hz=frequency_sync_error(estimation_error_hz, multiplier),
    )


@dataclass(frozen=True)
class GaussianEstimationError:
    """Zero-mean Gaussian beacon-frequency estimation error."""

    std_hz: float

    def __post_init__(self):
        if not self.std_hz >= 0:
            raise ValueError("std_hz must be non-negative")

    def sample(self, rng, size=None):
        if self.std_hz == 0:
            return np.zeros(size) if size is not None else 0.0
        return rng.normal(0.0, self.std_hz, size=size)
