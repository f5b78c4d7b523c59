"""Master/slave TDD synchronization round over an MI or acoustic link.

The master broadcasts one beacon, then polls slaves 2..N in ascending order.
Each poll occupies a slot long enough for the downlink and uplink packets
plus a round trip.  A slave starts drifting as soon as its time stamp is
issued, and keeps drifting through every later slot until the joint
transmission starts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._validation import check_positive
from .clock_drift import GaussianEstimationError, frequency_sync_error


@dataclass(frozen=True)
class MediumParams:
    bandwidth_hz: float
    propagation_speed_mps: float
    operating_frequency_hz: float
    multiplier: float

    def __post_init__(self):
        for name in ("bandwidth_hz", "propagation_speed_mps", "operating_frequency_hz", "multiplier"):
            check_positive(getattr(self, name), name)

    @classmethod
    def from_crystal(cls, bandwidth_hz, propagation_speed_mps, operating_frequency_hz, crystal_hz):
        return cls(
            bandwidth_hz,
            propagation_speed_mps,
            operating_frequency_hz,
            operating_frequency_hz / crystal_hz,
        )


#: 10 MHz carrier synthesised from a 100 kHz crystal, 20 kHz bandwidth
MI = MediumParams(20e3, 3.33e7, 10e6, 100.0)
#: 10 kHz carrier synthesised from a 100 kHz crystal, 10 kHz bandwidth
ACOUSTIC = MediumParams(10e3, 1.4e3, 10e3, 0.1)


@dataclass(frozen=True)
class NodeLink:
    distance_m: float
    uplink_bits: int
    downlink_bits: int

    def __post_init__(self):
        if not self.distance_m >= 0:
            raise ValueError("distance_m must be non-negative")
        for name in ("uplink_bits", "downlink_bits"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"{name} must be a non-negative integer")


@dataclass(frozen=True)
class NodeSyncError:
    node_index: int
    slot_duration_s: float
    freq_error_hz: float
    time_error: float


@dataclass(frozen=True)
class SyncErrorReport:
    """Outcome of one round.

    ``time_error`` entries are in drift units (Hz times seconds, i.e.
    cycles of crystal error); :func:`drift_to_seconds` converts them.
    """

    nodes: list = field(default_factory=list)
    total_sync_time_s: float = 0.0

    @property
    def freq_errors(self):
        return np.array([n.freq_error_hz for n in self.nodes])

    @property
    def time_errors(self):
        return np.array([n.time_error for n in self.nodes])


def slot_duration(link, medium):
    """Length of one polling slot: packets over the bandwidth plus a round trip."""
    return (
        (link.uplink_bits + link.downlink_bits) / medium.bandwidth_hz
        + 2.0 * link.distance_m / medium.propagation_speed_mps
    )


def _later_slots(slots):
    # later[j] = sum of slots strictly after position j
    tail = np.cumsum(slots[::-1])[::-1]
    return np.append(tail[1:], 0.0)


def time_sync_error(node_index, links: Sequence[NodeLink], medium, freq_error_hz):
    """Accumulated drift of slave ``node_index`` at the start of transmission.

    ``links[0]`` belongs to node 2, ``links[-1]`` to node N.  Node 1 is the
    master and always returns 0.
    """
    n_nodes = len(links) + 1
    if node_index == 1:
        return 0.0
    if not 2 <= node_index <= n_nodes:
        raise ValueError(f"node_index must be in 1..{n_nodes}, got {node_index}")
    link = links[node_index - 2]
    later = sum(slot_duration(l, medium) for l in links[node_index - 1:])
    own = link.downlink_bits / medium.bandwidth_hz + link.distance_m / medium.propagation_speed_mps
    return freq_error_hz * (own + later)


def drift_to_seconds(time_error, crystal_hz):
    """Convert accumulated crystal cycles into a clock offset in seconds."""
    return np.asarray(time_error, dtype=float) / check_positive(crystal_hz, "crystal_hz")


def _as_generator(rng_seed):
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(rng_seed)


def run_sync_round(n_nodes, links, medium, estimation_error_model=None, rng_seed=None):
    """Simulate one polling round for ``n_nodes`` nodes (master included).

    ``estimation_error_model`` is a :class:`GaussianEstimationError`, a
    float standard deviation, or ``None`` for perfect estimation.  The
    slave errors are drawn in a single vectorised call, so two media run
    with the same seed see the same beacon estimation errors.
    """
    if int(n_nodes) != n_nodes or n_nodes < 1:
        raise ValueError(f"n_nodes must be a positive integer, got {n_nodes}")
    n_nodes = int(n_nodes)
    if isinstance(links, NodeLink):
        links = [links] * (n_nodes - 1)
    links = list(links)
    if len(links) != n_nodes - 1:
        raise ValueError(f"expected {n_nodes - 1} slave links, got {len(links)}")
    if estimation_error_model is None:
        estimation_error_model = GaussianEstimationError(0.0)
    elif isinstance(estimation_error_model, (int, float)):
        estimation_error_model = GaussianEstimationError(float(estimation_error_model))

    if n_nodes == 1:
        return SyncErrorReport(nodes=[NodeSyncError(1, 0.0, 0.0, 0.0)], total_sync_time_s=0.0)

    rng = _as_generator(rng_seed)
    eps_s = np.asarray(estimation_error_model.sample(rng, size=n_nodes - 1), dtype=float)
    eps_f = frequency_sync_error(eps_s, medium.multiplier)

    slots = np.array([slot_duration(l, medium) for l in links])
    later = _later_slots(slots)
    own = np.array(
        [l.downlink_bits / medium.bandwidth_hz + l.distance_m / medium.propagation_speed_mps for l in links]
    )
    eps_t = eps_f * (own + later)

    nodes = [NodeSyncError(1, 0.0, 0.0, 0.0)]
    nodes.extend(
        NodeSyncError(i + 2, float(slots[i]), float(eps_f[i]), float(eps_t[i]))
        for i in range(n_nodes - 1)
    )
    # left-to-right sum so the total matches summing the per-node slots
    return SyncErrorReport(nodes=nodes, total_sync_time_s=sum(n.slot_duration_s for n in nodes))
