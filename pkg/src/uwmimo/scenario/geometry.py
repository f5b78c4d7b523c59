"""Random node deployments around the master."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_PLACEMENT_ATTEMPTS = 10_000


@dataclass(frozen=True)
class DeploymentGeometry:
    """Positions in metres; z points up towards the surface base station."""

    master: np.ndarray
    slaves: np.ndarray
    base_station: np.ndarray

    @property
    def nodes(self):
        """Master first, then the slaves."""
        return np.vstack([self.master[None, :], self.slaves])

    @property
    def n_nodes(self):
        return 1 + len(self.slaves)

    def slave_distances(self):
        return np.linalg.norm(self.slaves - self.master, axis=1)

    def distances_to_base(self):
        return np.linalg.norm(self.nodes - self.base_station, axis=1)


def deploy_random(n_slaves, radius_m, rng, min_spacing_m=0.0, bs_depth_m=5.0, bs_offset_m=0.0):
    """Slaves uniform over a horizontal disc around the master at the origin.

    Candidates closer than ``min_spacing_m`` to an already placed node are
    redrawn.  The base station sits ``bs_depth_m`` above the master and
    ``bs_offset_m`` along x.
    """
    if int(n_slaves) != n_slaves or n_slaves < 0:
        raise ValueError("n_slaves must be a non-negative integer")
    if not radius_m > 0:
        raise ValueError("radius_m must be positive")
    rng = np.random.default_rng(rng)
    placed = np.zeros((int(n_slaves) + 1, 3))
    for i in range(1, int(n_slaves) + 1):
        for _attempt in range(MAX_PLACEMENT_ATTEMPTS):
            r = radius_m * np.sqrt(rng.uniform())
            theta = rng.uniform(0.0, 2 * np.pi)
            p = np.array([r * np.cos(theta), r * np.sin(theta), 0.0])
            if np.linalg.norm(placed[:i] - p, axis=1).min() >= min_spacing_m:
                placed[i] = p
                break
        else:
            raise ValueError(
                f"could not place {n_slaves} slaves {min_spacing_m} m apart within {radius_m} m"
            )
    return DeploymentGeometry(
        master=placed[0].copy(),
        slaves=placed[1:],
        base_station=np.array([bs_offset_m, 0.0, bs_depth_m]),
    )
