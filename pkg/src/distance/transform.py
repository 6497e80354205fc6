"""Collapse the bivariate design to a signed distance from the boundary point."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.geometry.dataset import Dataset, Side
from src.geometry.frames import BoundaryFrame


@dataclass(frozen=True, eq=False)
class SignedDistanceSample:
    """z_i = +||r_i - c|| for treated records and -||r_i - c|| otherwise."""

    z: NDArray[np.float64]
    y: NDArray[np.float64]

    @property
    def n(self) -> int:
        return int(self.z.size)

    def side(self, side: Side) -> NDArray[np.bool_]:
        if side is Side.PLUS:
            return np.asarray(self.z >= 0.0)
        return np.asarray(self.z < 0.0)


def to_signed_distance(data: Dataset, frame: BoundaryFrame) -> SignedDistanceSample:
    """Signed Euclidean distance from ``frame.center`` using the treatment flags."""
    offsets = np.asarray(data.r, dtype=float) - frame.center
    dist = np.hypot(offsets[:, 0], offsets[:, 1])
    z = np.where(data.d, dist, -dist)
    return SignedDistanceSample(z=z, y=data.y)
