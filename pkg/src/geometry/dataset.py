"""Outcome, running-variable and treatment records."""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from src.exceptions import InvalidArgumentError

from .frames import BoundaryFrame
from .regions import RegionSpec


class Side(str, Enum):
    """Side of the boundary."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> float:
        return 1.0 if self is Side.PLUS else -1.0


@dataclass(frozen=True, eq=False)
class Dataset:
    """n records of (y, r, d).

    ``r`` is (n, 2). When ``rotated`` is set the running variables are frame
    coordinates z and the treated side is {z2 >= 0}.
    """

    y: NDArray[np.float64]
    r: NDArray[np.float64]
    d: NDArray[np.bool_]
    rotated: bool = False

    def __post_init__(self) -> None:
        y = np.asarray(self.y, dtype=float).reshape(-1)
        r = np.asarray(self.r, dtype=float)
        d = np.asarray(self.d).astype(bool).reshape(-1)
        if y.size < 1:
            raise InvalidArgumentError("dataset must contain at least one record")
        if r.shape != (y.size, 2):
            raise InvalidArgumentError(
                f"running variables must have shape ({y.size}, 2), got {r.shape}"
            )
        if d.size != y.size:
            raise InvalidArgumentError("treatment flags and outcomes differ in length")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(r))):
            raise InvalidArgumentError("dataset values must be finite")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "d", d)

    @classmethod
    def from_region(
        cls, y: NDArray[np.float64], r: NDArray[np.float64], region: RegionSpec
    ) -> "Dataset":
        """Build a dataset whose treatment flags are region membership."""
        r_arr = np.asarray(r, dtype=float)
        return cls(y=y, r=r_arr, d=region.contains(r_arr))

    @property
    def n(self) -> int:
        return int(self.y.size)

    def with_outcome(self, y: NDArray[np.float64]) -> "Dataset":
        """Same design, new outcomes."""
        return Dataset(y=y, r=self.r, d=self.d, rotated=self.rotated)

    def subset(self, mask: NDArray[np.bool_]) -> "Dataset":
        return Dataset(
            y=self.y[mask], r=self.r[mask], d=self.d[mask], rotated=self.rotated
        )


def rotate_to_frame(data: Dataset, frame: BoundaryFrame) -> Dataset:
    """Recenter at the frame's boundary point and rotate into (tangent, normal)."""
    frame.validate()
    return Dataset(y=data.y, r=frame.to_frame(data.r), d=data.d, rotated=True)


def side_mask(z: NDArray[np.float64], side: Side) -> NDArray[np.bool_]:
    """Records on the treated ({z2 >= 0}) or control ({z2 < 0}) side."""
    if side is Side.PLUS:
        return np.asarray(z[:, 1] >= 0.0)
    return np.asarray(z[:, 1] < 0.0)
