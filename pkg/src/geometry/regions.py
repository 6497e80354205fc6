"""Treatment regions and their boundaries."""

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from src.exceptions import InvalidArgumentError

from .frames import BoundaryFrame


class RegionKind(str, Enum):
    """Supported treatment-region shapes."""

    INTERSECTION = "intersection"
    HALF_SUM = "half-sum"
    HALF_PLANE = "half-plane"


@dataclass(frozen=True)
class RegionSpec:
    """Treatment region defined by thresholds (c1, c2).

    Regions are open: records exactly on the boundary are control.
    """

    kind: RegionKind
    thresholds: Tuple[float, float] = (0.0, 0.0)

    @classmethod
    def parse(cls, text: str) -> "RegionSpec":
        """Parse ``kind`` or ``kind:c1,c2``."""
        kind_text, _, rest = text.partition(":")
        try:
            kind = RegionKind(kind_text.strip())
        except ValueError as e:
            raise InvalidArgumentError(f"Unknown region kind: {kind_text!r}") from e
        if not rest:
            return cls(kind)
        parts = [p for p in rest.split(",") if p.strip()]
        if len(parts) != 2:
            raise InvalidArgumentError(f"Region thresholds must be c1,c2: {rest!r}")
        try:
            c1, c2 = (float(p) for p in parts)
        except ValueError as e:
            raise InvalidArgumentError(f"Non-numeric threshold in {rest!r}") from e
        return cls(kind, (c1, c2))

    def contains(self, r: NDArray[np.float64]) -> NDArray[np.bool_]:
        """Vectorized membership for an (n, 2) array."""
        pts = np.atleast_2d(np.asarray(r, dtype=float))
        c1, c2 = self.thresholds
        if self.kind is RegionKind.INTERSECTION:
            return (pts[:, 0] > c1) & (pts[:, 1] > c2)
        if self.kind is RegionKind.HALF_SUM:
            return pts[:, 0] + pts[:, 1] > c1 + c2
        return pts[:, 1] > c2


def region_contains(spec: RegionSpec, r: Sequence[float]) -> bool:
    """Whether a single point lies in the treated region."""
    return bool(spec.contains(np.asarray(r, dtype=float).reshape(1, 2))[0])


def boundary_points(
    spec: RegionSpec, count: int, extent: float = 1.0
) -> List[BoundaryFrame]:
    """Equally spaced frames on each linear piece of the region boundary.

    Intersection rays get ``count`` points at distances extent*k/count from
    the corner; the corner itself is never returned. Straight boundaries get
    ``count`` points spread over [-extent, extent] around (c1, c2).
    """
    if count < 1:
        raise InvalidArgumentError(f"count must be >= 1, got {count}")
    if extent <= 0:
        raise InvalidArgumentError(f"extent must be positive, got {extent}")

    corner = np.asarray(spec.thresholds, dtype=float)
    frames: List[BoundaryFrame] = []

    if spec.kind is RegionKind.INTERSECTION:
        steps = extent * np.arange(1, count + 1) / count
        # horizontal ray {r1 > c1, r2 = c2}, then vertical ray {r1 = c1, r2 > c2}
        for s in steps:
            frames.append(BoundaryFrame.from_normal(corner + [s, 0.0], (0.0, 1.0)))
        for s in steps:
            frames.append(BoundaryFrame.from_normal(corner + [0.0, s], (1.0, 0.0)))
        return frames

    offsets = np.linspace(-extent, extent, count) if count > 1 else np.zeros(1)
    if spec.kind is RegionKind.HALF_SUM:
        normal = np.array([1.0, 1.0]) / np.sqrt(2.0)
    else:
        normal = np.array([0.0, 1.0])
    direction = np.array([normal[1], -normal[0]])
    for s in offsets:
        frames.append(BoundaryFrame.from_normal(corner + s * direction, normal))
    return frames
