"""Boundary frames and the rotation into frame coordinates."""

from dataclasses import dataclass, field
from typing import Any, Dict, Sequence

import numpy as np
from numpy.typing import NDArray

from src.exceptions import InvalidFrameError
from src.utils.constants import FRAME_TOLERANCE


def _as_vector(value: Sequence[float], name: str) -> NDArray[np.float64]:
    vec = np.asarray(value, dtype=float).reshape(-1)
    if vec.shape != (2,) or not np.all(np.isfinite(vec)):
        raise InvalidFrameError(f"{name} must be a finite 2-vector, got {value!r}")
    return vec


@dataclass(frozen=True, eq=False)
class BoundaryFrame:
    """Boundary point with a right-handed (tangent, normal) basis.

    The normal points into the treated region, so after rotation the treated
    side is locally the upper half-plane {z2 >= 0}.
    """

    center: NDArray[np.float64]
    tangent: NDArray[np.float64]
    normal: NDArray[np.float64]
    _basis: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        center = _as_vector(self.center, "center")
        tangent = _as_vector(self.tangent, "tangent")
        normal = _as_vector(self.normal, "normal")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "tangent", tangent)
        object.__setattr__(self, "normal", normal)
        basis = np.column_stack([tangent, normal])
        object.__setattr__(self, "_basis", basis)
        self.validate()

    @classmethod
    def from_normal(
        cls, center: Sequence[float], normal: Sequence[float]
    ) -> "BoundaryFrame":
        """Build a frame from a (not necessarily unit) normal.

        The tangent is the normal rotated by -90 degrees.
        """
        vec = _as_vector(normal, "normal")
        length = float(np.hypot(vec[0], vec[1]))
        if length == 0.0:
            raise InvalidFrameError("normal must be nonzero")
        unit = vec / length
        return cls(
            center=np.asarray(center, dtype=float),
            tangent=np.array([unit[1], -unit[0]]),
            normal=unit,
        )

    def validate(self) -> None:
        """Raise InvalidFrameError unless the basis is right-handed orthonormal."""
        t, n = self.tangent, self.normal
        if abs(float(t @ t) - 1.0) > FRAME_TOLERANCE:
            raise InvalidFrameError(f"tangent is not unit length: {t}")
        if abs(float(n @ n) - 1.0) > FRAME_TOLERANCE:
            raise InvalidFrameError(f"normal is not unit length: {n}")
        if abs(float(t @ n)) > FRAME_TOLERANCE:
            raise InvalidFrameError("tangent and normal are not orthogonal")
        if abs(float(np.linalg.det(self._basis)) - 1.0) > FRAME_TOLERANCE:
            raise InvalidFrameError("(tangent, normal) is not right-handed")

    def to_frame(self, r: NDArray[np.float64]) -> NDArray[np.float64]:
        """Map original coordinates (n, 2) to frame coordinates."""
        return (np.asarray(r, dtype=float) - self.center) @ self._basis

    def to_original(self, z: NDArray[np.float64]) -> NDArray[np.float64]:
        """Inverse of :meth:`to_frame`."""
        return np.asarray(z, dtype=float) @ self._basis.T + self.center

    def to_dict(self) -> Dict[str, Any]:
        """Serializable view."""
        return {
            "center": self.center.tolist(),
            "tangent": self.tangent.tolist(),
            "normal": self.normal.tolist(),
        }

    def __repr__(self) -> str:
        return (
            f"BoundaryFrame(center={self.center.tolist()}, "
            f"normal={self.normal.tolist()})"
        )


ORIGIN_FRAME = BoundaryFrame.from_normal((0.0, 0.0), (0.0, 1.0))
