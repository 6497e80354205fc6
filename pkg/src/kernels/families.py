"""Bivariate boundary kernels K(z1, z2) supported on the upper half of [-1, 1]^2."""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from src.geometry.dataset import Side

CONE_CONSTANT = 6.0 / np.pi


class KernelFamily(str, Enum):
    """Supported kernel families."""

    PRODUCT_TRIANGULAR = "product-triangular"
    PRODUCT_EPANECHNIKOV = "product-epanechnikov"
    CONE = "cone"
    # First-coordinate kernel on [0, 1]; violates the rotation restriction.
    SHIFTED_TRIANGULAR = "shifted-triangular"

    @property
    def admissible(self) -> bool:
        return self is not KernelFamily.SHIFTED_TRIANGULAR


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and side; K_minus(z) = K_plus(z1, -z2)."""

    family: KernelFamily = KernelFamily.PRODUCT_TRIANGULAR
    side: Side = Side.PLUS

    def for_side(self, side: Side) -> "KernelSpec":
        return KernelSpec(self.family, side)


def triangular(u: NDArray[np.float64]) -> NDArray[np.float64]:
    """Two-sided triangular kernel (1 - |u|) on [-1, 1]."""
    return np.clip(1.0 - np.abs(u), 0.0, None)


def one_sided_triangular(u: NDArray[np.float64]) -> NDArray[np.float64]:
    """One-sided triangular kernel 2(1 - u) on [0, 1]."""
    return np.where((u >= 0.0) & (u <= 1.0), 2.0 * (1.0 - u), 0.0)


def epanechnikov(u: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u**2), 0.0)


def shifted_triangular(u: NDArray[np.float64]) -> NDArray[np.float64]:
    """Triangular kernel peaked at 1/2 on [0, 1]."""
    return np.where(
        (u >= 0.0) & (u <= 1.0), 2.0 * (1.0 - np.abs(2.0 * u - 1.0)), 0.0
    )


_FIRST_FACTOR = {
    KernelFamily.PRODUCT_TRIANGULAR: triangular,
    KernelFamily.PRODUCT_EPANECHNIKOV: epanechnikov,
    KernelFamily.SHIFTED_TRIANGULAR: shifted_triangular,
}


def kernel_weights(spec: KernelSpec, u: NDArray[np.float64]) -> NDArray[np.float64]:
    """Evaluate K_side at each row of an (n, 2) array of scaled coordinates."""
    pts = np.atleast_2d(np.asarray(u, dtype=float))
    u1 = pts[:, 0]
    u2 = spec.side.sign * pts[:, 1]
    if spec.family is KernelFamily.CONE:
        radius = np.hypot(u1, u2)
        return np.where(
            (radius <= 1.0) & (u2 >= 0.0), CONE_CONSTANT * (1.0 - radius), 0.0
        )
    return _FIRST_FACTOR[spec.family](u1) * one_sided_triangular(u2)


def kernel_eval(spec: KernelSpec, z: Sequence[float]) -> float:
    """Kernel value at a single point; zero outside the support."""
    return float(kernel_weights(spec, np.asarray(z, dtype=float).reshape(1, 2))[0])
