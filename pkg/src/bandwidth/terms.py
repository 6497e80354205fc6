"""Bandwidth-selection value types."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np
from numpy.typing import NDArray


class BandwidthMode(str, Enum):
    """How the final (h1, h2) are chosen."""

    HETEROGENEOUS = "heterogeneous"
    COMMON = "common"
    FIXED = "fixed"


class DensityFactor(str, Enum):
    """Whether the variance constant carries 1/f(c)."""

    ADJUSTED = "adjusted"
    LITERAL = "literal"


class ResidualVariance(str, Enum):
    """Residuals behind the variance estimate at c."""

    NEAREST_NEIGHBOUR = "nearest-neighbour"
    LOCAL_LINEAR = "local-linear"


class H6Constant(str, Enum):
    """Leading constant of the h^6 first-order condition."""

    EIGHTH = "eighth"
    HALF = "half"

    @property
    def factor(self) -> float:
        return 0.125 if self is H6Constant.EIGHTH else 0.5


@dataclass(frozen=True)
class SelectorOptions:
    """Options of the bandwidth pipeline."""

    mode: BandwidthMode = BandwidthMode.HETEROGENEOUS
    density_factor: DensityFactor = DensityFactor.ADJUSTED
    h6_constant: H6Constant = H6Constant.EIGHTH
    fixed_bandwidths: Optional[Tuple[float, float]] = None

    @property
    def standardize(self) -> bool:
        """Pilot stages run on per-axis standardized coordinates."""
        return self.density_factor is DensityFactor.ADJUSTED


@dataclass(frozen=True, eq=False)
class BiasTerms:
    """Estimated second partials of m+ and m- and the leading-bias constants.

    ``B1hat = |delta11 * sTilde11|`` and ``B2hat = |delta22 * sTilde22|``;
    ``covPlus``/``covMinus`` are the 2x2 covariances of (d11, d22) per side.
    """

    d11plus: float
    d22plus: float
    d11minus: float
    d22minus: float
    sTilde11: float
    sTilde22: float
    covPlus: NDArray[np.float64] = field(repr=False)
    covMinus: NDArray[np.float64] = field(repr=False)
    d12plus: float = 0.0
    d12minus: float = 0.0

    @property
    def delta11(self) -> float:
        return self.d11plus - self.d11minus

    @property
    def delta22(self) -> float:
        return self.d22plus - self.d22minus

    @property
    def B1hat(self) -> float:
        return abs(self.delta11 * self.sTilde11)

    @property
    def B2hat(self) -> float:
        return abs(self.delta22 * self.sTilde22)

    @property
    def delta_covariance(self) -> NDArray[np.float64]:
        """Covariance of (delta11, delta22); the two sides are independent."""
        return np.asarray(self.covPlus + self.covMinus)

    @property
    def varB1(self) -> float:
        return float(self.sTilde11**2 * self.delta_covariance[0, 0])

    @property
    def varB2(self) -> float:
        return float(self.sTilde22**2 * self.delta_covariance[1, 1])

    @property
    def weights(self) -> NDArray[np.float64]:
        return np.array([self.sTilde11, self.sTilde22])

    def signed_bias(self, h: Tuple[float, float]) -> float:
        """Plug-in leading bias h1^2/2 delta11 s11 + h2^2/2 delta22 s22."""
        h1, h2 = h
        return 0.5 * (
            h1**2 * self.delta11 * self.sTilde11 + h2**2 * self.delta22 * self.sTilde22
        )

    def bias_variance(self, h: Tuple[float, float]) -> float:
        """Variance of :meth:`signed_bias` from the pilot fits."""
        h1, h2 = h
        grad = 0.5 * np.array([h1**2 * self.sTilde11, h2**2 * self.sTilde22])
        return float(max(grad @ self.delta_covariance @ grad, 0.0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "B1hat": self.B1hat,
            "B2hat": self.B2hat,
            "varB1": self.varB1,
            "varB2": self.varB2,
            "d11plus": self.d11plus,
            "d22plus": self.d22plus,
            "d11minus": self.d11minus,
            "d22minus": self.d22minus,
        }


@dataclass(frozen=True)
class BandwidthSelection:
    """Pilot and final bandwidths with the inputs that produced them.

    ``pilotPlus``/``pilotMinus`` are in working units; multiply by ``scale``
    for the per-axis pilot in frame coordinates.
    """

    sigma2plus: float
    sigma2minus: float
    fhat: Optional[float]
    pilotPlus: float
    pilotMinus: float
    h1: float
    h2: float
    mode: BandwidthMode
    scale: Tuple[float, float] = (1.0, 1.0)

    def __post_init__(self) -> None:
        if self.mode is BandwidthMode.COMMON and self.h1 != self.h2:
            raise ValueError("common bandwidth mode requires h1 == h2")

    @property
    def bandwidths(self) -> Tuple[float, float]:
        return (self.h1, self.h2)

    def pilot_axes(self, side: str = "plus") -> Tuple[float, float]:
        b = self.pilotPlus if side == "plus" else self.pilotMinus
        return (b * self.scale[0], b * self.scale[1])

    @property
    def pilot_summary(self) -> float:
        """Average pilot over sides, geometric mean over axes, frame units."""
        geo = float(np.sqrt(self.scale[0] * self.scale[1]))
        return 0.5 * (self.pilotPlus + self.pilotMinus) * geo

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sigma2plus": self.sigma2plus,
            "sigma2minus": self.sigma2minus,
            "fhat": self.fhat,
            "pilotPlus": self.pilotPlus,
            "pilotMinus": self.pilotMinus,
            "h1": self.h1,
            "h2": self.h2,
            "mode": self.mode.value,
        }
