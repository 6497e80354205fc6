"""Polynomial mean surfaces of the four simulation designs.

Each design has one global polynomial per side in the rotated coordinates
(X along the boundary, Y along the normal); the boundary point sits at the
origin and treatment is {Y >= 0}.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import structlog
from numpy.typing import NDArray

from src.exceptions import InvalidArgumentError, OutOfSupportError, UnknownDesignError
from src.utils.constants import DEFAULT_NOISE_STD, DEFAULT_SUPPORT

logger = structlog.get_logger()

# Exponents (a, b) of X^a Y^b, in table order.
DESIGN_TERMS: Tuple[Tuple[int, int], ...] = (
    (0, 0),
    (1, 0),
    (2, 0),
    (3, 0),
    (4, 0),
    (5, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 1),
    (2, 1),
    (1, 2),
    (2, 2),
    (3, 1),
    (1, 3),
)

DESIGN_TABLE_VERSION = "1"

Coefficients = Tuple[float, ...]

# design id -> (control, treated)
_COEFFICIENTS: Dict[int, Tuple[Coefficients, Coefficients]] = {
    1: (
        (
            0.351330594, 0.0016345305, 0.0001058476, 8.255e-07, 5.9e-09, 1e-10,
            0.0053400898, 2.4132e-05, -1.83e-08, -4e-10, 0.0,
            4.50874e-05, 1.0092e-06, 3.368e-07, 2e-10, 8e-10, 1.07e-08,
        ),
        (
            0.6585339043, 0.000775413, 5.94362e-05, -1.3635e-06, 4.988e-07, 1.69e-08,
            0.0032217053, -6.65157e-05, 2.97e-06, -3.79e-08, 1e-10,
            -1.03557e-05, -4.2481e-06, 3.884e-07, 4.4e-09, -6e-10, -1.027e-07,
        ),
    ),
    2: (
        (
            0.36273926, -0.0021631216, 5.15506e-05, 8.953e-07, -7.4e-09, 1e-10,
            0.0046917496, 1.61902e-05, -3.67e-08, -4e-10, 0.0,
            1.50884e-05, 2.408e-07, 3.25e-07, 2e-10, 8e-10, 1.07e-08,
        ),
        (
            0.7242674163, -0.0040502435, -0.0004489873, 4.78549e-05, -1.5242e-06,
            1.69e-08,
            0.0024425863, -7.33327e-05, 2.9837e-06, -3.79e-08, 1e-10,
            1.61465e-05, 3.1439e-06, 1.796e-07, 4.4e-09, -6e-10, -1.027e-07,
        ),
    ),
    3: (
        (
            0.5206142027, 0.0052087349, 8.183e-06, -8.79e-08, -4e-10, 0.0,
            -0.0021581664, 2.64291e-05, 1.5009e-06, -1.18e-08, 1e-10,
            3.3066e-05, 3.854e-07, -1.5e-09, 2e-10, 1.07e-08, 8e-10,
        ),
        (
            0.7549214382, 0.0025430669, 3.01802e-05, -1.152e-07, -1.75e-08, 1e-10,
            0.014353943, -0.0021086853, 0.0001045443, -2.1986e-06, 1.69e-08,
            -4.90521e-05, 6.19e-08, 5.8515e-06, 4.4e-09, -1.027e-07, -6e-10,
        ),
    ),
    4: (
        (
            0.7458374267, 0.0052893523, -8.065e-06, -1.737e-07, -6e-10, 0.0,
            -3.26995e-05, 2.68002e-05, 1.9491e-06, -1.18e-08, 1e-10,
            6.94992e-05, 4.82e-07, 1.92e-08, 2e-10, 1.07e-08, 8e-10,
        ),
        (
            0.8710000105, 0.0015475707, -6.16581e-05, -4.855e-07, 1.31e-08, 1e-10,
            0.0123605658, -0.0018552507, 0.0001002323, -2.1986e-06, 1.69e-08,
            -4.68808e-05, -1.02e-08, 6.2169e-06, 4.4e-09, -1.027e-07, -6e-10,
        ),
    ),
}  # fmt: skip

DESIGN_IDS: Tuple[int, ...] = tuple(sorted(_COEFFICIENTS))


def term_name(exponents: Tuple[int, int]) -> str:
    """Human-readable monomial name such as ``X^2Y``."""
    a, b = exponents
    if a == 0 and b == 0:
        return "1"
    parts = []
    for symbol, power in (("X", a), ("Y", b)):
        if power == 1:
            parts.append(symbol)
        elif power > 1:
            parts.append(f"{symbol}^{power}")
    return "".join(parts)


@dataclass(frozen=True)
class DesignSpec:
    """One simulation design: two mean polynomials, support and noise level."""

    id: int
    controlCoeffs: Coefficients
    treatedCoeffs: Coefficients
    support: Tuple[float, float, float, float] = DEFAULT_SUPPORT
    noiseStd: float = DEFAULT_NOISE_STD

    def __post_init__(self) -> None:
        if not self.noiseStd > 0.0:
            raise InvalidArgumentError(
                f"noise std must be positive, got {self.noiseStd}"
            )
        x_lo, x_hi, y_lo, y_hi = self.support
        if not (x_lo < 0.0 < x_hi and y_lo < 0.0 < y_hi):
            raise InvalidArgumentError(
                f"support {self.support} must contain the origin in its interior"
            )
        for name, coeffs in (
            ("control", self.controlCoeffs),
            ("treated", self.treatedCoeffs),
        ):
            if len(coeffs) != len(DESIGN_TERMS):
                raise InvalidArgumentError(
                    f"{name} polynomial needs {len(DESIGN_TERMS)} coefficients"
                )

    @property
    def evalPoint(self) -> Tuple[float, float]:
        return (0.0, 0.0)

    @property
    def true_theta(self) -> float:
        """Jump of the mean surface at the origin."""
        return float(self.treatedCoeffs[0] - self.controlCoeffs[0])

    def in_support(self, z: NDArray[np.float64]) -> NDArray[np.bool_]:
        pts = np.atleast_2d(z)
        x_lo, x_hi, y_lo, y_hi = self.support
        return np.asarray(
            (pts[:, 0] >= x_lo)
            & (pts[:, 0] <= x_hi)
            & (pts[:, 1] >= y_lo)
            & (pts[:, 1] <= y_hi)
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "id": self.id,
            "support": list(self.support),
            "noiseStd": self.noiseStd,
            "evalPoint": list(self.evalPoint),
            "trueTheta": self.true_theta,
        }


def make_design(
    design_id: int,
    support: Optional[Sequence[float]] = None,
    noise_std: Optional[float] = None,
) -> DesignSpec:
    """Load a design by id, optionally overriding its support or noise level."""
    if design_id not in _COEFFICIENTS:
        raise UnknownDesignError(
            f"unknown design id {design_id}; expected one of {list(DESIGN_IDS)}"
        )
    control, treated = _COEFFICIENTS[design_id]
    rect = tuple(float(v) for v in support) if support is not None else DEFAULT_SUPPORT
    if len(rect) != 4:
        raise InvalidArgumentError("support must be (x_lo, x_hi, y_lo, y_hi)")
    return DesignSpec(
        id=design_id,
        controlCoeffs=control,
        treatedCoeffs=treated,
        support=rect,  # type: ignore[arg-type]
        noiseStd=DEFAULT_NOISE_STD if noise_std is None else float(noise_std),
    )


def _polynomial(coeffs: Coefficients, z: NDArray[np.float64]) -> NDArray[np.float64]:
    x = z[:, 0]
    y = z[:, 1]
    total = np.zeros(z.shape[0])
    for c, (a, b) in zip(coeffs, DESIGN_TERMS):
        if c != 0.0:
            total = total + c * x**a * y**b
    return total


def mean_surface(
    design: DesignSpec, z: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Vectorized mean: treated polynomial on {z2 >= 0}, control elsewhere."""
    pts = np.atleast_2d(np.asarray(z, dtype=float))
    treated = pts[:, 1] >= 0.0
    return np.where(
        treated,
        _polynomial(design.treatedCoeffs, pts),
        _polynomial(design.controlCoeffs, pts),
    )


def eval_mean(
    design: DesignSpec, z: Union[Sequence[float], NDArray[np.float64]]
) -> float:
    """Mean outcome at a single point of the support."""
    point = np.asarray(z, dtype=float).reshape(1, 2)
    if not design.in_support(point)[0]:
        raise OutOfSupportError(
            f"point {tuple(point[0])} is outside the support {design.support}"
        )
    return float(mean_surface(design, point)[0])


def true_theta(design_id: int) -> float:
    return make_design(design_id).true_theta


def coefficient_table() -> pd.DataFrame:
    """Long-format coefficient table: one row per (design, side, term)."""
    rows: List[Dict[str, object]] = []
    for design_id in DESIGN_IDS:
        control, treated = _COEFFICIENTS[design_id]
        for side, coeffs in (("control", control), ("treated", treated)):
            for exponents, value in zip(DESIGN_TERMS, coeffs):
                rows.append(
                    {
                        "design": design_id,
                        "side": side,
                        "term": term_name(exponents),
                        "x_power": exponents[0],
                        "y_power": exponents[1],
                        "coefficient": value,
                    }
                )
    return pd.DataFrame(rows)


def export_design_table(path: Union[str, Path]) -> Path:
    """Write the embedded coefficient table as CSV."""
    target = Path(path)
    table = coefficient_table()
    table.insert(0, "table_version", DESIGN_TABLE_VERSION)
    table.to_csv(target, index=False, float_format="%.12g")
    logger.info("Exported design table", path=str(target), rows=len(table))
    return target
