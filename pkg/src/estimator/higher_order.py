"""Higher-order bias expansion of the local-linear intercept."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.exceptions import KernelUnsuitableError
from src.kernels.families import KernelSpec
from src.kernels.moments import check_restriction, kernel_moment, moment_matrices
from src.localpoly.indices import MultiIndexSet


@dataclass(frozen=True)
class SurfaceDerivatives:
    """Partials of m at c and log-density gradient f_j / f."""

    d11: float = 0.0
    d12: float = 0.0
    d22: float = 0.0
    d111: float = 0.0
    d112: float = 0.0
    d122: float = 0.0
    d222: float = 0.0
    f1_over_f: float = 0.0
    f2_over_f: float = 0.0


def _weighted_moment(spec: KernelSpec, shift: Tuple[int, int]) -> float:
    """sTilde' [kappa(alpha_i + shift)]_i for the local-linear fit."""
    s_tilde = moment_matrices(spec, 1).sTilde
    moments = np.array(
        [
            kernel_moment(spec, (e[0] + shift[0], e[1] + shift[1]), 1)
            for e in MultiIndexSet(1).exponents
        ]
    )
    return float(s_tilde @ moments)


def higher_order_bias(
    derivs: SurfaceDerivatives,
    h: Tuple[float, float],
    spec: Optional[KernelSpec] = None,
) -> float:
    """Leading h^2 bias plus the h1^2 h2 and h2^3 correction terms."""
    spec = spec or KernelSpec()
    if not check_restriction(spec).satisfied:
        raise KernelUnsuitableError(
            f"{spec.family.value} kernel violates the rotation restriction"
        )
    h1, h2 = h
    linear = moment_matrices(spec, 1)

    leading = 0.5 * (
        h1**2 * derivs.d11 * linear.sTilde11 + h2**2 * derivs.d22 * linear.sTilde22
    )
    cross = (
        0.5 * derivs.d11 * derivs.f2_over_f
        + derivs.d12 * derivs.f1_over_f
        + 0.5 * derivs.d112
    )
    normal = 0.5 * derivs.d22 * derivs.f2_over_f + derivs.d222 / 6.0

    return float(
        leading
        + h1**2 * h2 * cross * _weighted_moment(spec, (2, 1))
        + h2**3 * normal * _weighted_moment(spec, (0, 3))
    )
