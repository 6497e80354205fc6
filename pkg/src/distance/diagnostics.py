"""Diagnostics of the distance strategy near the boundary point.

The density of the signed distance vanishes at zero when the underlying
design is two-dimensional, so the usual univariate normalizations break:
the one-sided kernel density estimate shrinks like h, h^-1 Gamma stabilizes
instead of Gamma, and n h^2 (not n h) times the intercept variance converges.
"""

from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy import integrate, linalg

from src.exceptions import InsufficientLocalDataError, InvalidArgumentError
from src.geometry.dataset import Side
from src.kernels.families import one_sided_triangular

from .transform import SignedDistanceSample

logger = structlog.get_logger()

VarianceFunction = Union[float, Callable[[NDArray[np.float64]], NDArray[np.float64]]]

# f_Z'(0) for R uniform on [-1, 1] x [0, 1] with c at the origin
HALF_RECTANGLE_SLOPE = np.pi / 2.0


def density_at_zero(
    sample: SignedDistanceSample, h: float, side: Side = Side.PLUS
) -> float:
    """One-sided kernel density estimate of |Z| at zero within one side."""
    if not h > 0.0:
        raise InvalidArgumentError(f"bandwidth must be positive, got {h}")
    dist = np.abs(sample.z[sample.side(side)])
    if dist.size == 0:
        raise InsufficientLocalDataError(
            f"{side.value} side is empty", side=side.value, effective_n=0
        )
    return float(one_sided_triangular(dist / h).sum() / (dist.size * h))


@dataclass(frozen=True, eq=False)
class GammaPsi:
    """Gram-type matrices of the univariate fit on each side."""

    h: float
    gammaPlus: NDArray[np.float64]
    gammaMinus: NDArray[np.float64]
    psiPlus: NDArray[np.float64]
    psiMinus: NDArray[np.float64]
    vPlus: float
    vMinus: float
    singularPlus: bool = False
    singularMinus: bool = False


def _sandwich_v(
    gamma: NDArray[np.float64], psi: NDArray[np.float64], n: int
) -> Tuple[float, bool]:
    try:
        if np.linalg.cond(gamma) > 1e12:
            raise linalg.LinAlgError("ill-conditioned")
        first = linalg.solve(gamma, np.array([1.0, 0.0]), assume_a="sym")
    except linalg.LinAlgError:
        return float("nan"), True
    return float(max(first @ psi @ first, 0.0) / n), False


def _side_matrices(
    sample: SignedDistanceSample, h: float, side: Side, sigma2: VarianceFunction
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    n = sample.n
    z = sample.z[sample.side(side)]
    k = one_sided_triangular(np.abs(z) / h)
    r = np.column_stack([np.ones_like(z), z / h])
    s2 = sigma2(z) if callable(sigma2) else np.full(z.shape, float(sigma2))
    gamma = (r * k[:, None]).T @ r / (n * h)
    psi = (r * (k**2 * s2)[:, None]).T @ r / (n * h**2)
    return gamma, psi


def gamma_psi(
    sample: SignedDistanceSample, h: float, sigma2: VarianceFunction = 1.0
) -> GammaPsi:
    """Gamma, Psi and V for both sides; singular Gamma is flagged, not raised."""
    if not h > 0.0:
        raise InvalidArgumentError(f"bandwidth must be positive, got {h}")
    gp, pp = _side_matrices(sample, h, Side.PLUS, sigma2)
    gm, pm = _side_matrices(sample, h, Side.MINUS, sigma2)
    v_plus, sing_plus = _sandwich_v(gp, pp, sample.n)
    v_minus, sing_minus = _sandwich_v(gm, pm, sample.n)
    if sing_plus or sing_minus:
        logger.warning(
            "Singular Gamma in distance diagnostics",
            h=h,
            plus=sing_plus,
            minus=sing_minus,
        )
    return GammaPsi(
        h=float(h),
        gammaPlus=gp,
        gammaMinus=gm,
        psiPlus=pp,
        psiMinus=pm,
        vPlus=v_plus,
        vMinus=v_minus,
        singularPlus=sing_plus,
        singularMinus=sing_minus,
    )


def _kernel_moment_1d(power: int, kernel_power: int) -> float:
    value, _ = integrate.quad(
        lambda t: t**power * float(one_sided_triangular(np.array(t))) ** kernel_power,
        0.0,
        1.0,
        epsabs=1e-12,
    )
    return float(value)


def gamma_psi_limits(
    sigma2: float = 1.0, slope: float = HALF_RECTANGLE_SLOPE
) -> Tuple[NDArray[np.float64], NDArray[np.float64], float]:
    """Limits of h^-1 Gamma+, Psi+ and n h^2 V+ when f_Z(z) ~ slope * z."""
    c_gamma = slope * np.array(
        [[_kernel_moment_1d(1 + i + j, 1) for j in range(2)] for i in range(2)]
    )
    c_psi = (
        slope
        * sigma2
        * np.array(
            [[_kernel_moment_1d(1 + i + j, 2) for j in range(2)] for i in range(2)]
        )
    )
    first = linalg.solve(c_gamma, np.array([1.0, 0.0]), assume_a="sym")
    return c_gamma, c_psi, float(first @ c_psi @ first)


def relative_deviation(
    matrix: NDArray[np.float64], limit: NDArray[np.float64]
) -> float:
    """Relative Frobenius distance ||matrix - limit|| / ||limit||."""
    return float(np.linalg.norm(matrix - limit) / np.linalg.norm(limit))
