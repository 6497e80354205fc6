"""Kernel moments and the moment matrices of local-polynomial fits.

``kappa(a, v) = integral of z1^a1 z2^a2 K_side(z)^v dz``. Product kernels and
the cone have closed forms in terms of Beta functions; everything else (and
the test oracle) goes through adaptive quadrature.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy import integrate, linalg
from scipy.special import beta

from src.exceptions import InvalidArgumentError, KernelUnsuitableError
from src.geometry.dataset import Side
from src.localpoly.indices import Exponent, MultiIndexSet
from src.utils.constants import (
    QUADRATURE_TOLERANCE,
    RESTRICTION_TOLERANCE,
    SINGULAR_VALUE_FLOOR,
)

from .families import CONE_CONSTANT, KernelFamily, KernelSpec, kernel_weights

logger = structlog.get_logger()

MAX_MOMENT_DEGREE = 8


def _check_moment_args(powers: Tuple[int, int], v: int) -> None:
    if v not in (1, 2):
        raise InvalidArgumentError(f"kernel power v must be 1 or 2, got {v}")
    a1, a2 = powers
    if a1 < 0 or a2 < 0 or a1 + a2 > MAX_MOMENT_DEGREE:
        raise InvalidArgumentError(f"unsupported moment powers {powers}")


def _triangular_moment(a: int, v: int) -> float:
    if a % 2:
        return 0.0
    return float(2.0 * beta(a + 1, v + 1))


def _epanechnikov_moment(a: int, v: int) -> float:
    if a % 2:
        return 0.0
    return float(0.75**v * beta((a + 1) / 2.0, v + 1))


def _one_sided_moment(a: int, v: int) -> float:
    return float(2.0**v * beta(a + 1, v + 1))


def _cone_moment(a1: int, a2: int, v: int) -> float:
    if a1 % 2:
        return 0.0
    angular = beta((a1 + 1) / 2.0, (a2 + 1) / 2.0)
    radial = beta(a1 + a2 + 2, v + 1)
    return float(CONE_CONSTANT**v * radial * angular)


def quadrature_moment(spec: KernelSpec, powers: Tuple[int, int], v: int) -> float:
    """Kernel moment by adaptive quadrature (polar coordinates for the cone)."""
    _check_moment_args(powers, v)
    a1, a2 = powers
    opts = {"epsabs": QUADRATURE_TOLERANCE, "epsrel": QUADRATURE_TOLERANCE}

    if spec.family is KernelFamily.CONE:
        lo, hi = (0.0, np.pi) if spec.side is Side.PLUS else (np.pi, 2.0 * np.pi)

        def polar(radius: float, theta: float) -> float:
            z1 = radius * np.cos(theta)
            z2 = radius * np.sin(theta)
            k = CONE_CONSTANT * (1.0 - radius)
            return float(z1**a1 * z2**a2 * k**v * radius)

        value, _ = integrate.nquad(polar, [[0.0, 1.0], [lo, hi]], opts=[opts, opts])
        return float(value)

    def cartesian(z1: float, z2: float) -> float:
        k = kernel_weights(spec, np.array([[z1, z2]]))[0]
        return float(z1**a1 * z2**a2 * k**v)

    shifted = spec.family is KernelFamily.SHIFTED_TRIANGULAR
    first = [0.0, 1.0] if shifted else [-1.0, 1.0]
    second = [0.0, 1.0] if spec.side is Side.PLUS else [-1.0, 0.0]
    kink = {**opts, "points": [0.5 if first[0] == 0.0 else 0.0]}
    value, _ = integrate.nquad(cartesian, [first, second], opts=[kink, opts])
    return float(value)


@lru_cache(maxsize=4096)
def kernel_moment(spec: KernelSpec, powers: Tuple[int, int], v: int) -> float:
    """Kernel moment, closed form where available."""
    _check_moment_args(powers, v)
    a1, a2 = powers
    sign = (-1.0) ** a2 if spec.side is Side.MINUS else 1.0

    if spec.family is KernelFamily.CONE:
        return sign * _cone_moment(a1, a2, v)
    if spec.family is KernelFamily.PRODUCT_TRIANGULAR:
        return sign * _triangular_moment(a1, v) * _one_sided_moment(a2, v)
    if spec.family is KernelFamily.PRODUCT_EPANECHNIKOV:
        return sign * _epanechnikov_moment(a1, v) * _one_sided_moment(a2, v)
    return quadrature_moment(spec, powers, v)


def _shift(a: Exponent, b: Exponent) -> Tuple[int, int]:
    return (a[0] + b[0], a[1] + b[1])


@dataclass(frozen=True, eq=False)
class MomentMatrices:
    """S, Kcal, B and the bias weights for one kernel side and order p."""

    spec: KernelSpec
    p: int
    S: NDArray[np.float64]
    Kcal: NDArray[np.float64]
    B: NDArray[np.float64]
    sTilde: NDArray[np.float64]
    sTilde11: float
    sTilde22: float

    @property
    def variance_constant(self) -> float:
        """e1' S^-1 Kcal S^-1 e1."""
        return float(self.sTilde @ self.Kcal @ self.sTilde)

    @property
    def bias_rows(self) -> NDArray[np.float64]:
        """S^-1 B: leading bias of every coefficient per degree p+1 derivative."""
        return np.asarray(linalg.solve(self.S, self.B, assume_a="sym"))


@lru_cache(maxsize=64)
def moment_matrices(spec: KernelSpec, p: int) -> MomentMatrices:
    """Assemble the moment matrices for order p in MultiIndexSet order."""
    if p not in (1, 2, 3):
        raise InvalidArgumentError(f"local polynomial order must be 1..3, got {p}")
    idx = MultiIndexSet(p)
    exps = idx.exponents
    size = idx.size

    S = np.empty((size, size))
    Kcal = np.empty((size, size))
    for i, ei in enumerate(exps):
        for j, ej in enumerate(exps):
            S[i, j] = kernel_moment(spec, _shift(ei, ej), 1)
            Kcal[i, j] = kernel_moment(spec, _shift(ei, ej), 2)
    upper = idx.next_degree_exponents()
    B = np.array(
        [[kernel_moment(spec, _shift(ei, ek), 1) for ek in upper] for ei in exps]
    )

    smallest = float(linalg.svdvals(S).min())
    if smallest <= SINGULAR_VALUE_FLOOR:
        raise KernelUnsuitableError(
            f"moment matrix S is singular for {spec.family.value} (p={p})"
        )

    e1 = np.zeros(size)
    e1[0] = 1.0
    s_tilde = np.asarray(linalg.solve(S, e1, assume_a="sym"))
    m20 = np.array([kernel_moment(spec, _shift(e, (2, 0)), 1) for e in exps])
    m02 = np.array([kernel_moment(spec, _shift(e, (0, 2)), 1) for e in exps])

    for arr in (S, Kcal, B, s_tilde):
        arr.setflags(write=False)

    logger.debug(
        "Moment matrices assembled",
        family=spec.family.value,
        side=spec.side.value,
        p=p,
        smallest_singular_value=smallest,
    )
    return MomentMatrices(
        spec=spec,
        p=p,
        S=S,
        Kcal=Kcal,
        B=B,
        sTilde=s_tilde,
        sTilde11=float(s_tilde @ m20),
        sTilde22=float(s_tilde @ m02),
    )


@dataclass(frozen=True)
class RestrictionReport:
    """Outcome of the rotation restriction check."""

    satisfied: bool
    values: Dict[str, float]


_RESTRICTION_MOMENTS = {
    "kappa_1^(1,1)": ((1, 0), 1),
    "kappa_12^(1,1,1)": ((1, 1), 1),
    "kappa_1^(1,2)": ((1, 0), 2),
    "kappa_12^(1,1,2)": ((1, 1), 2),
    "kappa_12^(1,2,1)": ((1, 2), 1),
}


def check_restriction(spec: KernelSpec) -> RestrictionReport:
    """Check that the five odd-in-z1 moments vanish."""
    values = {
        name: kernel_moment(spec, powers, v)
        for name, (powers, v) in _RESTRICTION_MOMENTS.items()
    }
    satisfied = all(abs(val) < RESTRICTION_TOLERANCE for val in values.values())
    return RestrictionReport(satisfied=satisfied, values=values)


def univariate_constants() -> Tuple[float, float]:
    """Bias and variance constants of a one-sided local-linear fit.

    Returns (B_K, V_K) for the one-sided triangular kernel, with the bias of
    the intercept equal to h^2/2 * m'' * B_K.
    """
    mu = [_one_sided_moment(k, 1) for k in range(4)]
    nu = [_one_sided_moment(k, 2) for k in range(3)]
    gamma = np.array([[mu[0], mu[1]], [mu[1], mu[2]]])
    psi = np.array([[nu[0], nu[1]], [nu[1], nu[2]]])
    weights = linalg.solve(gamma, np.array([1.0, 0.0]))
    bias = float(weights @ np.array([mu[2], mu[3]]))
    variance = float(weights @ psi @ weights)
    return bias, variance
