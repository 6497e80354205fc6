"""Kernel-weighted local-polynomial least squares on one side of the boundary."""

from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy import linalg

from src.exceptions import InsufficientLocalDataError, InvalidArgumentError
from src.geometry.dataset import Dataset, Side, side_mask
from src.kernels.families import KernelSpec, kernel_weights
from src.utils.constants import MAX_CONDITION_NUMBER

from .indices import MultiIndexSet, monomials

logger = structlog.get_logger()

Variance = Union[float, NDArray[np.float64]]


@dataclass(frozen=True, eq=False)
class LocalFit:
    """Weighted least-squares solution around the boundary point.

    Coefficients are on the original coordinate scale, so ``coefficients[0]``
    estimates m_side(c) and the entry for z1^s1 z2^s2 estimates the derivative
    of that order divided by s1! s2!.
    """

    coefficients: NDArray[np.float64]
    bandwidths: Tuple[float, float]
    side: Side
    p: int
    effectiveN: int
    weightSum: float
    residuals: NDArray[np.float64]
    covariance: NDArray[np.float64]
    gram: NDArray[np.float64]
    condition: float
    weights: NDArray[np.float64] = field(repr=False)
    _design: NDArray[np.float64] = field(repr=False)
    _scale: NDArray[np.float64] = field(repr=False)
    _gram_inv: NDArray[np.float64] = field(repr=False)

    @property
    def intercept(self) -> float:
        return float(self.coefficients[0])

    @property
    def sigma2(self) -> float:
        """Kernel-weighted mean squared residual."""
        return float(np.sum(self.weights * self.residuals**2) / self.weightSum)

    def coefficient(self, exponent: Tuple[int, int]) -> float:
        return float(self.coefficients[MultiIndexSet(self.p).position(exponent)])


def _validate_bandwidths(h: Tuple[float, float]) -> Tuple[float, float]:
    h1, h2 = (float(v) for v in h)
    if not (np.isfinite(h1) and np.isfinite(h2) and h1 > 0 and h2 > 0):
        raise InvalidArgumentError(f"bandwidths must be positive and finite: {h}")
    return h1, h2


def _scaled_sandwich(
    design: NDArray[np.float64],
    weights: NDArray[np.float64],
    gram_inv: NDArray[np.float64],
    sigma2: Variance,
) -> NDArray[np.float64]:
    s2 = np.broadcast_to(np.asarray(sigma2, dtype=float), weights.shape)
    meat = design.T @ (design * (weights**2 * s2)[:, None])
    cov = gram_inv @ meat @ gram_inv
    return (cov + cov.T) / 2.0


def fit_arrays(
    z: NDArray[np.float64],
    y: NDArray[np.float64],
    h: Tuple[float, float],
    p: int,
    side: Side,
    spec: KernelSpec,
) -> LocalFit:
    """Fit on frame coordinates z (n, 2) and outcomes y."""
    h1, h2 = _validate_bandwidths(h)
    idx = MultiIndexSet(p)
    size = idx.size

    on_side = side_mask(z, side)
    z_side = z[on_side]
    scaled = z_side / np.array([h1, h2])
    w_all = kernel_weights(spec.for_side(side), scaled)
    keep = w_all > 0.0
    effective_n = int(keep.sum())
    if effective_n < size + 2:
        raise InsufficientLocalDataError(
            f"{side.value} side has {effective_n} weighted records, "
            f"need at least {size + 2} for p={p}",
            side=side.value,
            effective_n=effective_n,
        )

    w = w_all[keep]
    design = monomials(scaled[keep], idx.exponents)
    y_side = y[on_side][keep]
    root = np.sqrt(w)

    # Solve in kernel-scaled coordinates, then undo the scaling.
    beta_scaled, _, rank, singular = linalg.lstsq(design * root[:, None], y_side * root)
    condition = float((singular[0] / singular[-1]) ** 2) if singular[-1] > 0 else np.inf
    if rank < size or condition > MAX_CONDITION_NUMBER:
        raise InsufficientLocalDataError(
            f"{side.value} side local design is singular "
            f"(condition {condition:.3g}, effective N {effective_n})",
            side=side.value,
            effective_n=effective_n,
            condition=condition,
        )

    scale = np.array([h1**s1 * h2**s2 for s1, s2 in idx.exponents])
    coefficients = beta_scaled / scale
    residuals = y_side - design @ beta_scaled

    gram_scaled = design.T @ (design * w[:, None])
    gram_inv = linalg.inv(gram_scaled)
    gram_inv = (gram_inv + gram_inv.T) / 2.0
    weight_sum = float(w.sum())
    sigma2 = float(np.sum(w * residuals**2) / weight_sum)
    cov_scaled = _scaled_sandwich(design, w, gram_inv, sigma2)

    logger.debug(
        "Local polynomial fitted",
        side=side.value,
        p=p,
        h1=h1,
        h2=h2,
        effective_n=effective_n,
        condition=condition,
    )
    return LocalFit(
        coefficients=coefficients,
        bandwidths=(h1, h2),
        side=side,
        p=p,
        effectiveN=effective_n,
        weightSum=weight_sum,
        residuals=residuals,
        covariance=cov_scaled / np.outer(scale, scale),
        gram=gram_scaled * np.outer(scale, scale),
        condition=condition,
        weights=w,
        _design=design,
        _scale=scale,
        _gram_inv=gram_inv,
    )


def fit(
    data: Dataset,
    h: Tuple[float, float],
    p: int,
    side: Side,
    spec: KernelSpec,
) -> LocalFit:
    """Local-polynomial fit of order p on one side of a rotated dataset."""
    if not data.rotated:
        raise InvalidArgumentError("fit expects a dataset in frame coordinates")
    return fit_arrays(data.r, data.y, h, p, side, spec)


def sandwich_covariance(fit: LocalFit, sigma2: Variance) -> NDArray[np.float64]:
    """G^-1 (sum w_i^2 x_i x_i' sigma_i^2) G^-1 on the original coordinate scale.

    ``sigma2`` is a scalar or one value per weighted record.
    """
    s2 = np.asarray(sigma2, dtype=float)
    if s2.ndim and s2.shape != fit.weights.shape:
        raise InvalidArgumentError(
            f"per-record variances must have length {fit.weights.size}"
        )
    cov_scaled = _scaled_sandwich(fit._design, fit.weights, fit._gram_inv, s2)
    return cov_scaled / np.outer(fit._scale, fit._scale)
