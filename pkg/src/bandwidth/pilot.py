"""Pilot stages of the bandwidth pipeline.

Everything here runs on a :class:`WorkingSample`: frame coordinates divided by
a per-axis scale (the pooled standard deviation when the density-adjusted
selector is active, one otherwise). Bandwidths returned by these stages are
scalars in working units and apply to both axes.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy import linalg, spatial

from src.exceptions import (
    InsufficientLocalDataError,
    InvalidArgumentError,
    KernelUnsuitableError,
)
from src.geometry.dataset import Dataset, Side, rotate_to_frame, side_mask
from src.geometry.frames import BoundaryFrame
from src.kernels.families import KernelSpec, kernel_weights
from src.kernels.moments import moment_matrices
from src.localpoly.fit import LocalFit, fit_arrays, sandwich_covariance
from src.localpoly.indices import MultiIndexSet, monomials
from src.utils.constants import (
    GLOBAL_POLY_ORDER,
    REGULARIZATION_MULTIPLIER,
    RESIDUAL_NEIGHBOURS,
)

from .terms import BiasTerms, ResidualVariance

logger = structlog.get_logger()

SIDES = (Side.PLUS, Side.MINUS)


def neighbour_variances(
    z: NDArray[np.float64],
    y: NDArray[np.float64],
    rows: NDArray[np.intp],
    neighbours: int = RESIDUAL_NEIGHBOURS,
) -> NDArray[np.float64]:
    """J/(J+1) (y_i - mean of its J nearest records)^2 for each of ``rows``.

    ``z`` and ``y`` hold one side only, so neighbours never cross the boundary.
    """
    _, idx = spatial.KDTree(z).query(z[rows], k=neighbours + 1)
    is_self = idx == rows[:, None]
    # a duplicated location can push the record out of its own neighbour list
    is_self[~is_self.any(axis=1), -1] = True
    others = idx[~is_self].reshape(rows.size, neighbours)
    resid = y[rows] - y[others].mean(axis=1)
    return neighbours / (neighbours + 1.0) * resid**2


def neighbour_sigma2(
    z: NDArray[np.float64],
    y: NDArray[np.float64],
    h: Tuple[float, float],
    side: Side,
    spec: KernelSpec,
) -> float:
    """Kernel-weighted mean at c of nearest-neighbour residual variances."""
    mask = side_mask(z, side)
    z_side, y_side = z[mask], y[mask]
    weights = kernel_weights(spec.for_side(side), z_side / np.asarray(h, dtype=float))
    rows = np.flatnonzero(weights > 0.0)
    if y_side.size <= RESIDUAL_NEIGHBOURS or rows.size == 0:
        raise InsufficientLocalDataError(
            f"{side.value} side has {rows.size} weighted records, too few for "
            f"{RESIDUAL_NEIGHBOURS}-neighbour residuals",
            side=side.value,
            effective_n=int(rows.size),
        )
    local = neighbour_variances(z_side, y_side, rows)
    w = weights[rows]
    return float(w @ local / w.sum())


@dataclass(frozen=True, eq=False)
class WorkingSample:
    """Frame coordinates, outcomes and the per-axis working scale."""

    z: NDArray[np.float64]
    y: NDArray[np.float64]
    scale: NDArray[np.float64]
    u: NDArray[np.float64]

    @classmethod
    def build(
        cls, data: Dataset, frame: BoundaryFrame, standardize: bool = False
    ) -> "WorkingSample":
        rotated = data if data.rotated else rotate_to_frame(data, frame)
        return cls.from_rotated(rotated, standardize)

    @classmethod
    def from_rotated(cls, rotated: Dataset, standardize: bool) -> "WorkingSample":
        z = rotated.r
        scale = np.ones(2)
        if standardize:
            sd = z.std(axis=0)
            scale = np.where(sd > 0.0, sd, 1.0)
        return cls(z=z, y=rotated.y, scale=scale, u=z / scale)

    @property
    def n(self) -> int:
        return int(self.y.size)

    def side(self, side: Side) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
        mask = side_mask(self.z, side)
        return self.u[mask], self.y[mask]

    def side_span(self, side: Side) -> float:
        """Largest per-axis coordinate range on one side, working units."""
        u, _ = self.side(side)
        if u.shape[0] < 2:
            return 0.0
        return float(np.ptp(u, axis=0).max())

    def fit(self, b: float, p: int, side: Side, spec: KernelSpec) -> LocalFit:
        """Local fit in working coordinates with bandwidth b on both axes."""
        return fit_arrays(self.u, self.y, (b, b), p, side, spec)

    def residual_variance(self, b: float, side: Side, spec: KernelSpec) -> float:
        """Noise variance at c from same-side neighbours, weighted at bandwidth b."""
        return neighbour_sigma2(self.u, self.y, (b, b), side, spec)


def _fallback(sample: WorkingSample, side: Side, reason: str) -> float:
    span = sample.side_span(side)
    if span <= 0.0:
        raise InsufficientLocalDataError(
            f"{side.value} side has no spread to derive a bandwidth",
            side=side.value,
            effective_n=int(side_mask(sample.z, side).sum()),
        )
    logger.warning(
        "Bandwidth fallback to half the coordinate range",
        side=side.value,
        reason=reason,
        bandwidth=0.5 * span,
    )
    return 0.5 * span


def _box_density(sample: WorkingSample, side: Side) -> float:
    """Crude density at the origin from a one-sd half box on the side."""
    u, _ = sample.side(side)
    sd = u.std(axis=0)
    if np.any(sd <= 0.0):
        return 0.0
    inside = (np.abs(u[:, 0]) <= sd[0]) & (np.abs(u[:, 1]) <= sd[1])
    return float(inside.sum() / (sample.n * 2.0 * sd[0] * sd[1]))


def _quadratic_form_sum(
    rows: NDArray[np.float64],
    gamma: NDArray[np.float64],
    cov: NDArray[np.float64],
    weights: NDArray[np.float64],
) -> float:
    """sum_k w_k^2 [(c_k' gamma)^2 + 3 c_k' cov c_k]."""
    total = 0.0
    for w_k, c_k in zip(weights, rows):
        total += w_k**2 * (
            float(c_k @ gamma) ** 2 + REGULARIZATION_MULTIPLIER * float(c_k @ cov @ c_k)
        )
    return total


def preliminary_for(sample: WorkingSample, side: Side, spec: KernelSpec) -> float:
    """Rule-of-thumb bandwidth seeding the local-cubic step."""
    u, y = sample.side(side)
    quartic = MultiIndexSet(GLOBAL_POLY_ORDER)
    if y.size <= quartic.size:
        return _fallback(sample, side, "too few records for a global quartic")

    design = monomials(u, quartic.exponents)
    coef, _, rank, _ = linalg.lstsq(design, y)
    if rank < quartic.size:
        return _fallback(sample, side, "global quartic design is singular")
    resid = y - design @ coef
    sigma2 = float(resid @ resid / (y.size - quartic.size))
    # (X'X)^-1 from the SVD of the design
    _, s, vt = linalg.svd(design, full_matrices=False)
    xtx_inv = (vt.T / s**2) @ vt
    top = quartic.degree_positions(GLOBAL_POLY_ORDER)
    gamma4 = coef[top]
    cov4 = sigma2 * xtx_inv[np.ix_(top, top)]

    density = _box_density(sample, side)
    cubic = moment_matrices(spec.for_side(side), 3)
    third = MultiIndexSet(3).degree_positions(3)
    rows = cubic.bias_rows[third]
    curvature = _quadratic_form_sum(rows, gamma4, cov4, np.ones(len(third)))
    s_inv = linalg.inv(cubic.S)
    var_const = float(np.diag(s_inv @ cubic.Kcal @ s_inv)[third].sum())
    spread = sigma2 * var_const

    if not (curvature > 0.0 and spread > 0.0 and density > 0.0):
        return _fallback(sample, side, "degenerate global curvature or variance")

    b = (4.0 * spread / (curvature * sample.n * density)) ** 0.1
    b = min(b, sample.side_span(side))
    logger.debug("Preliminary bandwidth", side=side.value, bandwidth=b)
    return float(b)


def pilot_for(sample: WorkingSample, side: Side, spec: KernelSpec) -> float:
    """Pilot bandwidth for the local-quadratic bias-term fits on one side."""
    b0 = preliminary_for(sample, side, spec)
    try:
        cubic = sample.fit(b0, 3, side, spec)
        quadratic = sample.fit(b0, 2, side, spec)
    except InsufficientLocalDataError as e:
        return _fallback(sample, side, str(e))

    third = MultiIndexSet(3).degree_positions(3)
    gamma3 = cubic.coefficients[third]
    cov3 = cubic.covariance[np.ix_(third, third)]

    quad_idx = MultiIndexSet(2)
    targets = [quad_idx.position((2, 0)), quad_idx.position((0, 2))]
    rows = moment_matrices(spec.for_side(side), 2).bias_rows[targets]
    linear = moment_matrices(spec.for_side(side), 1)
    weights = 2.0 * np.array([linear.sTilde11, linear.sTilde22])

    curvature = _quadratic_form_sum(rows, gamma3, cov3, weights)
    var_b0 = float(np.sum(weights**2 * np.diag(quadratic.covariance)[targets]))
    if not (curvature > 0.0 and var_b0 > 0.0):
        logger.warning(
            "Pilot criterion degenerate, keeping preliminary bandwidth",
            side=side.value,
            bandwidth=b0,
        )
        return float(b0)

    b = (3.0 * var_b0 * b0**6 / curvature) ** 0.125
    b = min(b, sample.side_span(side))
    logger.debug("Pilot bandwidth", side=side.value, preliminary=b0, pilot=b)
    return float(b)


def density_for(
    sample: WorkingSample, b_plus: float, b_minus: float, spec: KernelSpec
) -> float:
    """Product-kernel density estimate at c, frame units."""
    total = 0.0
    for side, b in zip(SIDES, (b_plus, b_minus)):
        u, _ = sample.side(side)
        weights = kernel_weights(spec.for_side(side), u / b)
        total += float(weights.sum()) / (sample.n * b**2)
    return 0.5 * total / float(np.prod(sample.scale))


def bias_terms_for(
    sample: WorkingSample,
    b_plus: float,
    b_minus: float,
    spec: KernelSpec,
    sigma2: Optional[Tuple[float, float]] = None,
) -> BiasTerms:
    """Second partials from local-quadratic fits at the pilots, frame units."""
    quad_idx = MultiIndexSet(2)
    pos = [quad_idx.position((2, 0)), quad_idx.position((0, 2))]
    pos12 = quad_idx.position((1, 1))
    s1, s2 = sample.scale
    unscale = np.array([1.0 / s1**2, 1.0 / s2**2])

    partials = {}
    for k, (side, b) in enumerate(zip(SIDES, (b_plus, b_minus))):
        try:
            quad = sample.fit(b, 2, side, spec)
        except InsufficientLocalDataError as e:
            raise InsufficientLocalDataError(
                f"bias-term fit failed on the {side.value} side: {e}",
                side=side.value,
                effective_n=e.effective_n,
                condition=e.condition,
            ) from e
        cov = (
            quad.covariance
            if sigma2 is None
            else sandwich_covariance(quad, sigma2[k])
        )
        d = 2.0 * quad.coefficients[pos] * unscale
        block = 4.0 * cov[np.ix_(pos, pos)] * np.outer(unscale, unscale)
        d12 = float(quad.coefficients[pos12] / (s1 * s2))
        partials[side] = (d, block, d12)

    linear = moment_matrices(spec.for_side(Side.PLUS), 1)
    d_plus, cov_plus, d12_plus = partials[Side.PLUS]
    d_minus, cov_minus, d12_minus = partials[Side.MINUS]
    return BiasTerms(
        d11plus=float(d_plus[0]),
        d22plus=float(d_plus[1]),
        d11minus=float(d_minus[0]),
        d22minus=float(d_minus[1]),
        sTilde11=linear.sTilde11,
        sTilde22=linear.sTilde22,
        covPlus=cov_plus,
        covMinus=cov_minus,
        d12plus=d12_plus,
        d12minus=d12_minus,
    )


def _require_admissible(spec: KernelSpec) -> None:
    if not spec.family.admissible:
        raise KernelUnsuitableError(
            f"{spec.family.value} kernel violates the rotation restriction"
        )


Bandwidth = Union[float, Tuple[float, float]]


def estimate_sigma2(
    data: Dataset,
    frame: BoundaryFrame,
    side: Side,
    h: Bandwidth,
    spec: Optional[KernelSpec] = None,
    method: ResidualVariance = ResidualVariance.LOCAL_LINEAR,
) -> float:
    """Kernel-weighted residual variance at c on one side.

    ``local-linear`` averages the squared residuals of a local-linear fit at
    h. ``nearest-neighbour`` averages squared deviations from the nearest
    same-side records, which stay free of curvature at wide bandwidths; the
    selection pipeline uses it.
    """
    spec = spec or KernelSpec()
    if isinstance(h, tuple):
        bw = (float(h[0]), float(h[1]))
    else:
        bw = (float(h), float(h))
    if not (bw[0] > 0 and bw[1] > 0):
        raise InvalidArgumentError(f"bandwidth must be positive, got {h}")
    rotated = data if data.rotated else rotate_to_frame(data, frame)
    if method is ResidualVariance.NEAREST_NEIGHBOUR:
        return neighbour_sigma2(rotated.r, rotated.y, bw, side, spec)
    return fit_arrays(rotated.r, rotated.y, bw, 1, side, spec).sigma2


def preliminary_bandwidth(
    data: Dataset,
    frame: BoundaryFrame,
    side: Side,
    spec: Optional[KernelSpec] = None,
    standardize: bool = False,
) -> float:
    """Preliminary bandwidth (working units) for one side."""
    spec = spec or KernelSpec()
    _require_admissible(spec)
    return preliminary_for(WorkingSample.build(data, frame, standardize), side, spec)


def pilot_bandwidths(
    data: Dataset,
    frame: BoundaryFrame,
    spec: Optional[KernelSpec] = None,
    standardize: bool = False,
) -> Tuple[float, float]:
    """(bPlus, bMinus) in working units."""
    spec = spec or KernelSpec()
    _require_admissible(spec)
    sample = WorkingSample.build(data, frame, standardize)
    return pilot_for(sample, Side.PLUS, spec), pilot_for(sample, Side.MINUS, spec)


def estimate_bias_terms(
    data: Dataset,
    frame: BoundaryFrame,
    b_plus: float,
    b_minus: float,
    spec: Optional[KernelSpec] = None,
    standardize: bool = False,
) -> BiasTerms:
    """Bias terms from local-quadratic fits at the given pilots."""
    spec = spec or KernelSpec()
    _require_admissible(spec)
    if not (b_plus > 0 and b_minus > 0):
        raise InvalidArgumentError("pilot bandwidths must be positive")
    sample = WorkingSample.build(data, frame, standardize)
    return bias_terms_for(sample, b_plus, b_minus, spec)
