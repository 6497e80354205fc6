"""Final (h1, h2) selection and the end-to-end bandwidth pipeline."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import structlog

from src.exceptions import (
    DegenerateSelectionError,
    InvalidArgumentError,
    KernelUnsuitableError,
)
from src.geometry.dataset import Dataset, Side, rotate_to_frame
from src.geometry.frames import BoundaryFrame
from src.kernels.families import KernelSpec
from src.kernels.moments import moment_matrices
from src.utils.constants import MAX_BANDWIDTH_SHARE, REGULARIZATION_MULTIPLIER

from .pilot import WorkingSample, bias_terms_for, density_for, pilot_for
from .terms import (
    BandwidthMode,
    BandwidthSelection,
    BiasTerms,
    DensityFactor,
    H6Constant,
    SelectorOptions,
)

logger = structlog.get_logger()


def variance_constant(
    sigma2plus: float,
    sigma2minus: float,
    fhat: Optional[float],
    spec: KernelSpec,
    density_factor: DensityFactor,
) -> float:
    """C_v = (sigma+^2 + sigma-^2) e1'S^-1 Kcal S^-1 e1, over f(c) if adjusted."""
    cv = (sigma2plus + sigma2minus) * moment_matrices(
        spec.for_side(Side.PLUS), 1
    ).variance_constant
    if density_factor is DensityFactor.ADJUSTED:
        if fhat is None or not fhat > 0.0:
            raise DegenerateSelectionError(
                "density-adjusted selection needs a positive density estimate at c"
            )
        cv /= fhat
    return float(cv)


def _regularized(bias: BiasTerms) -> Tuple[float, float]:
    r1 = bias.B1hat**2 + REGULARIZATION_MULTIPLIER * bias.varB1
    r2 = bias.B2hat**2 + REGULARIZATION_MULTIPLIER * bias.varB2
    if r1 <= 0.0 and r2 <= 0.0:
        raise DegenerateSelectionError(
            "bias terms and their variances are all zero; no bandwidth is optimal"
        )
    # a single vanishing direction borrows the other's curvature
    if r1 <= 0.0:
        r1 = r2
    if r2 <= 0.0:
        r2 = r1
    return r1, r2


def _common_regularized(bias: BiasTerms) -> float:
    grad = 0.5 * bias.weights
    bc = 0.5 * (bias.delta11 * bias.sTilde11 + bias.delta22 * bias.sTilde22)
    var_bc = float(max(grad @ bias.delta_covariance @ grad, 0.0))
    rc = bc**2 + REGULARIZATION_MULTIPLIER * var_bc
    if rc <= 0.0:
        raise DegenerateSelectionError(
            "common bias term and its variance are zero; no bandwidth is optimal"
        )
    return float(rc)


def _checked(h: float, name: str) -> float:
    if not (np.isfinite(h) and h > 0.0):
        raise DegenerateSelectionError(f"selected {name} is not positive and finite")
    return float(h)


def select_bandwidths(
    bias: BiasTerms,
    sigma2plus: float,
    sigma2minus: float,
    fhat: Optional[float],
    n: int,
    spec: KernelSpec,
    mode: BandwidthMode = BandwidthMode.HETEROGENEOUS,
    density_factor: DensityFactor = DensityFactor.ADJUSTED,
    h6_constant: H6Constant = H6Constant.EIGHTH,
    pilots: Tuple[float, float] = (np.nan, np.nan),
) -> BandwidthSelection:
    """MSE-optimal bandwidths from the regularized plug-in bias terms.

    Heterogeneous: h1^6 = k C_v/n R1^(-5/4) R2^(1/4) and symmetrically for
    h2, where Rj = Bj^2 + 3 var(Bj). Common: h^6 = k C_v / (n Rc).
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if sigma2plus < 0 or sigma2minus < 0:
        raise InvalidArgumentError("residual variances must be nonnegative")
    if mode is BandwidthMode.FIXED:
        raise InvalidArgumentError("fixed bandwidths are not selected")

    cv = variance_constant(sigma2plus, sigma2minus, fhat, spec, density_factor)
    if not cv > 0.0:
        raise DegenerateSelectionError(
            "residual variances are zero; no bandwidth is optimal"
        )
    k = h6_constant.factor

    if mode is BandwidthMode.COMMON:
        rc = _common_regularized(bias)
        h = _checked((k * cv / (n * rc)) ** (1.0 / 6.0), "h")
        h1 = h2 = h
    else:
        r1, r2 = _regularized(bias)
        h1 = _checked((k * cv / n * r1**-1.25 * r2**0.25) ** (1.0 / 6.0), "h1")
        h2 = _checked((k * cv / n * r2**-1.25 * r1**0.25) ** (1.0 / 6.0), "h2")

    return BandwidthSelection(
        sigma2plus=sigma2plus,
        sigma2minus=sigma2minus,
        fhat=fhat,
        pilotPlus=float(pilots[0]),
        pilotMinus=float(pilots[1]),
        h1=h1,
        h2=h2,
        mode=mode,
    )


@dataclass(frozen=True, eq=False)
class PipelineResult:
    """Everything the estimator needs from bandwidth selection."""

    selection: BandwidthSelection
    bias: BiasTerms
    sample: WorkingSample


def _clamp(
    selection: BandwidthSelection, sample: WorkingSample
) -> Tuple[float, float]:
    cap = MAX_BANDWIDTH_SHARE * np.ptp(sample.z, axis=0)
    h1 = min(selection.h1, float(cap[0]))
    h2 = min(selection.h2, float(cap[1]))
    if selection.mode is BandwidthMode.COMMON:
        h1 = h2 = min(h1, h2)
    return h1, h2


def run_pipeline(
    rotated: Dataset,
    spec: KernelSpec,
    options: SelectorOptions,
) -> PipelineResult:
    """Pilots, residual variances, bias terms, density and final bandwidths."""
    if not spec.family.admissible:
        raise KernelUnsuitableError(
            f"{spec.family.value} kernel violates the rotation restriction"
        )
    sample = WorkingSample.from_rotated(rotated, options.standardize)
    b_plus = pilot_for(sample, Side.PLUS, spec)
    b_minus = pilot_for(sample, Side.MINUS, spec)

    sigma2plus = sample.residual_variance(b_plus, Side.PLUS, spec)
    sigma2minus = sample.residual_variance(b_minus, Side.MINUS, spec)
    bias = bias_terms_for(sample, b_plus, b_minus, spec, (sigma2plus, sigma2minus))
    fhat = density_for(sample, b_plus, b_minus, spec)

    if options.mode is BandwidthMode.FIXED:
        if options.fixed_bandwidths is None:
            raise InvalidArgumentError("fixed mode requires bandwidths")
        h1, h2 = (float(v) for v in options.fixed_bandwidths)
        if not (h1 > 0 and h2 > 0):
            raise InvalidArgumentError("fixed bandwidths must be positive")
        selection = BandwidthSelection(
            sigma2plus=sigma2plus,
            sigma2minus=sigma2minus,
            fhat=fhat,
            pilotPlus=b_plus,
            pilotMinus=b_minus,
            h1=h1,
            h2=h2,
            mode=BandwidthMode.FIXED,
            scale=(float(sample.scale[0]), float(sample.scale[1])),
        )
        return PipelineResult(selection=selection, bias=bias, sample=sample)

    raw = select_bandwidths(
        bias,
        sigma2plus,
        sigma2minus,
        fhat,
        sample.n,
        spec,
        mode=options.mode,
        density_factor=options.density_factor,
        h6_constant=options.h6_constant,
        pilots=(b_plus, b_minus),
    )
    h1, h2 = _clamp(raw, sample)
    selection = BandwidthSelection(
        sigma2plus=sigma2plus,
        sigma2minus=sigma2minus,
        fhat=fhat,
        pilotPlus=b_plus,
        pilotMinus=b_minus,
        h1=h1,
        h2=h2,
        mode=options.mode,
        scale=(float(sample.scale[0]), float(sample.scale[1])),
    )
    logger.debug(
        "Bandwidths selected",
        mode=options.mode.value,
        h1=h1,
        h2=h2,
        pilot_plus=b_plus,
        pilot_minus=b_minus,
        B1=bias.B1hat,
        B2=bias.B2hat,
    )
    return PipelineResult(selection=selection, bias=bias, sample=sample)


def select_for_frame(
    data: Dataset,
    frame: BoundaryFrame,
    spec: Optional[KernelSpec] = None,
    options: Optional[SelectorOptions] = None,
) -> BandwidthSelection:
    """Rotate then run the whole pipeline."""
    rotated = data if data.rotated else rotate_to_frame(data, frame)
    result = run_pipeline(rotated, spec or KernelSpec(), options or SelectorOptions())
    return result.selection
