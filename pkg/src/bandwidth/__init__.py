"""Residual variances, pilot bandwidths, bias terms and optimal (h1, h2)."""

from .pilot import (
    WorkingSample,
    estimate_bias_terms,
    estimate_sigma2,
    pilot_bandwidths,
    preliminary_bandwidth,
)
from .selection import (
    PipelineResult,
    run_pipeline,
    select_bandwidths,
    select_for_frame,
    variance_constant,
)
from .terms import (
    BandwidthMode,
    BandwidthSelection,
    BiasTerms,
    DensityFactor,
    H6Constant,
    ResidualVariance,
    SelectorOptions,
)

__all__ = [
    "BandwidthMode",
    "BandwidthSelection",
    "BiasTerms",
    "DensityFactor",
    "H6Constant",
    "PipelineResult",
    "ResidualVariance",
    "SelectorOptions",
    "WorkingSample",
    "estimate_bias_terms",
    "estimate_sigma2",
    "pilot_bandwidths",
    "preliminary_bandwidth",
    "run_pipeline",
    "select_bandwidths",
    "select_for_frame",
    "variance_constant",
]
