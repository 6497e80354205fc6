"""End-to-end multivariate RD estimation."""

from .higher_order import SurfaceDerivatives, higher_order_bias
from .rd import EstimatorOptions, RDEstimate, confidence_interval, estimate_rd
from .sweep import SweepPoint, sweep_boundary

__all__ = [
    "EstimatorOptions",
    "RDEstimate",
    "SurfaceDerivatives",
    "SweepPoint",
    "confidence_interval",
    "estimate_rd",
    "higher_order_bias",
    "sweep_boundary",
]
