"""Univariate distance baseline and its diagnostics."""

from .diagnostics import (
    GammaPsi,
    density_at_zero,
    gamma_psi,
    gamma_psi_limits,
    relative_deviation,
)
from .transform import SignedDistanceSample, to_signed_distance
from .univariate import (
    DistanceKernel,
    IKSelection,
    UnivariateEstimate,
    estimate_distance_rd,
    ik_bandwidth,
    ik_formula,
    select_ik,
    univariate_ll,
)

__all__ = [
    "DistanceKernel",
    "GammaPsi",
    "IKSelection",
    "SignedDistanceSample",
    "UnivariateEstimate",
    "density_at_zero",
    "estimate_distance_rd",
    "gamma_psi",
    "gamma_psi_limits",
    "ik_bandwidth",
    "ik_formula",
    "relative_deviation",
    "select_ik",
    "to_signed_distance",
    "univariate_ll",
]
