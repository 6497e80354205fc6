"""Boundary kernels, kernel moments and moment matrices."""

from .families import (
    KernelFamily,
    KernelSpec,
    kernel_eval,
    kernel_weights,
    one_sided_triangular,
    triangular,
)
from .moments import (
    MomentMatrices,
    RestrictionReport,
    check_restriction,
    kernel_moment,
    moment_matrices,
    quadrature_moment,
    univariate_constants,
)

__all__ = [
    "KernelFamily",
    "KernelSpec",
    "MomentMatrices",
    "RestrictionReport",
    "check_restriction",
    "kernel_eval",
    "kernel_moment",
    "kernel_weights",
    "moment_matrices",
    "one_sided_triangular",
    "quadrature_moment",
    "triangular",
    "univariate_constants",
]
