"""Bivariate local-polynomial regression."""

from .fit import LocalFit, fit, fit_arrays, sandwich_covariance
from .indices import MultiIndexSet, design_matrix, design_row, monomials

__all__ = [
    "LocalFit",
    "MultiIndexSet",
    "design_matrix",
    "design_row",
    "fit",
    "fit_arrays",
    "monomials",
    "sandwich_covariance",
]
