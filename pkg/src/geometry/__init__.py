"""Treatment regions, boundary frames and rotated datasets."""

from .dataset import Dataset, Side, rotate_to_frame, side_mask
from .frames import ORIGIN_FRAME, BoundaryFrame
from .regions import RegionKind, RegionSpec, boundary_points, region_contains

__all__ = [
    "BoundaryFrame",
    "ORIGIN_FRAME",
    "Dataset",
    "Side",
    "RegionKind",
    "RegionSpec",
    "boundary_points",
    "region_contains",
    "rotate_to_frame",
    "side_mask",
]
