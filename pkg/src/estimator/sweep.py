"""Independent estimates at many boundary points."""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import structlog
from joblib import Parallel, delayed

from src.exceptions import (
    EstimationError,
    InsufficientLocalDataError,
    InvalidArgumentError,
)
from src.geometry.dataset import Dataset
from src.geometry.frames import BoundaryFrame
from src.kernels.families import KernelSpec

from .rd import EstimatorOptions, RDEstimate, estimate_rd

logger = structlog.get_logger()


@dataclass(frozen=True)
class SweepPoint:
    """Outcome at one boundary point: an estimate or an error record."""

    index: int
    frame: BoundaryFrame
    estimate: Optional[RDEstimate] = None
    error: Optional[Dict[str, Any]] = None

    @property
    def ok(self) -> bool:
        return self.estimate is not None

    def to_dict(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {"point": self.index}
        if self.estimate is not None:
            record.update(self.estimate.to_dict())
            record["error"] = None
        else:
            record.update(
                {
                    "center_x": float(self.frame.center[0]),
                    "center_y": float(self.frame.center[1]),
                    "normal_x": float(self.frame.normal[0]),
                    "normal_y": float(self.frame.normal[1]),
                }
            )
            record["error"] = self.error
        return record


def _estimate_point(
    index: int,
    data: Dataset,
    frame: BoundaryFrame,
    spec: KernelSpec,
    options: EstimatorOptions,
) -> SweepPoint:
    try:
        estimate = estimate_rd(data, frame, spec, options)
        return SweepPoint(index, frame, estimate=estimate)
    except EstimationError as e:
        logger.warning(
            "Boundary point failed",
            point=index,
            error_type=type(e).__name__,
            error=str(e),
        )
        error: Dict[str, Any] = {"type": type(e).__name__, "message": str(e)}
        if isinstance(e, InsufficientLocalDataError):
            error.update(e.to_dict())
        return SweepPoint(index, frame, error=error)


def sweep_boundary(
    data: Dataset,
    frames: Sequence[BoundaryFrame],
    spec: Optional[KernelSpec] = None,
    options: Optional[EstimatorOptions] = None,
    jobs: int = 1,
) -> List[SweepPoint]:
    """One estimate per frame, in input order; failures stay per point."""
    if not frames:
        raise InvalidArgumentError("sweep needs at least one boundary frame")
    spec = spec or KernelSpec()
    options = options or EstimatorOptions()
    points = Parallel(n_jobs=jobs)(
        delayed(_estimate_point)(i, data, frame, spec, options)
        for i, frame in enumerate(frames)
    )
    failed = sum(1 for p in points if not p.ok)
    logger.info("Boundary sweep finished", points=len(points), failed=failed)
    return list(points)
