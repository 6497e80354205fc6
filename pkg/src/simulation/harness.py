"""Monte Carlo harness: replications, summaries and comparisons."""

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog
from joblib import Parallel, delayed
from numpy.typing import NDArray

from src.bandwidth.terms import BandwidthMode
from src.distance.univariate import estimate_distance_rd
from src.estimator.rd import EstimatorOptions, RDEstimate, estimate_rd
from src.exceptions import (
    DegenerateSelectionError,
    EstimationError,
    InvalidArgumentError,
)
from src.geometry.dataset import Dataset, Side
from src.geometry.frames import ORIGIN_FRAME
from src.kernels.families import KernelSpec
from src.localpoly.fit import fit_arrays

from .designs import DesignSpec
from .sampling import sample

logger = structlog.get_logger()

Estimator = Callable[[Dataset, KernelSpec, EstimatorOptions], RDEstimate]


def _two_dim(mode: BandwidthMode) -> Estimator:
    def run(data: Dataset, spec: KernelSpec, options: EstimatorOptions) -> RDEstimate:
        return estimate_rd(
            data, ORIGIN_FRAME, spec, dataclasses.replace(options, mode=mode)
        )

    return run


def _distance(
    data: Dataset, spec: KernelSpec, options: EstimatorOptions
) -> RDEstimate:
    return estimate_distance_rd(data, ORIGIN_FRAME, alpha=options.alpha)


ESTIMATORS: Dict[str, Estimator] = {
    "2d-diff": _two_dim(BandwidthMode.HETEROGENEOUS),
    "2d-common": _two_dim(BandwidthMode.COMMON),
    "distance-ik": _distance,
}


@dataclass(frozen=True)
class ReplicationRecord:
    """One estimator on one replication; numeric fields are NaN when failed."""

    rep: int
    estimator: str
    theta: float = float("nan")
    thetaBC: float = float("nan")
    se: float = float("nan")
    ciLow: float = float("nan")
    ciHigh: float = float("nan")
    h1: float = float("nan")
    h2: float = float("nan")
    pilot: float = float("nan")
    effN: float = float("nan")
    failed: bool = False
    error: Optional[str] = None

    @classmethod
    def from_estimate(
        cls, rep: int, estimator: str, est: RDEstimate
    ) -> "ReplicationRecord":
        return cls(
            rep=rep,
            estimator=estimator,
            theta=est.theta,
            thetaBC=est.thetaBC,
            se=est.se,
            ciLow=est.ciLow,
            ciHigh=est.ciHigh,
            h1=est.h1,
            h2=est.h2,
            pilot=0.5 * (est.bPlus + est.bMinus),
            effN=float(est.effective_n),
        )


@dataclass(frozen=True)
class EstimatorSummary:
    """Table-style metrics over the successful replications."""

    estimator: str
    replications: int
    failures: int
    bias: float
    variance: float
    rmse: float
    coverage: float
    ciLength: float
    pilot: float
    h1: float
    h2: float
    effN: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "estimator": self.estimator,
            "length": self.ciLength,
            "bias": self.bias,
            "coverage": self.coverage,
            "rmse": self.rmse,
            "pilot": self.pilot,
            "h1": self.h1,
            "h2": self.h2,
            "effN": self.effN,
            "replications": self.replications,
            "failures": self.failures,
        }


def summarize(
    estimator: str, records: Sequence[ReplicationRecord], truth: float
) -> EstimatorSummary:
    """Bias, population variance, RMSE and coverage of thetaBC."""
    ok = [r for r in records if not r.failed]
    failures = len(records) - len(ok)
    if not ok:
        nan = float("nan")
        return EstimatorSummary(
            estimator, len(records), failures, *([nan] * 9)
        )
    est = np.array([r.thetaBC for r in ok])
    low = np.array([r.ciLow for r in ok])
    high = np.array([r.ciHigh for r in ok])
    bias = float(est.mean() - truth)
    variance = float(np.var(est))
    return EstimatorSummary(
        estimator=estimator,
        replications=len(records),
        failures=failures,
        bias=bias,
        variance=variance,
        rmse=float(np.sqrt(bias**2 + variance)),
        coverage=float(np.mean((low <= truth) & (truth <= high))),
        ciLength=float(np.mean(high - low)),
        pilot=float(np.mean([r.pilot for r in ok])),
        h1=float(np.mean([r.h1 for r in ok])),
        h2=float(np.mean([r.h2 for r in ok])),
        effN=float(np.mean([r.effN for r in ok])),
    )


@dataclass
class MCResult:
    """Per-replication records plus one summary per estimator."""

    design_id: int
    n: int
    reps: int
    seedBase: int
    trueTheta: float
    estimators: List[str]
    perRep: List[ReplicationRecord] = field(default_factory=list)
    summary: Dict[str, EstimatorSummary] = field(default_factory=dict)

    def records_for(self, estimator: str) -> List[ReplicationRecord]:
        return [r for r in self.perRep if r.estimator == estimator]

    def replications_frame(self) -> pd.DataFrame:
        return pd.DataFrame([dataclasses.asdict(r) for r in self.perRep])

    def summary_frame(self) -> pd.DataFrame:
        return pd.DataFrame([self.summary[name].to_dict() for name in self.estimators])


def _run_replication(
    design: DesignSpec,
    estimators: Sequence[str],
    n: int,
    seed_base: int,
    rep: int,
    spec: KernelSpec,
    options: EstimatorOptions,
    binary: bool,
) -> List[ReplicationRecord]:
    data = sample(design, n, seed_base, rep=rep, binary=binary)
    records = []
    for name in estimators:
        try:
            est = ESTIMATORS[name](data, spec, options)
            records.append(ReplicationRecord.from_estimate(rep, name, est))
        except EstimationError as e:
            logger.warning(
                "Replication failed", rep=rep, estimator=name, error=str(e)
            )
            records.append(
                ReplicationRecord(rep=rep, estimator=name, failed=True, error=str(e))
            )
    return records


def run_mc(
    design: DesignSpec,
    estimators: Sequence[str],
    n: int,
    reps: int,
    seed_base: int,
    spec: Optional[KernelSpec] = None,
    options: Optional[EstimatorOptions] = None,
    jobs: int = 1,
    binary: bool = False,
) -> MCResult:
    """Run every estimator on the same dataset in each replication.

    Replication r draws from its own stream derived from (seed_base, r), and
    results are merged in replication order, so the output does not depend
    on ``jobs``.
    """
    if reps < 1:
        raise InvalidArgumentError(f"reps must be at least 1, got {reps}")
    unknown = [name for name in estimators if name not in ESTIMATORS]
    if unknown or not estimators:
        raise InvalidArgumentError(
            f"unknown estimators {unknown}; expected some of {sorted(ESTIMATORS)}"
        )
    spec = spec or KernelSpec()
    options = options or EstimatorOptions()

    logger.info(
        "Starting Monte Carlo run",
        design=design.id,
        n=n,
        reps=reps,
        estimators=list(estimators),
        jobs=jobs,
    )
    batches = Parallel(n_jobs=jobs)(
        delayed(_run_replication)(
            design, estimators, n, seed_base, rep, spec, options, binary
        )
        for rep in range(reps)
    )
    result = MCResult(
        design_id=design.id,
        n=n,
        reps=reps,
        seedBase=seed_base,
        trueTheta=design.true_theta,
        estimators=list(estimators),
        perRep=[record for batch in batches for record in batch],
    )
    for name in estimators:
        result.summary[name] = summarize(
            name, result.records_for(name), design.true_theta
        )
    logger.info(
        "Monte Carlo run finished",
        design=design.id,
        rmse={k: v.rmse for k, v in result.summary.items()},
    )
    return result


def compare_rmse(
    result: MCResult, first: str, second: str, draws: int = 2000, seed: int = 0
) -> float:
    """Paired-bootstrap probability that ``first`` has lower RMSE than ``second``."""
    a = {r.rep: r for r in result.records_for(first) if not r.failed}
    b = {r.rep: r for r in result.records_for(second) if not r.failed}
    paired = sorted(set(a) & set(b))
    if not paired:
        raise InvalidArgumentError(
            f"no replications where both {first} and {second} succeeded"
        )
    err_a = np.array([a[k].thetaBC for k in paired]) - result.trueTheta
    err_b = np.array([b[k].thetaBC for k in paired]) - result.trueTheta
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(paired), size=(draws, len(paired)))
    mse_a = np.mean(err_a[idx] ** 2, axis=1)
    mse_b = np.mean(err_b[idx] ** 2, axis=1)
    return float(np.mean(mse_a < mse_b))


@dataclass(frozen=True, eq=False)
class GridSearchResult:
    """Empirical MSE of the local-linear estimate on a fixed bandwidth grid.

    A cell is NaN when any replication could not be fitted there.
    """

    h1_grid: NDArray[np.float64]
    h2_grid: NDArray[np.float64]
    mse: NDArray[np.float64]

    @property
    def best(self) -> Tuple[float, float, float]:
        if not np.isfinite(self.mse).any():
            raise DegenerateSelectionError("no feasible cell in the bandwidth grid")
        i, j = np.unravel_index(np.nanargmin(self.mse), self.mse.shape)
        return float(self.h1_grid[i]), float(self.h2_grid[j]), float(self.mse[i, j])


def default_grid(
    design: DesignSpec, count: int = 12
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Log-spaced grids from 2% to 100% of each side length of the support."""
    x_lo, x_hi, y_lo, y_hi = design.support
    width, height = x_hi - x_lo, y_hi - y_lo
    return (
        np.geomspace(0.02 * width, width, count),
        np.geomspace(0.02 * height, height, count),
    )


def _grid_errors(
    design: DesignSpec,
    n: int,
    seed_base: int,
    rep: int,
    h1_grid: NDArray[np.float64],
    h2_grid: NDArray[np.float64],
    spec: KernelSpec,
) -> NDArray[np.float64]:
    data = sample(design, n, seed_base, rep=rep)
    errors = np.full((h1_grid.size, h2_grid.size), np.nan)
    for i, h1 in enumerate(h1_grid):
        for j, h2 in enumerate(h2_grid):
            h = (float(h1), float(h2))
            try:
                plus = fit_arrays(data.r, data.y, h, 1, Side.PLUS, spec)
                minus = fit_arrays(data.r, data.y, h, 1, Side.MINUS, spec)
            except EstimationError:
                continue
            errors[i, j] = plus.intercept - minus.intercept - design.true_theta
    return errors


def grid_search_mse(
    design: DesignSpec,
    n: int,
    reps: int,
    h1_grid: Optional[Sequence[float]] = None,
    h2_grid: Optional[Sequence[float]] = None,
    seed_base: int = 0,
    spec: Optional[KernelSpec] = None,
    jobs: int = 1,
) -> GridSearchResult:
    """Fixed-bandwidth MSE oracle on the same replications ``run_mc`` draws."""
    if reps < 1:
        raise InvalidArgumentError(f"reps must be at least 1, got {reps}")
    spec = spec or KernelSpec()
    g1, g2 = default_grid(design)
    grid1 = np.asarray(h1_grid if h1_grid is not None else g1, dtype=float)
    grid2 = np.asarray(h2_grid if h2_grid is not None else g2, dtype=float)
    if np.any(grid1 <= 0.0) or np.any(grid2 <= 0.0):
        raise InvalidArgumentError("grid bandwidths must be positive")

    errors = Parallel(n_jobs=jobs)(
        delayed(_grid_errors)(design, n, seed_base, rep, grid1, grid2, spec)
        for rep in range(reps)
    )
    mse = np.mean(np.stack(errors) ** 2, axis=0)
    logger.info(
        "Grid search finished",
        cells=mse.size,
        feasible=int(np.isfinite(mse).sum()),
    )
    return GridSearchResult(h1_grid=grid1, h2_grid=grid2, mse=mse)
