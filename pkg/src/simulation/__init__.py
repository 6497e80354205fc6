"""Simulation designs, samplers and the Monte Carlo harness."""

from .designs import (
    DESIGN_IDS,
    DESIGN_TERMS,
    DesignSpec,
    coefficient_table,
    eval_mean,
    export_design_table,
    make_design,
    mean_surface,
    true_theta,
)
from .harness import (
    ESTIMATORS,
    EstimatorSummary,
    GridSearchResult,
    MCResult,
    ReplicationRecord,
    compare_rmse,
    grid_search_mse,
    run_mc,
    summarize,
)
from .sampling import (
    replication_rng,
    sample,
    sample_half_rectangle,
    sample_univariate,
)

__all__ = [
    "DESIGN_IDS",
    "DESIGN_TERMS",
    "DesignSpec",
    "ESTIMATORS",
    "EstimatorSummary",
    "GridSearchResult",
    "MCResult",
    "ReplicationRecord",
    "coefficient_table",
    "compare_rmse",
    "eval_mean",
    "export_design_table",
    "grid_search_mse",
    "make_design",
    "mean_surface",
    "replication_rng",
    "run_mc",
    "sample",
    "sample_half_rectangle",
    "sample_univariate",
    "summarize",
    "true_theta",
]
