"""Application-wide constants."""

# Version info
APP_NAME = "multivariate-rd"
APP_DESCRIPTION = "Two-dimensional regression discontinuity estimation"
OUTPUT_SCHEMA = "mrd/1"

# Exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ESTIMATION = 2

# Estimation defaults
DEFAULT_ALPHA = 0.05

# Simulation defaults
DEFAULT_NOISE_STD = 0.1295
DEFAULT_SUPPORT = (-50.0, 50.0, -30.0, 30.0)  # x_lo, x_hi, y_lo, y_hi
DEFAULT_REPS = 500
DEFAULT_N = 5000

# Numerical tolerances
FRAME_TOLERANCE = 1e-12
QUADRATURE_TOLERANCE = 1e-10
RESTRICTION_TOLERANCE = 1e-9
SINGULAR_VALUE_FLOOR = 1e-10
MAX_CONDITION_NUMBER = 1e12

# Regularization multiplier on estimated variances of bias terms
REGULARIZATION_MULTIPLIER = 3.0

# Global polynomial order for preliminary curvature
GLOBAL_POLY_ORDER = 4

# Same-side neighbours per record in the residual-variance estimate
RESIDUAL_NEIGHBOURS = 3

# Selected bandwidths stay below this share of the pooled coordinate range
MAX_BANDWIDTH_SHARE = 0.99
