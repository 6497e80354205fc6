"""Deterministic samplers for the simulation designs and diagnostics."""

from typing import Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy import stats

from src.distance.transform import SignedDistanceSample
from src.exceptions import InvalidArgumentError
from src.geometry.dataset import Dataset
from src.utils.constants import DEFAULT_NOISE_STD

from .designs import DesignSpec, mean_surface


def replication_rng(seed_base: int, rep: int = 0) -> np.random.Generator:
    """Independent stream for replication ``rep`` of a run seeded by ``seed_base``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed_base), int(rep)]))


def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidArgumentError(f"sample size must be at least 1, got {n}")


def draw_unit(rng: np.random.Generator, n: int) -> NDArray[np.float64]:
    """(u1, u2) with u1 ~ U[-1, 1] and u2 ~ 2 Beta(2, 4) - 1, by inverse CDF."""
    uniforms = rng.random((n, 2))
    u1 = 2.0 * uniforms[:, 0] - 1.0
    u2 = 2.0 * stats.beta.ppf(uniforms[:, 1], 2.0, 4.0) - 1.0
    return np.column_stack([u1, u2])


def to_support(
    unit: NDArray[np.float64], support: Tuple[float, float, float, float]
) -> NDArray[np.float64]:
    """Affine map of [-1, 1]^2 onto the support rectangle."""
    x_lo, x_hi, y_lo, y_hi = support
    x = x_lo + 0.5 * (unit[:, 0] + 1.0) * (x_hi - x_lo)
    y = y_lo + 0.5 * (unit[:, 1] + 1.0) * (y_hi - y_lo)
    return np.column_stack([x, y])


def sample(
    design: DesignSpec,
    n: int,
    seed: int,
    rep: int = 0,
    binary: bool = False,
) -> Dataset:
    """Draw n records from a design in rotated coordinates.

    With ``binary`` the outcome is Bernoulli with success probability equal
    to the mean surface clipped to [0, 1].
    """
    _check_n(n)
    rng = replication_rng(seed, rep)
    z = to_support(draw_unit(rng, n), design.support)
    mean = mean_surface(design, z)
    if binary:
        y = (rng.random(n) < np.clip(mean, 0.0, 1.0)).astype(float)
    else:
        y = mean + rng.normal(0.0, design.noiseStd, n)
    return Dataset(y=y, r=z, d=z[:, 1] >= 0.0)


def sample_half_rectangle(
    n: int, seed: int, sigma: float = 1.0, rep: int = 0
) -> Dataset:
    """R uniform on [-1, 1] x [0, 1], all treated, outcome pure noise."""
    _check_n(n)
    rng = replication_rng(seed, rep)
    u = rng.random((n, 2))
    r = np.column_stack([2.0 * u[:, 0] - 1.0, u[:, 1]])
    y = rng.normal(0.0, sigma, n)
    return Dataset(y=y, r=r, d=np.ones(n, dtype=bool))


def sample_univariate(
    n: int,
    seed: int,
    jump: float = 1.0,
    sigma: Optional[float] = None,
    rep: int = 0,
) -> SignedDistanceSample:
    """Genuinely one-dimensional design: Z ~ U[-1, 1], y = z/2 + jump 1{z >= 0} + e."""
    _check_n(n)
    rng = replication_rng(seed, rep)
    z = 2.0 * rng.random(n) - 1.0
    noise = DEFAULT_NOISE_STD if sigma is None else sigma
    y = 0.5 * z + jump * (z >= 0.0) + rng.normal(0.0, noise, n)
    return SignedDistanceSample(z=z, y=y)
