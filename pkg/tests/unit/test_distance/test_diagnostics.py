"""Tests for the distance-strategy diagnostics."""

import numpy as np
import pytest

from src.distance.diagnostics import (
    density_at_zero,
    gamma_psi,
    gamma_psi_limits,
    relative_deviation,
)
from src.distance.transform import SignedDistanceSample, to_signed_distance
from src.exceptions import InsufficientLocalDataError, InvalidArgumentError
from src.geometry.dataset import Side
from src.geometry.frames import ORIGIN_FRAME
from src.simulation.sampling import sample_half_rectangle


@pytest.fixture
def half_rectangle():
    """Signed distances of 20000 points uniform on [-1, 1] x [0, 1]."""
    return to_signed_distance(sample_half_rectangle(20000, seed=9), ORIGIN_FRAME)


def test_limits_closed_form():
    """C_Gamma = pi/2 [[1/3, 1/6], [1/6, 1/10]] and C_Psi likewise."""
    c_gamma, c_psi, v_limit = gamma_psi_limits(sigma2=2.0)

    half_pi = np.pi / 2.0
    np.testing.assert_allclose(
        c_gamma, half_pi * np.array([[1 / 3, 1 / 6], [1 / 6, 1 / 10]]), rtol=1e-9
    )
    np.testing.assert_allclose(
        c_psi, half_pi * 2.0 * np.array([[1 / 3, 2 / 15], [2 / 15, 1 / 15]]), rtol=1e-9
    )
    inv_first = np.linalg.solve(c_gamma, [1.0, 0.0])
    assert v_limit == pytest.approx(inv_first @ c_psi @ inv_first)


def test_density_shrinks_like_h(half_rectangle):
    """f_check(0) / h is close to pi/6 for the half rectangle."""
    value = density_at_zero(half_rectangle, 0.5)

    assert value / 0.5 == pytest.approx(np.pi / 6.0, rel=0.08)


def test_density_on_empty_side(half_rectangle):
    """Every record is treated, so the minus side is empty."""
    with pytest.raises(InsufficientLocalDataError):
        density_at_zero(half_rectangle, 0.5, Side.MINUS)


def test_density_bandwidth_must_be_positive(half_rectangle):
    """h must be positive."""
    with pytest.raises(InvalidArgumentError):
        density_at_zero(half_rectangle, 0.0)


def test_gamma_over_h_converges(half_rectangle):
    """h^-1 Gamma+ and Psi+ are close to their limits."""
    h = 0.5
    c_gamma, c_psi, v_limit = gamma_psi_limits()

    result = gamma_psi(half_rectangle, h)

    assert relative_deviation(result.gammaPlus / h, c_gamma) < 0.1
    assert relative_deviation(result.psiPlus, c_psi) < 0.1
    assert half_rectangle.n * h**2 * result.vPlus == pytest.approx(v_limit, rel=0.15)


def test_empty_side_is_flagged(half_rectangle):
    """A singular Gamma gives NaN and a flag instead of an exception."""
    result = gamma_psi(half_rectangle, 0.5)

    assert result.singularMinus
    assert not result.singularPlus
    assert np.isnan(result.vMinus)


def test_variance_function(half_rectangle):
    """A callable sigma^2 is evaluated per record."""
    constant = gamma_psi(half_rectangle, 0.5, 4.0)
    function = gamma_psi(half_rectangle, 0.5, lambda z: np.full(z.shape, 4.0))

    np.testing.assert_allclose(constant.psiPlus, function.psiPlus)


def test_relative_deviation_of_limit_is_zero():
    """A matrix has no deviation from itself."""
    limit = np.eye(2)

    assert relative_deviation(limit, limit) == 0.0
    assert relative_deviation(2.0 * limit, limit) == pytest.approx(1.0)


@pytest.mark.slow
@pytest.mark.parametrize("h", [0.1, 0.2, 0.4])
def test_density_ratio_large_sample(h):
    """With 10^6 records f_check(0) / h is within 5% of pi/6."""
    sample = to_signed_distance(sample_half_rectangle(1_000_000, seed=21), ORIGIN_FRAME)

    assert density_at_zero(sample, h) / h == pytest.approx(np.pi / 6.0, rel=0.05)


def test_gamma_deviation_shrinks_with_n():
    """With h = n^(-1/5) the scaled Gamma and n h^2 V settle on their limits."""
    c_gamma, _, v_limit = gamma_psi_limits()
    deviations = []
    for rep, n in enumerate([10_000, 40_000, 160_000]):
        data = sample_half_rectangle(n, seed=33, rep=rep)
        h = n**-0.2
        result = gamma_psi(to_signed_distance(data, ORIGIN_FRAME), h)
        deviations.append(relative_deviation(result.gammaPlus / h, c_gamma))

    assert deviations[0] > deviations[1] > deviations[2]
    assert deviations[2] < 0.1
    assert n * h**2 * result.vPlus == pytest.approx(v_limit, rel=0.1)


def test_sample_type(half_rectangle):
    """The fixture is a signed-distance sample with all records treated."""
    assert isinstance(half_rectangle, SignedDistanceSample)
    assert np.all(half_rectangle.z >= 0.0)
