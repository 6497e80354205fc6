"""Tests for kernel families."""

import numpy as np
import pytest

from src.geometry.dataset import Side
from src.kernels.families import (
    KernelFamily,
    KernelSpec,
    kernel_eval,
    kernel_weights,
    one_sided_triangular,
    triangular,
)


def test_triangular_shape():
    """1 - |u| inside [-1, 1], zero outside."""
    u = np.array([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5])

    np.testing.assert_allclose(triangular(u), [0, 0, 0.5, 1, 0.5, 0, 0])


def test_one_sided_triangular_shape():
    """2(1 - u) on [0, 1]."""
    u = np.array([-0.1, 0.0, 0.25, 1.0])

    np.testing.assert_allclose(one_sided_triangular(u), [0.0, 2.0, 1.5, 0.0])


@pytest.mark.parametrize("family", list(KernelFamily))
def test_plus_kernel_vanishes_below_boundary(family):
    """K_plus is zero for z2 < 0."""
    spec = KernelSpec(family)

    assert kernel_eval(spec, (0.1, -0.2)) == 0.0


@pytest.mark.parametrize("family", list(KernelFamily))
def test_minus_kernel_is_reflection(family):
    """K_minus(z1, z2) = K_plus(z1, -z2)."""
    plus = KernelSpec(family, Side.PLUS)
    minus = plus.for_side(Side.MINUS)
    rng = np.random.default_rng(0)
    z = rng.uniform(-1.0, 1.0, size=(50, 2))

    flipped = z * [1.0, -1.0]

    np.testing.assert_allclose(kernel_weights(minus, z), kernel_weights(plus, flipped))


def test_product_triangular_value():
    """K(z) = (1 - |z1|) * 2(1 - z2)."""
    spec = KernelSpec(KernelFamily.PRODUCT_TRIANGULAR)

    assert kernel_eval(spec, (0.5, 0.25)) == pytest.approx(0.5 * 1.5)


def test_cone_zero_outside_unit_disk():
    """The cone kernel is supported on the half disk."""
    spec = KernelSpec(KernelFamily.CONE)

    assert kernel_eval(spec, (0.8, 0.8)) == 0.0
    assert kernel_eval(spec, (0.0, 0.0)) == pytest.approx(6.0 / np.pi)


def test_admissibility_flags():
    """Only the shifted triangular kernel breaks the rotation restriction."""
    assert KernelFamily.PRODUCT_TRIANGULAR.admissible
    assert KernelFamily.CONE.admissible
    assert not KernelFamily.SHIFTED_TRIANGULAR.admissible
