"""Tests for final bandwidth selection and the pipeline."""

import numpy as np
import pytest

from src.bandwidth.pilot import WorkingSample
from src.bandwidth.selection import (
    _clamp,
    run_pipeline,
    select_bandwidths,
    select_for_frame,
    variance_constant,
)
from src.bandwidth.terms import (
    BandwidthMode,
    BandwidthSelection,
    DensityFactor,
    H6Constant,
    SelectorOptions,
)
from src.exceptions import (
    DegenerateSelectionError,
    InvalidArgumentError,
    KernelUnsuitableError,
)
from src.geometry.dataset import Dataset, rotate_to_frame
from src.geometry.frames import ORIGIN_FRAME
from src.kernels.families import KernelFamily, KernelSpec

LITERAL = DensityFactor.LITERAL


def select(bias, n=1000, **kwargs):
    """Select with unit residual variances and no density adjustment."""
    kwargs.setdefault("density_factor", LITERAL)
    return select_bandwidths(bias, 1.0, 1.0, None, n, KernelSpec(), **kwargs)


class TestVarianceConstant:
    """C_v for the product-triangular kernel."""

    def test_literal(self):
        """(sigma+^2 + sigma-^2) * 3.2 without the density."""
        cv = variance_constant(1.0, 0.5, None, KernelSpec(), LITERAL)

        assert cv == pytest.approx(1.5 * 3.2)

    def test_adjusted_divides_by_density(self):
        """The density-adjusted constant carries 1/f(c)."""
        cv = variance_constant(1.0, 1.0, 0.5, KernelSpec(), DensityFactor.ADJUSTED)

        assert cv == pytest.approx(2.0 * 3.2 / 0.5)

    @pytest.mark.parametrize("fhat", [None, 0.0])
    def test_adjusted_needs_positive_density(self, fhat):
        """No density estimate means no adjusted constant."""
        with pytest.raises(DegenerateSelectionError):
            variance_constant(1.0, 1.0, fhat, KernelSpec(), DensityFactor.ADJUSTED)


class TestSelectBandwidths:
    """Closed-form bandwidths."""

    def test_heterogeneous_closed_form(self, make_bias):
        """h1^6 = k C_v / n R1^(-5/4) R2^(1/4) and symmetrically for h2."""
        n = 1000
        cv = 2.0 * 3.2
        r1, r2 = (1 / 3) ** 2, 0.1**2

        selection = select(make_bias(), n)

        h1 = (0.125 * cv / n * r1**-1.25 * r2**0.25) ** (1 / 6)
        h2 = (0.125 * cv / n * r2**-1.25 * r1**0.25) ** (1 / 6)
        assert selection.h1 == pytest.approx(h1)
        assert selection.h2 == pytest.approx(h2)
        assert selection.h2 > selection.h1

    def test_common_closed_form(self, make_bias):
        """h^6 = k C_v / (n Rc) with one bandwidth for both axes."""
        n = 1000
        bc = 0.5 * (2.0 / 6 - 0.1)

        selection = select(make_bias(), n, mode=BandwidthMode.COMMON)

        expected = (0.125 * 6.4 / (n * bc**2)) ** (1 / 6)
        assert selection.h1 == selection.h2 == pytest.approx(expected)

    def test_half_constant_scales_by_sixth_root_of_four(self, make_bias):
        """Switching 1/8 to 1/2 multiplies both bandwidths by 4^(1/6)."""
        eighth = select(make_bias())
        half = select(make_bias(), h6_constant=H6Constant.HALF)

        assert half.h1 / eighth.h1 == pytest.approx(4 ** (1 / 6))
        assert half.h2 / eighth.h2 == pytest.approx(4 ** (1 / 6))

    def test_bandwidths_shrink_with_n(self, make_bias):
        """Each bandwidth scales as n^(-1/6)."""
        small = select(make_bias(), 100)
        large = select(make_bias(), 6400)

        assert small.h1 / large.h1 == pytest.approx(64 ** (1 / 6))
        assert small.h2 / large.h2 == pytest.approx(64 ** (1 / 6))

    def test_regularization_shrinks_noisy_direction(self, make_bias):
        """A larger variance of B1 raises R1 and lowers h1."""
        quiet = select(make_bias())
        noisy = select(make_bias(cov_plus=np.diag([10.0, 0.0])))

        assert noisy.h1 < quiet.h1

    def test_single_flat_direction_borrows_other(self, make_bias):
        """A zero B2 with zero variance falls back to R1 for both axes."""
        selection = select(make_bias(d22plus=0.0))

        assert selection.h1 == pytest.approx(selection.h2)

    def test_all_zero_bias_is_degenerate(self, make_bias):
        """No curvature and no noise means no optimum."""
        with pytest.raises(DegenerateSelectionError):
            select(make_bias(d11plus=0.0, d22plus=0.0))

    def test_zero_variance_is_degenerate(self, make_bias):
        """Zero residual variances cannot be traded off against bias."""
        with pytest.raises(DegenerateSelectionError):
            select_bandwidths(
                make_bias(), 0.0, 0.0, None, 1000, KernelSpec(), density_factor=LITERAL
            )

    def test_fixed_mode_is_not_selected(self, make_bias):
        """Fixed bandwidths bypass selection."""
        with pytest.raises(InvalidArgumentError):
            select(make_bias(), mode=BandwidthMode.FIXED)

    def test_invalid_sample_size(self, make_bias):
        """n must be positive."""
        with pytest.raises(InvalidArgumentError):
            select(make_bias(), 0)


class TestPipeline:
    """End-to-end selection on simulated data."""

    def test_heterogeneous_pipeline(self, design2_sample, origin_frame):
        """Selected bandwidths are positive and strictly inside the data span."""
        rotated = rotate_to_frame(design2_sample, origin_frame)

        result = run_pipeline(rotated, KernelSpec(), SelectorOptions())

        selection = result.selection
        span = np.ptp(rotated.r, axis=0)
        assert 0.0 < selection.h1 < span[0]
        assert 0.0 < selection.h2 < span[1]
        assert selection.fhat is not None and selection.fhat > 0.0
        assert selection.pilotPlus > 0.0 and selection.pilotMinus > 0.0

    def test_common_pipeline(self, design2_sample, origin_frame):
        """Common mode returns h1 == h2."""
        selection = select_for_frame(
            design2_sample,
            origin_frame,
            options=SelectorOptions(mode=BandwidthMode.COMMON),
        )

        assert selection.h1 == selection.h2
        assert selection.mode is BandwidthMode.COMMON

    def test_fixed_pipeline_keeps_bandwidths(self, design2_sample, origin_frame):
        """Fixed mode passes the given bandwidths through."""
        options = SelectorOptions(
            mode=BandwidthMode.FIXED, fixed_bandwidths=(10.0, 5.0)
        )

        selection = select_for_frame(design2_sample, origin_frame, options=options)

        assert selection.bandwidths == (10.0, 5.0)

    def test_fixed_pipeline_needs_bandwidths(self, design2_sample, origin_frame):
        """Fixed mode without bandwidths is an argument error."""
        with pytest.raises(InvalidArgumentError):
            select_for_frame(
                design2_sample,
                origin_frame,
                options=SelectorOptions(mode=BandwidthMode.FIXED),
            )

    def test_inadmissible_kernel(self, design2_sample, origin_frame):
        """Kernels breaking the rotation restriction are refused."""
        with pytest.raises(KernelUnsuitableError):
            select_for_frame(
                design2_sample,
                origin_frame,
                spec=KernelSpec(KernelFamily.SHIFTED_TRIANGULAR),
            )

    @pytest.mark.parametrize(
        "mode", [BandwidthMode.HETEROGENEOUS, BandwidthMode.COMMON]
    )
    def test_clamp_stays_below_span(self, design2_sample, origin_frame, mode):
        """Oversized selections are pulled strictly inside the coordinate range."""
        sample = WorkingSample.build(design2_sample, origin_frame)
        raw = BandwidthSelection(
            sigma2plus=1.0,
            sigma2minus=1.0,
            fhat=None,
            pilotPlus=1.0,
            pilotMinus=1.0,
            h1=1e6,
            h2=1e6,
            mode=mode,
        )

        h1, h2 = _clamp(raw, sample)

        span = np.ptp(sample.z, axis=0)
        assert h1 < span[0] and h2 < span[1]
        expected = 0.99 * span.min() if mode is BandwidthMode.COMMON else 0.99 * span[0]
        assert h1 == pytest.approx(expected)


def curved_sample(n, seed):
    """Smooth surfaces with a clear curvature jump at the origin."""
    rng = np.random.default_rng(seed)
    r = rng.uniform(-1.0, 1.0, size=(n, 2))
    d = r[:, 1] >= 0.0
    plus = 1.0 + np.exp(0.8 * r[:, 0]) + np.cos(1.5 * r[:, 1])
    minus = np.cos(1.2 * r[:, 0]) - 0.5 * r[:, 1] ** 2
    y = np.where(d, plus, minus) + 0.1 * rng.normal(size=n)
    return rotate_to_frame(Dataset(y=y, r=r, d=d), ORIGIN_FRAME)


@pytest.mark.slow
class TestSelectionRates:
    """Selected and pilot bandwidths as the sample grows."""

    @pytest.fixture(scope="class")
    def selections(self):
        """Twenty selections at each of n = 4000 and n = 32000."""
        options = SelectorOptions()
        return {
            n: [
                run_pipeline(curved_sample(n, seed), KernelSpec(), options).selection
                for seed in range(20)
            ]
            for n in (4000, 32000)
        }

    def test_bandwidths_shrink_at_sixth_root(self, selections):
        """An eightfold sample shrinks h by about 8^(-1/6)."""
        small, large = (
            np.median([np.sqrt(s.h1 * s.h2) for s in selections[n]])
            for n in (4000, 32000)
        )

        assert large / small == pytest.approx(8 ** (-1.0 / 6.0), rel=0.15)

    def test_pilots_shrink(self, selections):
        """Pilot bandwidths narrow as n grows."""
        small, large = (
            np.median([s.pilot_summary for s in selections[n]]) for n in (4000, 32000)
        )

        assert large < small
