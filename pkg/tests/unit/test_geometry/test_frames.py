"""Tests for boundary frames."""

import numpy as np
import pytest

from src.exceptions import InvalidFrameError
from src.geometry.frames import ORIGIN_FRAME, BoundaryFrame


class TestBoundaryFrame:
    """Frame construction and coordinate maps."""

    def test_from_normal_normalizes(self):
        """A non-unit normal is scaled to unit length."""
        frame = BoundaryFrame.from_normal((2.0, 3.0), (0.0, 5.0))

        np.testing.assert_allclose(frame.normal, [0.0, 1.0])
        np.testing.assert_allclose(frame.tangent, [1.0, 0.0])
        np.testing.assert_allclose(frame.center, [2.0, 3.0])

    def test_tangent_is_normal_rotated_clockwise(self):
        """Tangent equals the normal rotated by -90 degrees."""
        frame = BoundaryFrame.from_normal((0.0, 0.0), (1.0, 0.0))

        np.testing.assert_allclose(frame.tangent, [0.0, -1.0])

    def test_center_maps_to_origin(self, diagonal_frame):
        """The boundary point has frame coordinates (0, 0)."""
        z = diagonal_frame.to_frame(np.array([[1.0, 1.0]]))

        np.testing.assert_allclose(z, [[0.0, 0.0]], atol=1e-15)

    def test_normal_direction_is_positive_second_coordinate(self, diagonal_frame):
        """A point along the normal lands on the treated side."""
        z = diagonal_frame.to_frame(np.array([[2.0, 2.0]]))

        assert z[0, 1] == pytest.approx(np.sqrt(2.0))
        assert z[0, 0] == pytest.approx(0.0, abs=1e-12)

    def test_to_original_inverts_to_frame(self, diagonal_frame):
        """Mapping back recovers the input points."""
        rng = np.random.default_rng(3)
        r = rng.normal(size=(25, 2))

        back = diagonal_frame.to_original(diagonal_frame.to_frame(r))

        np.testing.assert_allclose(back, r, atol=1e-12)

    def test_rotation_preserves_distances(self, diagonal_frame):
        """Distances to the center are unchanged by the rotation."""
        r = np.array([[0.0, 3.0], [4.0, -1.0]])

        z = diagonal_frame.to_frame(r)

        np.testing.assert_allclose(
            np.linalg.norm(z, axis=1), np.linalg.norm(r - [1.0, 1.0], axis=1)
        )

    def test_zero_normal_rejected(self):
        """A zero normal cannot define a frame."""
        with pytest.raises(InvalidFrameError):
            BoundaryFrame.from_normal((0.0, 0.0), (0.0, 0.0))

    def test_non_orthogonal_basis_rejected(self):
        """Tangent and normal must be orthogonal."""
        with pytest.raises(InvalidFrameError):
            BoundaryFrame(
                center=np.zeros(2),
                tangent=np.array([1.0, 0.0]),
                normal=np.array([np.sqrt(0.5), np.sqrt(0.5)]),
            )

    def test_left_handed_basis_rejected(self):
        """(tangent, normal) must have determinant +1."""
        with pytest.raises(InvalidFrameError):
            BoundaryFrame(
                center=np.zeros(2),
                tangent=np.array([-1.0, 0.0]),
                normal=np.array([0.0, 1.0]),
            )

    def test_non_finite_center_rejected(self):
        """Centers must be finite."""
        with pytest.raises(InvalidFrameError):
            BoundaryFrame.from_normal((np.nan, 0.0), (0.0, 1.0))

    def test_origin_frame_is_identity(self):
        """The default frame leaves coordinates unchanged."""
        r = np.array([[0.3, -0.7]])

        np.testing.assert_allclose(ORIGIN_FRAME.to_frame(r), r)

    def test_to_dict(self, diagonal_frame):
        """Serializable view lists center, tangent and normal."""
        data = diagonal_frame.to_dict()

        assert data["center"] == [1.0, 1.0]
        assert set(data) == {"center", "tangent", "normal"}
