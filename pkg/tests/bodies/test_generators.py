"""Tests for the polytope families."""

import math

import numpy as np
import pytest

from src.bodies.generators import (
    box,
    cross_polytope,
    isosceles,
    perturbed_segment,
    point,
    random_polytope,
    random_rotation,
    regular_polygon,
    remark_body,
    remark_direction,
    segment,
    simplex_regular,
    unit_vector,
)
from src.bodies.polytope import width
from src.errors import InvalidParameterError


class TestGenerators:
    """Tests for the body constructors."""

    def test_unit_vector(self):
        """Test the standard basis vectors."""
        assert unit_vector(3, 1).tolist() == [0.0, 1.0, 0.0]

    def test_point(self):
        """Test the single-point body."""
        P = point((1.0, 2.0))
        assert P.affine_dim == 0

    def test_segment_is_centred(self):
        """Test that segments are centred at the origin."""
        S = segment((0.0, 1.0), 2.0)
        assert np.allclose(S.vertices.sum(axis=0), 0.0)
        assert width(S, (0.0, 1.0)) == pytest.approx(2.0)

    def test_box_corners(self):
        """Test that a 3-box has eight vertices."""
        B = box((1.0, 2.0, 3.0))
        assert len(B) == 8
        assert np.allclose(B.vertices.min(axis=0), 0.0)

    def test_centred_box(self):
        """Test that a centred box is symmetric."""
        B = box((1.0, 1.0, 0.1), centered=True)
        assert np.allclose(B.vertices.min(axis=0), -B.vertices.max(axis=0))

    def test_box_rejects_non_positive_sides(self):
        """Test that side lengths must be positive."""
        with pytest.raises(InvalidParameterError):
            box((1.0, 0.0))

    def test_isosceles(self):
        """Test the isosceles triangle family."""
        T = isosceles(0.5)
        assert len(T) == 3
        assert T.vertices.max(axis=0)[1] == pytest.approx(0.5)

    def test_regular_polygon(self):
        """Test that a regular hexagon has six vertices on the circle."""
        H = regular_polygon(6, radius=2.0)
        assert len(H) == 6
        assert np.allclose(np.linalg.norm(H.vertices, axis=1), 2.0)

    def test_regular_polygon_needs_three_vertices(self):
        """Test that fewer than three vertices are rejected."""
        with pytest.raises(InvalidParameterError):
            regular_polygon(2)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_simplex_regular_edges(self, n):
        """Test that all edges of the regular simplex have length sqrt(2)."""
        S = simplex_regular(n)
        assert len(S) == n + 1
        v = S.vertices
        dists = [np.linalg.norm(v[i] - v[j]) for i in range(n + 1) for j in range(i)]
        assert np.allclose(dists, math.sqrt(2.0))

    def test_cross_polytope(self):
        """Test the cross-polytope vertices."""
        assert len(cross_polytope(3)) == 6

    def test_random_polytope_is_reproducible(self):
        """Test that the same seed gives the same body."""
        assert random_polytope(3, 10, seed=9) == random_polytope(3, 10, seed=9)

    def test_random_polytope_needs_enough_points(self):
        """Test that k >= n + 1 is required."""
        with pytest.raises(InvalidParameterError):
            random_polytope(3, 3, seed=0)

    def test_random_rotation(self):
        """Test that the rotation is orthogonal with determinant 1."""
        R = random_rotation(3, seed=1)
        assert np.allclose(R @ R.T, np.eye(3))
        assert np.linalg.det(R) == pytest.approx(1.0)

    def test_perturbed_segment_stays_in_tube(self):
        """Test that perturbed points stay within delta of the axis."""
        K = perturbed_segment(2.0, 0.01, seed=3)
        assert np.max(np.abs(K.vertices[:, 1])) <= 0.01
        assert width(K, (1.0, 0.0)) == pytest.approx(2.0)

    def test_perturbed_segment_without_offset(self):
        """Test that delta = 0 gives the segment."""
        K = perturbed_segment(2.0, 0.0, seed=3)
        assert K.affine_dim == 1
        assert len(K) == 2

    def test_remark_body_axes(self):
        """Test the semi-axes of the remark body."""
        M = remark_body(3, 10.0, 0.01)
        assert width(M, (1.0, 0.0, 0.0)) == pytest.approx(0.2)
        assert width(M, (0.0, 1.0, 0.0)) == pytest.approx(20.0)
        assert width(M, (0.0, 0.0, 1.0)) == pytest.approx(6.0)

    def test_remark_direction(self):
        """Test that the remark direction is a unit vector near e_1."""
        e = remark_direction(3, 0.01)
        assert np.linalg.norm(e) == pytest.approx(1.0)
        assert e[0] == pytest.approx(0.995)
        assert e[2] == 0.0

    def test_remark_body_rejects_bad_eps(self):
        """Test that eps must lie in (0, 1)."""
        with pytest.raises(InvalidParameterError):
            remark_body(3, 10.0, 1.5)
