"""Tests for volumes, mixed volumes, intrinsic volumes and radii."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.bodies.generators import (
    box,
    cross_polytope,
    point,
    random_polytope,
    random_rotation,
    regular_polygon,
    segment,
    simplex_regular,
)
from src.bodies.polytope import (
    ConvexPolytope,
    linear_map,
    minkowski_sum,
    scale,
    translate,
)
from src.errors import ConvergenceError, DimensionMismatchError, InvalidParameterError
from src.functionals.functionals import (
    _local_coordinates,
    chebyshev_ball,
    chord_length,
    circumradius,
    diameter,
    diameter_pair,
    functional_report,
    inradius_projection,
    minimal_width,
    mixed_volume_1,
    mixed_volume_oracle,
    projection_volume,
    surface_area,
    surface_area_via_mixed_volume,
    v1,
    v1_quadrature,
    v1_with_method,
    v_nminus1,
    volume,
)


class TestVolumes:
    """Tests for volume and surface area."""

    def test_cube(self):
        """Test volume and surface area of the unit cube."""
        cube = box((1.0, 1.0, 1.0))
        assert volume(cube) == pytest.approx(1.0)
        assert surface_area(cube) == pytest.approx(6.0)
        assert v_nminus1(cube) == pytest.approx(3.0)

    def test_lower_dimensional_volume_is_zero(self):
        """Test that flat bodies have zero volume."""
        assert volume(segment((0.0, 0.0, 1.0), 1.0)) == 0.0

    def test_simplex_volume(self):
        """Test the volume of the standard simplex."""
        S = ConvexPolytope([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert volume(S) == pytest.approx(1.0 / 6.0)

    def test_one_dimensional_volume(self):
        """Test the length of an interval in R^1."""
        assert volume(ConvexPolytope([[-1.0], [2.0]])) == pytest.approx(3.0)

    def test_projection_volume(self):
        """Test the projection of a box along an axis."""
        assert projection_volume(box((1.0, 2.0, 3.0)), (0.0, 0.0, 1.0)) == pytest.approx(2.0)


class TestMixedVolume:
    """Tests for V(K, M[n-1])."""

    def test_self_mixed_volume_is_volume(self):
        """Test V(K, K[n-1]) = V(K)."""
        K = random_polytope(3, 12, seed=21)
        assert mixed_volume_1(K, K) == pytest.approx(volume(K), rel=1e-9)

    def test_dimension_mismatch(self):
        """Test that bodies of different dimension are rejected."""
        with pytest.raises(DimensionMismatchError):
            mixed_volume_1(box((1.0, 1.0)), box((1.0, 1.0, 1.0)))

    def test_segment_against_box(self):
        """Test V(S, M[n-1]) = (1/n) |S| times the projection of M along S."""
        K = segment((0.0, 0.0, 1.0), 2.0)
        M = box((1.0, 2.0, 3.0))
        assert mixed_volume_1(K, M) == pytest.approx(2.0 * 2.0 / 3.0)

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("seed", range(5))
    def test_matches_polynomial_fit(self, n, seed):
        """Test the fast mixed volume against the polynomial-fit oracle."""
        K = random_polytope(n, n + 4, seed=seed)
        M = random_polytope(n, n + 5, seed=100 + seed)
        assert mixed_volume_1(K, M) == pytest.approx(mixed_volume_oracle(K, M), rel=1e-7)

    def test_oracle_dimension_limit(self):
        """Test that the polynomial-fit oracle refuses n > 4."""
        K = box((1.0,) * 5)
        with pytest.raises(InvalidParameterError):
            mixed_volume_oracle(K, K)

    def test_translation_invariance(self):
        """Test that translating either body leaves the mixed volume unchanged."""
        K = random_polytope(3, 8, seed=4)
        M = random_polytope(3, 9, seed=5)
        moved = mixed_volume_1(translate(K, (1.0, -2.0, 0.5)), translate(M, (0.0, 3.0, 1.0)))
        assert moved == pytest.approx(mixed_volume_1(K, M), rel=1e-9)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_minkowski_linearity_in_first_argument(self, n):
        """Test V(K + lam L, M[n-1]) = V(K, M[n-1]) + lam V(L, M[n-1])."""
        K = random_polytope(n, n + 4, seed=20 + n)
        L = random_polytope(n, n + 3, seed=30 + n)
        M = random_polytope(n, n + 5, seed=40 + n)
        lam = 0.7
        combined = mixed_volume_1(minkowski_sum(K, scale(L, lam)), M)
        expected = mixed_volume_1(K, M) + lam * mixed_volume_1(L, M)
        assert combined == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_scaling(self, n):
        """Test the degrees 1 in K and n - 1 in M, also for the surface area."""
        K = random_polytope(n, n + 4, seed=50 + n)
        M = random_polytope(n, n + 4, seed=60 + n)
        a, b = 2.5, 0.4
        expected = a * b ** (n - 1) * mixed_volume_1(K, M)
        scaled = mixed_volume_1(scale(K, a), scale(M, b))
        assert scaled == pytest.approx(expected, rel=1e-9)
        assert surface_area(scale(M, b)) == pytest.approx(
            b ** (n - 1) * surface_area(M), rel=1e-9
        )

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_monotone_in_both_arguments(self, seed):
        """Test that growing K or M never decreases the mixed volume."""
        rng = np.random.default_rng(seed)
        points = rng.standard_normal((14, 3))
        small, large = ConvexPolytope(points[:8]), ConvexPolytope(points)
        M = random_polytope(3, 10, seed=70 + seed)
        assert mixed_volume_1(small, M) <= mixed_volume_1(large, M) + 1e-12
        assert mixed_volume_1(M, small) <= mixed_volume_1(M, large) + 1e-12

    def test_surface_area_via_polygonal_ball(self):
        """Test F(P) = n V(B, P[n-1]) with a polygon containing the axes directions."""
        square = box((1.0, 1.0))
        ball = regular_polygon(256)
        assert surface_area_via_mixed_volume(square, ball) == pytest.approx(4.0, rel=1e-9)


class TestV1:
    """Tests for the first intrinsic volume."""

    def test_cube_edge_formula(self):
        """Test V1 of the unit cube."""
        value, method = v1_with_method(box((1.0, 1.0, 1.0)))
        assert method == "exact"
        assert value == pytest.approx(3.0)

    def test_box_sum_of_sides(self):
        """Test V1 of a box equals the sum of its side lengths."""
        assert v1(box((1.0, 2.0, 3.0))) == pytest.approx(6.0)

    def test_polygon_half_perimeter(self):
        """Test V1 of the unit square."""
        assert v1(box((1.0, 1.0))) == pytest.approx(2.0)

    def test_segment_length(self):
        """Test V1 of a segment is its length in any dimension."""
        assert v1(segment((0.0, 0.6, 0.8), 2.5)) == pytest.approx(2.5)

    def test_point(self):
        """Test V1 of a point is zero."""
        assert v1(point((1.0, 1.0, 1.0))) == 0.0

    def test_flat_triangle_in_space(self):
        """Test that V1 of a planar triangle in R^3 is its half perimeter."""
        T = ConvexPolytope([[0, 0, 0], [3, 0, 0], [0, 4, 0]])
        assert v1(T) == pytest.approx(6.0)

    def test_rotation_invariance(self):
        """Test that rotating a body does not change V1."""
        K = random_polytope(3, 10, seed=8)
        R = random_rotation(3, seed=9)
        assert v1(linear_map(K, R)) == pytest.approx(v1(K), rel=1e-9)

    def test_quadrature_matches_edge_formula(self):
        """Test the product quadrature path against the closed form in R^3."""
        cube = box((1.0, 1.0, 1.0))
        assert v1_quadrature(_local_coordinates(cube), relative_tol=1e-2) == pytest.approx(
            3.0, rel=2e-2
        )

    @pytest.mark.parametrize("d", [4, 5])
    def test_unit_cube_by_quadrature(self, d):
        """Test that V1 of the unit d-cube is d."""
        value, method = v1_with_method(box((1.0,) * d))
        assert method == "quadrature"
        assert value == pytest.approx(float(d), rel=1e-4)

    def test_box_in_four_dimensions(self):
        """Test that V1 of a 4-box is the sum of its sides."""
        assert v1(box((1.0, 2.0, 3.0, 4.0))) == pytest.approx(10.0, rel=1e-4)

    def test_rotated_cube_in_four_dimensions(self):
        """Test the quadrature when the faces are not on coordinate planes."""
        cube = linear_map(box((1.0,) * 4), random_rotation(4, seed=3))
        assert v1(cube) == pytest.approx(4.0, rel=1e-3)

    def test_flat_body_in_five_dimensions(self):
        """Test that a 4-dimensional box inside R^5 is integrated in its own hull."""
        flat = ConvexPolytope(np.hstack([box((1.0,) * 4).vertices, np.zeros((16, 1))]))
        assert v1(flat) == pytest.approx(4.0, rel=1e-3)

    def test_quadrature_reports_non_convergence(self):
        """Test that an unreachable tolerance raises ConvergenceError."""
        with pytest.raises(ConvergenceError):
            v1_quadrature(
                _local_coordinates(cross_polytope(3)), relative_tol=1e-300, max_nodes=2**16
            )

    @settings(max_examples=15, deadline=None)
    @given(st.floats(min_value=0.1, max_value=5.0))
    def test_v1_is_homogeneous(self, lam):
        """Test V1(lam K) = lam V1(K)."""
        K = simplex_regular(3)
        assert v1(ConvexPolytope(K.vertices * lam)) == pytest.approx(lam * v1(K), rel=1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_v1_at_least_twice_circumradius(self, seed):
        """Test V1(K) >= 2 R(K) on random bodies."""
        K = random_polytope(3, 9, seed=seed)
        assert v1(K) >= 2.0 * circumradius(K) - 1e-9


class TestRadii:
    """Tests for circumradius, diameter, inradius, widths and chords."""

    def test_cube_circumradius_and_diameter(self):
        """Test circumradius and diameter of the unit cube."""
        cube = box((1.0, 1.0, 1.0))
        assert circumradius(cube) == pytest.approx(math.sqrt(3.0) / 2.0)
        assert diameter(cube) == pytest.approx(math.sqrt(3.0))

    def test_equilateral_triangle_circumradius(self):
        """Test R = 1 for a triangle inscribed in the unit circle."""
        assert circumradius(regular_polygon(3)) == pytest.approx(1.0)

    def test_obtuse_triangle_circumradius(self):
        """Test that an obtuse triangle's ball has the long side as diameter."""
        T = ConvexPolytope([[-1.0, 0.0], [1.0, 0.0], [0.0, 0.2]])
        assert circumradius(T) == pytest.approx(1.0)

    def test_diameter_pair(self):
        """Test the endpoints of a diameter."""
        y1, y2, length = diameter_pair(segment((1.0, 0.0), 4.0))
        assert length == pytest.approx(4.0)
        assert np.linalg.norm(y2 - y1) == pytest.approx(4.0)

    def test_chebyshev_ball_of_square(self):
        """Test the inradius of the unit square."""
        center, radius = chebyshev_ball(box((1.0, 1.0)))
        assert radius == pytest.approx(0.5)
        assert np.allclose(center, 0.5)

    def test_chebyshev_ball_of_flat_body(self):
        """Test that a lower-dimensional body has inradius zero."""
        assert chebyshev_ball(segment((1.0, 0.0), 1.0))[1] == 0.0

    def test_inradius_projection(self):
        """Test the inradius of the projection of a box."""
        assert inradius_projection(box((1.0, 2.0, 3.0)), (0.0, 0.0, 1.0)) == pytest.approx(0.5)

    def test_minimal_width_of_box(self):
        """Test that the minimal width of a box is its shortest side."""
        v, w = minimal_width(box((3.0, 1.0, 2.0)))
        assert w == pytest.approx(1.0)
        assert abs(v[1]) == pytest.approx(1.0)

    def test_minimal_width_of_flat_body(self):
        """Test that a flat body has minimal width zero along its normal."""
        square = ConvexPolytope([[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]])
        v, w = minimal_width(square)
        assert w == pytest.approx(0.0, abs=1e-12)
        assert abs(v[2]) == pytest.approx(1.0)

    def test_minimal_width_of_equilateral_triangle(self):
        """Test that the minimal width of a triangle is its smallest height."""
        T = regular_polygon(3)
        assert minimal_width(T)[1] == pytest.approx(1.5)

    def test_chord_length(self):
        """Test longest chords of the cube and the octahedron."""
        assert chord_length(box((1.0, 1.0, 1.0)), (1.0, 0.0, 0.0)) == pytest.approx(1.0)
        assert chord_length(cross_polytope(3), (0.0, 0.0, 1.0)) == pytest.approx(2.0)


class TestFunctionalReport:
    """Tests for functional_report."""

    def test_all_functionals(self):
        """Test the full report for the unit cube."""
        report = functional_report(box((1.0, 1.0, 1.0)))
        assert report.volume == pytest.approx(1.0)
        assert report.surface_area == pytest.approx(6.0)
        assert report.v1 == pytest.approx(3.0)
        assert report.v_nminus1 == pytest.approx(3.0)
        assert report.method_tags["circumradius"] == "exact"
        assert report.invariant_violations() == {}

    def test_subset(self):
        """Test that only requested functionals are reported."""
        data = functional_report(box((1.0, 1.0)), ["v1", "diam"]).to_dict()
        assert set(data) == {"v1", "diameter", "method_tags"}

    def test_unknown_functional(self):
        """Test that unknown names are rejected."""
        with pytest.raises(InvalidParameterError):
            functional_report(box((1.0, 1.0)), ["volume"])
