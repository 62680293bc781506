"""Tests for the surface area measure."""

import math

import numpy as np
import pytest

from src.bodies.generators import box, point, random_polytope, regular_polygon, segment
from src.bodies.polytope import ConvexPolytope, normalize
from src.errors import InvalidParameterError
from src.functionals.functionals import projection_volume
from src.measures.surface_area import (
    SurfaceAreaMeasure,
    integrate_abs_cos,
    integrate_support,
    surface_area_measure,
    total_mass,
)


class TestSurfaceAreaMeasure:
    """Tests for surface_area_measure."""

    def test_unit_cube(self):
        """Test six unit atoms at +-e_i."""
        S = surface_area_measure(box((1.0, 1.0, 1.0)))
        assert len(S) == 6
        assert total_mass(S) == pytest.approx(6.0)
        assert np.allclose(np.abs(S.normals).sum(axis=1), 1.0)

    def test_measure_is_closed(self):
        """Test that sum(mass * normal) vanishes."""
        S = surface_area_measure(random_polytope(3, 20, seed=6))
        assert S.closure_defect() <= 1e-9 * total_mass(S)

    def test_square_in_plane(self):
        """Test that a square in R^3 gives two antipodal atoms."""
        square = ConvexPolytope([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])
        S = surface_area_measure(square)
        assert len(S) == 2
        assert np.allclose(S.masses, 1.0)
        assert np.allclose(np.abs(S.normals[:, 2]), 1.0)

    def test_segment_in_plane(self):
        """Test that a planar segment has atoms of mass equal to its length."""
        S = surface_area_measure(segment((1.0, 0.0), 2.0))
        assert np.allclose(S.masses, 2.0)
        assert total_mass(S) == pytest.approx(4.0)

    def test_low_dimensional_body_gives_zero_measure(self):
        """Test that a segment in R^3 has the zero measure."""
        assert surface_area_measure(segment((0.0, 0.0, 1.0), 1.0)).is_empty()
        assert surface_area_measure(point((0.0, 0.0, 0.0))).is_empty()

    def test_polygon_perimeter(self):
        """Test that the total mass of a regular hexagon is its perimeter."""
        S = surface_area_measure(regular_polygon(6))
        assert total_mass(S) == pytest.approx(6.0)

    def test_dict_round_trip(self):
        """Test serialization of the measure."""
        S = surface_area_measure(box((1.0, 2.0)))
        T = SurfaceAreaMeasure.from_dict(S.to_dict())
        assert np.array_equal(S.normals, T.normals)
        assert np.array_equal(S.masses, T.masses)

    def test_rejects_non_positive_masses(self):
        """Test that masses must be positive."""
        with pytest.raises(InvalidParameterError):
            SurfaceAreaMeasure(np.array([[1.0, 0.0]]), [0.0], 2)


class TestIntegrals:
    """Tests for integrals against the measure."""

    def test_integrate_support_gives_n_times_volume(self):
        """Test that integrating h_P against S(P) gives n V(P)."""
        P = box((1.0, 2.0, 3.0), centered=True)
        assert integrate_support(surface_area_measure(P), P) == pytest.approx(18.0)

    def test_abs_cos_gives_twice_the_projection(self):
        """Test that integrating |<e, u>| gives twice the projection area."""
        P = box((1.0, 2.0, 3.0))
        S = surface_area_measure(P)
        assert integrate_abs_cos(S, (0.0, 0.0, 1.0)) == pytest.approx(4.0)
        e = np.array([1.0, 1.0, 0.0]) / math.sqrt(2.0)
        assert integrate_abs_cos(S, e) == pytest.approx(2.0 * 3.0 * (2.0 + 1.0) / math.sqrt(2.0))


class TestMeasureInvariants:
    """Tests for identities and continuity of the measure."""

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_projection_identity_on_random_bodies(self, n):
        """Test int |<e, u>| dS(P, u) = 2 V_{n-1}(P | e^perp) on 50 random pairs."""
        rng = np.random.default_rng(40 + n)
        for trial in range(50):
            P = random_polytope(n, n + 2 + trial % 6, seed=1000 * n + trial)
            e = rng.standard_normal(n)
            e /= np.linalg.norm(e)
            S = surface_area_measure(P)
            assert integrate_abs_cos(S, e) == pytest.approx(
                2.0 * projection_volume(P, e), rel=1e-8
            )

    @pytest.mark.parametrize(
        "body",
        [box((1.0, 2.0, 3.0), centered=True), random_polytope(3, 12, seed=8)],
        ids=["box", "random"],
    )
    def test_integrals_are_continuous_under_small_perturbation(self, body):
        """Test that moving the vertices by 1e-9 moves the integrals by O(1e-9)."""
        rng = np.random.default_rng(9)
        noise = 1e-9 * rng.standard_normal(body.vertices.shape)
        moved = ConvexPolytope(body.vertices + noise)
        K = random_polytope(3, 10, seed=10)
        S, T = surface_area_measure(body), surface_area_measure(moved)
        expected = integrate_support(S, K)
        assert integrate_support(T, K) == pytest.approx(expected, abs=1e-6)
        assert total_mass(T) == pytest.approx(total_mass(S), abs=1e-6)
        for _ in range(10):
            e = normalize(rng.standard_normal(3))
            expected = integrate_abs_cos(S, e)
            assert integrate_abs_cos(T, e) == pytest.approx(expected, abs=1e-6)
