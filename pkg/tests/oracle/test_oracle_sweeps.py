"""Long randomized sweeps comparing fast functionals with their oracles."""

import math

import pytest

from src.bodies.generators import isosceles, random_polytope
from src.functionals.functionals import circumradius, mixed_volume_1, mixed_volume_oracle, v1
from src.inequalities.reports import (
    check_betke_weil,
    check_linhart,
    check_minkowski,
    check_reverse_minkowski,
)
from src.oracle.oracles import mc_v1, meb_exhaustive
from src.spherical.profile import stability_constants
from src.spherical.quadrature import monte_carlo_quadrature
from src.spherical.voronoi import (
    random_admissible_sites,
    site_diameter,
    v1_spherical_hull,
    v1_spherical_hull_stderr,
)

pytestmark = pytest.mark.oracle


class TestInequalitySweeps:
    """Inequalities on many random pairs."""

    @pytest.mark.parametrize("n", [2, 3])
    def test_random_pairs(self, n):
        """Test every inequality on 500 random pairs."""
        for seed in range(500):
            K = random_polytope(n, n + 2 + seed % 7, seed=seed)
            M = random_polytope(n, n + 3 + seed % 5, seed=10_000 + seed)
            reports = [check_minkowski(K, M), check_reverse_minkowski(K, M), check_linhart(K)]
            if n == 2:
                reports.append(check_betke_weil(K, M))
            for report in reports:
                assert report.deficit >= -1e-9, (report.name, seed)


class TestOracleEquivalence:
    """Fast functionals against their oracles."""

    @pytest.mark.parametrize("n", [2, 3])
    def test_mixed_volume(self, n):
        """Test the mixed volume against the polynomial fit on 200 pairs."""
        for seed in range(200):
            K = random_polytope(n, n + 3, seed=seed)
            M = random_polytope(n, n + 4, seed=20_000 + seed)
            assert mixed_volume_1(K, M) == pytest.approx(mixed_volume_oracle(K, M), rel=1e-7)

    @pytest.mark.parametrize("n", [2, 3])
    def test_circumradius(self, n):
        """Test the circumradius against exhaustive search on 200 bodies."""
        for seed in range(200):
            P = random_polytope(n, 10, seed=30_000 + seed)
            assert circumradius(P) == pytest.approx(meb_exhaustive(P.vertices)[1], rel=1e-9)

    @pytest.mark.parametrize("n", [2, 3])
    def test_v1(self, n, oracle_budget):
        """Test closed-form V1 against Monte Carlo within 4 standard errors."""
        for seed in range(20):
            P = random_polytope(n, 8, seed=40_000 + seed)
            estimate, stderr = mc_v1(P, oracle_budget, seed=seed)
            assert abs(v1(P) - estimate) <= 4.0 * stderr


class TestSphericalHullSweeps:
    """The lower bounds for hulls of unit points."""

    @pytest.mark.parametrize("n", [2, 3])
    def test_random_admissible_sets(self, n, oracle_budget):
        """Test V1 >= 2 + c3 sqrt(eta) - 3 sigma on 100 random admissible sets."""
        c3 = stability_constants(n).c3_est
        for seed in range(100):
            sites = random_admissible_sites(n, n + 1 + seed % 6, seed=seed)
            quad = monte_carlo_quadrature(n, oracle_budget, seed=50_000 + seed)
            value = v1_spherical_hull(sites, quad)
            sigma = v1_spherical_hull_stderr(sites, quad)
            eta = max(0.0, 2.0 - site_diameter(sites))
            assert value >= 2.0 + c3 * math.sqrt(eta) - 3.0 * sigma


class TestStabilityScaling:
    """Scaling of the certified tube."""

    def test_isosceles_deficits(self):
        """Test that the Linhart deficit of the isosceles family is of order t^2."""
        for t in (0.02, 0.05, 0.1, 0.2, 0.3):
            assert check_linhart(isosceles(t)).deficit == pytest.approx(
                math.sqrt(1.0 + t * t) - 1.0
            )
