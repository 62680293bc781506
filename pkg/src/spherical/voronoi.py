"""Intrinsic volume of spherical point hulls and their nearest-point partition."""

import logging
from typing import List, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial.distance import pdist

from src.errors import DimensionMismatchError, InvalidParameterError, PreconditionError
from src.spherical.constants import kappa
from src.spherical.quadrature import SphericalQuadrature, sample_sphere

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-9


def origin_in_hull(points: np.ndarray) -> bool:
    """Whether the origin lies in conv(points), decided by an LP feasibility problem."""
    points = np.asarray(points, dtype=float)
    k, n = points.shape
    a_eq = np.vstack([points.T, np.ones((1, k))])
    b_eq = np.concatenate([np.zeros(n), [1.0]])
    result = linprog(
        np.zeros(k), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * k, method="highs"
    )
    return bool(result.status == 0)


def _sites(points: Sequence[Sequence[float]], quadrature: SphericalQuadrature) -> np.ndarray:
    sites = np.atleast_2d(np.asarray(points, dtype=float))
    if sites.shape[1] != quadrature.n:
        raise DimensionMismatchError(quadrature.n, sites.shape[1], "points")
    norms = np.linalg.norm(sites, axis=1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise InvalidParameterError("points must lie on the unit sphere")
    if not origin_in_hull(sites):
        raise PreconditionError("the origin does not lie in the convex hull of the points")
    return sites


def _hull_support(sites: np.ndarray, quadrature: SphericalQuadrature) -> np.ndarray:
    return np.max(quadrature.nodes @ sites.T, axis=1)


def v1_spherical_hull(
    points: Sequence[Sequence[float]], quadrature: SphericalQuadrature
) -> float:
    """First intrinsic volume of conv(points) for points on the unit sphere.

    Computed as (1 / kappa_{n-1}) times the integral of the hull's support function.

    Raises:
        PreconditionError: The origin is outside the hull
    """
    sites = _sites(points, quadrature)
    return quadrature.integrate(_hull_support(sites, quadrature)) / kappa(quadrature.n - 1)


def v1_spherical_hull_stderr(
    points: Sequence[Sequence[float]], quadrature: SphericalQuadrature
) -> float:
    """Standard error of v1_spherical_hull; zero for product rules."""
    sites = _sites(points, quadrature)
    values = _hull_support(sites, quadrature)
    return quadrature.standard_error(values) / kappa(quadrature.n - 1)


def _cell_labels(sites: np.ndarray, quadrature: SphericalQuadrature) -> np.ndarray:
    # Ties go to the lowest index.
    return np.argmax(quadrature.nodes @ sites.T, axis=1)


def dv_partition_moment(
    points: Sequence[Sequence[float]], quadrature: SphericalQuadrature
) -> List[float]:
    """Per-cell moments (1 / kappa_{n-1}) int_{cell_i} <u, x_i> of the nearest-point partition."""
    sites = _sites(points, quadrature)
    inner = quadrature.nodes @ sites.T
    labels = np.argmax(inner, axis=1)
    chosen = inner[np.arange(labels.size), labels]
    norm = kappa(quadrature.n - 1)
    return [
        quadrature.integrate(np.where(labels == i, chosen, 0.0)) / norm
        for i in range(sites.shape[0])
    ]


def dv_cell_measures(
    points: Sequence[Sequence[float]], quadrature: SphericalQuadrature
) -> List[float]:
    """Spherical measure of each nearest-point cell."""
    sites = _sites(points, quadrature)
    labels = _cell_labels(sites, quadrature)
    return [
        quadrature.integrate((labels == i).astype(float)) for i in range(sites.shape[0])
    ]


def random_admissible_sites(
    n: int, k: int, seed: int, max_tries: int = 1000
) -> np.ndarray:
    """k uniform points on S^{n-1} whose hull contains the origin.

    Raises:
        InvalidParameterError: k < 2
        PreconditionError: k <= n, or no admissible set found within max_tries draws
    """
    if k < 2:
        raise InvalidParameterError(f"need at least two points, got {k}")
    if k <= n:
        # k <= n random points lie in an open half-sphere almost surely.
        raise PreconditionError(
            f"need more than n={n} points to surround the origin, got {k}"
        )
    children = np.random.SeedSequence(seed).spawn(max_tries)
    for attempt, child in enumerate(children):
        sites = sample_sphere(n, k, int(child.generate_state(1)[0]))
        if origin_in_hull(sites):
            logger.debug(f"Admissible sites found after {attempt + 1} draws")
            return sites
    raise PreconditionError(f"no admissible point set found in {max_tries} draws")


def site_diameter(points: np.ndarray) -> float:
    """Largest pairwise distance of the sites."""
    return float(np.max(pdist(np.asarray(points, dtype=float))))
