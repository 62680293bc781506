"""Constructors for the polytope families used in checks and sweeps."""

import itertools
import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.stats import special_ortho_group

from src.bodies.polytope import (
    ArrayLike,
    ConvexPolytope,
    as_direction,
    as_vector,
    hyperplane_basis,
)
from src.errors import InvalidParameterError

logger = logging.getLogger(__name__)

# Interior points of a perturbed segment stay this far from the endpoints.
PERTURBED_SEGMENT_SPAN = 0.45
PERTURBED_SEGMENT_POINTS = 6


def _require_positive(name: str, value: float) -> float:
    if not np.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be positive, got {value}")
    return float(value)


def _require_dim(n: int, minimum: int = 1) -> int:
    if not isinstance(n, (int, np.integer)) or n < minimum:
        raise InvalidParameterError(f"dimension must be an integer >= {minimum}, got {n}")
    return int(n)


def unit_vector(n: int, i: int) -> np.ndarray:
    """Standard basis vector e_i (0-based) in R^n."""
    e = np.zeros(_require_dim(n))
    e[i] = 1.0
    return e


def point(x: ArrayLike) -> ConvexPolytope:
    """The single-point body {x}."""
    return ConvexPolytope([as_vector(x)])


def segment(e: ArrayLike, length: float) -> ConvexPolytope:
    """Segment of the given length along the unit vector e, centred at the origin."""
    u = as_direction(e)
    half = _require_positive("length", length) / 2.0
    return ConvexPolytope([-half * u, half * u])


def box(sides: Sequence[float], centered: bool = False) -> ConvexPolytope:
    """Axis-parallel box with the given side lengths.

    Args:
        sides: Side lengths a_1, ..., a_n, all positive
        centered: Centre the box at the origin instead of using [0, a_i]
    """
    a = np.array([_require_positive("side", s) for s in sides])
    corners = np.array(list(itertools.product((0.0, 1.0), repeat=a.size))) * a
    if centered:
        corners = corners - a / 2.0
    return ConvexPolytope(corners)


def isosceles(t: float) -> ConvexPolytope:
    """Triangle with base [(-1, 0), (1, 0)] and apex (0, t)."""
    height = _require_positive("t", t)
    return ConvexPolytope([[-1.0, 0.0], [1.0, 0.0], [0.0, height]])


def regular_polygon(k: int, radius: float = 1.0) -> ConvexPolytope:
    """Regular k-gon inscribed in the circle of the given radius."""
    if k < 3:
        raise InvalidParameterError(f"a polygon needs at least 3 vertices, got {k}")
    rho = _require_positive("radius", radius)
    angles = 2.0 * np.pi * np.arange(k) / k
    return ConvexPolytope(rho * np.column_stack([np.cos(angles), np.sin(angles)]))


def simplex_regular(n: int) -> ConvexPolytope:
    """Regular n-simplex with edge length sqrt(2), centred at the origin."""
    n = _require_dim(n)
    c = (1.0 - math.sqrt(n + 1.0)) / n
    vertices = np.vstack([np.eye(n), np.full((1, n), c)])
    return ConvexPolytope(vertices - vertices.mean(axis=0))


def cross_polytope(n: int) -> ConvexPolytope:
    """The cross-polytope conv{+-e_i}."""
    n = _require_dim(n)
    eye = np.eye(n)
    return ConvexPolytope(np.vstack([eye, -eye]))


def random_polytope(n: int, k: int, seed: int) -> ConvexPolytope:
    """Hull of k standard Gaussian points in R^n."""
    n = _require_dim(n)
    if k < n + 1:
        raise InvalidParameterError(f"need at least {n + 1} points in dimension {n}, got {k}")
    rng = np.random.default_rng(seed)
    return ConvexPolytope(rng.standard_normal((k, n)))


def random_rotation(n: int, seed: int) -> np.ndarray:
    """Haar-random rotation matrix in SO(n)."""
    n = _require_dim(n)
    if n == 1:
        return np.eye(1)
    return np.asarray(special_ortho_group.rvs(dim=n, random_state=seed))


def perturbed_segment(
    length: float,
    delta: float,
    seed: int,
    n: int = 2,
    direction: Optional[ArrayLike] = None,
) -> ConvexPolytope:
    """A segment thickened by interior points at distance at most delta from its axis.

    Args:
        length: Length of the central segment
        delta: Maximal offset of each perpendicular coordinate; 0 gives the segment
        seed: Seed for the offsets
        n: Ambient dimension
        direction: Unit axis direction, e_1 by default
    """
    n = _require_dim(n, 2)
    length = _require_positive("length", length)
    if not np.isfinite(delta) or delta < 0:
        raise InvalidParameterError(f"delta must be >= 0, got {delta}")
    axis = unit_vector(n, 0) if direction is None else as_direction(direction, n)
    perp = hyperplane_basis(axis)
    rng = np.random.default_rng(seed)
    span = PERTURBED_SEGMENT_SPAN * length
    positions = rng.uniform(-span, span, PERTURBED_SEGMENT_POINTS)
    offsets = rng.uniform(-delta, delta, (PERTURBED_SEGMENT_POINTS, n - 1)) @ perp
    interior = positions[:, None] * axis + offsets
    ends = np.array([-0.5 * length * axis, 0.5 * length * axis])
    return ConvexPolytope(np.vstack([ends, interior]))


def remark_body(n: int, lam: float, eps: float) -> ConvexPolytope:
    """Cross-polytope with semi-axes sqrt(eps), lam and n in the remaining coordinates.

    Its surface measure concentrates near +-e_1, yet the projection inradius along a
    direction close to e_1 stays of order one while the width grows with lam.
    """
    n = _require_dim(n, 2)
    lam = _require_positive("lambda", lam)
    if not 0 < eps < 1:
        raise InvalidParameterError(f"eps must lie in (0, 1), got {eps}")
    semi_axes = np.full(n, float(n))
    semi_axes[0] = math.sqrt(eps)
    semi_axes[1] = lam
    diag = np.diag(semi_axes)
    return ConvexPolytope(np.vstack([diag, -diag]))


def remark_direction(n: int, eps: float) -> np.ndarray:
    """Unit vector (1 - eps/2) e_1 + sqrt(1 - (1 - eps/2)^2) e_2."""
    n = _require_dim(n, 2)
    if not 0 < eps < 1:
        raise InvalidParameterError(f"eps must lie in (0, 1), got {eps}")
    a = 1.0 - eps / 2.0
    e = np.zeros(n)
    e[0] = a
    e[1] = math.sqrt(1.0 - a * a)
    return e
