"""Minimum enclosing ball of a finite point set."""

import itertools
import logging
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize, nnls

from src.errors import ConvergenceError, InvalidParameterError

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_POINTS = 40
EXHAUSTIVE_MAX_DIM = 4
BARYCENTRIC_TOL = 1e-10
CONTAINMENT_TOL = 1e-10
ACTIVE_TOL = 1e-6
MAX_CONDITION = 1e12

Ball = Tuple[np.ndarray, float]


def circumsphere(points: np.ndarray) -> Optional[Tuple[np.ndarray, float, np.ndarray]]:
    """Circumscribed sphere of affinely independent points within their affine hull.

    Args:
        points: Array of shape (k, n), k <= n + 1

    Returns:
        (center, radius, barycentric coordinates of the center), or None when the
        points are affinely dependent
    """
    p0 = points[0]
    if points.shape[0] == 1:
        return p0.copy(), 0.0, np.ones(1)
    edges = points[1:] - p0
    gram = edges @ edges.T
    if np.linalg.cond(gram) > MAX_CONDITION:
        return None
    coeffs = np.linalg.solve(gram, 0.5 * np.diag(gram))
    center = p0 + coeffs @ edges
    barycentric = np.concatenate([[1.0 - coeffs.sum()], coeffs])
    return center, float(np.linalg.norm(center - p0)), barycentric


def exhaustive_ball(points: np.ndarray) -> Ball:
    """Smallest enclosing ball by search over support sets of size at most n + 1.

    A support set qualifies when its circumcenter lies in its convex hull; the
    first qualifying set that encloses every point gives the optimal ball.

    Raises:
        InvalidParameterError: More than 40 points or dimension above 4
    """
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    m, n = pts.shape
    if m > EXHAUSTIVE_MAX_POINTS or n > EXHAUSTIVE_MAX_DIM:
        raise InvalidParameterError(
            f"exhaustive search limited to {EXHAUSTIVE_MAX_POINTS} points in "
            f"dimension <= {EXHAUSTIVE_MAX_DIM}, got {m} points in dimension {n}"
        )
    if m == 1:
        return pts[0].copy(), 0.0
    scale = max(1.0, float(np.max(np.abs(pts))))
    subsets = 0
    for size in range(2, min(n + 1, m) + 1):
        for idx in itertools.combinations(range(m), size):
            subsets += 1
            result = circumsphere(pts[list(idx)])
            if result is None:
                continue
            center, radius, barycentric = result
            if barycentric.min() < -BARYCENTRIC_TOL:
                continue
            if np.all(np.linalg.norm(pts - center, axis=1) <= radius + CONTAINMENT_TOL * scale):
                logger.debug(f"Exhaustive ball found after {subsets} support sets")
                return center, radius
    raise ConvergenceError(f"no enclosing support set among {subsets} candidates")


def _in_convex_hull(points: np.ndarray, x: np.ndarray, tol: float) -> bool:
    system = np.vstack([points.T, np.ones((1, points.shape[0]))])
    target = np.concatenate([x, [1.0]])
    _, residual = nnls(system, target)
    return bool(residual <= tol)


def _dual_ball(points: np.ndarray) -> Ball:
    """Ball from the dual quadratic program over the simplex of point weights."""
    m = points.shape[0]
    shift = points.mean(axis=0)
    centred = points - shift
    gram = centred @ centred.T
    sq = np.diag(gram).copy()

    def objective(lam: np.ndarray) -> float:
        return float(lam @ gram @ lam - lam @ sq)

    def gradient(lam: np.ndarray) -> np.ndarray:
        return 2.0 * gram @ lam - sq

    result = minimize(
        objective,
        np.full(m, 1.0 / m),
        jac=gradient,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * m,
        constraints=[{"type": "eq", "fun": lambda lam: lam.sum() - 1.0}],
        options={"ftol": 1e-15, "maxiter": 1000},
    )
    lam = np.clip(result.x, 0.0, None)
    lam = lam / lam.sum()
    center = lam @ centred
    radius = float(np.max(np.linalg.norm(centred - center, axis=1)))

    scale = max(1.0, float(np.max(np.abs(centred))))
    active = np.flatnonzero(lam > ACTIVE_TOL * lam.max())
    edges = centred[active[1:]] - centred[active[0]]
    if edges.shape[0] > 0:
        gram_a = edges @ edges.T
        coeffs = np.linalg.lstsq(gram_a, 0.5 * np.diag(gram_a), rcond=None)[0]
        refined = centred[active[0]] + coeffs @ edges
        refined_radius = float(np.max(np.linalg.norm(centred - refined, axis=1)))
        spread = np.linalg.norm(centred[active] - refined, axis=1)
        if (
            np.ptp(spread) <= 1e-9 * scale
            and refined_radius <= float(spread.max()) + 1e-9 * scale
            and _in_convex_hull(centred[active], refined, 1e-8 * scale)
        ):
            return refined + shift, refined_radius
    logger.warning(
        f"Active-set verification failed for the enclosing ball of {m} points; "
        f"using the optimizer's center"
    )
    return center + shift, radius


def enclosing_ball(points: np.ndarray, method: str = "auto") -> Ball:
    """Minimum enclosing ball of the rows of points.

    Args:
        points: Array of shape (k, n)
        method: "exhaustive", "qp" or "auto" (exhaustive for n <= 4 and k <= 40)

    Returns:
        (center, radius)
    """
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    m, n = pts.shape
    if m == 1:
        return pts[0].copy(), 0.0
    if method == "auto":
        small = m <= EXHAUSTIVE_MAX_POINTS and n <= EXHAUSTIVE_MAX_DIM
        method = "exhaustive" if small else "qp"
    if method == "exhaustive":
        return exhaustive_ball(pts)
    if method == "qp":
        return _dual_ball(pts)
    raise InvalidParameterError(f"unknown enclosing-ball method: {method}")
