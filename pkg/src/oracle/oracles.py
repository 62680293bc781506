"""Brute-force reference computations for cross-checking the fast paths."""

import itertools
import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.bodies.polytope import ConvexPolytope, hyperplane_basis, width
from src.errors import InvalidParameterError
from src.functionals.enclosing_ball import exhaustive_ball
from src.functionals.functionals import (
    circumradius,
    minimal_width,
    mixed_volume_1,
    mixed_volume_oracle,
    v1,
    volume,
)
from src.measures.facets import enumerate_facets
from src.spherical.constants import kappa
from src.spherical.quadrature import make_quadrature, sample_sphere

logger = logging.getLogger(__name__)

MIN_MC_SAMPLES = 10_000
WIDTH_GRID_POINTS = 4096
WIDTH_STEP_TOL = 1e-10
MC_SIGMAS = 4.0
EXACT_REL_TOL = 1e-9
FIT_REL_TOL = 1e-7


@dataclass
class OracleComparison:
    """A fast value next to its brute-force reference."""

    quantity: str
    fast_value: float
    oracle_value: float
    rel_err: float
    budget: int
    stderr: Optional[float] = None
    passed: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the comparison."""
        return asdict(self)


def compare(
    quantity: str,
    fast_value: float,
    oracle_value: float,
    budget: int,
    stderr: Optional[float] = None,
    rel_tol: float = EXACT_REL_TOL,
) -> OracleComparison:
    """Build an OracleComparison.

    Monte Carlo references (with stderr) pass within 4 standard errors, exact
    references within rel_tol.
    """
    rel_err = abs(fast_value - oracle_value) / max(abs(oracle_value), 1e-300)
    if stderr is not None:
        passed = abs(fast_value - oracle_value) <= MC_SIGMAS * stderr + 1e-12
    else:
        passed = rel_err <= rel_tol or abs(fast_value - oracle_value) <= 1e-12
    return OracleComparison(
        quantity=quantity,
        fast_value=float(fast_value),
        oracle_value=float(oracle_value),
        rel_err=float(rel_err),
        budget=int(budget),
        stderr=stderr,
        passed=bool(passed),
    )


def mc_v1(
    P: ConvexPolytope, samples: int, seed: int, workers: int = 1
) -> Tuple[float, float]:
    """Monte Carlo V_1 as (n kappa_n / kappa_{n-1}) times the mean support value.

    Returns:
        (estimate, standard error)
    """
    if samples < MIN_MC_SAMPLES:
        raise InvalidParameterError(f"mc_v1 needs at least {MIN_MC_SAMPLES} samples")
    n = P.dim_ambient
    directions = sample_sphere(n, samples, seed, workers)
    values = np.max(directions @ P.vertices.T, axis=1)
    factor = n * kappa(n) / kappa(n - 1)
    estimate = factor * float(np.mean(values))
    stderr = factor * float(np.std(values, ddof=1)) / math.sqrt(samples)
    return estimate, stderr


def meb_exhaustive(points: np.ndarray) -> Tuple[np.ndarray, float]:
    """Exact minimum enclosing ball of at most 40 points in dimension at most 4."""
    return exhaustive_ball(np.asarray(points, dtype=float))


def volume_mc(P: ConvexPolytope, samples: int, seed: int) -> Tuple[float, float]:
    """Hit-or-miss volume estimate inside the bounding box.

    Returns:
        (estimate, standard error)
    """
    n = P.dim_ambient
    if P.affine_dim < n:
        raise InvalidParameterError("volume_mc needs a full-dimensional body")
    if samples < 1:
        raise InvalidParameterError(f"sample count must be positive, got {samples}")
    lo = P.vertices.min(axis=0)
    hi = P.vertices.max(axis=0)
    box_volume = float(np.prod(hi - lo))
    facets = enumerate_facets(P.vertices)
    rng = np.random.default_rng(seed)
    points = rng.uniform(lo, hi, (samples, n))
    inside = np.all(points @ facets.normals.T <= facets.offsets, axis=1)
    fraction = float(np.mean(inside))
    stderr = box_volume * math.sqrt(fraction * (1.0 - fraction) / samples)
    return box_volume * fraction, stderr


def _width_grid(n: int, count: int) -> np.ndarray:
    if n == 2:
        angles = math.pi * np.arange(count) / count
        return np.column_stack([np.cos(angles), np.sin(angles)])
    if n == 3:
        # Fibonacci lattice.
        i = np.arange(count) + 0.5
        z = 1.0 - 2.0 * i / count
        phi = math.pi * (1.0 + math.sqrt(5.0)) * i
        s = np.sqrt(1.0 - z * z)
        return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])
    level = 0
    while len(make_quadrature(n, level + 1)) <= count:
        level += 1
    return make_quadrature(n, level).nodes


def _pattern(basis: np.ndarray) -> List[np.ndarray]:
    """Compass and diagonal moves in the tangent space spanned by basis."""
    moves = [sign * b for b in basis for sign in (1.0, -1.0)]
    for i, j in itertools.combinations(range(basis.shape[0]), 2):
        for si in (1.0, -1.0):
            for sj in (1.0, -1.0):
                moves.append((si * basis[i] + sj * basis[j]) / math.sqrt(2.0))
    return moves


def width_min_grid(
    M: ConvexPolytope, grid_points: int = WIDTH_GRID_POINTS
) -> Tuple[np.ndarray, float]:
    """Minimal width by a coarse direction grid and coordinate-descent refinement."""
    n = M.dim_ambient
    grid = _width_grid(n, grid_points)
    proj = grid @ M.vertices.T
    widths = proj.max(axis=1) - proj.min(axis=1)
    best = int(np.argmin(widths))
    v = grid[best]
    w = float(widths[best])
    step = math.pi / math.sqrt(grid_points)
    iterations = 0
    while step > WIDTH_STEP_TOL and iterations < 100_000:
        improved = False
        for d in _pattern(hyperplane_basis(v)):
            candidate = v + step * d
            candidate = candidate / np.linalg.norm(candidate)
            cw = width(M, candidate)
            if cw < w:
                v, w, improved = candidate, cw, True
        if not improved:
            step /= 2.0
        iterations += 1
    logger.debug(f"Width grid oracle converged after {iterations} sweeps: {w!r}")
    return v, w


def run_oracle_suite(
    K: ConvexPolytope,
    M: Optional[ConvexPolytope] = None,
    samples: int = 100_000,
    seed: int = 12345,
    workers: int = 1,
) -> List[OracleComparison]:
    """Compare every applicable fast functional of K (and the pair K, M) with its oracle."""
    comparisons = []
    n = K.dim_ambient
    estimate, stderr = mc_v1(K, max(samples, MIN_MC_SAMPLES), seed, workers)
    comparisons.append(compare("v1", v1(K), estimate, samples, stderr=stderr))
    if len(K) <= 40 and n <= 4:
        radius = meb_exhaustive(K.vertices)[1]
        comparisons.append(compare("circumradius", circumradius(K), radius, len(K)))
    if K.affine_dim == n:
        estimate, stderr = volume_mc(K, samples, seed)
        comparisons.append(compare("volume", volume(K), estimate, samples, stderr=stderr))
        if n in (2, 3):
            fast = minimal_width(K)[1]
            comparisons.append(
                compare("min_width", fast, width_min_grid(K)[1], WIDTH_GRID_POINTS, rel_tol=1e-6)
            )
    if M is not None and n <= 4:
        comparisons.append(
            compare(
                "mixed_volume",
                mixed_volume_1(K, M),
                mixed_volume_oracle(K, M),
                n + 1,
                rel_tol=FIT_REL_TOL,
            )
        )
    return comparisons
