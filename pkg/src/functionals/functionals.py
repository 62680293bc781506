"""Functionals of convex polytopes.

Volumes use Qhull's simplex decomposition. V1 is evaluated in the affine hull
of the body: closed forms up to dimension three, a refined product quadrature
of the support function beyond that.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist, squareform

from src.bodies.polytope import (
    ArrayLike,
    ConvexPolytope,
    affine_frame,
    as_direction,
    minkowski_sum,
    negate,
    project,
    scale,
)
from src.errors import (
    ConvergenceError,
    DegenerateHullError,
    DimensionMismatchError,
    InvalidParameterError,
)
from src.functionals.enclosing_ball import enclosing_ball
from src.measures.facets import enumerate_facets
from src.measures.surface_area import (
    integrate_support,
    surface_area_measure,
    total_mass,
)
from src.spherical.constants import kappa
from src.spherical.quadrature import MAX_LEVEL, product_blocks, product_size

logger = logging.getLogger(__name__)

V1_RELATIVE_TOL = 1e-4
V1_START_LEVEL = 1
V1_MAX_NODES = 2**25
ORACLE_MAX_DIM = 4
ORACLE_MAX_CONDITION = 1e8
QUADRATURE_CHUNK = 65536


def _check_pair(K: ConvexPolytope, M: ConvexPolytope) -> None:
    if K.dim_ambient != M.dim_ambient:
        raise DimensionMismatchError(K.dim_ambient, M.dim_ambient, "second body")


def volume(P: ConvexPolytope) -> float:
    """n-dimensional volume; 0 for lower-dimensional bodies."""
    if P.affine_dim < P.dim_ambient:
        return 0.0
    if P.dim_ambient == 1:
        return float(np.ptp(P.vertices[:, 0]))
    try:
        return float(ConvexHull(P.vertices).volume)
    except QhullError as e:
        raise DegenerateHullError(f"Volume computation failed: {e}") from e


def surface_area(P: ConvexPolytope) -> float:
    """Surface area F(P), the total mass of the surface area measure."""
    return total_mass(surface_area_measure(P))


def v_nminus1(P: ConvexPolytope) -> float:
    """Intrinsic volume V_{n-1}(P) = F(P) / 2."""
    return surface_area(P) / 2.0


def mixed_volume_1(K: ConvexPolytope, M: ConvexPolytope) -> float:
    """Mixed volume V(K, M[n-1]) = (1/n) int h_K dS(M, .)."""
    _check_pair(K, M)
    return integrate_support(surface_area_measure(M), K) / K.dim_ambient


def surface_area_via_mixed_volume(P: ConvexPolytope, ball: ConvexPolytope) -> float:
    """n V(B, P[n-1]) for a polytope B approximating the unit ball.

    As B approaches the ball this tends to the surface area F(P).
    """
    return P.dim_ambient * mixed_volume_1(ball, P)


def mixed_volume_oracle(K: ConvexPolytope, M: ConvexPolytope) -> float:
    """V(K, M[n-1]) from a polynomial fit of alpha -> V(alpha K + M).

    Raises:
        InvalidParameterError: n > 4
        ConvergenceError: The Vandermonde system is ill-conditioned
    """
    _check_pair(K, M)
    n = K.dim_ambient
    if n > ORACLE_MAX_DIM:
        raise InvalidParameterError(f"polynomial-fit oracle limited to n <= {ORACLE_MAX_DIM}")
    alphas = np.arange(n + 1, dtype=float)
    volumes = np.array([volume(minkowski_sum(scale(K, a), M)) for a in alphas])
    vander = np.vander(alphas, n + 1, increasing=True)
    condition = float(np.linalg.cond(vander))
    if condition > ORACLE_MAX_CONDITION:
        raise ConvergenceError(f"Vandermonde matrix condition {condition:.3e} too large")
    coefficients = np.linalg.solve(vander, volumes)
    return float(coefficients[1] / n)


def _local_coordinates(P: ConvexPolytope) -> np.ndarray:
    # Full-dimensional bodies keep their axes so box faces fall on cell edges.
    if P.affine_dim == P.dim_ambient:
        return P.vertices
    origin, basis, dim = affine_frame(P.vertices)
    return (P.vertices - origin) @ basis[:dim].T


def _polygon_half_perimeter(local: np.ndarray) -> float:
    hull = ConvexHull(local)
    ring = local[hull.vertices]
    return 0.5 * float(np.sum(np.linalg.norm(ring - np.roll(ring, 1, axis=0), axis=1)))


def _edge_angle_sum(local: np.ndarray) -> float:
    """(1 / 2 pi) sum over edges of length times exterior dihedral angle, in R^3."""
    facets = enumerate_facets(local)
    labels = facets.simplex_labels
    total = 0.0
    for i, simplex in enumerate(facets.simplices):
        for pos, j in enumerate(facets.neighbors[i]):
            if j <= i or labels[i] == labels[j]:
                continue
            a, b = np.delete(simplex, pos)
            length = float(np.linalg.norm(local[a] - local[b]))
            cosine = float(np.dot(facets.normals[labels[i]], facets.normals[labels[j]]))
            total += length * math.acos(min(1.0, max(-1.0, cosine)))
    return total / (2.0 * math.pi)


def _max_level(d: int, max_nodes: int) -> int:
    level = 0
    while level < MAX_LEVEL and product_size(d, level + 1) <= max_nodes:
        level += 1
    return level


def _support_integral(centred: np.ndarray, level: int, max_nodes: int) -> float:
    d = centred.shape[1]
    total = 0.0
    blocks = product_blocks(d, level, azimuth="uniform", max_nodes=max_nodes)
    for nodes, weights in blocks:
        for s in range(0, weights.size, QUADRATURE_CHUNK):
            support = np.max(nodes[s : s + QUADRATURE_CHUNK] @ centred.T, axis=1)
            total += float(np.sum(weights[s : s + QUADRATURE_CHUNK] * support))
    return total


def v1_quadrature(
    local: np.ndarray,
    start_level: int = V1_START_LEVEL,
    relative_tol: float = V1_RELATIVE_TOL,
    max_nodes: int = V1_MAX_NODES,
) -> float:
    """V1 of a full-dimensional point set by refined product quadrature.

    Gauss-Legendre in the polar angles and the midpoint rule in the azimuth.
    Each new level is combined with the previous one by Richardson
    extrapolation for an O(h^2) error; refinement stops when two successive
    extrapolated values differ by less than ``relative_tol`` relative. Blocks of
    nodes are streamed, so the level budget is set by ``max_nodes`` rather
    than by memory, and the highest level reached grows as d shrinks.

    Raises:
        ConvergenceError: Node budget exhausted before convergence
    """
    d = local.shape[1]
    centred = local - local.mean(axis=0)
    norm = kappa(d - 1)
    raw: List[float] = []
    extrapolated: List[float] = []
    change = math.inf
    for level in range(start_level, _max_level(d, max_nodes) + 1):
        raw.append(_support_integral(centred, level, max_nodes) / norm)
        if len(raw) < 2:
            continue
        extrapolated.append(raw[-1] + (raw[-1] - raw[-2]) / 3.0)
        if len(extrapolated) < 2:
            change = abs(raw[-1] - raw[-2]) / max(abs(raw[-1]), 1e-300)
            continue
        value = extrapolated[-1]
        change = abs(value - extrapolated[-2]) / max(abs(value), 1e-300)
        logger.debug(f"V1 quadrature level {level}: {value!r} (change {change:.2e})")
        if change < relative_tol:
            return value
    raise ConvergenceError("V1 quadrature did not converge", achieved_error=change)


def v1_with_method(P: ConvexPolytope) -> Tuple[float, str]:
    """V1(P) together with the method used ("exact" or "quadrature")."""
    d = P.affine_dim
    if d == 0:
        return 0.0, "exact"
    local = _local_coordinates(P)
    if d == 1:
        return float(np.ptp(local[:, 0])), "exact"
    if d == 2:
        return _polygon_half_perimeter(local), "exact"
    if d == 3:
        return _edge_angle_sum(local), "exact"
    return v1_quadrature(local), "quadrature"


def v1(P: ConvexPolytope) -> float:
    """First intrinsic volume, the mean width times n kappa_n / (2 kappa_{n-1})."""
    return v1_with_method(P)[0]


def diameter_pair(P: ConvexPolytope) -> Tuple[np.ndarray, np.ndarray, float]:
    """A farthest pair of vertices (first in vertex order) and their distance."""
    if len(P) == 1:
        return P.vertices[0], P.vertices[0], 0.0
    distances = squareform(pdist(P.vertices))
    i, j = np.unravel_index(int(np.argmax(distances)), distances.shape)
    return P.vertices[i], P.vertices[j], float(distances[i, j])


def diameter(P: ConvexPolytope) -> float:
    """Largest distance between two points of P."""
    if len(P) == 1:
        return 0.0
    return float(np.max(pdist(P.vertices)))


def circumball(P: ConvexPolytope, method: str = "auto") -> Tuple[np.ndarray, float]:
    """Center and radius of the smallest ball containing P."""
    return enclosing_ball(P.vertices, method)


def circumradius(P: ConvexPolytope) -> float:
    """Circumradius R(P)."""
    return circumball(P)[1]


def chebyshev_ball(Q: ConvexPolytope) -> Tuple[np.ndarray, float]:
    """Largest ball inside a polytope, within its affine hull when lower-dimensional.

    Returns:
        (center, radius); the radius is 0 when Q is not full-dimensional
    """
    n = Q.dim_ambient
    if Q.affine_dim < n:
        return Q.vertices.mean(axis=0), 0.0
    if n == 1:
        lo, hi = float(Q.vertices[:, 0].min()), float(Q.vertices[:, 0].max())
        return np.array([(lo + hi) / 2.0]), (hi - lo) / 2.0
    try:
        hull = ConvexHull(Q.vertices)
    except QhullError as e:
        raise DegenerateHullError(f"Inradius computation failed: {e}") from e
    a = hull.equations[:, :n]
    b = -hull.equations[:, n]
    norms = np.linalg.norm(a, axis=1)
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    result = linprog(
        cost,
        A_ub=np.column_stack([a, norms]),
        b_ub=b,
        bounds=[(None, None)] * n + [(0, None)],
        method="highs",
    )
    if not result.success:
        raise ConvergenceError(f"Chebyshev-ball LP failed: {result.message}")
    return result.x[:n], float(result.x[n])


def inradius_projection(M: ConvexPolytope, e: ArrayLike) -> float:
    """Radius of the largest (n-1)-ball contained in the projection M | e^perp."""
    return chebyshev_ball(project(M, e))[1]


def projection_volume(P: ConvexPolytope, e: ArrayLike) -> float:
    """(n-1)-volume of the projection P | e^perp."""
    return volume(project(P, e))


def minimal_width(M: ConvexPolytope) -> Tuple[np.ndarray, float]:
    """Direction and value of the minimal width of M.

    For full-dimensional M the minimum is attained at a facet normal of the
    difference body M + (-M); the facet with the smallest offset wins.
    """
    n = M.dim_ambient
    _, basis, dim = affine_frame(M.vertices)
    if dim < n:
        v = basis[dim]
        values = M.vertices @ v
        return v, float(np.max(values) - np.min(values))
    difference = minkowski_sum(M, negate(M))
    facets = enumerate_facets(difference.vertices)
    best = int(np.argmin(facets.offsets))
    v = facets.normals[best]
    values = M.vertices @ v
    return v, float(np.max(values) - np.min(values))


def chord_length(M: ConvexPolytope, e: ArrayLike) -> float:
    """Length of the longest chord of M parallel to e.

    Solved as the LP max s over y, y + s e in M with both points written as
    convex combinations of the vertices.
    """
    u = as_direction(e, M.dim_ambient)
    V = M.vertices
    k, n = V.shape
    # Variables: lambda (k), mu (k), s.
    cost = np.zeros(2 * k + 1)
    cost[-1] = -1.0
    a_eq = np.zeros((n + 2, 2 * k + 1))
    a_eq[:n, :k] = -V.T
    a_eq[:n, k : 2 * k] = V.T
    a_eq[:n, -1] = -u
    a_eq[n, :k] = 1.0
    a_eq[n + 1, k : 2 * k] = 1.0
    b_eq = np.concatenate([np.zeros(n), [1.0, 1.0]])
    result = linprog(
        cost,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=[(0, None)] * (2 * k) + [(0, None)],
        method="highs",
    )
    if not result.success:
        raise ConvergenceError(f"Chord-length LP failed: {result.message}")
    return float(result.x[-1])


@dataclass
class FunctionalReport:
    """Functionals of one polytope with the provenance of each value."""

    volume: Optional[float] = None
    surface_area: Optional[float] = None
    v1: Optional[float] = None
    v_nminus1: Optional[float] = None
    circumradius: Optional[float] = None
    diameter: Optional[float] = None
    method_tags: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize, leaving out functionals that were not requested."""
        data = {k: v for k, v in asdict(self).items() if v is not None}
        data["method_tags"] = dict(self.method_tags)
        return data

    def invariant_violations(self, tol: float = 1e-9) -> Dict[str, str]:
        """Sanity relations between the computed values that do not hold."""
        problems: Dict[str, str] = {}
        if self.surface_area is not None and self.v_nminus1 is not None:
            if abs(self.v_nminus1 - self.surface_area / 2.0) > 1e-12 * max(1.0, self.surface_area):
                problems["v_nminus1"] = "V_{n-1} differs from F/2"
        if self.circumradius is not None and self.diameter is not None:
            slack = tol * max(1.0, self.diameter)
            if not self.diameter / 2.0 - slack <= self.circumradius <= self.diameter + slack:
                problems["circumradius"] = "circumradius outside [diam/2, diam]"
        if self.v1 is not None and self.circumradius is not None:
            if self.v1 < 2.0 * self.circumradius - tol * max(1.0, self.v1):
                problems["v1"] = "V1 below twice the circumradius"
        return problems


FUNCTIONAL_KEYS = {
    "vol": "volume",
    "f": "surface_area",
    "v1": "v1",
    "vn1": "v_nminus1",
    "r": "circumradius",
    "diam": "diameter",
}


def functional_report(
    P: ConvexPolytope, functionals: Optional[Iterable[str]] = None
) -> FunctionalReport:
    """Compute the requested functionals (all by default).

    Args:
        P: The polytope
        functionals: Short names among vol, f, v1, vn1, r, diam
    """
    wanted = set(FUNCTIONAL_KEYS) if functionals is None else set(functionals)
    unknown = wanted - set(FUNCTIONAL_KEYS)
    if unknown:
        raise InvalidParameterError(f"unknown functionals: {sorted(unknown)}")
    report = FunctionalReport()
    if "vol" in wanted:
        report.volume = volume(P)
        report.method_tags["volume"] = "exact"
    if "f" in wanted or "vn1" in wanted:
        area = surface_area(P)
        if "f" in wanted:
            report.surface_area = area
            report.method_tags["surface_area"] = "exact"
        if "vn1" in wanted:
            report.v_nminus1 = area / 2.0
            report.method_tags["v_nminus1"] = "exact"
    if "v1" in wanted:
        report.v1, report.method_tags["v1"] = v1_with_method(P)
    if "r" in wanted:
        report.circumradius = circumradius(P)
        exhaustive = len(P) <= 40 and P.dim_ambient <= 4
        report.method_tags["circumradius"] = "exact" if exhaustive else "optimization"
    if "diam" in wanted:
        report.diameter = diameter(P)
        report.method_tags["diameter"] = "exact"
    logger.info(f"Computed {sorted(wanted)} for {P!r}")
    return report
