"""Facet enumeration for full-dimensional point sets."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from src.errors import DegenerateHullError

logger = logging.getLogger(__name__)

# Two unit normals closer than this chord distance belong to the same facet.
MERGE_TOL = 1e-9
# Allowed violation of the facet inequalities, relative to the body's extent.
CONTAINMENT_TOL = 1e-9
# Orientations nearer zero than this, relative to the extent, are redone exactly.
SIGN_TOL = 1e-10


@dataclass(frozen=True)
class FacetData:
    """Merged facet data of a full-dimensional hull.

    Qhull triangulates facets into simplices; ``simplex_labels`` maps every
    simplex to the merged facet it belongs to.
    """

    points: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    areas: np.ndarray
    simplices: np.ndarray
    neighbors: np.ndarray
    simplex_labels: np.ndarray

    @property
    def facet_count(self) -> int:
        """Number of merged facets."""
        return int(self.normals.shape[0])


def simplex_volumes(corners: np.ndarray) -> np.ndarray:
    """(n-1)-volumes of simplices with n corners each in R^n.

    Args:
        corners: Array of shape (m, n, n): m simplices, n corners, n coordinates
    """
    edges = corners[:, 1:, :] - corners[:, :1, :]
    gram = edges @ np.transpose(edges, (0, 2, 1))
    k = edges.shape[1]
    dets = np.linalg.det(gram) if k > 0 else np.ones(corners.shape[0])
    return np.sqrt(np.clip(dets, 0.0, None)) / math.factorial(k)


def _rational_det(rows: List[List[Fraction]]) -> Fraction:
    m = [row[:] for row in rows]
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, size):
            factor = m[r][col] / m[col][col]
            if factor:
                for c in range(col, size):
                    m[r][c] -= factor * m[col][c]
    return det


def exact_orientation(corners: np.ndarray, q: Sequence[float]) -> int:
    """Sign of det[c_1 - c_0, ..., c_{n-1} - c_0, q - c_0] in rational arithmetic.

    Float coordinates convert to fractions without rounding, so the sign is
    exact for the given input.

    Args:
        corners: Array of shape (n, n), the corners of a simplex in R^n
        q: Query point
    """
    base = [Fraction(float(x)) for x in corners[0]]
    rows = [
        [Fraction(float(x)) - b for x, b in zip(point, base)]
        for point in list(corners[1:]) + [q]
    ]
    det = _rational_det(rows)
    return (det > 0) - (det < 0)


def coplanar_neighbors(
    points: np.ndarray,
    simplices: np.ndarray,
    neighbors: np.ndarray,
    normals: np.ndarray,
    offsets: np.ndarray,
) -> List[Tuple[int, int]]:
    """Adjacent simplex pairs (i, j), i < j, lying in one hyperplane.

    A pair is coplanar when the vertex of j opposite the shared ridge has
    float distance within SIGN_TOL of the plane of i and exact orientation 0.
    """
    extent = max(1.0, float(np.max(np.abs(points))))
    pairs = []
    exact_tests = 0
    for i, simplex in enumerate(simplices):
        for j in neighbors[i]:
            if j <= i:
                continue
            opposite = [v for v in simplices[j] if v not in simplex]
            if len(opposite) != 1:
                continue
            distance = float(points[opposite[0]] @ normals[i] - offsets[i])
            if abs(distance) > SIGN_TOL * extent:
                continue
            exact_tests += 1
            if exact_orientation(points[simplex], points[opposite[0]]) == 0:
                pairs.append((i, int(j)))
    logger.debug(f"Exact orientation tests: {exact_tests}, coplanar: {len(pairs)}")
    return pairs


def merge_simplices(
    normals: np.ndarray,
    pairs: Sequence[Tuple[int, int]] = (),
    tol: float = MERGE_TOL,
) -> np.ndarray:
    """Facet labels for simplices; labels follow first appearance.

    Simplices share a facet when their unit normals are within ``tol`` or when
    they are joined, directly or through others, by a coplanar pair.
    """
    count = normals.shape[0]
    parent = list(range(count))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i in range(count):
        gaps = np.linalg.norm(normals[i + 1 :] - normals[i], axis=1)
        for k in np.flatnonzero(gaps <= tol):
            union(i, i + 1 + int(k))
    for i, j in pairs:
        union(i, j)

    labels = np.empty(count, dtype=int)
    mapping: Dict[int, int] = {}
    for i in range(count):
        labels[i] = mapping.setdefault(find(i), len(mapping))
    return labels


def enumerate_facets(points: np.ndarray) -> FacetData:
    """Facets of the convex hull of a full-dimensional point set.

    Args:
        points: Array of shape (k, n) whose hull has non-empty interior

    Returns:
        FacetData with one entry per merged facet

    Raises:
        DegenerateHullError: Qhull fails or its output is inconsistent
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[1]
    try:
        hull = ConvexHull(points)
    except QhullError as e:
        raise DegenerateHullError(f"Facet enumeration failed: {e}") from e

    raw_normals = hull.equations[:, :n]
    raw_normals = raw_normals / np.linalg.norm(raw_normals, axis=1)[:, None]
    raw_offsets = -hull.equations[:, n]
    extent = max(1.0, float(np.max(np.abs(points))))
    violation = float(np.max(points @ raw_normals.T - raw_offsets))
    if violation > CONTAINMENT_TOL * extent:
        raise DegenerateHullError(
            f"Facet inequalities violated by {violation:.3e}; hull is unreliable"
        )

    areas = simplex_volumes(points[hull.simplices])
    pairs = coplanar_neighbors(
        points, hull.simplices, hull.neighbors, raw_normals, raw_offsets
    )
    labels = merge_simplices(raw_normals, pairs)
    count = int(labels.max()) + 1
    merged_areas = np.bincount(labels, weights=areas, minlength=count)
    normals = np.zeros((count, n))
    np.add.at(normals, labels, raw_normals * areas[:, None])
    lengths = np.linalg.norm(normals, axis=1)
    # Facets whose simplices all have zero area keep their first raw normal.
    for j in np.flatnonzero(lengths <= 0.0):
        normals[j] = raw_normals[int(np.argmax(labels == j))]
        lengths[j] = 1.0
    normals = normals / lengths[:, None]
    offsets = np.max(points @ normals.T, axis=0)
    logger.debug(
        f"Enumerated {count} facets from {hull.simplices.shape[0]} simplices in R^{n}"
    )
    return FacetData(
        points=points,
        normals=normals,
        offsets=offsets,
        areas=merged_areas,
        simplices=hull.simplices,
        neighbors=hull.neighbors,
        simplex_labels=labels,
    )
