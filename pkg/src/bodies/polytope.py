"""Convex polytopes in vertex representation and their elementary operations."""

import json
import logging
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from src.errors import (
    DegenerateHullError,
    DimensionMismatchError,
    InvalidParameterError,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[Sequence[float], np.ndarray]

# Affine dimension is the numerical rank of the centred vertex matrix.
RANK_TOL = 1e-9
# Grid used only for ordering and hashing; stored coordinates are untouched.
SNAP_DECIMALS = 12
UNIT_TOL = 1e-12


def as_vector(x: ArrayLike, n: Optional[int] = None, what: str = "vector") -> np.ndarray:
    """Convert input to a finite 1-D float array, optionally checking its length."""
    arr = np.asarray(x, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{what} has non-finite entries")
    if n is not None and arr.size != n:
        raise DimensionMismatchError(n, arr.size, what)
    return arr


def as_direction(e: ArrayLike, n: Optional[int] = None) -> np.ndarray:
    """Convert input to a unit vector; the norm must equal 1 within 1e-12."""
    arr = as_vector(e, n, "direction")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > UNIT_TOL:
        raise InvalidParameterError(f"direction must be a unit vector, norm is {norm!r}")
    return arr


def normalize(x: ArrayLike) -> np.ndarray:
    """Return x scaled to unit length."""
    arr = as_vector(x)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise InvalidParameterError("cannot normalize the zero vector")
    return arr / norm


def affine_frame(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, int]:
    """Orthonormal frame of the affine hull of a point set.

    Args:
        points: Array of shape (k, n)

    Returns:
        (origin, basis, dim): origin is the centroid, basis has shape
        (n, n) with the first ``dim`` rows spanning the affine hull and the
        remaining rows spanning its orthogonal complement
    """
    origin = points.mean(axis=0)
    n = points.shape[1]
    if points.shape[0] == 1:
        return origin, np.eye(n), 0
    _, s, vt = np.linalg.svd(points - origin, full_matrices=True)
    dim = int(np.sum(s > RANK_TOL * max(1.0, float(s[0]))))
    return origin, vt, dim


def lexicographic_order(points: np.ndarray) -> np.ndarray:
    snapped = np.round(points, SNAP_DECIMALS) + 0.0  # +0.0 folds -0.0 into 0.0
    keys = tuple(snapped[:, j] for j in reversed(range(points.shape[1])))
    return np.lexsort(keys)


def _extreme_points(points: np.ndarray) -> np.ndarray:
    """Return the rows of ``points`` that are vertices of their convex hull."""
    points = np.unique(points, axis=0)
    origin, basis, dim = affine_frame(points)
    if dim == 0:
        return points[:1]
    local = (points - origin) @ basis[:dim].T
    if dim == 1:
        keep = np.unique([int(np.argmin(local[:, 0])), int(np.argmax(local[:, 0]))])
        return points[keep]
    try:
        hull = ConvexHull(local)
    except QhullError as e:
        raise DegenerateHullError(f"Convex hull computation failed: {e}") from e
    return points[np.sort(hull.vertices)]


class ConvexPolytope:
    """A compact convex polytope stored as its list of extreme points."""

    def __init__(self, vertices: Iterable[ArrayLike], canonical: bool = True):
        """Initialize a polytope.

        Args:
            vertices: Points whose convex hull is the polytope
            canonical: Drop non-extreme points and sort vertices lexicographically
        """
        arr = np.array([as_vector(v) for v in vertices], dtype=float)
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise InvalidParameterError("a polytope needs at least one vertex")
        if arr.shape[1] < 1:
            raise InvalidParameterError("ambient dimension must be at least 1")
        if canonical:
            arr = _extreme_points(arr)
            arr = arr[lexicographic_order(arr)]
        arr.setflags(write=False)
        self._vertices = arr
        self._affine_dim: Optional[int] = None

    @property
    def vertices(self) -> np.ndarray:
        """Read-only vertex array of shape (k, n)."""
        return self._vertices

    @property
    def dim_ambient(self) -> int:
        """Dimension n of the ambient space."""
        return int(self._vertices.shape[1])

    @property
    def affine_dim(self) -> int:
        """Dimension of the affine hull."""
        if self._affine_dim is None:
            self._affine_dim = affine_frame(self._vertices)[2]
        return self._affine_dim

    def __len__(self) -> int:
        return int(self._vertices.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConvexPolytope):
            return NotImplemented
        return bool(np.array_equal(self._vertices, other._vertices))

    def __hash__(self) -> int:
        snapped = np.round(self._vertices, SNAP_DECIMALS) + 0.0
        return hash((self.dim_ambient, snapped.tobytes()))

    def __repr__(self) -> str:
        return (
            f"ConvexPolytope(n={self.dim_ambient}, dim={self.affine_dim}, "
            f"vertices={len(self)})"
        )

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to the body JSON schema."""
        return {
            "dim": self.dim_ambient,
            "vertices": [[float(c) for c in v] for v in self._vertices],
        }

    @classmethod
    def from_dict(cls, data: Any) -> "ConvexPolytope":
        """Parse the body JSON schema ``{"dim": n, "vertices": [[...], ...]}``."""
        if not isinstance(data, dict) or "dim" not in data or "vertices" not in data:
            raise InvalidParameterError("body must be an object with 'dim' and 'vertices'")
        n = data["dim"]
        vertices = data["vertices"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InvalidParameterError(f"'dim' must be a positive integer, got {n!r}")
        if not isinstance(vertices, list) or not vertices:
            raise InvalidParameterError("'vertices' must be a non-empty list")
        for v in vertices:
            if not isinstance(v, list) or len(v) != n:
                raise InvalidParameterError(f"every vertex must be a list of {n} numbers")
            if not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v):
                raise InvalidParameterError("vertex coordinates must be numbers")
        return cls(vertices)

    def to_json(self) -> str:
        """Serialize to a JSON string; float repr gives exact round-trips."""
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ConvexPolytope":
        """Parse a JSON string."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidParameterError(f"malformed body JSON: {e}") from e
        return cls.from_dict(data)


def _check_same_dim(P: ConvexPolytope, Q: ConvexPolytope) -> None:
    if P.dim_ambient != Q.dim_ambient:
        raise DimensionMismatchError(P.dim_ambient, Q.dim_ambient, "second body")


def canonical(P: ConvexPolytope) -> ConvexPolytope:
    """Canonical form of P (idempotent)."""
    return ConvexPolytope(P.vertices)


def support(P: ConvexPolytope, x: ArrayLike) -> float:
    """Support function h_P(x) = max over vertices of <x, v>."""
    vec = as_vector(x, P.dim_ambient)
    return float(np.max(P.vertices @ vec))


def support_many(P: ConvexPolytope, directions: np.ndarray) -> np.ndarray:
    """Support function evaluated at each row of ``directions``."""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if directions.shape[1] != P.dim_ambient:
        raise DimensionMismatchError(P.dim_ambient, directions.shape[1], "directions")
    return np.max(directions @ P.vertices.T, axis=1)


def width(P: ConvexPolytope, e: ArrayLike) -> float:
    """Width h_P(e) + h_P(-e) in the unit direction e."""
    u = as_direction(e, P.dim_ambient)
    values = P.vertices @ u
    return float(np.max(values) - np.min(values))


def minkowski_sum(P: ConvexPolytope, Q: ConvexPolytope) -> ConvexPolytope:
    """Minkowski sum: hull of all pairwise vertex sums."""
    _check_same_dim(P, Q)
    sums = (P.vertices[:, None, :] + Q.vertices[None, :, :]).reshape(-1, P.dim_ambient)
    return ConvexPolytope(sums)


def scale(P: ConvexPolytope, lam: float) -> ConvexPolytope:
    """Dilate P by a factor lam >= 0 about the origin."""
    if not np.isfinite(lam) or lam < 0:
        raise InvalidParameterError(f"scale factor must be >= 0, got {lam}")
    return ConvexPolytope(P.vertices * float(lam))


def translate(P: ConvexPolytope, t: ArrayLike) -> ConvexPolytope:
    """Translate P by the vector t."""
    vec = as_vector(t, P.dim_ambient, "translation")
    return ConvexPolytope(P.vertices + vec)


def negate(P: ConvexPolytope) -> ConvexPolytope:
    """Reflection -P, with h_{-P}(u) = h_P(-u)."""
    return ConvexPolytope(-P.vertices)


def linear_map(P: ConvexPolytope, A: np.ndarray) -> ConvexPolytope:
    """Image of P under the square matrix A."""
    A = np.asarray(A, dtype=float)
    if A.shape != (P.dim_ambient, P.dim_ambient):
        raise DimensionMismatchError(P.dim_ambient, A.shape[0], "matrix")
    return ConvexPolytope(P.vertices @ A.T)


def hyperplane_basis(e: ArrayLike) -> np.ndarray:
    """Orthonormal basis of e^perp as the rows of an (n-1, n) matrix.

    The basis is the first n-1 rows of the Householder reflection that maps e
    to the last coordinate axis, so it depends on e alone.
    """
    u = as_direction(e)
    n = u.size
    target = np.zeros(n)
    target[-1] = 1.0
    w = u - target
    norm = float(np.linalg.norm(w))
    if norm < 1e-15:
        return np.eye(n)[:-1]
    w = w / norm
    H = np.eye(n) - 2.0 * np.outer(w, w)
    return H[:-1]


def project(P: ConvexPolytope, e: ArrayLike) -> ConvexPolytope:
    """Orthogonal projection onto e^perp, in the coordinates of hyperplane_basis(e)."""
    u = as_direction(e, P.dim_ambient)
    if P.dim_ambient < 2:
        raise InvalidParameterError("cannot project a body in dimension 1")
    basis = hyperplane_basis(u)
    return ConvexPolytope(P.vertices @ basis.T)


def segment_direction(P: ConvexPolytope) -> np.ndarray:
    """Unit direction of a one-dimensional body, from its two extreme points."""
    if P.affine_dim != 1:
        raise InvalidParameterError(f"body is not a segment (dimension {P.affine_dim})")
    origin, basis, _ = affine_frame(P.vertices)
    along = (P.vertices - origin) @ basis[0]
    head, tail = int(np.argmax(along)), int(np.argmin(along))
    return normalize(P.vertices[head] - P.vertices[tail])


def hyperplane_normal(P: ConvexPolytope) -> np.ndarray:
    """Unit normal of the affine hull of an (n-1)-dimensional body.

    The sign is fixed so that the first non-negligible coordinate is positive.
    """
    n = P.dim_ambient
    if P.affine_dim != n - 1:
        raise InvalidParameterError(
            f"body has dimension {P.affine_dim}, expected {n - 1}"
        )
    normal = affine_frame(P.vertices)[1][n - 1]
    pivot = int(np.argmax(np.abs(normal) > 1e-12))
    if normal[pivot] < 0:
        normal = -normal
    return normal / np.linalg.norm(normal)


def relative_volume(P: ConvexPolytope) -> float:
    """Volume of P inside its own affine hull (length, area, ...)."""
    dim = P.affine_dim
    if dim == 0:
        return 0.0
    origin, basis, _ = affine_frame(P.vertices)
    local = (P.vertices - origin) @ basis[:dim].T
    if dim == 1:
        return float(np.ptp(local[:, 0]))
    try:
        return float(ConvexHull(local).volume)
    except QhullError as e:
        raise DegenerateHullError(f"Relative volume computation failed: {e}") from e
