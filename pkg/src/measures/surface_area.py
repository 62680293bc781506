"""Surface area measure of a polytope as a finite atomic measure on the sphere."""

import logging
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from src.bodies.polytope import (
    ConvexPolytope,
    as_direction,
    hyperplane_normal,
    lexicographic_order,
    relative_volume,
)
from src.errors import DegenerateHullError, DimensionMismatchError, InvalidParameterError
from src.measures.facets import enumerate_facets

logger = logging.getLogger(__name__)

# Relative size of sum(mass * normal) accepted as closed.
CLOSURE_TOL = 1e-8


class SurfaceAreaMeasure:
    """Finite measure sum_i m_i delta_{u_i} on the unit sphere."""

    def __init__(self, normals: np.ndarray, masses: Sequence[float], n: int):
        """Initialize the measure.

        Args:
            normals: Array of shape (k, n) of unit vectors, k may be 0
            masses: Positive masses, one per normal
            n: Ambient dimension
        """
        normals = np.asarray(normals, dtype=float).reshape(-1, n)
        masses_arr = np.asarray(masses, dtype=float).reshape(-1)
        if normals.shape[0] != masses_arr.size:
            raise InvalidParameterError("normals and masses must have equal length")
        if np.any(masses_arr <= 0) or not np.all(np.isfinite(masses_arr)):
            raise InvalidParameterError("masses must be positive and finite")
        if normals.shape[0]:
            norms = np.linalg.norm(normals, axis=1)
            if np.any(np.abs(norms - 1.0) > 1e-9):
                raise InvalidParameterError("atom locations must be unit vectors")
            normals = normals / norms[:, None]
            order = lexicographic_order(normals)
            normals = normals[order]
            masses_arr = masses_arr[order]
        normals.setflags(write=False)
        masses_arr.setflags(write=False)
        self.n = int(n)
        self.normals = normals
        self.masses = masses_arr

    @property
    def atoms(self) -> List[Tuple[np.ndarray, float]]:
        """List of (normal, mass) pairs in canonical order."""
        return [(u, float(m)) for u, m in zip(self.normals, self.masses)]

    def __len__(self) -> int:
        return int(self.masses.size)

    def is_empty(self) -> bool:
        """True for the zero measure."""
        return self.masses.size == 0

    def closure_defect(self) -> float:
        """Norm of sum(mass * normal)."""
        if self.is_empty():
            return 0.0
        return float(np.linalg.norm(self.masses @ self.normals))

    def to_dict(self) -> Dict[str, Any]:
        """Serialize as a list of atoms."""
        return {
            "dim": self.n,
            "atoms": [
                {"normal": [float(c) for c in u], "mass": float(m)}
                for u, m in zip(self.normals, self.masses)
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SurfaceAreaMeasure":
        """Inverse of to_dict."""
        atoms = data.get("atoms", [])
        n = int(data["dim"])
        normals = np.array([a["normal"] for a in atoms], dtype=float).reshape(-1, n)
        return cls(normals, [a["mass"] for a in atoms], n)


def surface_area_measure(P: ConvexPolytope) -> SurfaceAreaMeasure:
    """Surface area measure S(P, .).

    Bodies of dimension at most n-2 give the zero measure; an (n-1)-dimensional
    body gives two antipodal atoms carrying its (n-1)-volume each.

    Raises:
        DegenerateHullError: Facet data fails the closedness check
    """
    n = P.dim_ambient
    dim = P.affine_dim
    if n < 2 or dim <= n - 2:
        return SurfaceAreaMeasure(np.zeros((0, n)), [], n)
    if dim == n - 1:
        normal = hyperplane_normal(P)
        area = relative_volume(P)
        return SurfaceAreaMeasure(np.vstack([normal, -normal]), [area, area], n)

    facets = enumerate_facets(P.vertices)
    keep = facets.areas > 0.0
    measure = SurfaceAreaMeasure(facets.normals[keep], facets.areas[keep], n)
    total = float(np.sum(measure.masses))
    defect = measure.closure_defect()
    if defect > CLOSURE_TOL * total:
        raise DegenerateHullError(
            f"Surface measure does not close: |sum m u| = {defect:.3e}, total {total:.3e}"
        )
    return measure


def total_mass(S: SurfaceAreaMeasure) -> float:
    """Total mass S(S^{n-1}), the surface area."""
    return float(np.sum(S.masses)) if not S.is_empty() else 0.0


def integrate_support(S: SurfaceAreaMeasure, P: ConvexPolytope) -> float:
    """Integral of h_P against S."""
    if P.dim_ambient != S.n:
        raise DimensionMismatchError(S.n, P.dim_ambient, "body")
    if S.is_empty():
        return 0.0
    support_values = np.max(S.normals @ P.vertices.T, axis=1)
    return float(np.sum(S.masses * support_values))


def integrate_abs_cos(S: SurfaceAreaMeasure, e: Sequence[float]) -> float:
    """Integral of |<e, u>| against S, twice the projection volume along e."""
    u = as_direction(e, S.n)
    if S.is_empty():
        return 0.0
    return float(np.sum(S.masses * np.abs(S.normals @ u)))
