"""Checkers for the classical inequalities between mixed volumes.

Every checker returns an InequalityReport whose deficit is the multiplicative
gap in the inequality's own normalization, so a deficit of 0 means equality.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from src.bodies.polytope import (
    ArrayLike,
    ConvexPolytope,
    as_direction,
    hyperplane_normal,
    negate,
    segment_direction,
)
from src.errors import DimensionMismatchError, InvalidParameterError
from src.functionals.functionals import (
    circumradius,
    mixed_volume_1,
    projection_volume,
    surface_area,
    v1,
    v_nminus1,
    volume,
)

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
# Absolute tolerance on the geometric conditions that identify equality cases.
WITNESS_TOL = 1e-9
BETKE_WEIL_SELF_CONSTANT = math.sqrt(3.0) / 18.0

REPORT_NAMES = (
    "minkowski",
    "betke_weil",
    "betke_weil_self",
    "reverse_minkowski",
    "linhart",
    "projection",
)


@dataclass
class InequalityReport:
    """Outcome of one inequality check."""

    name: str
    lhs: float
    rhs: float
    deficit: float
    satisfied: bool
    tolerance: float
    equality_witness: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the report."""
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "deficit": self.deficit,
            "satisfied": self.satisfied,
            "tolerance": self.tolerance,
            "equality_witness": self.equality_witness,
        }


def _same_dim(K: ConvexPolytope, M: ConvexPolytope) -> int:
    if K.dim_ambient != M.dim_ambient:
        raise DimensionMismatchError(K.dim_ambient, M.dim_ambient, "second body")
    return K.dim_ambient


def _planar(K: ConvexPolytope, what: str) -> None:
    if K.dim_ambient != 2:
        raise InvalidParameterError(f"{what} is only defined in the plane, got n={K.dim_ambient}")


def _upper_deficit(lhs: float, rhs: float, tol: float) -> float:
    """epsilon with lhs = (1 - epsilon) rhs for inequalities lhs <= rhs."""
    if rhs <= 0.0:
        return -math.inf if lhs > tol else 0.0
    return 1.0 - lhs / rhs


def _report(
    name: str,
    lhs: float,
    rhs: float,
    deficit: float,
    tol: float,
    witness: Optional[str],
) -> InequalityReport:
    satisfied = deficit >= -tol
    report = InequalityReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        deficit=deficit,
        satisfied=bool(satisfied),
        tolerance=tol,
        equality_witness=witness if satisfied and abs(deficit) < tol else None,
    )
    logger.info(f"{name}: lhs={lhs!r} rhs={rhs!r} deficit={deficit!r}")
    return report


def check_minkowski(
    K: ConvexPolytope, M: ConvexPolytope, tolerance: float = DEFAULT_TOLERANCE
) -> InequalityReport:
    """Minkowski's inequality V(K, M[n-1])^n >= V(K) V(M)^(n-1)."""
    n = _same_dim(K, M)
    lhs = mixed_volume_1(K, M) ** n
    rhs = volume(K) * volume(M) ** (n - 1)
    if rhs > 0.0:
        deficit = lhs / rhs - 1.0
    else:
        deficit = math.inf if lhs > tolerance else 0.0
    full = K.affine_dim == n and M.affine_dim == n
    return _report("minkowski", lhs, rhs, deficit, tolerance, "homothetic" if full else None)


def check_betke_weil(
    K: ConvexPolytope, M: ConvexPolytope, tolerance: float = DEFAULT_TOLERANCE
) -> InequalityReport:
    """Planar bound V(K, M) <= F(K) F(M) / 8."""
    _same_dim(K, M)
    _planar(K, "betke_weil")
    lhs = mixed_volume_1(K, M)
    rhs = surface_area(K) * surface_area(M) / 8.0
    witness = None
    if K.affine_dim == 1 and M.affine_dim == 1:
        cosine = abs(float(np.dot(segment_direction(K), segment_direction(M))))
        if cosine <= WITNESS_TOL:
            witness = "orthogonal segments"
    return _report("betke_weil", lhs, rhs, _upper_deficit(lhs, rhs, tolerance), tolerance, witness)


def check_betke_weil_self(
    K: ConvexPolytope, tolerance: float = DEFAULT_TOLERANCE
) -> InequalityReport:
    """Planar bound V(K, -K) <= (sqrt(3) / 18) F(K)^2."""
    _planar(K, "betke_weil_self")
    lhs = mixed_volume_1(K, negate(K))
    rhs = BETKE_WEIL_SELF_CONSTANT * surface_area(K) ** 2
    witness = "equilateral triangle" if len(K) == 3 and K.affine_dim == 2 else None
    return _report(
        "betke_weil_self", lhs, rhs, _upper_deficit(lhs, rhs, tolerance), tolerance, witness
    )


def check_reverse_minkowski(
    K: ConvexPolytope, M: ConvexPolytope, tolerance: float = DEFAULT_TOLERANCE
) -> InequalityReport:
    """Upper bound V(K, M[n-1]) <= (1/n) V_1(K) V_{n-1}(M)."""
    n = _same_dim(K, M)
    lhs = mixed_volume_1(K, M)
    rhs = v1(K) * v_nminus1(M) / n
    witness = None
    if K.affine_dim == 1 and M.affine_dim == n - 1:
        d = segment_direction(K)
        normal = hyperplane_normal(M)
        tangential = d - float(np.dot(d, normal)) * normal
        if float(np.linalg.norm(tangential)) <= WITNESS_TOL:
            witness = "segment ⊥ hyperplane body"
    return _report(
        "reverse_minkowski", lhs, rhs, _upper_deficit(lhs, rhs, tolerance), tolerance, witness
    )


def check_linhart(K: ConvexPolytope, tolerance: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """V_1(K) >= 2 R(K), with deficit epsilon given by V_1 = (2 + epsilon) R."""
    lhs = v1(K)
    radius = circumradius(K)
    rhs = 2.0 * radius
    if K.affine_dim == 0 or radius <= 0.0:
        return _report("linhart", lhs, rhs, 0.0, tolerance, "point")
    deficit = lhs / radius - 2.0
    witness = "segment" if K.affine_dim == 1 else None
    return _report("linhart", lhs, rhs, deficit, tolerance, witness)


def check_projection_bound(
    P: ConvexPolytope, e: ArrayLike, tolerance: float = DEFAULT_TOLERANCE
) -> InequalityReport:
    """Projection bound H^{n-1}(P | e^perp) <= V_{n-1}(P)."""
    u = as_direction(e, P.dim_ambient)
    lhs = projection_volume(P, u)
    rhs = v_nminus1(P)
    witness = None
    if P.affine_dim == P.dim_ambient - 1:
        if abs(abs(float(np.dot(hyperplane_normal(P), u))) - 1.0) <= WITNESS_TOL:
            witness = "hyperplane body ⊥ e"
    return _report(
        "projection", lhs, rhs, _upper_deficit(lhs, rhs, tolerance), tolerance, witness
    )
