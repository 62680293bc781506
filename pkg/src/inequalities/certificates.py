"""Stability certificates for near-equality cases.

A certificate collects the objects whose existence the stability estimates
promise (a long segment, a thin tube around it, a direction in which the
second body is a thin slab) and records every bound it checked.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.bodies.polytope import ArrayLike, ConvexPolytope, as_direction
from src.errors import CertificateRefusedError, InvalidParameterError, PreconditionError
from src.functionals.functionals import (
    chord_length,
    circumradius,
    diameter_pair,
    inradius_projection,
    minimal_width,
    v1,
)
from src.inequalities.reports import (
    DEFAULT_TOLERANCE,
    check_linhart,
    check_reverse_minkowski,
)
from src.measures.surface_area import integrate_abs_cos, surface_area_measure, total_mass
from src.spherical.profile import stability_constants

logger = logging.getLogger(__name__)

DEFAULT_EPS0 = 0.05


@dataclass
class BoundCheck:
    """One recorded bound lhs <= rhs (or >=); passed is None for measured ratios."""

    name: str
    lhs: float
    rhs: float
    passed: Optional[bool]

    @property
    def ratio(self) -> Optional[float]:
        """lhs / rhs, or None when rhs vanishes."""
        return self.lhs / self.rhs if self.rhs > 0.0 else None

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the check."""
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "passed": self.passed,
            "ratio": self.ratio,
        }


def _at_most(name: str, lhs: float, rhs: float, tol: float, scale: float = 1.0) -> BoundCheck:
    return BoundCheck(name, lhs, rhs, bool(lhs <= rhs + tol * max(1.0, scale)))


def _at_least(name: str, lhs: float, rhs: float, tol: float, scale: float = 1.0) -> BoundCheck:
    return BoundCheck(name, lhs, rhs, bool(lhs >= rhs - tol * max(1.0, scale)))


@dataclass
class SlabEstimate:
    """Near-orthogonal direction v of a body whose surface measure concentrates at +-e."""

    e: np.ndarray
    epsilon: float
    surface_ratio: float
    v: np.ndarray
    slab_width: float
    cos_ev: float
    r: float
    chord: float
    bound_checks: List[BoundCheck] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the estimate."""
        return {
            "e": [float(c) for c in self.e],
            "epsilon": self.epsilon,
            "surface_ratio": self.surface_ratio,
            "v": [float(c) for c in self.v],
            "slab_width": self.slab_width,
            "cos_ev": self.cos_ev,
            "r": self.r,
            "chord": self.chord,
            "bound_checks": [c.to_dict() for c in self.bound_checks],
        }


@dataclass
class StabilityCertificate:
    """Objects and bound checks certifying stability of a near-equality instance."""

    kind: str
    deficit: float
    segment_endpoints: Tuple[np.ndarray, np.ndarray]
    e: np.ndarray
    tube_radius: float
    circumradius: float
    v: Optional[np.ndarray] = None
    slab_width: Optional[float] = None
    r: Optional[float] = None
    cos_ev: Optional[float] = None
    surface_deficit: Optional[float] = None
    bound_checks: List[BoundCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when no evaluated bound check failed."""
        return all(c.passed is not False for c in self.bound_checks)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the certificate."""

        def vec(x: Optional[np.ndarray]) -> Optional[List[float]]:
            return None if x is None else [float(c) for c in x]

        return {
            "kind": self.kind,
            "deficit": self.deficit,
            "segment_endpoints": [vec(self.segment_endpoints[0]), vec(self.segment_endpoints[1])],
            "e": vec(self.e),
            "tube_radius": self.tube_radius,
            "circumradius": self.circumradius,
            "v": vec(self.v),
            "slab_width": self.slab_width,
            "r": self.r,
            "cos_ev": self.cos_ev,
            "surface_deficit": self.surface_deficit,
            "bound_checks": [c.to_dict() for c in self.bound_checks],
            "passed": self.passed,
        }


def tube_radius(points: np.ndarray, y1: np.ndarray, y2: np.ndarray) -> float:
    """Largest distance from a point to the segment [y1, y2]."""
    axis = y2 - y1
    length_sq = float(axis @ axis)
    if length_sq == 0.0:
        return float(np.max(np.linalg.norm(points - y1, axis=1)))
    s = np.clip((points - y1) @ axis / length_sq, 0.0, 1.0)
    nearest = y1 + s[:, None] * axis
    return float(np.max(np.linalg.norm(points - nearest, axis=1)))


def linhart_certificate(
    K: ConvexPolytope,
    deficit: Optional[float] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> StabilityCertificate:
    """Long segment and thin tube for a body with V_1 close to 2 R.

    Args:
        K: Body of dimension at least one
        deficit: Deficit to certify; by default the one measured by check_linhart
        tolerance: Slack for the bound checks, relative to R(K)

    Raises:
        PreconditionError: K is a point
        CertificateRefusedError: The deficit exceeds min(c3, 1/2)
    """
    if K.affine_dim == 0:
        raise PreconditionError("a certificate needs a body of dimension at least 1")
    n = K.dim_ambient
    constants = stability_constants(max(n, 2))
    c3 = constants.c3_est
    eps = max(0.0, check_linhart(K, tolerance).deficit if deficit is None else deficit)
    admissible = min(c3, 0.5)
    if eps > admissible:
        raise CertificateRefusedError(
            f"deficit {eps:.6g} exceeds the admissible bound min(c3, 1/2) = {admissible:.6g}"
        )

    radius = circumradius(K)
    y1, y2, length = diameter_pair(K)
    e = (y2 - y1) / length
    tube = tube_radius(K.vertices, y1, y2)
    checks = [
        _at_least("segment_length", length, (2.0 - (eps / c3) ** 2) * radius, tolerance, radius),
        _at_most(
            "tube_radius",
            tube,
            math.sqrt(constants.linhart_tube_coefficient**2 * eps) * radius,
            tolerance,
            radius,
        ),
        _at_most(
            "tube_inclusion",
            tube,
            constants.tube_factor * math.sqrt(eps) * radius,
            tolerance,
            radius,
        ),
        _at_least(
            "triangle_perimeter",
            v1(K),
            0.5 * length + math.sqrt(0.25 * length**2 + tube**2),
            tolerance,
            radius,
        ),
    ]
    certificate = StabilityCertificate(
        kind="linhart",
        deficit=eps,
        segment_endpoints=(y1, y2),
        e=e,
        tube_radius=tube,
        circumradius=radius,
        bound_checks=checks,
    )
    logger.info(f"Linhart certificate: deficit={eps!r} tube={tube!r} passed={certificate.passed}")
    return certificate


def surface_slab_check(
    M: ConvexPolytope,
    e: ArrayLike,
    epsilon: float,
    tolerance: float = DEFAULT_TOLERANCE,
    strict: bool = True,
) -> SlabEstimate:
    """Slab estimate for a body whose surface measure concentrates near +-e.

    Requires int |<e, u>| dS(M, u) >= (1 - epsilon) 2 V_{n-1}(M). Returns the
    minimal-width direction v of M oriented towards e and checks
    w_M(v) <= c4 r sqrt(epsilon), 1 - <e, v> <= c5 epsilon and the chord
    bound t <= c9 r sqrt(epsilon) with the explicit caps of the constants.

    Args:
        M: Body of dimension at least n - 1
        e: Unit direction
        epsilon: Surface deficit, 0 <= epsilon < (1/(2n))^n / 2
        tolerance: Slack for the checks
        strict: Reject epsilon outside the range of the explicit constants;
            otherwise the cap checks are recorded without a verdict

    Raises:
        PreconditionError: Dimension, range or surface hypothesis violated
    """
    n = M.dim_ambient
    u = as_direction(e, n)
    if n < 2 or M.affine_dim < n - 1:
        raise PreconditionError(f"body must have dimension >= {n - 1}, got {M.affine_dim}")
    constants = stability_constants(n)
    in_range = 0.0 <= epsilon < constants.slab_eps_max
    if epsilon < 0.0 or (strict and not in_range):
        raise PreconditionError(
            f"epsilon {epsilon:.6g} outside [0, {constants.slab_eps_max:.6g})"
        )

    measure = surface_area_measure(M)
    ratio = integrate_abs_cos(measure, u) / total_mass(measure)
    if ratio < 1.0 - epsilon - tolerance:
        raise PreconditionError(
            f"surface hypothesis violated: measured ratio {ratio:.12g} < 1 - epsilon = "
            f"{1.0 - epsilon:.12g}"
        )

    v, slab = minimal_width(M)
    if float(np.dot(u, v)) < 0.0:
        v = -v
    cos_ev = min(1.0, float(np.dot(u, v)))
    r = inradius_projection(M, u)
    chord = chord_length(M, u)
    root = math.sqrt(epsilon)
    checks = [
        _at_most("slab_width", slab, constants.slab_width_cap * r * root, tolerance),
        _at_most("cos_deficit", 1.0 - cos_ev, constants.slab_cos_cap * epsilon, tolerance),
        _at_most("chord_length", chord, constants.chord_cap * r * root, tolerance),
    ]
    if not in_range:
        checks = [BoundCheck(c.name, c.lhs, c.rhs, None) for c in checks]
    logger.debug(f"Slab estimate: ratio={ratio!r} width={slab!r} cos={cos_ev!r} r={r!r}")
    return SlabEstimate(
        e=u,
        epsilon=float(epsilon),
        surface_ratio=ratio,
        v=v,
        slab_width=slab,
        cos_ev=cos_ev,
        r=r,
        chord=chord,
        bound_checks=checks,
    )


def reverse_certificate(
    K: ConvexPolytope,
    M: ConvexPolytope,
    eps0: float = DEFAULT_EPS0,
    tolerance: float = DEFAULT_TOLERANCE,
) -> StabilityCertificate:
    """Certificate for near equality in V(K, M[n-1]) <= V_1(K) V_{n-1}(M) / n.

    K is close to a segment S (certified with deficit 4 epsilon) and M lies in a
    thin slab orthogonal to a direction v close to the direction e of S.

    Raises:
        CertificateRefusedError: The deficit exceeds eps0 or the segment step refuses
        PreconditionError: Dimension requirements on K or M fail
    """
    if eps0 <= 0:
        raise InvalidParameterError(f"eps0 must be positive, got {eps0}")
    n = K.dim_ambient
    if K.affine_dim < 1:
        raise PreconditionError("K must have dimension at least 1")
    if M.affine_dim < n - 1:
        raise PreconditionError(f"M must have dimension at least {n - 1}")
    report = check_reverse_minkowski(K, M, tolerance)
    eps = max(0.0, report.deficit)
    if eps > eps0:
        raise CertificateRefusedError(f"deficit {eps:.6g} exceeds eps0 = {eps0:.6g}")

    segment = linhart_certificate(K, deficit=4.0 * eps, tolerance=tolerance)
    e = segment.e
    measure = surface_area_measure(M)
    surface_deficit = max(0.0, 1.0 - integrate_abs_cos(measure, e) / total_mass(measure))
    slab = surface_slab_check(M, e, surface_deficit, tolerance, strict=False)

    constants = stability_constants(n)
    root = math.sqrt(eps)
    length_factor = 2.0 - (4.0 * eps / constants.c3_est) ** 2
    tube_coefficient = 2.0 * constants.linhart_tube_coefficient
    chain = (root + 2.0 * tube_coefficient / length_factor) * root
    checks = list(segment.bound_checks) + list(slab.bound_checks)
    checks.append(_at_most("surface_deficit_chain", surface_deficit, chain, tolerance))
    checks.append(BoundCheck("slab_order", slab.slab_width, slab.r * eps**0.25, None))
    checks.append(BoundCheck("cos_order", 1.0 - slab.cos_ev, root, None))
    checks.append(
        BoundCheck("tube_order", segment.tube_radius, segment.circumradius * root, None)
    )
    certificate = StabilityCertificate(
        kind="reverse",
        deficit=eps,
        segment_endpoints=segment.segment_endpoints,
        e=e,
        tube_radius=segment.tube_radius,
        circumradius=segment.circumradius,
        v=slab.v,
        slab_width=slab.slab_width,
        r=slab.r,
        cos_ev=slab.cos_ev,
        surface_deficit=surface_deficit,
        bound_checks=checks,
    )
    logger.info(f"Reverse certificate: deficit={eps!r} passed={certificate.passed}")
    return certificate
