"""Cap integrals on the sphere and the constants derived from them."""

import logging
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Any, Callable, Dict, List, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import bisect

from src.errors import InvalidParameterError
from src.spherical.constants import kappa, sphere_measure

logger = logging.getLogger(__name__)

GL_NODES = 64
C1_GRID_SIZE = 200
C1_GRID_SPAN = math.pi / 6.0
TAU_XTOL = 1e-13

_GL_NODES, _GL_WEIGHTS = leggauss(GL_NODES)


def gauss_legendre(func: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> float:
    """Integrate func over [a, b] with the fixed 64-node Gauss-Legendre rule."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return float(half * np.sum(_GL_WEIGHTS * func(mid + half * _GL_NODES)))


def _check_n(n: int, minimum: int = 2) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < minimum:
        raise InvalidParameterError(f"dimension must be an integer >= {minimum}, got {n}")
    return n


def rho(n: int, s: np.ndarray) -> np.ndarray:
    """Polar density (sin s)^(n-2) of the sphere S^{n-1}."""
    return np.sin(s) ** (n - 2)


def cap_measure(n: int, alpha: float) -> float:
    """Measure of the cap {x in S^{n-1} : <x, z> >= cos(alpha)}."""
    n = _check_n(n)
    if not 0 < alpha <= math.pi:
        raise InvalidParameterError(f"cap angle must lie in (0, pi], got {alpha}")
    return sphere_measure(n - 2) * gauss_legendre(lambda s: rho(n, s), 0.0, alpha)


def cap_first_moment(n: int, alpha: float) -> float:
    """Integral of <x, z> over the cap of angular radius alpha around z."""
    n = _check_n(n)
    if not 0 < alpha <= math.pi:
        raise InvalidParameterError(f"cap angle must lie in (0, pi], got {alpha}")
    return sphere_measure(n - 2) * gauss_legendre(
        lambda s: np.cos(s) * rho(n, s), 0.0, alpha
    )


def f_profile(n: int, alpha: float) -> float:
    """Mean of <x, z> over the cap of angular radius alpha in (0, pi/2]."""
    n = _check_n(n)
    if not 0 < alpha <= math.pi / 2.0 + 1e-15:
        raise InvalidParameterError(f"cap angle must lie in (0, pi/2], got {alpha}")
    alpha = min(alpha, math.pi / 2.0)
    return cap_first_moment(n, alpha) / cap_measure(n, alpha)


def f_half_sphere(n: int) -> float:
    """Closed form of f(pi/2), 2 kappa_{n-1} / (n kappa_n)."""
    n = _check_n(n)
    return 2.0 * kappa(n - 1) / (n * kappa(n))


def f_table(n: int, steps: int) -> List[Tuple[float, float]]:
    """Pairs (alpha, f(alpha)) on the grid alpha_i = (pi/2) i / steps, i = 1..steps."""
    if steps < 1:
        raise InvalidParameterError(f"steps must be positive, got {steps}")
    alphas = [0.5 * math.pi * i / steps for i in range(1, steps + 1)]
    return [(alpha, f_profile(n, alpha)) for alpha in alphas]


@lru_cache(maxsize=None)
def c1_estimate(n: int) -> float:
    """Smallest relative slope (f(pi/2 - e) / f(pi/2) - 1) / e on the grid e = (pi/6) k / 200."""
    n = _check_n(n)
    f_right = f_profile(n, math.pi / 2.0)
    slopes = []
    for k in range(1, C1_GRID_SIZE + 1):
        eps = C1_GRID_SPAN * k / C1_GRID_SIZE
        slopes.append((f_profile(n, math.pi / 2.0 - eps) / f_right - 1.0) / eps)
    return float(min(slopes))


def c1_lower_bound(n: int) -> float:
    """Closed-form lower bound for c1 from a uniform bound on -f' over [pi/3, pi/2].

    -f'(alpha) >= (sin(pi/3))^(n-2) / (int_0^{pi/2} rho)^2
                  * (cos(pi/6) - cos(pi/3)) * int_0^{pi/6} rho,
    and the mean value theorem turns this into a bound on the relative slope.
    """
    n = _check_n(n)
    full = gauss_legendre(lambda s: rho(n, s), 0.0, math.pi / 2.0)
    inner = gauss_legendre(lambda s: rho(n, s), 0.0, math.pi / 6.0)
    slope = (
        math.sin(math.pi / 3.0) ** (n - 2)
        / full**2
        * (math.cos(math.pi / 6.0) - math.cos(math.pi / 3.0))
        * inner
    )
    return slope / f_profile(n, math.pi / 2.0)


def band_measure(n: int, t: float) -> float:
    """Measure of {x in S^{n-2} : 0 <= <x, w> <= t} for a unit vector w, n >= 3."""
    n = _check_n(n, 3)
    if not 0.0 <= t <= 1.0:
        raise InvalidParameterError(f"band height must lie in [0, 1], got {t}")
    if t == 0.0:
        return 0.0
    return sphere_measure(n - 3) * gauss_legendre(
        lambda s: np.sin(s) ** (n - 3), math.acos(t), math.pi / 2.0
    )


@lru_cache(maxsize=None)
def tau(n: int) -> float:
    """Band height whose band carries a 1/(n(n+1)) share of S^{n-2}; 1 for n = 2."""
    n = _check_n(n)
    if n == 2:
        return 1.0
    target = sphere_measure(n - 2) / (n * (n + 1))
    return float(bisect(lambda t: band_measure(n, t) - target, 0.0, 1.0, xtol=TAU_XTOL))


def claim_cos_bound(n: int, eta: float) -> float:
    """Lower bound tau sqrt(eta) / 2 on the cosine gap forced by a short diameter."""
    if not 0 <= eta <= 1:
        raise InvalidParameterError(f"eta must lie in [0, 1], got {eta}")
    return tau(n) * math.sqrt(eta) / 2.0


def alpha_claim(n: int, eta: float) -> float:
    """Cap angle arccos(claim_cos_bound(n, eta)) used by the long-segment bound."""
    return math.acos(claim_cos_bound(n, eta))


@dataclass(frozen=True)
class StabilityConstants:
    """Numerical constants of the stability estimates in dimension n."""

    n: int
    tau: float
    c1_est: float
    c1_bound: float
    c3_est: float
    tube_factor: float
    linhart_tube_coefficient: float
    slab_eps_max: float
    slab_width_cap: float
    slab_cos_cap: float
    chord_cap: float

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the constants."""
        return asdict(self)


def slab_eps_max(n: int) -> float:
    """Largest surface deficit (exclusive) covered by the slab estimate, (1/(2n))^n / 2."""
    n = _check_n(n)
    return 0.5 * (1.0 / (2.0 * n)) ** n


def slab_width_cap(n: int) -> float:
    """Explicit cap 48 n^2 sqrt(6)^n on the slab-width constant."""
    n = _check_n(n)
    return 48.0 * n * n * math.sqrt(6.0) ** n


def slab_cos_cap(n: int) -> float:
    """Explicit cap (10 n)^4 (2 n)^n on the direction-deviation constant."""
    n = _check_n(n)
    return (10.0 * n) ** 4 * (2.0 * n) ** n


def chord_cap(n: int) -> float:
    """Explicit cap 48 n sqrt(6)^(n-1) on the chord-length constant."""
    n = _check_n(n)
    return 48.0 * n * math.sqrt(6.0) ** (n - 1)


@lru_cache(maxsize=None)
def stability_constants(n: int) -> StabilityConstants:
    """Assemble all dimension-dependent constants.

    Returns:
        StabilityConstants with c3_est = kappa_{n-1} c1_est tau / (2 n (n + 1))
    """
    n = _check_n(n)
    t = tau(n)
    c1 = c1_estimate(n)
    c3 = kappa(n - 1) * c1 * t / (2.0 * n * (n + 1))
    constants = StabilityConstants(
        n=n,
        tau=t,
        c1_est=c1,
        c1_bound=c1_lower_bound(n),
        c3_est=c3,
        tube_factor=math.sqrt(3.0 + 3.0 / c3**2),
        linhart_tube_coefficient=math.sqrt(5.0 / (2.0 * c3**2) + 3.0),
        slab_eps_max=slab_eps_max(n),
        slab_width_cap=slab_width_cap(n),
        slab_cos_cap=slab_cos_cap(n),
        chord_cap=chord_cap(n),
    )
    logger.debug(f"Stability constants for n={n}: {constants}")
    return constants
