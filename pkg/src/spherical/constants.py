"""Volumes of unit balls and spheres."""

import math

from scipy.special import gamma

from src.errors import InvalidParameterError

KAPPA_TABLE_SIZE = 17
KAPPA_TABLE = tuple(
    math.pi ** (m / 2.0) / float(gamma(m / 2.0 + 1.0)) for m in range(KAPPA_TABLE_SIZE)
)


def _check_order(m: int) -> int:
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise InvalidParameterError(f"dimension must be a non-negative integer, got {m}")
    return m


def kappa(m: int) -> float:
    """Volume of the m-dimensional unit ball, pi^(m/2) / Gamma(m/2 + 1)."""
    m = _check_order(m)
    if m < KAPPA_TABLE_SIZE:
        return KAPPA_TABLE[m]
    return math.pi ** (m / 2.0) / float(gamma(m / 2.0 + 1.0))


def kappa_recurrence(m: int) -> float:
    """kappa via kappa_m = 2 pi / m * kappa_{m-2}, used to validate the table."""
    m = _check_order(m)
    value = 1.0 if m % 2 == 0 else 2.0
    for j in range(2 + m % 2, m + 1, 2):
        value *= 2.0 * math.pi / j
    return value


def sphere_measure(m: int) -> float:
    """Hausdorff measure of the unit sphere S^m, equal to (m + 1) kappa_{m+1}."""
    m = _check_order(m)
    return (m + 1) * kappa(m + 1)
