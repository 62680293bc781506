"""Quadrature rules and deterministic sampling on the unit sphere."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import gamma

from src.errors import InvalidParameterError
from src.spherical.constants import sphere_measure

logger = logging.getLogger(__name__)

SAMPLE_CHUNK = 8192
MAX_PRODUCT_NODES = 2**21
MAX_LEVEL = 10
AZIMUTH_RULES = ("gauss", "uniform")

Rule = Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class SphericalQuadrature:
    """Weighted nodes on S^{n-1}.

    ``kind`` is "product" for the deterministic product rule and
    "monte_carlo" for antipodal Monte Carlo pairs stored as consecutive rows.
    """

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    level: int = 0
    seed: Optional[int] = None

    def __len__(self) -> int:
        return int(self.weights.size)

    @property
    def total_weight(self) -> float:
        """Sum of weights; equals the sphere's measure."""
        return float(np.sum(self.weights))

    def integrate(self, values: np.ndarray) -> float:
        """Weighted sum of values sampled at the nodes, in fixed pairwise order."""
        values = np.asarray(values, dtype=float)
        if values.shape != self.weights.shape:
            raise InvalidParameterError(
                f"expected {self.weights.size} values, got {values.shape}"
            )
        return float(np.sum(self.weights * values))

    def integrate_function(self, func: Callable[[np.ndarray], np.ndarray]) -> float:
        """Integrate a vectorized function of the nodes."""
        return self.integrate(func(self.nodes))

    def standard_error(self, values: np.ndarray) -> float:
        """Standard error of integrate(values); zero for product rules."""
        if self.kind != "monte_carlo":
            return 0.0
        values = np.asarray(values, dtype=float)
        pair_means = 0.5 * (values[0::2] + values[1::2])
        pairs = pair_means.size
        if pairs < 2:
            return math.inf
        return float(
            sphere_measure(self.n - 1) * np.std(pair_means, ddof=1) / math.sqrt(pairs)
        )


def _sine_power_integral(k: int) -> float:
    """Integral of sin^k over [0, pi]."""
    return math.sqrt(math.pi) * float(gamma((k + 1) / 2.0)) / float(gamma(k / 2.0 + 1.0))


def _panel_rule(panels: int, per_panel: int, span: float) -> Rule:
    """Composite Gauss-Legendre nodes and weights on [0, span] split into equal panels."""
    x, w = leggauss(per_panel)
    width = span / panels
    nodes = []
    weights = []
    for p in range(panels):
        nodes.append(p * width + 0.5 * width * (x + 1.0))
        weights.append(0.5 * width * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _polar_rule(k: int, count: int) -> Rule:
    """Rule for int_0^pi g(t) sin^k(t) dt, rescaled to integrate sin^k exactly."""
    nodes, weights = _panel_rule(2, count // 2, math.pi)
    weights = weights * np.sin(nodes) ** k
    weights = weights * (_sine_power_integral(k) / np.sum(weights))
    return nodes, weights


def _azimuth_rule(count: int, azimuth: str) -> Rule:
    if azimuth == "uniform":
        step = 2.0 * math.pi / count
        return (np.arange(count) + 0.5) * step, np.full(count, step)
    return _panel_rule(4, count // 4, 2.0 * math.pi)


def product_size(n: int, level: int) -> int:
    """Number of nodes of the product rule on S^{n-1} at a level."""
    m = 4 * 2**level
    return m ** (n - 2) * 2 * m


def _angle_rules(n: int, level: int, azimuth: str) -> List[Rule]:
    m = 4 * 2**level
    rules = [_polar_rule(n - 1 - i, m) for i in range(1, n - 1)]
    rules.append(_azimuth_rule(2 * m, azimuth))
    return rules


def _block(n: int, rules: List[Rule]) -> Tuple[np.ndarray, np.ndarray]:
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    angles = [g.reshape(-1) for g in grids]
    weights = np.prod(np.stack([g.reshape(-1) for g in wgrids]), axis=0)

    nodes = np.empty((weights.size, n))
    sin_prod = np.ones(weights.size)
    for i, theta in enumerate(angles[:-1]):
        nodes[:, i] = sin_prod * np.cos(theta)
        sin_prod = sin_prod * np.sin(theta)
    nodes[:, n - 2] = sin_prod * np.cos(angles[-1])
    nodes[:, n - 1] = sin_prod * np.sin(angles[-1])
    return nodes, weights


def product_blocks(
    n: int,
    level: int,
    azimuth: str = "gauss",
    max_nodes: int = MAX_PRODUCT_NODES,
) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Product rule on S^{n-1} as (nodes, weights) blocks, one per first polar node.

    Concatenating the blocks gives the rows of make_quadrature in the same
    order. Arguments are checked before the first block is produced.

    Raises:
        InvalidParameterError: n < 2, unknown azimuth rule, level out of range
            or more than ``max_nodes`` nodes
    """
    if n < 2:
        raise InvalidParameterError(f"sphere dimension must be >= 1, got n={n}")
    if azimuth not in AZIMUTH_RULES:
        raise InvalidParameterError(f"unknown azimuth rule {azimuth!r}")
    if not 0 <= level <= MAX_LEVEL:
        raise InvalidParameterError(f"quadrature level must lie in [0, {MAX_LEVEL}]")
    total = product_size(n, level)
    if total > max_nodes:
        raise InvalidParameterError(
            f"product rule with level {level} in dimension {n} needs {total} nodes"
        )
    rules = _angle_rules(n, level, azimuth)
    return _iter_blocks(n, rules)


def _iter_blocks(n: int, rules: List[Rule]) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    if n == 2:
        yield _block(n, rules)
        return
    for theta, weight in zip(*rules[0]):
        yield _block(n, [(np.array([theta]), np.array([weight]))] + rules[1:])


def make_quadrature(n: int, level: int, azimuth: str = "gauss") -> SphericalQuadrature:
    """Product rule on S^{n-1} in hyperspherical coordinates.

    Each polar angle uses 4 * 2^level Gauss-Legendre nodes split at pi/2. The
    azimuth uses twice as many nodes: Gauss-Legendre panels split at multiples
    of pi/2 ("gauss", accurate when the integrand only bends on coordinate planes) or
    the equally weighted midpoint rule ("uniform").

    Raises:
        InvalidParameterError: n < 2, level out of range or too many nodes
    """
    blocks = list(product_blocks(n, level, azimuth))
    nodes = np.vstack([b[0] for b in blocks])
    weights = np.concatenate([b[1] for b in blocks])
    logger.debug(f"Built product quadrature on S^{n - 1} with {weights.size} nodes")
    return SphericalQuadrature(n=n, nodes=nodes, weights=weights, kind="product", level=level)


def _sample_chunk(n: int, size: int, seed_seq: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    x = rng.standard_normal((size, n))
    return x / np.linalg.norm(x, axis=1)[:, None]


def sample_sphere(n: int, count: int, seed: int, workers: int = 1) -> np.ndarray:
    """Uniform points on S^{n-1}, reproducible for a given seed and any worker count.

    Points are drawn in chunks of 8192, each from its own child of the seed
    sequence, so the stream does not depend on how chunks are scheduled.
    """
    if n < 2:
        raise InvalidParameterError(f"sphere dimension must be >= 1, got n={n}")
    if count < 1:
        raise InvalidParameterError(f"sample count must be positive, got {count}")
    chunks = -(-count // SAMPLE_CHUNK)
    children = np.random.SeedSequence(seed).spawn(chunks)
    sizes = [min(SAMPLE_CHUNK, count - i * SAMPLE_CHUNK) for i in range(chunks)]
    if workers > 1 and chunks > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts: List[np.ndarray] = list(
                executor.map(_sample_chunk, [n] * chunks, sizes, children)
            )
    else:
        parts = [_sample_chunk(n, s, c) for s, c in zip(sizes, children)]
    return np.vstack(parts)


def monte_carlo_quadrature(
    n: int, samples: int, seed: int, workers: int = 1
) -> SphericalQuadrature:
    """Equal-weight rule on samples/2 antipodal pairs (u, -u)."""
    pairs = max(1, samples // 2)
    half = sample_sphere(n, pairs, seed, workers)
    nodes = np.empty((2 * pairs, n))
    nodes[0::2] = half
    nodes[1::2] = -half
    weights = np.full(2 * pairs, sphere_measure(n - 1) / (2 * pairs))
    return SphericalQuadrature(
        n=n, nodes=nodes, weights=weights, kind="monte_carlo", seed=seed
    )
