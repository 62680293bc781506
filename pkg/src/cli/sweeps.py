"""Parameter sweeps over near-equality families and log-log exponent fits."""

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.bodies.generators import (
    box,
    isosceles,
    perturbed_segment,
    remark_body,
    remark_direction,
    segment,
)
from src.bodies.polytope import ConvexPolytope, width
from src.config.run_config import RunConfig
from src.errors import CertificateRefusedError, GeometryError
from src.functionals.functionals import inradius_projection, projection_volume, v_nminus1
from src.inequalities.certificates import (
    linhart_certificate,
    reverse_certificate,
    surface_slab_check,
)
from src.spherical.profile import stability_constants

logger = logging.getLogger(__name__)

FAMILIES = ("isosceles", "perturbed-segment", "thin-box", "remark")
DEFAULT_REMARK_EPS = 0.01
PERTURBED_SEGMENT_LENGTH = 2.0

CSV_COLUMNS = (
    "index",
    "family",
    "parameter",
    "seed",
    "epsilon",
    "tube_radius",
    "slab_width",
    "cos_deficit",
    "r",
    "width_e",
    "projection_ratio",
    "status",
    "fit_tube_vs_eps",
    "fit_slab_vs_eps",
    "fit_cos_vs_eps",
    "fit_width_vs_parameter",
)


@dataclass
class SweepRow:
    """Measurements of one sweep instance."""

    index: int
    family: str
    parameter: float
    seed: int
    epsilon: Optional[float] = None
    tube_radius: Optional[float] = None
    slab_width: Optional[float] = None
    cos_deficit: Optional[float] = None
    r: Optional[float] = None
    width_e: Optional[float] = None
    projection_ratio: Optional[float] = None
    status: str = "ok"

    @property
    def ok(self) -> bool:
        """True when the instance was certified without a failed check."""
        return self.status == "ok"


def parse_grid(text: str, log: bool = False) -> List[float]:
    """Parse "start:stop:steps" into a linear or logarithmic grid, or "a,b,c" into a list."""
    try:
        if ":" in text:
            start_s, stop_s, steps_s = text.split(":")
            start, stop, steps = float(start_s), float(stop_s), int(steps_s)
            if steps < 1:
                raise ValueError("steps must be positive")
            if steps == 1:
                return [start]
            if log:
                if start <= 0 or stop <= 0:
                    raise ValueError("logarithmic grid needs positive bounds")
                return [float(x) for x in np.geomspace(start, stop, steps)]
            return [float(x) for x in np.linspace(start, stop, steps)]
        values = [float(x) for x in text.split(",") if x.strip()]
        if not values:
            raise ValueError("empty grid")
        return values
    except ValueError as e:
        raise GeometryError(f"invalid grid '{text}': {e}") from e


def instance_seed(root_seed: int, index: int) -> int:
    """Per-instance seed derived from the root seed and the instance index."""
    return int(np.random.SeedSequence([root_seed, index]).generate_state(1, dtype=np.uint64)[0])


def fit_exponent(x: Sequence[Optional[float]], y: Sequence[Optional[float]]) -> Optional[float]:
    """Slope of log y against log x over the pairs where both are positive."""
    pairs = [
        (math.log(a), math.log(b))
        for a, b in zip(x, y)
        if a is not None and b is not None and a > 0 and b > 0
    ]
    if len(pairs) < 2 or len({p[0] for p in pairs}) < 2:
        return None
    xs, ys = zip(*pairs)
    return float(np.polyfit(xs, ys, 1)[0])


def _isosceles(index: int, t: float, seed: int, config: RunConfig) -> SweepRow:
    row = SweepRow(index, "isosceles", t, seed)
    cert = linhart_certificate(isosceles(t), tolerance=config.tolerance)
    row.epsilon, row.tube_radius = cert.deficit, cert.tube_radius
    row.status = "ok" if cert.passed else "failed"
    return row


def _perturbed_segment(index: int, delta: float, seed: int, config: RunConfig) -> SweepRow:
    row = SweepRow(index, "perturbed-segment", delta, seed)
    K = perturbed_segment(PERTURBED_SEGMENT_LENGTH, delta, seed)
    cert = linhart_certificate(K, tolerance=config.tolerance)
    row.epsilon, row.tube_radius = cert.deficit, cert.tube_radius
    row.status = "ok" if cert.passed else "failed"
    return row


def thin_box_pair(h: float) -> Tuple[ConvexPolytope, ConvexPolytope]:
    """Box 1 x 1 x h centred at the origin and a length-2 segment tilted by sqrt(h) from e_3."""
    M = box((1.0, 1.0, h), centered=True)
    angle = math.sqrt(h)
    K = segment((math.sin(angle), 0.0, math.cos(angle)), 2.0)
    return K, M


def _thin_box(index: int, h: float, seed: int, config: RunConfig) -> SweepRow:
    row = SweepRow(index, "thin-box", h, seed)
    K, M = thin_box_pair(h)
    cert = reverse_certificate(K, M, eps0=config.eps0, tolerance=config.tolerance)
    row.epsilon = cert.deficit
    row.tube_radius = cert.tube_radius
    row.slab_width = cert.slab_width
    row.cos_deficit = None if cert.cos_ev is None else 1.0 - cert.cos_ev
    row.r = cert.r
    row.status = "ok" if cert.passed else "failed"
    return row


def _remark(index: int, lam: float, seed: int, config: RunConfig, eps: float) -> SweepRow:
    row = SweepRow(index, "remark", lam, seed)
    n = 3
    M = remark_body(n, lam, eps)
    e = remark_direction(n, eps)
    row.epsilon = eps
    row.r = inradius_projection(M, e)
    row.width_e = width(M, e)
    row.projection_ratio = projection_volume(M, e) / v_nminus1(M)
    holds = 1.0 < row.r < n and row.projection_ratio >= 1.0 - eps - config.tolerance
    if eps < stability_constants(n).slab_eps_max:
        slab = surface_slab_check(M, e, eps, config.tolerance)
        row.slab_width = slab.slab_width
        row.cos_deficit = 1.0 - slab.cos_ev
        holds = holds and all(c.passed is not False for c in slab.bound_checks)
    row.status = "ok" if holds else "failed"
    return row


def run_sweep(
    family: str,
    grid: Sequence[float],
    config: RunConfig,
    remark_eps: float = DEFAULT_REMARK_EPS,
) -> Tuple[List[SweepRow], Dict[str, Optional[float]]]:
    """Run one family over a parameter grid.

    Instances run on ``config.workers`` threads; rows keep grid order.

    Returns:
        (rows, fitted exponents)
    """
    builders: Dict[str, Callable[[int, float, int, RunConfig], SweepRow]] = {
        "isosceles": _isosceles,
        "perturbed-segment": _perturbed_segment,
        "thin-box": _thin_box,
        "remark": lambda i, p, s, c: _remark(i, p, s, c, remark_eps),
    }
    if family not in builders:
        raise GeometryError(f"unknown sweep family '{family}', expected one of {FAMILIES}")
    build = builders[family]

    def run_one(item: Tuple[int, float]) -> SweepRow:
        index, parameter = item
        seed = instance_seed(config.seed, index)
        try:
            return build(index, parameter, seed, config)
        except CertificateRefusedError as e:
            logger.warning(f"{family}[{index}] refused: {e.reason}")
            return SweepRow(index, family, parameter, seed, status=f"refused: {e.reason}")

    items = list(enumerate(grid))
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            rows = list(executor.map(run_one, items))
    else:
        rows = [run_one(item) for item in items]

    eps = [row.epsilon for row in rows]
    fits = {
        "fit_tube_vs_eps": fit_exponent(eps, [row.tube_radius for row in rows]),
        "fit_slab_vs_eps": fit_exponent(eps, [row.slab_width for row in rows]),
        "fit_cos_vs_eps": fit_exponent(eps, [row.cos_deficit for row in rows]),
        "fit_width_vs_parameter": fit_exponent(
            [row.parameter for row in rows], [row.width_e for row in rows]
        ),
    }
    logger.info(f"Sweep {family}: {len(rows)} instances, fits {fits}")
    return rows, fits


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(
    rows: Sequence[SweepRow], fits: Dict[str, Optional[float]], stream: IO[str]
) -> None:
    """Write the sweep rows and a trailing summary row with the fitted exponents."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        values = {column: getattr(row, column, None) for column in CSV_COLUMNS}
        writer.writerow([_cell(values[column]) for column in CSV_COLUMNS])
    summary: Dict[str, object] = {column: None for column in CSV_COLUMNS}
    summary.update(fits)
    summary["family"] = "summary"
    summary["status"] = "ok" if all(row.ok for row in rows) else "failed"
    writer.writerow([_cell(summary[column]) for column in CSV_COLUMNS])
