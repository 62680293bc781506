"""Command-line surface: functionals, inequality checks, certificates, sweeps and tables.

Results go to stdout as JSON (or CSV for sweeps and tables), logs go to stderr.
Every JSON result embeds the run configuration. Exit codes: 0 when every
requested check passed, 2 when a check failed or a certificate was refused,
1 on input errors (reported by ``src.main``).
"""

import io
import json
import logging
import math
import os
import sys
from typing import Any, Dict, List, Optional

import click
import numpy as np

from src._version import __version__
from src.bodies.polytope import ConvexPolytope
from src.cli.sweeps import DEFAULT_REMARK_EPS, FAMILIES, parse_grid, run_sweep, write_csv
from src.config.config_manager import ConfigManager
from src.config.run_config import OUTPUT_FORMATS, RunConfig
from src.errors import CertificateRefusedError, InvalidParameterError
from src.functionals.functionals import (
    FUNCTIONAL_KEYS,
    functional_report,
    mixed_volume_1,
    mixed_volume_oracle,
)
from src.inequalities.certificates import linhart_certificate, reverse_certificate
from src.inequalities.reports import (
    InequalityReport,
    check_betke_weil,
    check_betke_weil_self,
    check_linhart,
    check_minkowski,
    check_projection_bound,
    check_reverse_minkowski,
)
from src.oracle.oracles import compare, run_oracle_suite
from src.spherical.profile import alpha_claim, claim_cos_bound, f_table, stability_constants
from src.spherical.quadrature import make_quadrature, monte_carlo_quadrature
from src.spherical.voronoi import (
    dv_cell_measures,
    dv_partition_moment,
    site_diameter,
    v1_spherical_hull,
    v1_spherical_hull_stderr,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
CHECK_NAMES = (
    "minkowski",
    "betke-weil",
    "betke-weil-self",
    "reverse-minkowski",
    "linhart",
    "projection",
)
PAIR_CHECKS = {"minkowski", "betke-weil", "reverse-minkowski"}
MC_SIGMAS = 3.0
DEFAULT_CLAIM_ETA = 0.1


def setup_logging(level: str = "WARNING", log_file: Optional[str] = None) -> None:
    """Setup application logging on stderr and optionally a file."""
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(os.path.expanduser(log_file)))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format=log_format,
        handlers=handlers,
        force=True,
    )

    logger.debug(f"Logging initialized at {level.upper()} level")


def jsonable(value: Any) -> Any:
    """Convert numpy values, tuples and non-finite floats into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return value


def config_payload(config: RunConfig) -> Dict[str, Any]:
    """Run configuration as embedded in outputs; the thread count does not affect results."""
    data = config.to_dict()
    data.pop("workers", None)
    return data


def emit(payload: Dict[str, Any], config: RunConfig) -> None:
    """Write one JSON result with the run configuration to stdout."""
    document = dict(payload)
    document["config"] = config_payload(config)
    click.echo(json.dumps(jsonable(document), sort_keys=True, indent=2))


def error_payload(error: BaseException) -> str:
    """Machine-readable error document for stderr."""
    return json.dumps(
        {"error": type(error).__name__, "message": str(error)}, sort_keys=True
    )


def load_body(path: str) -> ConvexPolytope:
    """Read a body from a JSON file ``{"dim": n, "vertices": [...]}``."""
    with open(path, "r", encoding="utf-8") as file:
        text = file.read()
    body = ConvexPolytope.from_json(text)
    logger.debug(f"Loaded {body!r} from {path}")
    return body


def parse_direction(text: str) -> List[float]:
    """Parse a comma-separated vector such as ``0,0,1``."""
    try:
        return [float(c) for c in text.split(",")]
    except ValueError as e:
        raise InvalidParameterError(f"invalid direction '{text}': {e}") from e


def _config(ctx: click.Context) -> RunConfig:
    config: RunConfig = ctx.obj["run_config"]
    return config


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="convex-stability")
@click.option("--config", "config_file", type=str, default=None, help="YAML config file.")
@click.option("--seed", type=int, default=None, help="Root seed of all randomness.")
@click.option("--tolerance", type=float, default=None, help="Numerical tolerance.")
@click.option("--quadrature-level", type=int, default=None, help="Product-rule level.")
@click.option("--mc-samples", type=int, default=None, help="Monte Carlo sample count.")
@click.option("--eps0", type=float, default=None, help="Admissible reverse-Minkowski deficit.")
@click.option(
    "--format", "output_format", type=click.Choice(OUTPUT_FORMATS), default=None,
    help="Output format of tabular commands.",
)
@click.option("--workers", type=int, default=None, help="Worker threads.")
@click.option("--log-level", type=click.Choice(LOG_LEVELS), default=None)
@click.option("--log-file", type=str, default=None, help="Also write logs to this file.")
@click.pass_context
def cli(
    ctx: click.Context,
    config_file: Optional[str],
    seed: Optional[int],
    tolerance: Optional[float],
    quadrature_level: Optional[int],
    mc_samples: Optional[int],
    eps0: Optional[float],
    output_format: Optional[str],
    workers: Optional[int],
    log_level: Optional[str],
    log_file: Optional[str],
) -> None:
    """Compute convex-geometry functionals and check stability estimates."""
    manager = ConfigManager(config_file)
    settings = manager.get_config()
    setup_logging(log_level or settings["logging"]["level"], log_file)
    ctx.ensure_object(dict)
    ctx.obj["settings"] = settings
    ctx.obj["run_config"] = manager.get_run_config(
        {
            "seed": seed,
            "tolerance": tolerance,
            "quadrature_level": quadrature_level,
            "mc_samples": mc_samples,
            "eps0": eps0,
            "output_format": output_format,
            "workers": workers,
        }
    )
    logger.info(f"Run configuration: {ctx.obj['run_config']}")


@cli.command()
@click.option("--body", "body_file", required=True, help="Body JSON file.")
@click.option(
    "--functionals", default=None,
    help=f"Comma-separated subset of {','.join(FUNCTIONAL_KEYS)}.",
)
@click.pass_context
def compute(ctx: click.Context, body_file: str, functionals: Optional[str]) -> int:
    """Functionals of one body."""
    config = _config(ctx)
    P = load_body(body_file)
    wanted = None if functionals is None else [f.strip() for f in functionals.split(",")]
    report = functional_report(P, wanted)
    violations = report.invariant_violations(config.tolerance)
    for key, message in violations.items():
        logger.warning(f"Functional sanity check failed for {key}: {message}")
    emit(
        {
            "command": "compute",
            "body": P.to_dict(),
            "report": report.to_dict(),
            "invariant_violations": violations,
        },
        config,
    )
    return EXIT_OK if not violations else EXIT_FAILED


@cli.command()
@click.option("--k", "k_file", required=True, help="Body K.")
@click.option("--m", "m_file", required=True, help="Body M.")
@click.option("--oracle", is_flag=True, help="Compare with the polynomial-fit oracle.")
@click.pass_context
def mixed(ctx: click.Context, k_file: str, m_file: str, oracle: bool) -> int:
    """Mixed volume V(K, M[n-1])."""
    config = _config(ctx)
    K, M = load_body(k_file), load_body(m_file)
    value = mixed_volume_1(K, M)
    payload: Dict[str, Any] = {"command": "mixed", "mixed_volume": value}
    code = EXIT_OK
    if oracle:
        comparison = compare(
            "mixed_volume", value, mixed_volume_oracle(K, M), K.dim_ambient + 1, rel_tol=1e-7
        )
        payload["oracle"] = comparison.to_dict()
        code = EXIT_OK if comparison.passed else EXIT_FAILED
    emit(payload, config)
    return code


@cli.command()
@click.argument("name", type=click.Choice(CHECK_NAMES))
@click.option("--k", "k_file", required=True, help="Body K.")
@click.option("--m", "m_file", default=None, help="Body M for two-body inequalities.")
@click.option("--direction", default=None, help="Unit direction for the projection bound.")
@click.pass_context
def check(
    ctx: click.Context,
    name: str,
    k_file: str,
    m_file: Optional[str],
    direction: Optional[str],
) -> int:
    """Evaluate one inequality and report its deficit."""
    config = _config(ctx)
    tol = config.tolerance
    K = load_body(k_file)
    report: InequalityReport
    if name in PAIR_CHECKS:
        if m_file is None:
            raise click.UsageError(f"check {name} needs --m")
        M = load_body(m_file)
        if name == "minkowski":
            report = check_minkowski(K, M, tol)
        elif name == "betke-weil":
            report = check_betke_weil(K, M, tol)
        else:
            report = check_reverse_minkowski(K, M, tol)
    elif name == "betke-weil-self":
        report = check_betke_weil_self(K, tol)
    elif name == "linhart":
        report = check_linhart(K, tol)
    else:
        if direction is None:
            raise click.UsageError("check projection needs --direction")
        report = check_projection_bound(K, parse_direction(direction), tol)
    emit({"command": "check", "report": report.to_dict()}, config)
    return EXIT_OK if report.satisfied else EXIT_FAILED


@cli.command()
@click.argument("kind", type=click.Choice(("linhart", "reverse")))
@click.option("--k", "k_file", required=True, help="Body K.")
@click.option("--m", "m_file", default=None, help="Body M (reverse certificate).")
@click.pass_context
def certify(ctx: click.Context, kind: str, k_file: str, m_file: Optional[str]) -> int:
    """Extract a stability certificate for a near-equality instance."""
    config = _config(ctx)
    K = load_body(k_file)
    try:
        if kind == "linhart":
            certificate = linhart_certificate(K, tolerance=config.tolerance)
        else:
            if m_file is None:
                raise click.UsageError("certify reverse needs --m")
            certificate = reverse_certificate(
                K, load_body(m_file), eps0=config.eps0, tolerance=config.tolerance
            )
    except CertificateRefusedError as e:
        logger.warning(str(e))
        emit({"command": "certify", "kind": kind, "refused": True, "reason": e.reason}, config)
        return EXIT_FAILED
    emit(
        {"command": "certify", "refused": False, "certificate": certificate.to_dict()},
        config,
    )
    return EXIT_OK if certificate.passed else EXIT_FAILED


@cli.command()
@click.argument("family", type=click.Choice(FAMILIES))
@click.option("--grid", "grid_spec", required=True, help="start:stop:steps or a,b,c.")
@click.option("--log", "log_grid", is_flag=True, help="Logarithmic grid.")
@click.option(
    "--remark-eps", type=float, default=DEFAULT_REMARK_EPS, show_default=True,
    help="Deficit of the remark family.",
)
@click.pass_context
def sweep(
    ctx: click.Context, family: str, grid_spec: str, log_grid: bool, remark_eps: float
) -> int:
    """Sweep a near-equality family and fit log-log exponents (CSV)."""
    config = _config(ctx)
    rows, fits = run_sweep(family, parse_grid(grid_spec, log_grid), config, remark_eps)
    buffer = io.StringIO()
    write_csv(rows, fits, buffer)
    click.echo(buffer.getvalue(), nl=False)
    return EXIT_OK if all(row.ok for row in rows) else EXIT_FAILED


@cli.command()
@click.option("--dim", "n", type=int, required=True, help="Ambient dimension n >= 2.")
@click.option("--alpha-steps", type=int, default=20, show_default=True)
@click.option("--eta", type=float, default=DEFAULT_CLAIM_ETA, show_default=True)
@click.pass_context
def constants(ctx: click.Context, n: int, alpha_steps: int, eta: float) -> int:
    """Numerical constants of the stability estimates in dimension n."""
    config = _config(ctx)
    payload: Dict[str, Any] = {"command": "constants"}
    payload.update(stability_constants(n).to_dict())
    payload["f_table"] = f_table(n, alpha_steps)
    payload["claim"] = {
        "eta": eta,
        "cos_bound": claim_cos_bound(n, eta),
        "alpha": alpha_claim(n, eta),
    }
    emit(payload, config)
    return EXIT_OK


@cli.command("sphere-profile")
@click.option("--dim", "n", type=int, required=True, help="Ambient dimension n >= 2.")
@click.option("--alpha-steps", type=int, default=200, show_default=True)
@click.pass_context
def sphere_profile(ctx: click.Context, n: int, alpha_steps: int) -> int:
    """Table of the mean height f(alpha) over spherical caps."""
    config = _config(ctx)
    table = f_table(n, alpha_steps)
    if config.output_format == "csv":
        lines = ["alpha,f"] + [f"{alpha!r},{value!r}" for alpha, value in table]
        click.echo("\n".join(lines))
    else:
        emit({"command": "sphere-profile", "n": n, "f_table": table}, config)
    return EXIT_OK


@cli.command("spherical-hull")
@click.option("--sites", "sites_file", required=True, help="Unit points as body JSON.")
@click.option("--product", is_flag=True, help="Product rule at --quadrature-level.")
@click.pass_context
def spherical_hull(ctx: click.Context, sites_file: str, product: bool) -> int:
    """V1 of the hull of unit points and their nearest-point partition."""
    config = _config(ctx)
    with open(sites_file, "r", encoding="utf-8") as file:
        data = json.loads(file.read())
    ConvexPolytope.from_dict(data)
    sites = np.asarray(data["vertices"], dtype=float)
    n = sites.shape[1]
    if product:
        quadrature = make_quadrature(n, config.quadrature_level)
    else:
        quadrature = monte_carlo_quadrature(n, config.mc_samples, config.seed, config.workers)
    value = v1_spherical_hull(sites, quadrature)
    stderr = v1_spherical_hull_stderr(sites, quadrature)
    eta = max(0.0, 2.0 - site_diameter(sites))
    lower = 2.0 + stability_constants(n).c3_est * math.sqrt(eta)
    slack = MC_SIGMAS * stderr + config.tolerance
    payload = {
        "command": "spherical-hull",
        "quadrature": quadrature.kind,
        "nodes": len(quadrature),
        "v1": value,
        "stderr": stderr,
        "eta": eta,
        "lower_bound": lower,
        "satisfied": value >= lower - slack,
        "cell_measures": dv_cell_measures(sites, quadrature),
        "partition_moments": dv_partition_moment(sites, quadrature),
    }
    emit(payload, config)
    return EXIT_OK if payload["satisfied"] else EXIT_FAILED


@cli.command()
@click.option("--body", "body_file", required=True, help="Body K.")
@click.option("--m", "m_file", default=None, help="Second body for the mixed-volume oracle.")
@click.pass_context
def oracle(ctx: click.Context, body_file: str, m_file: Optional[str]) -> int:
    """Cross-check the fast functionals against brute-force oracles."""
    config = _config(ctx)
    K = load_body(body_file)
    M = load_body(m_file) if m_file is not None else None
    samples = min(config.mc_samples, int(ctx.obj["settings"]["oracle"]["max_mc_samples"]))
    if samples < config.mc_samples:
        logger.info(f"Oracle samples capped at {samples}")
    comparisons = run_oracle_suite(K, M, samples, config.seed, config.workers)
    failed = [c.quantity for c in comparisons if not c.passed]
    if failed:
        logger.warning(f"Oracle mismatch for {failed}")
    emit(
        {
            "command": "oracle",
            "samples": samples,
            "comparisons": [c.to_dict() for c in comparisons],
        },
        config,
    )
    return EXIT_FAILED if failed else EXIT_OK
