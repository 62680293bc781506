"""Run configuration embedded in every command output."""

from dataclasses import asdict, dataclass, fields
from typing import Any, Dict

from src.errors import InvalidParameterError

OUTPUT_FORMATS = ("json", "csv")


@dataclass(frozen=True)
class RunConfig:
    """Reproducibility settings for one command invocation."""

    seed: int = 12345
    tolerance: float = 1e-9
    quadrature_level: int = 3
    mc_samples: int = 100000
    eps0: float = 0.05
    output_format: str = "json"
    workers: int = 1

    def __post_init__(self) -> None:
        """Validate the settings."""
        if not 0 <= self.seed < 2**64:
            raise InvalidParameterError(f"seed must be a 64-bit integer, got {self.seed}")
        for name in ("tolerance", "quadrature_level", "mc_samples", "eps0", "workers"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(
                    f"{name} must be positive, got {getattr(self, name)}"
                )
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidParameterError(
                f"output_format must be one of {OUTPUT_FORMATS}, got {self.output_format}"
            )

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "RunConfig":
        """Create a RunConfig from a mapping, ignoring unknown keys."""
        known = {f.name for f in fields(cls)}
        kwargs = {key: value for key, value in values.items() if key in known}
        try:
            typed = {
                "seed": int(kwargs.get("seed", cls.seed)),
                "tolerance": float(kwargs.get("tolerance", cls.tolerance)),
                "quadrature_level": int(
                    kwargs.get("quadrature_level", cls.quadrature_level)
                ),
                "mc_samples": int(kwargs.get("mc_samples", cls.mc_samples)),
                "eps0": float(kwargs.get("eps0", cls.eps0)),
                "output_format": str(kwargs.get("output_format", cls.output_format)),
                "workers": int(kwargs.get("workers", cls.workers)),
            }
        except (TypeError, ValueError) as e:
            raise InvalidParameterError(f"Invalid run configuration: {e}") from e
        return cls(**typed)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the configuration."""
        return asdict(self)
