"""Configuration for the fractional DG benchmark."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import ClassVar


@dataclass
class Config:
    """Application configuration with sensible defaults."""

    # Directories
    output_dir: Path = field(default_factory=lambda: Path("results"))
    log_dir: Path = field(default_factory=lambda: Path("logs"))

    # Mittag-Leffler evaluation
    ml_series_peak: float = 4e3
    ml_series_max_terms: int = 800
    ml_asymptotic_tol: float = 1e-15
    ml_asymptotic_terms: int = 60
    ml_quad_epsabs: float = 1e-15
    ml_quad_epsrel: float = 1e-13
    ml_quad_limit: int = 400
    ml_interp_min_points: int = 64
    ml_interp_degrees: tuple[int, ...] = (32, 64, 128, 256)
    ml_interp_rtol: float = 1e-12

    # Discretization guards
    series_tol: float = 1e-10
    min_step_ratio: float = 1e-14
    banded_residual_tol: float = 1e-11

    # Run defaults
    horizon: float = 1.0
    fine_m: int = 12
    jobs: int = 1
    output_format: str = "csv"
    record_timing: bool = True

    CSV_COLUMNS: ClassVar[list[str]] = [
        "alpha",
        "gamma",
        "N",
        "M",
        "left_nodal",
        "left_rate",
        "right_nodal",
        "right_rate",
        "pp_global",
        "pp_rate",
        "seconds",
    ]

    def ensure_dirs(self) -> None:
        """Create output and log directories if they don't exist."""
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.log_dir.mkdir(parents=True, exist_ok=True)


DEFAULT_CONFIG = Config()
