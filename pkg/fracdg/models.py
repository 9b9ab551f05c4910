"""Data models for the fractional DG benchmark."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

from fracdg.exceptions import ConfigError

Metric = Literal["left", "right", "pp"]
OutputFormat = Literal["csv", "json"]

ALL_METRICS: tuple[Metric, ...] = ("left", "right", "pp")


def auto_spatial_M(N: int) -> int:
    """Smallest M with M^2 >= N^3, i.e. M = ceil(N^(3/2))."""

    cube = N**3
    M = math.isqrt(cube)

    return M if M * M == cube else M + 1


def _number(data: dict[str, Any], key: str, default: Any = None) -> float:
    value = data.get(key, default)

    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")

    return float(value)


def _integer(data: dict[str, Any], key: str, default: Any = None) -> int:
    value = data.get(key, default)

    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key, f"expected an integer, got {value!r}")

    return value


def _boolean(data: dict[str, Any], key: str, default: bool = False) -> bool:
    value = data.get(key, default)

    if not isinstance(value, bool):
        raise ConfigError(key, f"expected true or false, got {value!r}")

    return value


def _number_list(data: dict[str, Any], key: str) -> list[float]:
    values = data.get(key, [])

    if not isinstance(values, list):
        raise ConfigError(key, f"expected a list, got {values!r}")

    return [_number({key: v}, key) for v in values]


@dataclass
class RunConfig:
    """Single benchmark run on the model problem."""

    alpha: float
    gamma: float
    N: int
    M: int | Literal["auto"] = "auto"
    T: float = 1.0
    m: int = 12
    metrics: tuple[Metric, ...] = ALL_METRICS
    output: Path | None = None
    output_format: OutputFormat = "csv"
    include_initial: bool = False
    initial_projection: Literal["l2", "ritz"] = "l2"
    initial_scale: float = 1.0
    check_residual: bool = False

    def validate(self) -> None:
        """Raise ConfigError naming the first invalid field."""

        if not -1.0 < self.alpha < 1.0:
            raise ConfigError("alpha", f"must lie in (-1, 1), got {self.alpha}")

        if not self.gamma >= 1.0:
            raise ConfigError("gamma", f"must be >= 1, got {self.gamma}")

        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 2:
            raise ConfigError("N", f"must be an integer >= 2, got {self.N}")

        if self.M != "auto" and (isinstance(self.M, bool) or not isinstance(self.M, int) or self.M < 2):
            raise ConfigError("M", f"must be 'auto' or an integer >= 2, got {self.M}")

        if not self.T > 0.0:
            raise ConfigError("T", f"must be positive, got {self.T}")

        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 1:
            raise ConfigError("m", f"must be an integer >= 1, got {self.m}")

        unknown = [metric for metric in self.metrics if metric not in ALL_METRICS]

        if unknown or not self.metrics:
            raise ConfigError("metrics", f"must be a non-empty subset of {ALL_METRICS}, got {self.metrics}")

        if self.output_format not in ("csv", "json"):
            raise ConfigError("format", f"must be csv or json, got {self.output_format}")

        if self.initial_projection not in ("l2", "ritz"):
            raise ConfigError("initial_projection", f"must be l2 or ritz, got {self.initial_projection}")

    @property
    def spatial_M(self) -> int:
        """Resolved number of spatial subintervals."""
        return auto_spatial_M(self.N) if self.M == "auto" else int(self.M)


@dataclass
class SweepConfig:
    """Cartesian product of alpha, gamma and N values."""

    alphas: list[float]
    gammas: list[float]
    Ns: list[int]
    M: int | Literal["auto"] = "auto"
    T: float = 1.0
    m: int = 12
    jobs: int = 1
    metrics: tuple[Metric, ...] = ALL_METRICS
    include_initial: bool = False

    def validate(self) -> None:
        if isinstance(self.jobs, bool) or not isinstance(self.jobs, int) or self.jobs < 1:
            raise ConfigError("jobs", f"must be an integer >= 1, got {self.jobs}")

        for cell in self.cells():
            cell.validate()

    def cells(self) -> list[RunConfig]:
        """Run configurations, alpha outermost, then gamma, then N."""

        return [
            RunConfig(
                alpha=alpha,
                gamma=gamma,
                N=N,
                M=self.M,
                T=self.T,
                m=self.m,
                metrics=self.metrics,
                include_initial=self.include_initial,
            )
            for alpha in self.alphas
            for gamma in self.gammas
            for N in self.Ns
        ]

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SweepConfig:
        """Create from a JSON sweep spec."""

        known = {"alphas", "gammas", "Ns", "M", "T", "m", "jobs", "metrics", "include_initial"}
        unknown = sorted(set(data) - known)

        if unknown:
            raise ConfigError(unknown[0], "unknown sweep spec key")

        M = data.get("M", "auto")

        if M != "auto":
            M = _integer(data, "M")

        Ns = data.get("Ns", [])

        if not isinstance(Ns, list):
            raise ConfigError("Ns", f"expected a list, got {Ns!r}")

        metrics = data.get("metrics", list(ALL_METRICS))

        if not isinstance(metrics, list):
            raise ConfigError("metrics", f"expected a list, got {metrics!r}")

        return cls(
            alphas=_number_list(data, "alphas"),
            gammas=_number_list(data, "gammas"),
            Ns=[_integer({"Ns": N}, "Ns") for N in Ns],
            M=M,
            T=_number(data, "T", 1.0),
            m=_integer(data, "m", 12),
            jobs=_integer(data, "jobs", 1),
            metrics=tuple(metrics),
            include_initial=_boolean(data, "include_initial"),
        )


@dataclass
class ErrorReport:
    """Errors of one run, with rates against the run at N/2 when present."""

    alpha: float
    gamma: float
    N: int
    M: int
    left_nodal: float | None = None
    right_nodal: float | None = None
    pp_global: float | None = None
    left_rate: float | None = None
    right_rate: float | None = None
    pp_rate: float | None = None
    seconds: float = 0.0
    stability_ratio: float | None = None
    residual: float | None = None
    expected: dict[str, float] = field(default_factory=dict)

    def row(self) -> dict[str, Any]:
        """Values for the CSV columns."""

        return {
            "alpha": self.alpha,
            "gamma": self.gamma,
            "N": self.N,
            "M": self.M,
            "left_nodal": self.left_nodal,
            "left_rate": self.left_rate,
            "right_nodal": self.right_nodal,
            "right_rate": self.right_rate,
            "pp_global": self.pp_global,
            "pp_rate": self.pp_rate,
            "seconds": self.seconds,
        }

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON serialization."""

        result = self.row()

        if self.stability_ratio is not None:
            result["stability_ratio"] = self.stability_ratio

        if self.residual is not None:
            result["residual"] = self.residual

        if self.expected:
            result["expected"] = dict(self.expected)

        return result

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ErrorReport:
        """Create from dictionary (JSON deserialization)."""

        return cls(
            alpha=data["alpha"],
            gamma=data["gamma"],
            N=data["N"],
            M=data["M"],
            left_nodal=data.get("left_nodal"),
            right_nodal=data.get("right_nodal"),
            pp_global=data.get("pp_global"),
            left_rate=data.get("left_rate"),
            right_rate=data.get("right_rate"),
            pp_rate=data.get("pp_rate"),
            seconds=data.get("seconds", 0.0),
            stability_ratio=data.get("stability_ratio"),
            residual=data.get("residual"),
            expected=dict(data.get("expected", {})),
        )


@dataclass
class CellResult:
    """Result of running a single sweep cell."""

    success: bool
    message: str
    config: RunConfig | None = None
    report: ErrorReport | None = None
