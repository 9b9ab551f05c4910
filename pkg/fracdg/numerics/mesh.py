"""Graded time meshes and their uniform refinements."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from fracdg.config import DEFAULT_CONFIG
from fracdg.exceptions import DomainError


@dataclass(frozen=True, eq=False)
class TimeMesh:
    """Time levels 0 = t_0 < t_1 < ... < t_N = T."""

    levels: NDArray[np.float64]
    gamma: float = 1.0
    min_step_ratio: float = field(default=DEFAULT_CONFIG.min_step_ratio, repr=False)

    def __post_init__(self) -> None:
        levels = np.array(self.levels, dtype=float)
        levels.setflags(write=False)
        object.__setattr__(self, "levels", levels)

        if levels.ndim != 1 or levels.size < 2:
            raise DomainError("A time mesh needs at least one interval")

        if levels[0] != 0.0:
            raise DomainError(f"First time level must be 0, got {levels[0]}")

        horizon = levels[-1]

        if not np.isfinite(horizon) or horizon <= 0.0:
            raise DomainError(f"Final time must be positive, got {horizon}")

        if self.gamma < 1.0:
            raise DomainError(f"Grading exponent must be >= 1, got {self.gamma}")

        if np.any(np.diff(levels) <= self.min_step_ratio * horizon):
            raise DomainError("Time levels must increase with steps above the minimum step")

    @classmethod
    def from_levels(cls, levels: list[float] | NDArray[np.float64], gamma: float = 1.0) -> TimeMesh:
        """Build a mesh from explicit levels."""

        return cls(levels=np.asarray(levels, dtype=float), gamma=gamma)

    @property
    def N(self) -> int:
        """Number of intervals."""
        return self.levels.size - 1

    @property
    def horizon(self) -> float:
        return float(self.levels[-1])

    @property
    def steps(self) -> NDArray[np.float64]:
        """Step sizes k_1..k_N (index n-1 holds k_n)."""
        return np.diff(self.levels)

    @property
    def kmax(self) -> float:
        return float(self.steps.max())

    def step(self, n: int) -> float:
        """k_n for 1 <= n <= N."""

        self._check_interval(n)

        return float(self.levels[n] - self.levels[n - 1])

    def interval(self, n: int) -> tuple[float, float]:
        """Endpoints (t_{n-1}, t_n) of I_n."""

        self._check_interval(n)

        return float(self.levels[n - 1]), float(self.levels[n])

    def locate(self, t: float) -> int:
        """Index n of the interval whose closure contains t, ties to the left."""

        if not 0.0 <= t <= self.horizon:
            raise DomainError(f"t={t} outside [0, {self.horizon}]")

        return max(int(np.searchsorted(self.levels, t, side="left")), 1)

    @property
    def quasi_uniformity_bound(self) -> float:
        """Lambda = 2^gamma - 1, the ratio bound met by the standard graded mesh."""
        return quasi_uniformity_bound(self.gamma)

    @property
    def lambda_ratio(self) -> float:
        """Largest attained k_n / k_{n-1} over 3 <= n <= N (0 when N < 3)."""

        k = self.steps

        if k.size < 3:
            return 0.0

        return float(np.max(k[2:] / k[1:-1]))

    def _check_interval(self, n: int) -> None:
        if not 1 <= n <= self.N:
            raise DomainError(f"Interval index {n} outside 1..{self.N}")


@dataclass(frozen=True, eq=False)
class FineGrid:
    """The points t_{j-1} + l k_j / m for j = 1..N and l = 0..m."""

    mesh: TimeMesh
    m: int
    points: NDArray[np.float64]

    def local_points(self, j: int) -> NDArray[np.float64]:
        """The m + 1 points of the closed interval [t_{j-1}, t_j]."""

        return self.points[(j - 1) * self.m : j * self.m + 1]

    def __len__(self) -> int:
        return self.points.size


@dataclass
class GradingReport:
    """Outcome of the mesh grading checks."""

    step_bound: bool
    first_step: bool
    quasi_uniform: bool
    worst_step_ratio: float
    worst_lambda_ratio: float

    @property
    def passed(self) -> bool:
        return self.step_bound and self.first_step and self.quasi_uniform


def quasi_uniformity_bound(gamma: float) -> float:
    return 2.0**gamma - 1.0


def graded_mesh(N: int, gamma: float, T: float = 1.0) -> TimeMesh:
    """Standard graded mesh t_n = (n/N)^gamma T."""

    if N < 2:
        raise DomainError(f"Need at least 2 time steps, got N={N}")

    if gamma < 1.0:
        raise DomainError(f"Grading exponent must be >= 1, got {gamma}")

    if not T > 0.0:
        raise DomainError(f"Final time must be positive, got {T}")

    levels = (np.arange(N + 1) / N) ** gamma * T
    levels[-1] = T

    return TimeMesh(levels=levels, gamma=gamma)


def attained_grading_constant(mesh: TimeMesh) -> float:
    """Smallest C with k_n <= C k min(1, t_n^(1 - 1/gamma)) for all n."""

    return float(np.max(mesh.steps / _step_envelope(mesh, mesh.gamma)))


def check_grading(
    mesh: TimeMesh,
    gamma: float,
    Cgamma: float,
    cgamma: float | None = None,
    Lambda: float | None = None,
    rtol: float = 1e-12,
) -> GradingReport:
    """
    Check the grading assumptions on a mesh.

    - k_n <= Cgamma k min(1, t_n^(1 - 1/gamma)) for 1 <= n <= N
    - cgamma k^gamma <= k_1 <= Cgamma k^gamma (lower bound skipped if cgamma is None)
    - k_n <= Lambda k_{n-1} for 3 <= n <= N, Lambda defaulting to 2^gamma - 1
    """

    k = mesh.steps
    kmax = mesh.kmax
    slack = 1.0 + rtol

    step_ratios = k / _step_envelope(mesh, gamma)
    worst_step = float(step_ratios.max())
    step_bound = worst_step <= Cgamma * slack

    first_step = k[0] <= Cgamma * kmax**gamma * slack

    if cgamma is not None:
        first_step = first_step and cgamma * kmax**gamma <= k[0] * slack

    if Lambda is None:
        Lambda = quasi_uniformity_bound(gamma)

    worst_lambda = mesh.lambda_ratio

    return GradingReport(
        step_bound=bool(step_bound),
        first_step=bool(first_step),
        quasi_uniform=bool(worst_lambda <= Lambda * slack),
        worst_step_ratio=worst_step,
        worst_lambda_ratio=worst_lambda,
    )


def refine(mesh: TimeMesh, m: int) -> FineGrid:
    """Split every interval into m equal parts."""

    if m < 1:
        raise DomainError(f"Refinement factor must be >= 1, got {m}")

    left = mesh.levels[:-1, None]
    local = left + np.arange(m)[None, :] * (mesh.steps[:, None] / m)
    points = np.append(local.ravel(), mesh.horizon)

    return FineGrid(mesh=mesh, m=m, points=points)


def _step_envelope(mesh: TimeMesh, gamma: float) -> NDArray[np.float64]:
    """k min(1, t_n^(1 - 1/gamma)) for n = 1..N."""

    t = mesh.levels[1:]

    return mesh.kmax * np.minimum(1.0, t ** (1.0 - 1.0 / gamma))
