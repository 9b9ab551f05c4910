"""
Exact solution of the model problem and the error measures reported for it.

With A = -d^2/dx^2 on (0, 1), u0 = x(1 - x) and f = 0,

    u(x, t) = 8 sum_{n>=0} w_n^-3 sin(w_n x) E_{1+alpha}(-w_n^2 t^(1+alpha)),

where w_n = (2n + 1) pi.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import zeta

from fracdg.config import DEFAULT_CONFIG, Config
from fracdg.exceptions import DomainError
from fracdg.numerics.fem import SpatialGrid
from fracdg.numerics.kernel import FracOrder
from fracdg.numerics.mesh import refine
from fracdg.numerics.mittag_leffler import mittag_leffler
from fracdg.numerics.postprocess import PostprocessedSolution
from fracdg.numerics.stepper import DGSolution, model_initial

logger = logging.getLogger(__name__)

# |E_nu(-x)| <= 1 for 0 < nu <= 2, x >= 0
ML_BOUND = 1.0

_X_CHUNK = 4096
_T_CHUNK = 256


def pointwise_tail(cutoff: int) -> float:
    """8 sum_{n >= cutoff} w_n^-3 = pi^-3 zeta(3, cutoff + 1/2)."""
    return ML_BOUND * float(zeta(3.0, cutoff + 0.5)) / math.pi**3


def l2_tail(cutoff: int) -> float:
    """L2(0, 1) norm bound of the series tail from term ``cutoff`` on."""
    return ML_BOUND * math.sqrt(0.5 * float(zeta(6.0, cutoff + 0.5))) / math.pi**3


def series_cutoff(tol: float) -> int:
    """Smallest number of terms whose L2 tail bound is below tol."""

    if not tol > 0.0:
        raise DomainError(f"Series tolerance must be positive, got {tol}")

    # l2_tail(c) ~ (pi^3 sqrt(10) c^2.5)^-1
    cutoff = max(int((math.pi**3 * math.sqrt(10.0) * tol) ** -0.4), 1)

    while cutoff > 1 and l2_tail(cutoff - 1) < tol:
        cutoff -= 1

    while l2_tail(cutoff) >= tol:
        cutoff += 1

    return cutoff


@dataclass(eq=False)
class ExactSolution:
    """Truncated series for the model problem with u0 = scale x(1 - x)."""

    order: FracOrder
    cutoff: int = 0
    scale: float = 1.0
    config: Config = field(default=DEFAULT_CONFIG, repr=False)

    def __post_init__(self) -> None:
        if self.cutoff <= 0:
            self.cutoff = series_cutoff(self.config.series_tol)

        n = np.arange(self.cutoff)
        self.frequencies = (2 * n + 1) * math.pi
        self.coefficients = 8.0 * self.scale / self.frequencies**3

        logger.debug(f"Exact series: {self.cutoff} terms, L2 tail {self.l2_tail_bound:.1e}")

    @property
    def nu(self) -> float:
        return 1.0 + self.order.alpha

    @property
    def heat_limit(self) -> bool:
        """alpha = 0: E_1 = exp and the series is the classical heat solution."""
        return self.order.is_identity

    @property
    def tail_bound(self) -> float:
        """Pointwise truncation bound."""
        return pointwise_tail(self.cutoff)

    @property
    def l2_tail_bound(self) -> float:
        """Truncation bound in L2(0, 1) at any fixed t."""
        return l2_tail(self.cutoff)

    def modes(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        """c_n E_nu(-w_n^2 t^nu), shape (len(t), cutoff)."""

        if np.any(t < 0.0):
            raise DomainError("Exact solution needs t >= 0")

        z = -np.outer(np.power(t, self.nu), self.frequencies**2)

        return self.coefficients * mittag_leffler(self.nu, z, self.config)

    def values(self, x: ArrayLike, t: ArrayLike) -> NDArray[np.float64]:
        """u(x, t) on the product of the given points, shape (len(t), *shape(x))."""

        xx = np.asarray(x, dtype=float)
        tt = np.atleast_1d(np.asarray(t, dtype=float))

        if np.any(xx < 0.0) or np.any(xx > 1.0):
            raise DomainError("Exact solution needs 0 <= x <= 1")

        flat = xx.ravel()
        out = np.empty((tt.size, flat.size))

        initial = tt == 0.0
        out[initial] = model_initial(flat, self.scale)

        later = np.flatnonzero(~initial)

        for start in range(0, later.size, _T_CHUNK):
            rows = later[start : start + _T_CHUNK]
            modes = self.modes(tt[rows])

            for xs in range(0, flat.size, _X_CHUNK):
                sines = np.sin(np.outer(self.frequencies, flat[xs : xs + _X_CHUNK]))
                out[rows, xs : xs + _X_CHUNK] = modes @ sines

        return out.reshape((tt.size,) + xx.shape)


def exact_u(sol: ExactSolution, x: float, t: float) -> float:
    """u(x, t) for a single point."""
    return float(sol.values(np.array([x]), np.array([t]))[0, 0])


def l2_errors(
    coeffs: NDArray[np.float64],
    times: NDArray[np.float64],
    sol: ExactSolution,
    grid: SpatialGrid,
) -> NDArray[np.float64]:
    """||U_h(t_i) - u(t_i)|| for each row of coeffs, by element Gauss quadrature."""

    errors = np.empty(times.size)
    points = grid.quadrature_points

    for start in range(0, times.size, _T_CHUNK):
        stop = start + _T_CHUNK
        reference = sol.values(points, times[start:stop])
        diff = grid.at_quadrature(coeffs[start:stop]) - reference
        errors[start:stop] = np.sqrt(grid.integrate_squares(diff))

    return errors


def nodal_errors(
    solution: DGSolution,
    sol: ExactSolution,
    include_initial: bool = False,
) -> tuple[float, float]:
    """
    (left, right) nodal errors:
    max_{1<=n<=N} ||U^n_- - u(t_n)|| and max_{0<=n<=N-1} ||U^n_+ - u(t_n)||.

    include_initial extends the left maximum to n = 0.
    """

    if not solution.is_complete:
        raise DomainError("Nodal errors need a fully computed solution")

    grid = solution.problem.grid
    levels = solution.mesh.levels
    first = 0 if include_initial else 1

    left = l2_errors(solution.left_limits[first:], levels[first:], sol, grid)
    right = l2_errors(solution.right_limits, levels[:-1], sol, grid)

    return float(left.max()), float(right.max())


def global_pp_error(pp: PostprocessedSolution, sol: ExactSolution, m: int = 12) -> float:
    """||U# - u||_{J,m}: max of the spatial L2 error over the fine grid."""

    fine = refine(pp.mesh, m)
    grid = SpatialGrid(pp.nodal.shape[1] + 1)
    values = pp.eval_many(fine.points)

    return float(l2_errors(values, fine.points, sol, grid).max())


def observed_rate(coarse: float, fine: float) -> float:
    """log2(coarse / fine) for errors of runs with N and 2N steps."""

    if not (coarse > 0.0 and fine > 0.0):
        raise DomainError(f"Rates need positive errors, got {coarse} and {fine}")

    return math.log2(coarse / fine)


def regularity_sigma(alpha: float) -> float:
    """Observed regularity exponent sigma = (5/4)(1 + alpha)."""
    return 1.25 * (1.0 + alpha)


def expected_nodal_rate(alpha: float, gamma: float) -> float:
    """min(gamma sigma, 3 + alpha_-)."""
    return min(gamma * regularity_sigma(alpha), 3.0 + min(alpha, 0.0))


def expected_pp_rate(alpha: float, gamma: float) -> float:
    """min(gamma (1 + alpha), 3 + alpha_-)."""
    return min(gamma * (1.0 + alpha), 3.0 + min(alpha, 0.0))


def optimal_gamma(alpha: float) -> float:
    """Smallest grading that reaches the nodal rate 3 + alpha_-."""
    return (3.0 + min(alpha, 0.0)) / regularity_sigma(alpha)
