"""
Piecewise-linear DG time stepping for u' + B_alpha A u = f.

On I_n the solution is U(t) = U0 lambda_0(t) + U1 lambda_1(t) with
U0 = U^{n-1}_+ and U1 = U^n_-. Testing with lambda_0 and lambda_1 gives

    (M/2 + k00 K) U0 + (M/2 + k10 K) U1 = M U^{n-1}_- + F0 - H0
    (-M/2 + k01 K) U0 + (M/2 + k11 K) U1 = F1 - H1

where kab are the self weights of I_n and H the history loads.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import partial
from typing import TYPE_CHECKING, Literal

import numpy as np
from numpy.typing import NDArray
from scipy.special import roots_legendre

from fracdg.config import DEFAULT_CONFIG, Config
from fracdg.exceptions import DomainError
from fracdg.numerics.fem import (
    Block2System,
    SpatialFunction,
    SpatialGrid,
    l2_project,
    ritz_project,
    solve_block2,
)
from fracdg.numerics.kernel import FracOrder, memory_load, memory_weights
from fracdg.numerics.mesh import FineGrid, TimeMesh, refine

if TYPE_CHECKING:
    from fracdg.cache import WeightCache

logger = logging.getLogger(__name__)

SourceFunction = Callable[[NDArray[np.float64], float], NDArray[np.float64]]
Projection = Literal["l2", "ritz"]
Side = Literal["left", "right"]

# Transport pairings: rows are test shapes b, columns trial shapes a
_TRANSPORT = np.array([[0.5, 0.5], [-0.5, 0.5]])

_TIME_GAUSS = roots_legendre(4)


def model_initial(x: NDArray[np.float64], scale: float = 1.0) -> NDArray[np.float64]:
    """u0(x) = scale x(1 - x)."""
    return scale * x * (1.0 - x)


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Problem data on (0, 1) x (0, T]."""

    order: FracOrder
    grid: SpatialGrid
    initial: SpatialFunction = model_initial
    source: SourceFunction | None = None
    horizon: float = 1.0
    initial_projection: Projection = "l2"

    def __post_init__(self) -> None:
        if not self.horizon > 0.0:
            raise DomainError(f"Final time must be positive, got {self.horizon}")

        ends = np.asarray(self.initial(np.array([0.0, 1.0])), dtype=float)

        if np.any(np.abs(ends) > 1e-12):
            raise DomainError("Initial data must vanish at x=0 and x=1")

        if self.initial_projection not in ("l2", "ritz"):
            raise DomainError(f"Unknown initial projection: {self.initial_projection}")

    @classmethod
    def model_problem(
        cls,
        alpha: float,
        grid: SpatialGrid,
        T: float = 1.0,
        initial_projection: Projection = "l2",
        scale: float = 1.0,
    ) -> ProblemSpec:
        """u0 = scale x(1-x), f = 0."""

        return cls(
            order=FracOrder(alpha),
            grid=grid,
            initial=partial(model_initial, scale=scale),
            horizon=T,
            initial_projection=initial_projection,
        )


@dataclass
class StabilityReport:
    """max ||U(t)||^2 on the fine grid against 8 |<U^0_-, U^0_+>|."""

    peak: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.peak <= self.bound * (1.0 + 1e-12) + 1e-300

    @property
    def ratio(self) -> float:
        return self.peak / self.bound if self.bound > 0.0 else 0.0


@dataclass(eq=False)
class DGSolution:
    """
    Fully discrete DG solution.

    pairs[n-1] holds (U^{n-1}_+, U^n_-); rows beyond ``computed`` are unset.
    """

    problem: ProblemSpec
    mesh: TimeMesh
    initial: NDArray[np.float64]
    pairs: NDArray[np.float64] = field(init=False)
    computed: int = 0

    def __post_init__(self) -> None:
        self.pairs = np.full((self.mesh.N, 2, self.problem.grid.dof), np.nan)

    @property
    def is_complete(self) -> bool:
        return self.computed == self.mesh.N

    @property
    def left_limits(self) -> NDArray[np.float64]:
        """U^0_-, U^1_-, ..., U^N_-, shape (N + 1, dof)."""
        return np.vstack([self.initial[None, :], self.pairs[:, 1]])

    @property
    def right_limits(self) -> NDArray[np.float64]:
        """U^0_+, ..., U^{N-1}_+, shape (N, dof)."""
        return self.pairs[:, 0]

    def left_limit(self, n: int) -> NDArray[np.float64]:
        if not 0 <= n <= self.computed:
            raise DomainError(f"Left limit at level {n} not available")

        return self.initial if n == 0 else self.pairs[n - 1, 1]

    def right_limit(self, n: int) -> NDArray[np.float64]:
        if not 0 <= n < self.computed:
            raise DomainError(f"Right limit at level {n} not available")

        return self.pairs[n, 0]

    def jump(self, n: int) -> NDArray[np.float64]:
        """[U]^n = U^n_+ - U^n_-."""
        return self.right_limit(n) - self.left_limit(n)

    def eval(self, t: float, side: Side | None = None) -> NDArray[np.float64]:
        """
        U(t). At a time level U is undefined, so a side is required there;
        elsewhere side is ignored.
        """

        mesh = self.mesh
        at_level = np.flatnonzero(mesh.levels == t)

        if at_level.size:
            level = int(at_level[0])

            if side == "left":
                return self.left_limit(level)

            if side == "right":
                return self.right_limit(level)

            raise DomainError(f"U is undefined at the time level t={t}; pass side='left' or 'right'")

        n = mesh.locate(t)

        if n > self.computed:
            raise DomainError(f"Interval {n} has not been computed")

        t_prev, t_now = mesh.interval(n)
        lam = (t - t_prev) / (t_now - t_prev)

        return (1.0 - lam) * self.pairs[n - 1, 0] + lam * self.pairs[n - 1, 1]

    def sample(self, fine: FineGrid) -> NDArray[np.float64]:
        """
        Values on the fine grid by interval, shape (N, m + 1, dof).

        Point l = 0 holds the right limit at t_{j-1} and l = m the left limit
        at t_j.
        """

        if fine.mesh is not self.mesh and not np.array_equal(fine.mesh.levels, self.mesh.levels):
            raise DomainError("Fine grid was built on a different mesh")

        lam = np.arange(fine.m + 1) / fine.m

        return (
            self.pairs[:, 0, None, :] * (1.0 - lam)[None, :, None]
            + self.pairs[:, 1, None, :] * lam[None, :, None]
        )


def init(problem: ProblemSpec, mesh: TimeMesh) -> DGSolution:
    """Start a solution from U^0_- = P_h u0 (or R_h u0)."""

    if abs(mesh.horizon - problem.horizon) > 1e-12 * problem.horizon:
        raise DomainError(f"Mesh ends at {mesh.horizon}, problem at {problem.horizon}")

    if problem.initial_projection == "ritz":
        initial = ritz_project(problem.initial, problem.grid)
    else:
        initial = l2_project(problem.initial, problem.grid)

    return DGSolution(problem=problem, mesh=mesh, initial=initial)


def source_loads(problem: ProblemSpec, mesh: TimeMesh, n: int) -> NDArray[np.float64]:
    """F_b = int_{I_n} <f(t), phi_i> lambda_b(t) dt by 4-point Gauss in time, shape (2, dof)."""

    grid = problem.grid

    if problem.source is None:
        return np.zeros((2, grid.dof))

    t_prev, t_now = mesh.interval(n)
    k = t_now - t_prev
    xi, w = _TIME_GAUSS
    lam = 0.5 * (1.0 + xi)

    loads = np.zeros((2, grid.dof))

    for lg, wg in zip(lam, w):
        values = np.asarray(problem.source(grid.quadrature_points, t_prev + lg * k), dtype=float)
        spatial = grid.load(values)
        loads[0] += 0.5 * k * wg * (1.0 - lg) * spatial
        loads[1] += 0.5 * k * wg * lg * spatial

    return loads


def step(
    solution: DGSolution,
    n: int,
    cache: WeightCache | None = None,
    config: Config = DEFAULT_CONFIG,
) -> DGSolution:
    """Compute (U^{n-1}_+, U^n_-) on I_n; intervals 1..n-1 must be done."""

    problem = solution.problem
    mesh = solution.mesh
    grid = problem.grid

    if n != solution.computed + 1:
        raise DomainError(f"Cannot step to interval {n}: {solution.computed} interval(s) computed")

    if cache is not None:
        weights = cache.get(problem.order, mesh, n)
    else:
        weights = memory_weights(problem.order, mesh, n)

    history = memory_load(weights, solution.pairs[: n - 1], grid.stiffness)
    rhs = source_loads(problem, mesh, n) - history
    rhs[0] += grid.mass.matvec(solution.left_limit(n - 1))

    system = Block2System(
        mass=grid.mass,
        stiff=grid.stiffness,
        c=_TRANSPORT,
        d=weights.self_block.T,
        rhs=rhs,
        residual_tol=config.banded_residual_tol,
    )

    solution.pairs[n - 1] = solve_block2(system)
    solution.computed = n

    logger.debug(f"Step {n}/{mesh.N}: t={mesh.levels[n]:.6g}")

    return solution


def solve(
    problem: ProblemSpec,
    mesh: TimeMesh,
    cache: WeightCache | None = None,
    config: Config = DEFAULT_CONFIG,
) -> DGSolution:
    """init, then step through n = 1..N."""

    solution = init(problem, mesh)

    for n in range(1, mesh.N + 1):
        step(solution, n, cache=cache, config=config)

    return solution


def residual_GN(solution: DGSolution) -> float:
    """
    Largest relative residual of G_N(U, X) = <U^0_-, X^0_+> + int <f, X> over
    every basis test function X = phi_i lambda_b on every I_n.

    The memory term is summed directly over j <= n with freshly computed
    weights, so nothing is shared with the stepping path.
    """

    if not solution.is_complete:
        raise DomainError("Residual needs a fully computed solution")

    problem = solution.problem
    mesh = solution.mesh
    M = problem.grid.mass
    K = problem.grid.stiffness

    worst = 0.0
    scale = 0.0
    lefts = solution.left_limits

    for n in range(1, mesh.N + 1):
        kappa = memory_weights(problem.order, mesh, n).kappa
        U0, U1 = solution.pairs[n - 1]

        memory = np.zeros((2, problem.grid.dof))

        for j in range(n):
            for a in (0, 1):
                KU = K.matvec(solution.pairs[j, a])
                memory[0] += kappa[j, a, 0] * KU
                memory[1] += kappa[j, a, 1] * KU

        F = source_loads(problem, mesh, n)
        transport = 0.5 * M.matvec(U1 - U0)

        r0 = M.matvec(U0 - lefts[n - 1]) + transport + memory[0] - F[0]
        r1 = transport + memory[1] - F[1]

        worst = max(worst, float(np.max(np.abs(r0))), float(np.max(np.abs(r1))))
        scale = max(
            scale,
            float(np.max(np.abs(M.matvec(lefts[n - 1])))),
            float(np.max(np.abs(memory))),
            float(np.max(np.abs(F))),
        )

    return worst / scale if scale > 0.0 else worst


def stability_check(solution: DGSolution, m: int = 12) -> StabilityReport:
    """max over the fine grid of ||U(t)||^2 against 8 |<U^0_-, U^0_+>| (f = 0)."""

    if solution.problem.source is not None:
        raise DomainError("Stability check applies to f = 0 only")

    if not solution.is_complete:
        raise DomainError("Stability check needs a fully computed solution")

    M = solution.problem.grid.mass
    values = solution.sample(refine(solution.mesh, m))
    norms = np.einsum("...i,...i->...", values, M.matvec(values))
    bound = 8.0 * abs(float(solution.initial @ M.matvec(solution.right_limit(0))))

    return StabilityReport(peak=float(norms.max()), bound=bound)
