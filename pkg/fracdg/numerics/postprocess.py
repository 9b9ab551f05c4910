"""
Lagrange postprocessing of the left nodal values and the quasi-interpolants
Pi^- and Pi^+.

The postprocessed solution interpolates v^n_- at every t_n: linearly on I_1
and I_2, and by the backward quadratic through t_{n-2}, t_{n-1}, t_n on I_n
for n >= 3.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import roots_legendre

from fracdg.exceptions import DomainError
from fracdg.numerics.mesh import TimeMesh
from fracdg.numerics.stepper import DGSolution

TimeFunction = Callable[[float], ArrayLike]

_MEAN_GAUSS = roots_legendre(8)


@dataclass(frozen=True, eq=False)
class PostprocessedSolution:
    """Left nodal values v^0_-..v^N_- (shape (N + 1, ...)) on a mesh."""

    mesh: TimeMesh
    nodal: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.mesh.N < 2:
            raise DomainError("Postprocessing needs at least two intervals")

        if self.nodal.shape[0] != self.mesh.N + 1:
            raise DomainError(f"Expected {self.mesh.N + 1} nodal values, got {self.nodal.shape[0]}")

    def stencil(self, n: int) -> tuple[NDArray[np.int_], NDArray[np.float64]]:
        """Level indices used on I_n."""

        if n <= 2:
            idx = np.array([n - 1, n])
        else:
            idx = np.array([n - 2, n - 1, n])

        return idx, self.mesh.levels[idx]

    def eval(self, t: float) -> NDArray[np.float64]:
        return eval_pp(self, t)

    def eval_many(self, points: ArrayLike) -> NDArray[np.float64]:
        """Values at many times, shape (len(points), ...)."""

        points = np.asarray(points, dtype=float)

        if np.any(points < 0.0) or np.any(points > self.mesh.horizon):
            raise DomainError(f"Evaluation times outside [0, {self.mesh.horizon}]")

        intervals = np.maximum(np.searchsorted(self.mesh.levels, points, side="left"), 1)
        out = np.empty((points.size,) + self.nodal.shape[1:])

        for n in np.unique(intervals):
            mask = intervals == n
            out[mask] = _interpolate(self, int(n), points[mask])

        return out


def postprocess(solution: DGSolution) -> PostprocessedSolution:
    """U# built from the left limits of a computed DG solution."""

    if not solution.is_complete:
        raise DomainError("Postprocessing needs a fully computed solution")

    return PostprocessedSolution(mesh=solution.mesh, nodal=solution.left_limits)


def eval_pp(pp: PostprocessedSolution, t: float) -> NDArray[np.float64]:
    """U#(t) for 0 <= t <= T; at a level the left interval's polynomial is used."""

    n = pp.mesh.locate(t)

    return _interpolate(pp, n, np.array([t]))[0]


def _interpolate(pp: PostprocessedSolution, n: int, t: NDArray[np.float64]) -> NDArray[np.float64]:
    idx, nodes = pp.stencil(n)
    basis = np.ones((t.size, nodes.size))

    for i in range(nodes.size):
        for j in range(nodes.size):
            if i != j:
                basis[:, i] *= (t - nodes[j]) / (nodes[i] - nodes[j])

    return np.tensordot(basis, pp.nodal[idx], axes=1)


def lagrange_stability_bound(gamma: float) -> float:
    """2 + (5/4) Lambda with Lambda = 2^gamma - 1."""
    return 2.0 + 1.25 * (2.0**gamma - 1.0)


@dataclass(frozen=True, eq=False)
class PiecewiseLinear:
    """Discontinuous piecewise-linear function; pairs[n-1] = (value at t_{n-1}^+, value at t_n^-)."""

    mesh: TimeMesh
    pairs: NDArray[np.float64]

    def eval(self, t: float, side: str | None = None) -> NDArray[np.float64]:
        levels = self.mesh.levels
        at_level = np.flatnonzero(levels == t)

        if at_level.size:
            level = int(at_level[0])

            if side == "left" and level > 0:
                return self.pairs[level - 1, 1]

            if side == "right" and level < self.mesh.N:
                return self.pairs[level, 0]

            raise DomainError(f"One-sided value at t={t} needs a valid side")

        n = self.mesh.locate(t)
        t_prev, t_now = self.mesh.interval(n)
        lam = (t - t_prev) / (t_now - t_prev)

        return (1.0 - lam) * self.pairs[n - 1, 0] + lam * self.pairs[n - 1, 1]


def interval_mean(v: TimeFunction, t_prev: float, t_now: float) -> NDArray[np.float64]:
    """(1/k) int_{I} v dt by 8-point Gauss."""

    xi, w = _MEAN_GAUSS
    k = t_now - t_prev
    values = [np.asarray(v(t_prev + 0.5 * k * (1.0 + x)), dtype=float) for x in xi]

    return 0.5 * sum(wg * val for wg, val in zip(w, values))


def pi_minus(v: TimeFunction, mesh: TimeMesh) -> PiecewiseLinear:
    """Pi^- v: matches v(t_n^-) and the mean of v on every I_n."""

    pairs = []

    for n in range(1, mesh.N + 1):
        t_prev, t_now = mesh.interval(n)
        right = np.asarray(v(t_now), dtype=float)
        mean = interval_mean(v, t_prev, t_now)
        pairs.append((2.0 * mean - right, right))

    return PiecewiseLinear(mesh=mesh, pairs=np.array(pairs))


def pi_plus(v: TimeFunction, mesh: TimeMesh) -> PiecewiseLinear:
    """Pi^+ v: matches v(t_{n-1}^+) and the mean of v on every I_n."""

    pairs = []

    for n in range(1, mesh.N + 1):
        t_prev, t_now = mesh.interval(n)
        left = np.asarray(v(t_prev), dtype=float)
        mean = interval_mean(v, t_prev, t_now)
        pairs.append((left, 2.0 * mean - left))

    return PiecewiseLinear(mesh=mesh, pairs=np.array(pairs))
