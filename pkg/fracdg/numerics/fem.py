"""
Piecewise-linear finite elements on (0, 1) with homogeneous Dirichlet data.

Only interior nodes are stored; boundary values are identically zero.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from scipy import linalg
from scipy.special import roots_legendre

from fracdg.config import DEFAULT_CONFIG
from fracdg.exceptions import DimensionError, DomainError, NumericalError

logger = logging.getLogger(__name__)

SpatialFunction = Callable[[NDArray[np.float64]], NDArray[np.float64]]

GAUSS_POINTS = 4


@dataclass(frozen=True, eq=False)
class TriMatrix:
    """Symmetric tridiagonal matrix stored by its diagonal and off-diagonal."""

    diag: NDArray[np.float64]
    off: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.off.size != max(self.diag.size - 1, 0):
            raise DimensionError(f"Off-diagonal of length {self.off.size} for size {self.diag.size}")

    @property
    def size(self) -> int:
        return self.diag.size

    def matvec(self, v: NDArray[np.float64]) -> NDArray[np.float64]:
        """Product with a vector, or row-wise with a stack of vectors (last axis)."""

        if v.shape[-1] != self.size:
            raise DimensionError(f"Vector of length {v.shape[-1]} against operator of size {self.size}")

        out = self.diag * v
        out[..., :-1] += self.off * v[..., 1:]
        out[..., 1:] += self.off * v[..., :-1]

        return out

    def quadratic_form(self, v: NDArray[np.float64]) -> float:
        return float(v @ self.matvec(v))

    def scaled(self, c: float) -> TriMatrix:
        return TriMatrix(c * self.diag, c * self.off)

    def __add__(self, other: TriMatrix) -> TriMatrix:
        return TriMatrix(self.diag + other.diag, self.off + other.off)

    @staticmethod
    def scaled_sum(c: float, mass: TriMatrix, d: float, stiff: TriMatrix) -> TriMatrix:
        """c Mass + d Stiff."""
        return TriMatrix(c * mass.diag + d * stiff.diag, c * mass.off + d * stiff.off)

    def to_dense(self) -> NDArray[np.float64]:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)

    def solve(self, rhs: NDArray[np.float64]) -> NDArray[np.float64]:
        """Solve with a symmetric positive definite tridiagonal matrix."""

        ab = np.zeros((2, self.size))
        ab[0, 1:] = self.off
        ab[1] = self.diag

        try:
            return linalg.solveh_banded(ab, rhs)
        except linalg.LinAlgError as e:
            raise NumericalError(f"Tridiagonal solve failed: {e}") from e


@dataclass(frozen=True, eq=False)
class SpatialGrid:
    """Uniform partition of (0, 1) into M subintervals."""

    M: int

    def __post_init__(self) -> None:
        if self.M < 2:
            raise DomainError(f"Need at least 2 subintervals, got M={self.M}")

    @property
    def h(self) -> float:
        return 1.0 / self.M

    @property
    def dof(self) -> int:
        return self.M - 1

    @cached_property
    def nodes(self) -> NDArray[np.float64]:
        """Interior nodes x_i = i h, i = 1..M-1."""
        return np.arange(1, self.M) * self.h

    @cached_property
    def mass(self) -> TriMatrix:
        return assemble_mass(self)

    @cached_property
    def stiffness(self) -> TriMatrix:
        return assemble_stiffness(self)

    @cached_property
    def _gauss(self) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
        xi, w = roots_legendre(GAUSS_POINTS)
        lam = 0.5 * (1.0 + xi)
        points = (np.arange(self.M)[:, None] + lam[None, :]) * self.h

        return points, 0.5 * self.h * w, lam

    @property
    def quadrature_points(self) -> NDArray[np.float64]:
        """Gauss points per element, shape (M, GAUSS_POINTS)."""
        return self._gauss[0]

    @property
    def quadrature_weights(self) -> NDArray[np.float64]:
        """Element Gauss weights (same for every element)."""
        return self._gauss[1]

    def padded(self, coeffs: NDArray[np.float64]) -> NDArray[np.float64]:
        """Nodal values including the zero boundary values (last axis)."""

        if coeffs.shape[-1] != self.dof:
            raise DimensionError(f"Expected {self.dof} coefficients, got {coeffs.shape[-1]}")

        pad = [(0, 0)] * (coeffs.ndim - 1) + [(1, 1)]

        return np.pad(coeffs, pad)

    def at_quadrature(self, coeffs: NDArray[np.float64]) -> NDArray[np.float64]:
        """Values of the finite element function at the Gauss points (shape (..., M, G))."""

        full = self.padded(coeffs)
        lam = self._gauss[2]

        return full[..., :-1, None] * (1.0 - lam) + full[..., 1:, None] * lam

    def integrate_squares(self, samples: NDArray[np.float64]) -> NDArray[np.float64]:
        """int_0^1 v^2 dx from Gauss-point samples of shape (..., M, G)."""

        return np.einsum("...eg,g->...", samples**2, self.quadrature_weights)

    def load(self, values: NDArray[np.float64]) -> NDArray[np.float64]:
        """Loads int f hat_i dx from Gauss-point samples of f (shape (..., M, G))."""

        lam = self._gauss[2]
        w = self.quadrature_weights
        left = np.einsum("...eg,g->...e", values, w * (1.0 - lam))
        right = np.einsum("...eg,g->...e", values, w * lam)

        # Element e spans nodes e and e+1; interior node i sits at index i-1
        return right[..., :-1] + left[..., 1:]


def assemble_mass(grid: SpatialGrid) -> TriMatrix:
    """P1 mass matrix: diag 2h/3, off-diagonal h/6."""

    h = grid.h

    return TriMatrix(np.full(grid.dof, 2.0 * h / 3.0), np.full(grid.dof - 1, h / 6.0))


def assemble_stiffness(grid: SpatialGrid) -> TriMatrix:
    """P1 stiffness matrix for -d^2/dx^2: diag 2/h, off-diagonal -1/h."""

    h = grid.h

    return TriMatrix(np.full(grid.dof, 2.0 / h), np.full(grid.dof - 1, -1.0 / h))


def l2_project(fn: SpatialFunction, grid: SpatialGrid) -> NDArray[np.float64]:
    """L2 projection P_h fn onto the finite element space."""

    values = np.asarray(fn(grid.quadrature_points), dtype=float)

    if not np.all(np.isfinite(values)):
        raise NumericalError("Projection integrand is not finite at the quadrature points")

    return grid.mass.solve(grid.load(values))


def ritz_project(fn: SpatialFunction, grid: SpatialGrid) -> NDArray[np.float64]:
    """
    Ritz projection R_h fn for fn vanishing at 0 and 1.

    The energy loads int fn' hat_i' dx are exact second differences of the
    nodal values, so only point values of fn are needed.
    """

    x = np.arange(grid.M + 1) * grid.h
    values = np.asarray(fn(x), dtype=float)

    if abs(values[0]) > 1e-12 or abs(values[-1]) > 1e-12:
        raise DomainError("Ritz projection needs fn(0) = fn(1) = 0")

    loads = (2.0 * values[1:-1] - values[:-2] - values[2:]) / grid.h

    return grid.stiffness.solve(loads)


def l2_norm_against(
    coeffs: NDArray[np.float64],
    reference: SpatialFunction,
    grid: SpatialGrid,
) -> float:
    """||U_h - reference||_{L2(0,1)} by element-wise Gauss quadrature."""

    diff = grid.at_quadrature(coeffs) - np.asarray(reference(grid.quadrature_points), dtype=float)

    return float(np.sqrt(grid.integrate_squares(diff)))


@dataclass
class Block2System:
    """
    Two coupled tridiagonal equations

        sum_a (c[b][a] Mass + d[b][a] Stiff) U_a = rhs[b],  b = 0, 1.
    """

    mass: TriMatrix
    stiff: TriMatrix
    c: NDArray[np.float64]
    d: NDArray[np.float64]
    rhs: NDArray[np.float64]
    residual_tol: float = field(default=DEFAULT_CONFIG.banded_residual_tol)

    def __post_init__(self) -> None:
        self.c = np.asarray(self.c, dtype=float)
        self.d = np.asarray(self.d, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)

        if self.mass.size != self.stiff.size or self.rhs.shape != (2, self.mass.size):
            raise DimensionError("Block system operators and right-hand sides disagree in size")

    def block(self, b: int, a: int) -> TriMatrix:
        return TriMatrix.scaled_sum(self.c[b, a], self.mass, self.d[b, a], self.stiff)

    def apply(self, U: NDArray[np.float64]) -> NDArray[np.float64]:
        """Left-hand side applied to the pair U = (U_0, U_1)."""

        MU = self.mass.matvec(U)
        KU = self.stiff.matvec(U)

        return self.c @ MU + self.d @ KU

    def apply_abs(self, U: NDArray[np.float64]) -> NDArray[np.float64]:
        """Same as apply() with every coefficient and entry replaced by its modulus."""

        absU = np.abs(U)
        MU = TriMatrix(np.abs(self.mass.diag), np.abs(self.mass.off)).matvec(absU)
        KU = TriMatrix(np.abs(self.stiff.diag), np.abs(self.stiff.off)).matvec(absU)

        return np.abs(self.c) @ MU + np.abs(self.d) @ KU

    def banded(self) -> NDArray[np.float64]:
        """Interleaved matrix (unknown 2i + a, equation 2i + b) in solve_banded layout."""

        n = self.mass.size
        ab = np.zeros((7, 2 * n))

        for b in (0, 1):
            for a in (0, 1):
                blk = self.block(b, a)
                ab[3 - (a - b), a::2] = blk.diag
                ab[3 - (2 + a - b), 2 + a :: 2] = blk.off
                ab[3 - (a - b - 2), a : 2 * (n - 1) : 2] = blk.off

        return ab


def solve_block2(system: Block2System) -> NDArray[np.float64]:
    """Solve a Block2System; returns the pair (U_0, U_1) as an array of shape (2, dof)."""

    n = system.mass.size

    try:
        z = linalg.solve_banded((3, 3), system.banded(), system.rhs.T.ravel(), check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"Block system is singular: {e}") from e

    U = z.reshape(n, 2).T

    residual = np.abs(system.apply(U) - system.rhs)
    scale = system.apply_abs(U) + np.abs(system.rhs)
    worst = float(np.max(residual / np.where(scale > 0.0, scale, 1.0)))

    if not np.isfinite(worst) or worst > system.residual_tol:
        raise NumericalError(f"Block solve residual {worst:.2e} exceeds {system.residual_tol:.0e}")

    logger.debug(f"Block solve: {2 * n} unknowns, residual {worst:.1e}")

    return U
