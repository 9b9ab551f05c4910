"""Tests for the P1 finite element layer."""

import numpy as np
import pytest
from scipy.integrate import simpson

from fracdg.exceptions import DimensionError, DomainError, NumericalError
from fracdg.numerics.fem import (
    Block2System,
    SpatialGrid,
    TriMatrix,
    assemble_mass,
    assemble_stiffness,
    l2_norm_against,
    l2_project,
    ritz_project,
    solve_block2,
)


def hat_function(grid: SpatialGrid, coeffs: np.ndarray):
    """Piecewise-linear interpolant of the padded nodal values."""

    full = grid.padded(coeffs)
    x = np.arange(grid.M + 1) * grid.h

    return lambda y: np.interp(y, x, full)


class TestMatrices:
    def test_mass_entries(self, grid4):
        M = grid4.mass

        np.testing.assert_allclose(M.diag, 1.0 / 6.0)
        np.testing.assert_allclose(M.off, 1.0 / 24.0)

    def test_stiffness_entries(self, grid4):
        K = grid4.stiffness

        np.testing.assert_allclose(K.diag, 8.0)
        np.testing.assert_allclose(K.off, -4.0)

    def test_stiffness_is_dirichlet_energy(self, rng):
        grid = SpatialGrid(9)
        v = rng.standard_normal(grid.dof)
        slopes = np.diff(grid.padded(v)) / grid.h

        assert assemble_stiffness(grid).quadratic_form(v) == pytest.approx(grid.h * np.sum(slopes**2), rel=1e-13)

    def test_assembly_matches_cached_matrices(self, grid4):
        np.testing.assert_array_equal(assemble_mass(grid4).to_dense(), grid4.mass.to_dense())
        np.testing.assert_array_equal(assemble_stiffness(grid4).to_dense(), grid4.stiffness.to_dense())

    def test_mass_integrates_products(self, grid4, rng):
        v = rng.standard_normal(grid4.dof)
        samples = grid4.at_quadrature(v)

        assert grid4.integrate_squares(samples) == pytest.approx(grid4.mass.quadratic_form(v), rel=1e-13)

    def test_positive_definite(self, rng):
        grid = SpatialGrid(12)

        for _ in range(20):
            v = rng.standard_normal(grid.dof)
            assert grid.mass.quadratic_form(v) > 0.0
            assert grid.stiffness.quadratic_form(v) > 0.0

        assert np.all(np.linalg.eigvalsh(grid.stiffness.to_dense()) > 0.0)

    def test_matvec_batches(self, grid4, rng):
        V = rng.standard_normal((5, 2, grid4.dof))
        dense = grid4.stiffness.to_dense()

        np.testing.assert_allclose(grid4.stiffness.matvec(V), V @ dense.T, rtol=1e-13)

    def test_scaled_sum(self, grid4):
        combined = TriMatrix.scaled_sum(2.0, grid4.mass, 0.5, grid4.stiffness)
        expected = 2.0 * grid4.mass.to_dense() + 0.5 * grid4.stiffness.to_dense()

        np.testing.assert_allclose(combined.to_dense(), expected)
        np.testing.assert_allclose((grid4.mass.scaled(2.0) + grid4.stiffness.scaled(0.5)).to_dense(), expected)

    def test_size_checks(self, grid4):
        with pytest.raises(DimensionError):
            grid4.mass.matvec(np.zeros(4))

        with pytest.raises(DimensionError):
            TriMatrix(np.ones(3), np.ones(3))

        with pytest.raises(DomainError):
            SpatialGrid(1)

    def test_tridiagonal_solve_failure(self):
        with pytest.raises(NumericalError):
            TriMatrix(np.array([1.0, -1.0]), np.array([0.0])).solve(np.ones(2))


class TestProjections:
    def test_l2_reproduces_finite_element_functions(self, rng):
        grid = SpatialGrid(10)
        coeffs = rng.standard_normal(grid.dof)

        np.testing.assert_allclose(l2_project(hat_function(grid, coeffs), grid), coeffs, atol=1e-12)

    def test_l2_model_initial(self, grid4):
        # Exact loads: int x(1 - x) hat_i = h (x_i - x_i^2 - h^2 / 6)
        h = grid4.h
        x = grid4.nodes
        loads = h * (x - x**2 - h**2 / 6.0)
        expected = np.linalg.solve(grid4.mass.to_dense(), loads)

        np.testing.assert_allclose(l2_project(lambda y: y * (1.0 - y), grid4), expected, rtol=1e-13)

    def test_l2_zero(self, grid4):
        np.testing.assert_array_equal(l2_project(np.zeros_like, grid4), np.zeros(3))

    def test_l2_rejects_non_finite(self, grid4):
        with pytest.raises(NumericalError):
            l2_project(lambda y: np.full_like(y, np.nan), grid4)

    def test_ritz_reproduces_finite_element_functions(self, rng):
        grid = SpatialGrid(9)
        coeffs = rng.standard_normal(grid.dof)

        np.testing.assert_allclose(ritz_project(hat_function(grid, coeffs), grid), coeffs, atol=1e-12)

    def test_ritz_zero(self, grid4):
        np.testing.assert_array_equal(ritz_project(np.zeros_like, grid4), np.zeros(3))

    def test_ritz_rate(self):
        errors = []
        Ms = [8, 16, 32, 64]

        for M in Ms:
            grid = SpatialGrid(M)
            coeffs = ritz_project(lambda y: np.sin(np.pi * y), grid)
            errors.append(l2_norm_against(coeffs, lambda y: np.sin(np.pi * y), grid))

        slope = np.polyfit(np.log(1.0 / np.array(Ms)), np.log(errors), 1)[0]

        assert slope == pytest.approx(2.0, abs=0.1)

    def test_ritz_needs_zero_ends(self, grid4):
        with pytest.raises(DomainError):
            ritz_project(lambda y: 1.0 + y, grid4)


class TestL2Norm:
    def test_exact_member(self, rng):
        grid = SpatialGrid(6)
        coeffs = rng.standard_normal(grid.dof)

        assert l2_norm_against(coeffs, hat_function(grid, coeffs), grid) < 1e-12

    def test_against_zero(self, rng):
        grid = SpatialGrid(6)
        coeffs = rng.standard_normal(grid.dof)

        assert l2_norm_against(coeffs, np.zeros_like, grid) == pytest.approx(
            np.sqrt(grid.mass.quadratic_form(coeffs)), rel=1e-13
        )

    def test_simpson_oracle(self):
        grid = SpatialGrid(8)
        coeffs = np.sin(np.pi * grid.nodes)
        interpolant = hat_function(grid, coeffs)

        x = np.linspace(0.0, 1.0, 20_001)
        expected = np.sqrt(simpson((interpolant(x) - np.sin(np.pi * x)) ** 2, x=x))

        assert l2_norm_against(coeffs, lambda y: np.sin(np.pi * y), grid) == pytest.approx(expected, abs=1e-8)


class TestBlockSolve:
    def test_mass_identity(self, grid4, rng):
        rhs = rng.standard_normal((2, grid4.dof))
        system = Block2System(
            mass=grid4.mass,
            stiff=grid4.stiffness,
            c=np.eye(2),
            d=np.zeros((2, 2)),
            rhs=rhs,
        )

        U = solve_block2(system)
        dense = grid4.mass.to_dense()

        np.testing.assert_allclose(U, np.linalg.solve(dense, rhs.T).T, rtol=1e-12, atol=1e-12)

    def test_coupled_against_dense(self, rng):
        grid = SpatialGrid(7)
        rhs = rng.standard_normal((2, grid.dof))
        c = np.array([[0.5, 0.5], [-0.5, 0.5]])
        d = np.array([[0.02, 0.011], [0.004, 0.02]])
        system = Block2System(mass=grid.mass, stiff=grid.stiffness, c=c, d=d, rhs=rhs)

        U = solve_block2(system)

        M, K = grid.mass.to_dense(), grid.stiffness.to_dense()
        dense = np.block(
            [
                [c[0, 0] * M + d[0, 0] * K, c[0, 1] * M + d[0, 1] * K],
                [c[1, 0] * M + d[1, 0] * K, c[1, 1] * M + d[1, 1] * K],
            ]
        )

        np.testing.assert_allclose(U.ravel(), np.linalg.solve(dense, rhs.ravel()), rtol=1e-11, atol=1e-12)
        np.testing.assert_allclose(system.apply(U), rhs, atol=1e-12)

    def test_randomized_dg_blocks(self, rng):
        transport = np.array([[0.5, 0.5], [-0.5, 0.5]])

        for _ in range(1000):
            grid = SpatialGrid(int(rng.integers(2, 258)))

            # Positive definite symmetric part plus a skew coupling, scaled like k^(1 + alpha)
            L = rng.uniform(-1.0, 1.0, (2, 2))
            skew = rng.uniform(-0.5, 0.5)
            d = (L @ L.T + 0.1 * np.eye(2) + np.array([[0.0, skew], [-skew, 0.0]])) * 10.0 ** rng.uniform(-4.0, 0.0)

            rhs = rng.standard_normal((2, grid.dof))
            system = Block2System(mass=grid.mass, stiff=grid.stiffness, c=transport, d=d, rhs=rhs)

            U = solve_block2(system)
            residual = np.max(np.abs(system.apply(U) - rhs))

            assert residual <= 1e-11 * np.max(system.apply_abs(U) + np.abs(rhs))

    def test_zero_rhs(self, grid4):
        system = Block2System(
            mass=grid4.mass,
            stiff=grid4.stiffness,
            c=[[0.5, 0.5], [-0.5, 0.5]],
            d=[[0.1, 0.05], [0.05, 0.1]],
            rhs=np.zeros((2, 3)),
        )

        np.testing.assert_array_equal(solve_block2(system), np.zeros((2, 3)))

    def test_singular(self, grid4):
        system = Block2System(
            mass=grid4.mass,
            stiff=grid4.stiffness,
            c=[[1.0, 1.0], [1.0, 1.0]],
            d=np.zeros((2, 2)),
            rhs=np.stack([np.ones(3), -np.ones(3)]),
        )

        with pytest.raises(NumericalError):
            solve_block2(system)

    def test_rhs_shape(self, grid4):
        with pytest.raises(DimensionError):
            Block2System(mass=grid4.mass, stiff=grid4.stiffness, c=np.eye(2), d=np.eye(2), rhs=np.zeros((2, 4)))
