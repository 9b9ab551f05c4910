"""Tests for the Mittag-Leffler evaluation."""

import mpmath
import numpy as np
import pytest
from scipy.special import erfcx

from fracdg.config import Config
from fracdg.exceptions import DomainError
from fracdg.numerics.mittag_leffler import mittag_leffler


def series_oracle(nu: float, z: float) -> float:
    """Power series in multiprecision, with enough digits to absorb the cancellation."""

    x = mpmath.mpf(-z)
    mpmath.mp.dps = 40 + int(float(x) ** (1.0 / nu) / 2.3)

    try:
        total = mpmath.mpf(0)
        p = 0

        while True:
            term = (-x) ** p / mpmath.gamma(1 + nu * p)
            total += term

            if p > 10 and abs(term) < mpmath.mpf(10) ** (-mpmath.mp.dps + 5) * max(abs(total), 1):
                break

            p += 1

        return float(total)
    finally:
        mpmath.mp.dps = 15


class TestClosedForms:
    def test_exponential(self):
        z = np.linspace(-50.0, 0.0, 201)
        np.testing.assert_allclose(mittag_leffler(1.0, z), np.exp(z), rtol=1e-12, atol=1e-300)

    def test_cosine(self):
        z = -np.linspace(0.0, 40.0, 101) ** 2
        np.testing.assert_allclose(mittag_leffler(2.0, z), np.cos(np.sqrt(-z)), atol=1e-13)

    def test_half_order(self):
        # E_{1/2}(-x) = exp(x^2) erfc(x); many values go through the interpolated middle band
        x = np.geomspace(1e-3, 1e3, 400)
        np.testing.assert_allclose(mittag_leffler(0.5, -x), erfcx(x), rtol=1e-10)

    def test_zero(self):
        for nu in (0.3, 0.7, 1.0, 1.5, 2.0):
            assert mittag_leffler(nu, 0.0) == 1.0


class TestSeriesOracle:
    def test_documented_value(self):
        assert mittag_leffler(0.7, -2.0) == pytest.approx(series_oracle(0.7, -2.0), rel=1e-12)

    @pytest.mark.parametrize("nu", [0.55, 0.7, 0.9, 1.1, 1.3, 1.7])
    @pytest.mark.parametrize("z", [-0.1, -0.9, -3.0, -8.0])
    def test_scalar(self, nu, z):
        expected = series_oracle(nu, z)
        assert mittag_leffler(nu, z) == pytest.approx(expected, rel=1e-10, abs=1e-14)

    @pytest.mark.parametrize("nu", [1.3, 1.7])
    def test_oscillating_large_argument(self, nu):
        z = -25.0
        assert mittag_leffler(nu, z) == pytest.approx(series_oracle(nu, z), rel=1e-9, abs=1e-14)

    def test_array_matches_scalar(self):
        z = -np.linspace(0.0, 30.0, 150)
        values = mittag_leffler(1.4, z)

        for i in range(0, z.size, 17):
            assert values[i] == pytest.approx(mittag_leffler(1.4, float(z[i])), rel=1e-10, abs=1e-15)

    def test_shape_is_kept(self):
        z = -np.arange(12.0).reshape(3, 4)
        assert mittag_leffler(0.8, z).shape == (3, 4)
        assert isinstance(mittag_leffler(0.8, -1.0), float)


class TestBounds:
    @pytest.mark.parametrize("nu", [0.1, 0.5, 0.95, 1.05, 1.5, 1.95])
    def test_bounded_by_one(self, nu):
        values = mittag_leffler(nu, -np.geomspace(1e-4, 1e6, 300))

        assert np.all(np.abs(values) <= 1.0 + 1e-12)

    @pytest.mark.parametrize("nu", [0.2, 0.6, 0.99])
    def test_completely_monotone_orders_decrease(self, nu):
        values = mittag_leffler(nu, -np.geomspace(1e-3, 1e4, 200))

        assert np.all(values > 0.0)
        assert np.all(np.diff(values) <= 1e-12 * values[:-1])

    def test_direct_quadrature_fallback(self):
        # Small batches skip the interpolant and integrate value by value
        config = Config(ml_interp_min_points=10_000)
        x = np.geomspace(1.0, 200.0, 20)

        np.testing.assert_allclose(mittag_leffler(0.5, -x, config), erfcx(x), rtol=1e-10)


class TestDomain:
    @pytest.mark.parametrize("nu", [0.0, -0.5, 2.5, float("nan")])
    def test_order(self, nu):
        with pytest.raises(DomainError):
            mittag_leffler(nu, -1.0)

    @pytest.mark.parametrize("z", [0.5, float("inf"), float("nan")])
    def test_argument(self, z):
        with pytest.raises(DomainError):
            mittag_leffler(0.5, z)

    def test_positive_entry_in_array(self):
        with pytest.raises(DomainError):
            mittag_leffler(1.5, np.array([-1.0, 2.0]))
