"""
Fractional kernels and exact DG memory weights.

With omega_mu(t) = t^(mu-1) / Gamma(mu), the memory operator is

    B_alpha v = d/dt (omega_{1+alpha} * v),   -1 < alpha < 1,

which is the Riemann-Liouville derivative for alpha < 0 and the
Riemann-Liouville integral for alpha > 0. Integrating by parts on I_n turns
int_{I_n} chi_b B_alpha v dt into point values and a mean of
omega_{1+alpha} * v, and both follow from int_0^s omega_mu = omega_{mu+1}.
No quadrature is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import rgamma

from fracdg.exceptions import DimensionError, DomainError, NumericalError
from fracdg.numerics.fem import TriMatrix
from fracdg.numerics.mesh import TimeMesh

# Ratio h/x below which (1+r)^nu - 1 - nu r is summed as a binomial series
_SERIES_RATIO = 0.5
_SERIES_TERMS = 80


@dataclass(frozen=True)
class FracOrder:
    """Fractional order alpha in (-1, 1)."""

    alpha: float

    def __post_init__(self) -> None:
        if not (-1.0 < self.alpha < 1.0) or not math.isfinite(self.alpha):
            raise DomainError(f"Fractional order must lie in (-1, 1), got {self.alpha}")

    @property
    def alpha_plus(self) -> float:
        return max(self.alpha, 0.0)

    @property
    def alpha_minus(self) -> float:
        return min(self.alpha, 0.0)

    @property
    def is_derivative(self) -> bool:
        """Fractional derivative (subdiffusion)."""
        return self.alpha < 0.0

    @property
    def is_integral(self) -> bool:
        """Fractional integral (diffusion-wave)."""
        return self.alpha > 0.0

    @property
    def is_identity(self) -> bool:
        return self.alpha == 0.0


@dataclass(frozen=True, eq=False)
class MemoryWeights:
    """
    Weights for interval n.

    kappa[j-1, a, b] pairs the trial shape lambda_a on I_j with the test shape
    lambda_b on I_n (lambda_0 = 1 at the left end, lambda_1 = 1 at the right
    end). kappa0, set for alpha < 0 only, is the part of kappa[0, 0] that comes
    from the initial trace term omega_{1+alpha}(t) v^0_+; it is already
    included in kappa[0, 0].
    """

    n: int
    kappa: NDArray[np.float64]
    kappa0: NDArray[np.float64] | None = None

    @property
    def self_block(self) -> NDArray[np.float64]:
        return self.kappa[self.n - 1]

    @property
    def history(self) -> NDArray[np.float64]:
        return self.kappa[: self.n - 1]


def omega(mu: float, t: ArrayLike) -> float | NDArray[np.float64]:
    """omega_mu(t) = t^(mu-1) / Gamma(mu)."""

    if not mu > 0.0:
        raise DomainError(f"Kernel index must be positive, got mu={mu}")

    tt = np.asarray(t, dtype=float)

    if np.any(tt < 0.0) or not np.all(np.isfinite(tt)):
        raise DomainError("Kernel argument must be finite and >= 0")

    if mu < 1.0 and np.any(tt == 0.0):
        raise DomainError(f"omega_{mu} is singular at t=0")

    value = _omega(mu, tt)

    if value.ndim == 0:
        return float(value)

    return value


def _omega(mu: float, t: NDArray[np.float64]) -> NDArray[np.float64]:
    with np.errstate(divide="ignore"):
        return np.power(t, mu - 1.0) * rgamma(mu)


def _binomial_remainder(nu: float, r: NDArray[np.float64]) -> NDArray[np.float64]:
    """(1 + r)^nu - 1 - nu r for 0 <= r <= 1/2, summed as a series."""

    term = 0.5 * nu * (nu - 1.0) * r * r
    total = term.copy()

    for k in range(2, _SERIES_TERMS):
        term = term * (nu - k) / (k + 1) * r
        total += term

        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break

    return total


def _far_remainder(nu: float, s: NDArray[np.float64]) -> NDArray[np.float64]:
    """1 - s^nu - nu (1 - s) s^(nu-1) for 0 <= s <= 2/3."""

    return 1.0 - s**nu - nu * (1.0 - s) * s ** (nu - 1.0)


def _shape_convolutions(
    mu: float,
    start: NDArray[np.float64],
    width: NDArray[np.float64],
    t: float,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    (omega_mu * lambda_a 1_{I_j})(t) for a = 0, 1 and every interval
    I_j = (start, start + width).
    """

    q = np.minimum(t, start + width)
    h = np.maximum(q - start, 0.0)
    x = np.maximum(t - q, 0.0)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        r = np.where(x > 0.0, h / x, np.inf)

        # int_p^q omega_mu(t - s) ds
        i0 = _omega(mu + 1.0, x + h) * -np.expm1(-mu * np.log1p(r))

        # int_p^q omega_mu(t - s) (s - p) ds
        near = r <= _SERIES_RATIO
        i1 = np.where(
            near,
            _omega(mu + 2.0, x) * _binomial_remainder(mu + 1.0, np.where(near, r, 0.0)),
            _omega(mu + 2.0, x + h) * _far_remainder(mu + 1.0, np.where(near, 0.0, x / (x + h))),
        )

    i0 = np.where(h > 0.0, i0, 0.0)
    i1 = np.where(h > 0.0, i1, 0.0) / width

    return i0 - i1, i1


def _pairing_blocks(order: FracOrder, mesh: TimeMesh, n: int, js: NDArray[np.int_]) -> NDArray[np.float64]:
    """kappa^{n,j} for the given j values, shape (len(js), 2, 2)."""

    t_prev, t_now = mesh.interval(n)
    k = t_now - t_prev
    start = mesh.levels[js - 1]
    width = mesh.levels[js] - start

    mu = 1.0 + order.alpha
    w_prev = _shape_convolutions(mu, start, width, t_prev)
    w_now = _shape_convolutions(mu, start, width, t_now)
    mean_prev = _shape_convolutions(mu + 1.0, start, width, t_prev)
    mean_now = _shape_convolutions(mu + 1.0, start, width, t_now)

    blocks = np.empty((js.size, 2, 2))

    for a in (0, 1):
        mean = (mean_now[a] - mean_prev[a]) / k
        blocks[:, a, 0] = mean - w_prev[a]
        blocks[:, a, 1] = w_now[a] - mean

    if not np.all(np.isfinite(blocks)):
        raise NumericalError(f"Non-finite memory weights on interval {n} (alpha={order.alpha})")

    return blocks


def memory_weights(order: FracOrder, mesh: TimeMesh, n: int) -> MemoryWeights:
    """
    Exact weights with

        int_{I_n} <B_alpha V, chi_b> dt = sum_j sum_a kappa[j-1, a, b] V_a^(j)

    for V piecewise linear with coefficients V_a^(j) on I_j.
    """

    if not 1 <= n <= mesh.N:
        raise DomainError(f"Interval index {n} outside 1..{mesh.N}")

    kappa = _pairing_blocks(order, mesh, n, np.arange(1, n + 1))
    kappa0 = _initial_trace_weights(order, mesh, n) if order.is_derivative else None

    return MemoryWeights(n=n, kappa=kappa, kappa0=kappa0)


def kernel_pairing(order: FracOrder, mesh: TimeMesh, n: int, j: int) -> NDArray[np.float64]:
    """The 2x2 block kappa^{n,j}, indexed [a, b]; zero for j > n."""

    if not 1 <= n <= mesh.N or not 1 <= j <= mesh.N:
        raise DomainError(f"Interval pair ({n}, {j}) outside 1..{mesh.N}")

    if j > n:
        return np.zeros((2, 2))

    return _pairing_blocks(order, mesh, n, np.array([j]))[0]


def _initial_trace_weights(order: FracOrder, mesh: TimeMesh, n: int) -> NDArray[np.float64]:
    """int_{I_n} omega_{1+alpha}(t) lambda_b(t) dt for b = 0, 1."""

    ends = np.array(mesh.interval(n))
    value = _omega(2.0 + order.alpha, ends)
    mean = np.diff(_omega(3.0 + order.alpha, ends))[0] / (ends[1] - ends[0])

    return np.array([mean - value[0], value[1] - mean])


def memory_load(
    weights: MemoryWeights,
    history: NDArray[np.float64],
    stiffness: TriMatrix,
) -> NDArray[np.float64]:
    """
    History loads H_b = sum_{j<n} sum_a kappa[j-1, a, b] K U_a^(j), b = 0, 1.

    history has shape (n-1, 2, dof) with history[j-1, a] = U_a^(j). The
    initial trace is part of the j = 1 coefficients. Returns shape (2, dof).
    """

    n = weights.n
    history = np.asarray(history, dtype=float)

    if history.shape != (n - 1, 2, stiffness.size):
        raise DimensionError(
            f"History of shape {history.shape} does not match interval {n} with {stiffness.size} dofs"
        )

    if n == 1:
        return np.zeros((2, stiffness.size))

    # Sum over j and a in fixed order first, then apply K once per test shape
    combined = np.einsum("jab,jad->bd", weights.history, history)

    return stiffness.matvec(combined)
