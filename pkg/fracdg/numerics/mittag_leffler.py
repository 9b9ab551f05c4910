"""
Mittag-Leffler function E_nu(z) on the non-positive real axis.

Three evaluation branches are combined:

1. Power series sum_p z^p / Gamma(1 + nu p), accepted only where the
   cancellation ratio sum|terms| / |sum| stays below ``config.ml_series_peak``.
2. Asymptotic expansion -sum_p z^-p / Gamma(1 - nu p), truncated at its
   smallest envelope term, plus the two pole residues when 1 < nu < 2.
3. Integral representation over the branch cut,
   int_0^inf exp(-r tau) K_nu(r) dr with tau = |z|^(1/nu), for whatever the
   first two branches cannot resolve. Large batches are interpolated in
   log|z| from quadrature values.
"""

from __future__ import annotations

import logging
import math
import warnings
from typing import overload

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.typing import ArrayLike, NDArray
from scipy import integrate
from scipy.special import gammaln, rgamma

from fracdg.config import DEFAULT_CONFIG, Config
from fracdg.exceptions import DomainError, NumericalError

logger = logging.getLogger(__name__)

_CHUNK = 20_000


@overload
def mittag_leffler(nu: float, z: float, config: Config = ...) -> float: ...


@overload
def mittag_leffler(nu: float, z: NDArray[np.float64], config: Config = ...) -> NDArray[np.float64]: ...


def mittag_leffler(nu, z, config: Config = DEFAULT_CONFIG):
    """
    Evaluate E_nu(z) for 0 < nu <= 2 and z <= 0.

    Accepts a scalar or an array of arguments; scalars return a float.
    Raises DomainError outside the supported range and NumericalError if no
    branch reaches its tolerance.
    """

    if not (0.0 < nu <= 2.0) or not math.isfinite(nu):
        raise DomainError(f"Mittag-Leffler order must lie in (0, 2], got {nu}")

    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=float))

    if not np.all(np.isfinite(zz)) or np.any(zz > 0.0):
        raise DomainError("Mittag-Leffler argument must be finite and <= 0")

    if nu == 1.0:
        out = np.exp(zz)
    elif nu == 2.0:
        out = np.cos(np.sqrt(-zz))
    else:
        out = _evaluate(nu, -zz.ravel(), config).reshape(zz.shape)

    if scalar:
        return float(out[0])

    return out


def _evaluate(nu: float, x: NDArray[np.float64], config: Config) -> NDArray[np.float64]:
    """E_nu(-x) for x >= 0, nu not in {1, 2}."""

    out = np.full(x.shape, np.nan)
    done = np.zeros(x.shape, dtype=bool)

    out[x == 0.0] = 1.0
    done[x == 0.0] = True

    # Series is only worth trying where the largest term cannot swamp the sum
    candidates = np.flatnonzero(~done & (_log_series_peak(nu, x) < math.log(1e3 * config.ml_series_peak)))

    for start in range(0, candidates.size, _CHUNK):
        idx = candidates[start : start + _CHUNK]
        values, ok = _series(nu, x[idx], config)
        out[idx[ok]] = values[ok]
        done[idx[ok]] = True

    remaining = np.flatnonzero(~done)

    for start in range(0, remaining.size, _CHUNK):
        idx = remaining[start : start + _CHUNK]
        values, ok = _asymptotic(nu, x[idx], config)
        out[idx[ok]] = values[ok]
        done[idx[ok]] = True

    remaining = np.flatnonzero(~done)

    if remaining.size:
        logger.debug(f"Mittag-Leffler: {remaining.size} value(s) via branch-cut integral (nu={nu})")

        cut = _branch_cut_values(nu, x[remaining], config)

        if nu > 1.0:
            cut += _pole_residues(nu, x[remaining])

        out[remaining] = cut

    if not np.all(np.isfinite(out)):
        raise NumericalError(f"Mittag-Leffler evaluation produced non-finite values (nu={nu})")

    return out


def _log_series_peak(nu: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
    """Approximate log of the largest series term x^p / Gamma(1 + nu p)."""

    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.log(x)
        p_star = np.maximum((np.power(x, 1.0 / nu) - 0.5) / nu, 0.0)
        peak = p_star * logx - gammaln(1.0 + nu * p_star)

    return np.where(x > 0.0, np.maximum(peak, 0.0), 0.0)


def _series(
    nu: float, x: NDArray[np.float64], config: Config
) -> tuple[NDArray[np.float64], NDArray[np.bool_]]:
    """Power series with term-ratio stopping; returns values and acceptance mask."""

    logx = np.log(x)
    p_star = np.maximum((np.power(x, 1.0 / nu) - 0.5) / nu, 0.0)

    total = np.ones_like(x)
    magnitude = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)

    for p in range(1, config.ml_series_max_terms):
        term = np.exp(p * logx - gammaln(1.0 + nu * p))
        signed = -term if p % 2 else term

        total = np.where(active, total + signed, total)
        magnitude = np.where(active, magnitude + term, magnitude)

        # Stop once past the peak and the term no longer moves the sum
        finished = (p > p_star) & (term <= 1e-17 * np.abs(total))
        active &= ~finished

        if not active.any():
            break

    ok = ~active & (magnitude <= config.ml_series_peak * np.abs(total))

    return total, ok


def _asymptotic(
    nu: float, x: NDArray[np.float64], config: Config
) -> tuple[NDArray[np.float64], NDArray[np.bool_]]:
    """Optimally truncated asymptotic expansion; returns values and acceptance mask."""

    p = np.arange(1, config.ml_asymptotic_terms + 1, dtype=float)
    logx = np.log(x)[:, None]

    # |1/Gamma(1 - nu p)| <= Gamma(nu p) / pi gives a pole-free envelope
    log_envelope = gammaln(nu * p)[None, :] - math.log(math.pi) - p[None, :] * logx
    cut = np.argmin(log_envelope, axis=1)

    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        terms = np.power(-1.0, p + 1.0)[None, :] * np.exp(-p[None, :] * logx) * rgamma(1.0 - nu * p)[None, :]

        keep = np.arange(p.size)[None, :] < cut[:, None]
        total = np.sum(np.where(keep, terms, 0.0), axis=1)

        if nu > 1.0:
            total += _pole_residues(nu, x)

        error = np.exp(log_envelope[np.arange(x.size), cut])

    ok = (cut > 0) & np.isfinite(total) & (error <= config.ml_asymptotic_tol * np.abs(total))

    return total, ok


def _pole_residues(nu: float, x: ArrayLike) -> NDArray[np.float64]:
    """Contribution of the conjugate poles exp(tau e^{+-i pi/nu}) when 1 < nu < 2."""

    tau = np.power(x, 1.0 / nu)
    angle = math.pi / nu

    return (2.0 / nu) * np.exp(tau * math.cos(angle)) * np.cos(tau * math.sin(angle))


def _branch_cut_values(nu: float, x: NDArray[np.float64], config: Config) -> NDArray[np.float64]:
    """
    Branch-cut integral at many arguments.

    The integral is smooth and of one sign in log x, so large batches go
    through a Chebyshev interpolant whose nodes are computed by quadrature.
    An interpolant is only used after it matches direct quadrature at probe
    points between its nodes.
    """

    def direct(values: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.array([_branch_cut_integral(nu, float(v), config) for v in values])

    s = np.log(x)
    lo, hi = float(s.min()), float(s.max())

    if x.size < config.ml_interp_min_points or hi - lo < 1e-9:
        return direct(x)

    probes = lo + (hi - lo) * (np.arange(16) + 0.5) / 16
    expected = direct(np.exp(probes))

    for degree in config.ml_interp_degrees:
        cheb = Chebyshev.interpolate(lambda t: direct(np.exp(t)), degree, domain=[lo, hi])
        error = np.max(np.abs(cheb(probes) - expected) / np.abs(expected))

        if error <= config.ml_interp_rtol:
            logger.debug(f"Mittag-Leffler: degree {degree} interpolant on [{lo:.3g}, {hi:.3g}], error {error:.1e}")
            return cheb(s)

    logger.debug(f"Mittag-Leffler: interpolation rejected on [{lo:.3g}, {hi:.3g}], integrating directly")

    return direct(x)


def _branch_cut_integral(nu: float, x: float, config: Config) -> float:
    """int_0^inf exp(-r tau) K_nu(r) dr, tau = x^(1/nu); pole residues not included."""

    tau = x ** (1.0 / nu)
    s = math.sin(nu * math.pi)
    c = math.cos(nu * math.pi)

    def density(r: float) -> float:
        decay = math.exp(-r * tau)

        if decay == 0.0:
            return 0.0

        rn = r**nu
        return decay * s / (math.pi * (rn * rn + 2.0 * c * rn + 1.0))

    def weighted_density(r: float) -> float:
        value = density(r)
        return value * r ** (nu - 1.0) if value else 0.0

    options = {
        "epsabs": config.ml_quad_epsabs,
        "epsrel": config.ml_quad_epsrel,
        "limit": config.ml_quad_limit,
    }

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)

        # r^(nu-1) is singular at 0 when nu < 1: absorb it into the weight
        near, err_near = integrate.quad(density, 0.0, 1.0, weight="alg", wvar=(nu - 1.0, 0.0), **options)
        far, err_far = integrate.quad(weighted_density, 1.0, np.inf, **options)

    value = near + far
    error = err_near + err_far
    allowed = 1e5 * max(config.ml_quad_epsabs, config.ml_quad_epsrel * abs(value))

    if not math.isfinite(value) or error > allowed:
        raise NumericalError(f"Mittag-Leffler integral did not converge (nu={nu}, z={-x}, error={error:.2e})")

    return value
