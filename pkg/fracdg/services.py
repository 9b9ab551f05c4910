"""Benchmark runs, sweeps and result output."""

from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd

from fracdg.cache import WeightCache
from fracdg.config import DEFAULT_CONFIG, Config
from fracdg.exceptions import FracDGError, NumericalError
from fracdg.models import CellResult, ErrorReport, OutputFormat, RunConfig, SweepConfig
from fracdg.numerics.fem import SpatialGrid
from fracdg.numerics.mesh import graded_mesh
from fracdg.numerics.postprocess import postprocess
from fracdg.numerics.reference import (
    ExactSolution,
    expected_nodal_rate,
    expected_pp_rate,
    global_pp_error,
    nodal_errors,
    observed_rate,
)
from fracdg.numerics.stepper import ProblemSpec, residual_GN, solve, stability_check
from fracdg.utils import atomic_write_text, round_sig

logger = logging.getLogger(__name__)

# Weights are reused by every run in the same process
_WEIGHT_CACHE = WeightCache()

RATE_COLUMNS = {
    "left_nodal": "left_rate",
    "right_nodal": "right_rate",
    "pp_global": "pp_rate",
}


def run(
    config: RunConfig,
    app_config: Config = DEFAULT_CONFIG,
    cache: WeightCache | None = _WEIGHT_CACHE,
) -> ErrorReport:
    """Solve the model problem, postprocess and measure the errors."""

    config.validate()

    started = time.perf_counter()

    grid = SpatialGrid(config.spatial_M)
    mesh = graded_mesh(config.N, config.gamma, config.T)
    problem = ProblemSpec.model_problem(
        config.alpha,
        grid,
        T=config.T,
        initial_projection=config.initial_projection,
        scale=config.initial_scale,
    )

    solution = solve(problem, mesh, cache=cache, config=app_config)

    stability = stability_check(solution, m=config.m)

    if not stability.passed:
        raise NumericalError(
            f"Stability estimate violated: max ||U||^2 = {stability.peak:.3e} > {stability.bound:.3e}"
        )

    exact = ExactSolution(problem.order, scale=config.initial_scale, config=app_config)

    report = ErrorReport(
        alpha=config.alpha,
        gamma=config.gamma,
        N=config.N,
        M=grid.M,
        stability_ratio=stability.ratio,
        expected={
            "nodal_rate": expected_nodal_rate(config.alpha, config.gamma),
            "pp_rate": expected_pp_rate(config.alpha, config.gamma),
        },
    )

    if "left" in config.metrics or "right" in config.metrics:
        left, right = nodal_errors(solution, exact, include_initial=config.include_initial)

        if "left" in config.metrics:
            report.left_nodal = left

        if "right" in config.metrics:
            report.right_nodal = right

    if "pp" in config.metrics:
        report.pp_global = global_pp_error(postprocess(solution), exact, m=config.m)

    if config.check_residual:
        report.residual = residual_GN(solution)

    if app_config.record_timing:
        report.seconds = time.perf_counter() - started

    logger.debug(
        f"alpha={config.alpha} gamma={config.gamma} N={config.N} M={grid.M}: "
        f"left={report.left_nodal} right={report.right_nodal} pp={report.pp_global}"
    )

    return report


def run_cell(config: RunConfig, app_config: Config = DEFAULT_CONFIG) -> CellResult:
    """Run one sweep cell, capturing failures instead of raising."""

    try:
        report = run(config, app_config)
    except FracDGError as e:
        return CellResult(success=False, message=f"{type(e).__name__}: {e}", config=config)

    return CellResult(success=True, message="ok", config=config, report=report)


def sweep(
    config: SweepConfig,
    app_config: Config = DEFAULT_CONFIG,
    log: logging.Logger = logger,
) -> list[CellResult]:
    """Run every cell, in enumeration order, then attach rates."""

    config.validate()

    cells = config.cells()
    total = len(cells)
    results: list[CellResult] = []

    if config.jobs > 1 and total > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as executor:
            # map() yields in submission order
            outcomes = executor.map(run_cell, cells, [app_config] * total)

            for idx, result in enumerate(outcomes, 1):
                _log_cell(log, idx, total, result)
                results.append(result)
    else:
        for idx, cell in enumerate(cells, 1):
            result = run_cell(cell, app_config)
            _log_cell(log, idx, total, result)
            results.append(result)

    attach_rates([result.report for result in results if result.report is not None])

    return results


def _log_cell(log: logging.Logger, idx: int, total: int, result: CellResult) -> None:
    cell = result.config

    log.info(f"[{idx}/{total}] alpha={cell.alpha:g} gamma={cell.gamma:g} N={cell.N}")

    if result.success and result.report is not None:
        report = result.report
        parts = [
            f"{name}={value:.3e}"
            for name, value in (
                ("left", report.left_nodal),
                ("right", report.right_nodal),
                ("pp", report.pp_global),
            )
            if value is not None
        ]
        log.info(f"    M={report.M} {' '.join(parts)} ({report.seconds:.1f}s)")
    else:
        log.warning(f"    {result.message}")


def reports_frame(reports: list[ErrorReport]) -> pd.DataFrame:
    """One row per report, columns in CSV order."""

    return pd.DataFrame([report.row() for report in reports], columns=Config.CSV_COLUMNS)


def attach_rates(reports: list[ErrorReport]) -> None:
    """
    Fill the rate fields from the previous run of the same (alpha, gamma)
    column when it used N/2 steps.
    """

    if not reports:
        return

    frame = reports_frame(reports)
    groups = frame.groupby(["alpha", "gamma"], sort=False)
    previous_N = groups["N"].shift(1)
    doubled = (frame["N"] == 2 * previous_N).to_numpy()

    for metric, rate_column in RATE_COLUMNS.items():
        previous = groups[metric].shift(1).to_numpy(dtype=float)
        current = frame[metric].to_numpy(dtype=float)

        for i, report in enumerate(reports):
            coarse, fine = previous[i], current[i]

            if doubled[i] and coarse > 0.0 and fine > 0.0:
                setattr(report, rate_column, observed_rate(coarse, fine))


def emit(reports: list[ErrorReport], path: Path, fmt: OutputFormat = "csv") -> Path:
    """Write reports as CSV (fixed columns) or JSON."""

    if fmt == "csv":
        text = reports_frame(reports).to_csv(index=False, float_format="%.6g", lineterminator="\n")
    elif fmt == "json":
        text = dumps_reports(reports)
    else:
        raise FracDGError(f"Unknown output format: {fmt}")

    atomic_write_text(text, path)

    return path


def dumps_reports(reports: list[ErrorReport]) -> str:
    """JSON text with every float rounded to 6 significant digits."""

    data = [round_sig(report.to_dict()) for report in reports]

    return json.dumps(data, indent=2) + "\n"


def load_reports(path: Path) -> list[ErrorReport]:
    """Read reports back from a JSON file written by emit()."""

    with open(path, encoding="utf-8") as f:
        return [ErrorReport.from_dict(item) for item in json.load(f)]


def summary(results: list[CellResult]) -> tuple[int, int]:
    """(succeeded, failed) cell counts."""

    ok = sum(1 for result in results if result.success)

    return ok, len(results) - ok


def best_gamma(reports: list[ErrorReport], alpha: float, metric: str = "left_nodal") -> float | None:
    """gamma with the smallest error for a given alpha, or None."""

    candidates = [
        (getattr(report, metric), report.gamma)
        for report in reports
        if math.isclose(report.alpha, alpha) and getattr(report, metric) is not None
    ]

    if not candidates:
        return None

    errors = np.array([error for error, _ in candidates])

    return candidates[int(np.argmin(errors))][1]
