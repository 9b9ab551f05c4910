"""Command-line interface for the fractional DG benchmark."""

from __future__ import annotations

import argparse
import json
import logging
import signal
import sys
from pathlib import Path

from fracdg.config import Config
from fracdg.exceptions import ConfigError, FracDGError, NumericalError
from fracdg.models import CellResult, RunConfig, SweepConfig
from fracdg.presets import FIGURES, TABLES, Preset
from fracdg.services import emit, reports_frame, run as run_single, summary, sweep
from fracdg.utils import setup_logging

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _handle_interrupt(_sig: int, _frame: object) -> None:
    """Handle Ctrl+C - exit immediately."""

    print("\n\nInterrupted by user. Exiting...")
    sys.exit(130)


def _mspace(value: str) -> int | str:
    if value == "auto":
        return value

    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or an integer, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the solve/sweep/tables/figures commands."""

    parser = argparse.ArgumentParser(
        prog="fracdg",
        description="DG time stepping for fractional diffusion-wave equations: solves and convergence sweeps",
    )

    parser.add_argument("--log-dir", type=Path, help="Directory for log files")
    parser.add_argument("--output-dir", type=Path, help="Directory for result files")
    parser.add_argument("--verbose", action="store_true", help="Log per-step progress")
    parser.add_argument(
        "--no-timing",
        action="store_true",
        help="Write 0 in the seconds column so repeated runs give identical files",
    )

    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="Run a single configuration")
    solve.add_argument("--alpha", type=float, required=True, help="Fractional order in (-1, 1)")
    solve.add_argument("--gamma", type=float, default=1.0, help="Mesh grading exponent >= 1")
    solve.add_argument("--nsteps", type=int, required=True, help="Number of time steps N")
    solve.add_argument("--mspace", type=_mspace, default="auto", help="Spatial subintervals M or 'auto'")
    solve.add_argument("--horizon", type=float, default=None, help="Final time T")
    solve.add_argument("--fine-m", type=int, default=None, help="Fine grid factor m")
    solve.add_argument("--include-initial", action="store_true", help="Take the left nodal max from n = 0")
    solve.add_argument("--initial", choices=("l2", "ritz"), default="l2", help="Projection of u0")
    solve.add_argument("--check-residual", action="store_true", help="Also report the Galerkin residual")
    _add_output_flags(solve)

    spec = commands.add_parser("sweep", help="Run a sweep from a JSON spec file")
    spec.add_argument("--spec", type=Path, required=True, help="Sweep spec (JSON)")
    spec.add_argument("--jobs", type=int, default=None, help="Parallel cells")
    _add_output_flags(spec)

    tables = commands.add_parser("tables", help="Reproduce a convergence table")
    tables.add_argument("--which", choices=sorted(TABLES) + ["all"], required=True)
    tables.add_argument("--jobs", type=int, default=None, help="Parallel cells")
    tables.add_argument("--format", choices=("csv", "json"), default=None)

    figures = commands.add_parser("figures", help="Emit figure data (gamma or alpha sweep)")
    figures.add_argument("--which", choices=sorted(FIGURES) + ["all"], required=True)
    figures.add_argument("--jobs", type=int, default=None, help="Parallel cells")
    figures.add_argument("--format", choices=("csv", "json"), default=None)

    return parser


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, default=None, help="Output file")
    parser.add_argument("--format", choices=("csv", "json"), default=None)


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    return build_parser().parse_args(argv)


def _config_from_args(args: argparse.Namespace) -> Config:
    config = Config()

    if args.log_dir is not None:
        config.log_dir = args.log_dir

    if args.output_dir is not None:
        config.output_dir = args.output_dir

    if args.no_timing:
        config.record_timing = False

    return config


def cmd_solve(args: argparse.Namespace, config: Config, logger: logging.Logger) -> int:
    fmt = args.format or config.output_format

    run_config = RunConfig(
        alpha=args.alpha,
        gamma=args.gamma,
        N=args.nsteps,
        M=args.mspace,
        T=args.horizon if args.horizon is not None else config.horizon,
        m=args.fine_m if args.fine_m is not None else config.fine_m,
        output=args.out,
        output_format=fmt,
        include_initial=args.include_initial,
        initial_projection=args.initial,
        check_residual=args.check_residual,
    )
    run_config.validate()

    logger.info(f"Solving alpha={run_config.alpha:g} gamma={run_config.gamma:g} N={run_config.N} M={run_config.spatial_M}")

    report = run_single(run_config, config)

    logger.info(f"    left nodal  {report.left_nodal:.3e}")
    logger.info(f"    right nodal {report.right_nodal:.3e}")
    logger.info(f"    pp global   {report.pp_global:.3e}")

    if report.residual is not None:
        logger.info(f"    residual    {report.residual:.2e}")

    out = run_config.output or config.output_dir / (
        f"solve_a{run_config.alpha:g}_g{run_config.gamma:g}_N{run_config.N}.{fmt}"
    )
    emit([report], out, fmt)

    logger.info(f"Saved: {out}")

    return EXIT_OK


def _load_spec(path: Path) -> SweepConfig:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError("spec", f"cannot read {path}: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError("spec", "expected a JSON object")

    return SweepConfig.from_dict(data)


def _run_sweep(
    sweep_config: SweepConfig,
    out: Path,
    fmt: str,
    title: str,
    config: Config,
    logger: logging.Logger,
) -> int:
    sweep_config.validate()

    logger.info(f"\n{'=' * 60}")
    logger.info(f"{title}: {len(sweep_config.cells())} cell(s), {sweep_config.jobs} job(s)")
    logger.info(f"{'=' * 60}\n")

    results = sweep(sweep_config, config, logger)
    reports = [result.report for result in results if result.report is not None]

    emit(reports, out, fmt)  # type: ignore[arg-type]

    return _summarize(results, out, logger)


def _summarize(results: list[CellResult], out: Path, logger: logging.Logger) -> int:
    ok, failed = summary(results)

    logger.info(f"\n{'=' * 60}")
    logger.info(f"Results: {ok} done | {failed} failed")
    logger.info(f"{'=' * 60}")

    reports = [result.report for result in results if result.report is not None]

    if reports:
        logger.info(reports_frame(reports).to_string(index=False, float_format=lambda x: f"{x:.3e}"))

    if failed:
        logger.info("\nFailed cells:\n")

        for result in results:
            if not result.success and result.config is not None:
                cell = result.config
                logger.info(f"   - alpha={cell.alpha:g} gamma={cell.gamma:g} N={cell.N}: {result.message}")

    logger.info(f"\nSaved: {out}")

    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_sweep(args: argparse.Namespace, config: Config, logger: logging.Logger) -> int:
    sweep_config = _load_spec(args.spec)

    if args.jobs is not None:
        sweep_config.jobs = args.jobs

    fmt = args.format or config.output_format
    out = args.out or config.output_dir / f"sweep.{fmt}"

    return _run_sweep(sweep_config, out, fmt, f"Sweep {args.spec}", config, logger)


def _run_presets(
    presets: list[Preset],
    prefix: str,
    args: argparse.Namespace,
    config: Config,
    logger: logging.Logger,
) -> int:
    fmt = args.format or config.output_format
    jobs = args.jobs if args.jobs is not None else config.jobs
    code = EXIT_OK

    for preset in presets:
        out = config.output_dir / f"{prefix}{preset.name}.{fmt}"
        sweep_config = preset.sweep(jobs=jobs, m=config.fine_m, T=config.horizon)
        code = max(code, _run_sweep(sweep_config, out, fmt, preset.title, config, logger))

    return code


def cmd_tables(args: argparse.Namespace, config: Config, logger: logging.Logger) -> int:
    names = sorted(TABLES) if args.which == "all" else [args.which]
    return _run_presets([TABLES[name] for name in names], "table", args, config, logger)


def cmd_figures(args: argparse.Namespace, config: Config, logger: logging.Logger) -> int:
    names = sorted(FIGURES) if args.which == "all" else [args.which]
    return _run_presets([FIGURES[name] for name in names], "figure_", args, config, logger)


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "tables": cmd_tables,
    "figures": cmd_figures,
}


def run(argv: list[str] | None = None) -> int:
    """Main application logic; returns the exit code."""

    args = parse_args(argv)

    # Setup
    config = _config_from_args(args)
    logger = setup_logging(config, verbose=args.verbose)

    try:
        config.ensure_dirs()

        return COMMANDS[args.command](args, config, logger)

    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG

    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL

    except FracDGError as e:
        logger.error(f"Error: {e}")
        return EXIT_CONFIG


def main(argv: list[str] | None = None) -> None:
    """Entry point for CLI."""

    signal.signal(signal.SIGINT, _handle_interrupt)

    sys.exit(run(argv))


if __name__ == "__main__":
    main()
