"""Tests for the command-line interface."""

import json

import pytest

from fracdg import cli, services
from fracdg.exceptions import NumericalError


@pytest.fixture
def base_args(tmp_path):
    return ["--log-dir", str(tmp_path / "logs"), "--output-dir", str(tmp_path / "results"), "--no-timing"]


def test_solve_writes_report(tmp_path, base_args):
    code = cli.run(base_args + ["solve", "--alpha", "0.5", "--gamma", "1.5", "--nsteps", "4"])

    out = tmp_path / "results" / "solve_a0.5_g1.5_N4.csv"

    assert code == cli.EXIT_OK
    assert out.exists()
    assert out.read_text(encoding="utf-8").splitlines()[1].startswith("0.5,1.5,4,8,")
    assert any((tmp_path / "logs").glob("bench_*.log"))


def test_solve_json_to_explicit_path(tmp_path, base_args):
    out = tmp_path / "single.json"
    code = cli.run(
        base_args
        + ["solve", "--alpha", "-0.4", "--nsteps", "4", "--mspace", "6", "--check-residual", "--out", str(out), "--format", "json"]
    )

    data = json.loads(out.read_text(encoding="utf-8"))

    assert code == cli.EXIT_OK
    assert data[0]["M"] == 6
    assert data[0]["residual"] <= 1e-9


def test_repeated_runs_are_identical(tmp_path, base_args):
    args = ["solve", "--alpha", "-0.2", "--gamma", "2", "--nsteps", "4"]

    cli.run(base_args + args + ["--out", str(tmp_path / "a.csv")])
    cli.run(base_args + args + ["--out", str(tmp_path / "b.csv")])

    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


@pytest.mark.parametrize(
    "args",
    [
        ["solve", "--alpha", "1.5", "--nsteps", "4"],
        ["solve", "--alpha", "0.2", "--gamma", "0.5", "--nsteps", "4"],
        ["solve", "--alpha", "0.2", "--nsteps", "1"],
    ],
)
def test_invalid_config_exit_code(base_args, args):
    assert cli.run(base_args + args) == cli.EXIT_CONFIG


def test_numerical_failure_exit_code(base_args, monkeypatch):
    def broken(config, app_config):
        raise NumericalError("singular block system")

    monkeypatch.setattr(cli, "run_single", broken)

    assert cli.run(base_args + ["solve", "--alpha", "0.2", "--nsteps", "4"]) == cli.EXIT_NUMERICAL


def test_sweep_from_file(tmp_path, base_args):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"alphas": [0.3], "gammas": [1.0], "Ns": [4, 8], "metrics": ["left"]}), encoding="utf-8")
    out = tmp_path / "sweep.csv"

    code = cli.run(base_args + ["sweep", "--spec", str(spec), "--out", str(out)])
    lines = out.read_text(encoding="utf-8").splitlines()

    assert code == cli.EXIT_OK
    assert len(lines) == 3
    assert lines[2].split(",")[5] != ""


@pytest.mark.parametrize(
    "content",
    ['{"alphas": [0.3], "gammas": [1.0], "Ns": [4], "speed": 2}', "not json", "[1, 2]"],
)
def test_bad_sweep_file(tmp_path, base_args, content):
    spec = tmp_path / "spec.json"
    spec.write_text(content, encoding="utf-8")

    assert cli.run(base_args + ["sweep", "--spec", str(spec)]) == cli.EXIT_CONFIG


def test_missing_sweep_file(tmp_path, base_args):
    assert cli.run(base_args + ["sweep", "--spec", str(tmp_path / "missing.json")]) == cli.EXIT_CONFIG


def test_failed_cell_exit_code(tmp_path, base_args, monkeypatch):
    def broken(config, app_config):
        raise NumericalError("no convergence")

    monkeypatch.setattr(services, "run", broken)

    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"alphas": [0.3], "gammas": [1.0], "Ns": [4]}), encoding="utf-8")

    assert cli.run(base_args + ["sweep", "--spec", str(spec)]) == cli.EXIT_NUMERICAL


def test_unknown_command():
    with pytest.raises(SystemExit):
        cli.parse_args(["plot"])


def test_mspace_argument():
    args = cli.parse_args(["solve", "--alpha", "0.1", "--nsteps", "4", "--mspace", "auto"])
    assert args.mspace == "auto"

    with pytest.raises(SystemExit):
        cli.parse_args(["solve", "--alpha", "0.1", "--nsteps", "4", "--mspace", "lots"])
