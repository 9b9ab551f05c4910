"""Shared fixtures."""

from __future__ import annotations

import numpy as np
import pytest

from fracdg.config import Config
from fracdg.numerics.fem import SpatialGrid
from fracdg.numerics.mesh import TimeMesh


@pytest.fixture
def app_config(tmp_path) -> Config:
    """Config writing into a temporary directory, without timings."""

    return Config(
        output_dir=tmp_path / "results",
        log_dir=tmp_path / "logs",
        record_timing=False,
    )


@pytest.fixture
def grid4() -> SpatialGrid:
    return SpatialGrid(4)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_mesh(rng: np.random.Generator, N: int, T: float = 1.0) -> TimeMesh:
    """Strictly increasing random levels on [0, T]."""

    steps = rng.uniform(0.2, 1.0, size=N)
    levels = np.concatenate([[0.0], np.cumsum(steps)])

    return TimeMesh.from_levels(levels / levels[-1] * T)
