"""Parameter grids of the benchmark convergence tables and figure sweeps."""

from __future__ import annotations

from dataclasses import dataclass

from fracdg.models import Metric, SweepConfig

TABLE_NS = [20, 40, 80, 160]

# Figures fix N = 64 and M = 512 so that h^2 = k^3
# At N = 64 the first step of a gamma = 8 mesh is 64^-8, below the minimum step,
# so the gamma sweep stops at 7.75
FIGURE_N = 64
FIGURE_M = 512


@dataclass(frozen=True)
class Preset:
    """Named parameter sweep."""

    name: str
    title: str
    metrics: tuple[Metric, ...]
    alphas: tuple[float, ...]
    gammas: tuple[float, ...]
    Ns: tuple[int, ...] = tuple(TABLE_NS)
    M: int | str = "auto"
    include_initial: bool = False

    def sweep(self, jobs: int = 1, m: int = 12, T: float = 1.0) -> SweepConfig:
        return SweepConfig(
            alphas=list(self.alphas),
            gammas=list(self.gammas),
            Ns=list(self.Ns),
            M=self.M,  # type: ignore[arg-type]
            T=T,
            m=m,
            jobs=jobs,
            metrics=self.metrics,
            include_initial=self.include_initial,
        )


def _grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + i * step, 10) + 0.0 for i in range(count))


TABLES: dict[str, Preset] = {
    "1": Preset(
        name="1",
        title="Left nodal error, alpha = -0.3",
        metrics=("left",),
        alphas=(-0.3,),
        gammas=(1.0, 2.0, 3.0, 3.25),
    ),
    "2": Preset(
        name="2",
        title="Right nodal error, alpha = -0.3",
        metrics=("right",),
        alphas=(-0.3,),
        gammas=(1.0, 2.0, 3.0, 3.25),
    ),
    "3": Preset(
        name="3",
        title="Left nodal error, alpha = 0.3",
        metrics=("left",),
        alphas=(0.3,),
        gammas=(1.0, 1.5, 1.75, 2.0),
    ),
    "4": Preset(
        name="4",
        title="Right nodal error, alpha = 0.3",
        metrics=("right",),
        alphas=(0.3,),
        gammas=(1.0, 1.5, 1.75),
    ),
    "5": Preset(
        name="5",
        title="Postprocessed error ||U# - u||_{J,12}, alpha = -0.3",
        metrics=("pp",),
        alphas=(-0.3,),
        gammas=(1.0, 2.0, 3.0, 3.9),
    ),
    "6": Preset(
        name="6",
        title="Postprocessed error ||U# - u||_{J,12}, alpha = 0.3",
        metrics=("pp",),
        alphas=(0.3,),
        gammas=(1.0, 1.5, 2.0, 2.35),
    ),
}

FIGURES: dict[str, Preset] = {
    "gamma": Preset(
        name="gamma",
        title="Nodal errors against gamma, N = 64, M = 512",
        metrics=("left", "right"),
        alphas=(-0.8, -0.4, 0.2, 0.6),
        gammas=_grid(1.0, 7.75, 0.25),
        Ns=(FIGURE_N,),
        M=FIGURE_M,
        include_initial=True,
    ),
    "alpha": Preset(
        name="alpha",
        title="Nodal errors against alpha, N = 64, M = 512",
        metrics=("left", "right"),
        alphas=_grid(-0.9, 0.9, 0.1),
        gammas=(1.0, 2.0, 3.0, 4.0),
        Ns=(FIGURE_N,),
        M=FIGURE_M,
        include_initial=True,
    ),
}
