"""
fracdg v1.0.0

Piecewise-linear discontinuous Galerkin time stepping for fractional
diffusion-wave equations on graded meshes, with convergence benchmarks.
"""

__version__ = "1.0.0"

from fracdg.config import Config
from fracdg.models import ErrorReport, RunConfig, SweepConfig

__all__ = ["Config", "ErrorReport", "RunConfig", "SweepConfig", "__version__"]
