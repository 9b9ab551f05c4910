"""Numerical core: kernels, meshes, finite elements, DG stepping, errors."""

from fracdg.numerics.fem import SpatialGrid, TriMatrix
from fracdg.numerics.kernel import FracOrder, MemoryWeights, memory_weights, omega
from fracdg.numerics.mesh import FineGrid, TimeMesh, graded_mesh, refine
from fracdg.numerics.mittag_leffler import mittag_leffler
from fracdg.numerics.postprocess import PostprocessedSolution, postprocess
from fracdg.numerics.reference import ExactSolution, nodal_errors, observed_rate
from fracdg.numerics.stepper import DGSolution, ProblemSpec, solve

__all__ = [
    "DGSolution",
    "ExactSolution",
    "FineGrid",
    "FracOrder",
    "MemoryWeights",
    "PostprocessedSolution",
    "ProblemSpec",
    "SpatialGrid",
    "TimeMesh",
    "TriMatrix",
    "graded_mesh",
    "memory_weights",
    "mittag_leffler",
    "nodal_errors",
    "observed_rate",
    "omega",
    "postprocess",
    "refine",
    "solve",
]
