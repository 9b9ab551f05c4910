"""Memory weight cache."""

from __future__ import annotations

import logging

from fracdg.numerics.kernel import FracOrder, MemoryWeights, memory_weights
from fracdg.numerics.mesh import TimeMesh

logger = logging.getLogger(__name__)


class WeightCache:
    """
    Keeps MemoryWeights per (alpha, mesh levels, n).

    Weights depend only on the fractional order and the time levels, so runs
    that share a mesh (for example the same (gamma, N) cell at different M)
    reuse them.
    """

    def __init__(self, max_meshes: int = 8) -> None:
        self.max_meshes = max_meshes

        self._data: dict[tuple[float, bytes], dict[int, MemoryWeights]] = {}
        self.hits = 0
        self.misses = 0

    def get(self, order: FracOrder, mesh: TimeMesh, n: int) -> MemoryWeights:
        """Cached weights for interval n, computed on first use."""

        key = (order.alpha, mesh.levels.tobytes())
        entries = self._data.get(key)

        if entries is None:
            if len(self._data) >= self.max_meshes:
                # Drop the oldest mesh
                self._data.pop(next(iter(self._data)))

            entries = self._data[key] = {}

        weights = entries.get(n)

        if weights is None:
            self.misses += 1
            weights = entries[n] = memory_weights(order, mesh, n)
        else:
            self.hits += 1

        return weights

    def clear(self) -> None:
        self._data.clear()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return sum(len(entries) for entries in self._data.values())
