from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import EmptyBatchError, InvalidArgumentError


@dataclass(frozen=True, eq=False)
class Batch:
    """One time-stamped set of scalar observations.

    ``points`` is stored as a read-only float array so snapshots can share
    batches without copying.
    """

    t: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).ravel()
        if pts.size == 0:
            raise EmptyBatchError(f"batch {self.t} has no points")
        if not np.all(np.isfinite(pts)):
            raise InvalidArgumentError(f"batch {self.t} contains non-finite values")
        if int(self.t) != self.t or self.t < 0:
            raise InvalidArgumentError(f"time stamp must be a non-negative integer, got {self.t}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "t", int(self.t))

    @property
    def n(self) -> int:
        return self.points.size

    @cached_property
    def sd(self) -> float:
        """Unbiased sample standard deviation (0 for a single point)."""
        if self.points.size == 1:
            return 0.0
        return float(np.std(self.points, ddof=1))

    def __len__(self):
        return self.points.size

    def __repr__(self):
        return f"Batch(t={self.t}, n={self.n})"
