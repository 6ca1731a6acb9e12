"""Probability-mass histograms on a shared grid and the TA distance.

Histograms of different batches are only comparable on a common grid, so
the grid is derived from every batch currently held in memory: its range
spans all retained points and its bin count follows Sturges' rule for the
smallest retained batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .batch import Batch
from .errors import EmptyBatchError, GridMismatchError, InvalidArgumentError

GRID_PAD = 1e-9


@dataclass(frozen=True)
class BinGrid:
    """``m`` equal-width bins on ``[lo, hi]``; the last bin is closed at ``hi``."""

    lo: float
    hi: float
    m: int

    def __post_init__(self):
        if not self.hi > self.lo:
            raise InvalidArgumentError(f"grid needs lo < hi, got [{self.lo}, {self.hi}]")
        if int(self.m) != self.m or self.m < 1:
            raise InvalidArgumentError(f"bin count must be a positive integer, got {self.m}")

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / self.m

    def bin_index(self, x) -> np.ndarray:
        """Bin of each value; out-of-range values are clamped to the edge bins."""
        x = np.asarray(x, dtype=float)
        idx = np.floor((x - self.lo) / self.width).astype(np.intp)
        return np.clip(idx, 0, self.m - 1)


@dataclass(frozen=True, eq=False)
class HistogramVector:
    grid: BinGrid
    mass: np.ndarray

    def __post_init__(self):
        if len(self.mass) != self.grid.m:
            raise InvalidArgumentError(
                f"mass has {len(self.mass)} entries for a grid of {self.grid.m} bins"
            )


def _points(batch) -> np.ndarray:
    pts = batch.points if isinstance(batch, Batch) else np.asarray(batch, dtype=float).ravel()
    if pts.size == 0:
        raise EmptyBatchError("cannot build a histogram of an empty batch")
    return pts


def sturges_bins(n: int) -> int:
    """Sturges' bin count ``ceil(1 + 3.322 log10 n)``."""
    if n < 1:
        raise EmptyBatchError("Sturges' rule needs at least one observation")
    return max(1, math.ceil(1.0 + 3.322 * math.log10(n)))


def common_grid(batches: Sequence) -> BinGrid:
    """Shared grid over every point of ``batches``.

    The bin count uses the smallest batch size.  If all points coincide the
    grid collapses to a single unit-width bin centred on that value.
    """
    if len(batches) == 0:
        raise EmptyBatchError("no batches to build a grid from")
    arrays = [_points(b) for b in batches]
    lo = min(float(a.min()) for a in arrays)
    hi = max(float(a.max()) for a in arrays)
    if lo == hi:
        return BinGrid(lo - 0.5, hi + 0.5, 1)
    m = sturges_bins(min(a.size for a in arrays))
    return BinGrid(lo - GRID_PAD, hi + GRID_PAD, m)


def build_histogram(batch, grid: BinGrid) -> HistogramVector:
    pts = _points(batch)
    counts = np.bincount(grid.bin_index(pts), minlength=grid.m)
    return HistogramVector(grid, counts / pts.size)


def histogram_matrix(batches: Sequence, grid: BinGrid) -> np.ndarray:
    """Mass vectors of several batches as rows of one array (single bincount)."""
    arrays = [_points(b) for b in batches]
    sizes = np.array([a.size for a in arrays])
    owner = np.repeat(np.arange(len(arrays)), sizes)
    flat = owner * grid.m + grid.bin_index(np.concatenate(arrays))
    counts = np.bincount(flat, minlength=len(arrays) * grid.m).reshape(len(arrays), grid.m)
    return counts / sizes[:, None]


def _check_grids(a: HistogramVector, b: HistogramVector):
    if a.grid != b.grid:
        raise GridMismatchError(f"histograms live on different grids: {a.grid} vs {b.grid}")


def ta_distance(a: HistogramVector, b: HistogramVector) -> float:
    """Squared Euclidean distance between two mass vectors."""
    _check_grids(a, b)
    d = np.asarray(a.mass) - np.asarray(b.mass)
    return float(d @ d)


def approx_r_b(hist_j: HistogramVector, hist_t: HistogramVector) -> float:
    """Histogram estimate of the roughness of the density drift, ``m * TA``."""
    return hist_j.grid.m * ta_distance(hist_j, hist_t)
