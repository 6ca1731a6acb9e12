"""Adaptive window selection from cumulative TA distances."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .batch import Batch
from .errors import EmptyStreamError, InvalidArgumentError
from .histogram import BinGrid, HistogramVector, common_grid, histogram_matrix


@dataclass(frozen=True)
class WindowConfig:
    """Cutoff ``s`` on the cumulative TA distance and hard cap ``w`` on batches kept."""

    cutoff_s: float = 1.0
    hard_cap_w: int = 16

    def __post_init__(self):
        if not self.cutoff_s >= 0:
            raise InvalidArgumentError(f"cutoff must be non-negative, got {self.cutoff_s}")
        if int(self.hard_cap_w) != self.hard_cap_w or self.hard_cap_w < 1:
            raise InvalidArgumentError(f"hard cap must be a positive integer, got {self.hard_cap_w}")


@dataclass(frozen=True, eq=False)
class WindowState:
    """Retained batches (oldest to newest) with their histograms and drift estimates."""

    batches: tuple
    histograms: tuple
    r_hat: np.ndarray
    grid: BinGrid

    @property
    def window_size(self) -> int:
        return len(self.batches)


def cutoff_window_size(distances: Sequence[float], cutoff_s: float, hard_cap_w: int) -> int:
    """Number of batches kept by the cumulative-cutoff loop.

    ``distances[k]`` is the TA distance between the current batch and the
    batch ``k`` steps back (``distances[0]`` is the self-distance).  Batches
    are added while the running sum stays ``<= cutoff_s``, up to the cap.
    A zero cutoff keeps only the current batch: coarse histograms of two
    different batches can coincide, and a tie must not pull history back in.
    """
    limit = min(hard_cap_w, len(distances))
    if cutoff_s == 0:
        limit = min(limit, 1)
    total = 0.0
    size = 0
    while size < limit:
        total += distances[size]
        if total > cutoff_s:
            break
        size += 1
    return size


def select_window(raw_batches: Sequence[Batch], config: WindowConfig) -> WindowState:
    """Pick the retained window for the newest batch in ``raw_batches``.

    Histograms for every batch in memory are rebuilt on a fresh common grid
    because the bin count and range move as batches enter and leave.
    """
    if len(raw_batches) == 0:
        raise EmptyStreamError("window selection needs at least the current batch")
    memory = list(raw_batches)[-config.hard_cap_w:]
    grid = common_grid(memory)
    masses = histogram_matrix(memory, grid)
    diff = masses - masses[-1]
    ta = np.einsum("ij,ij->i", diff, diff)
    ta[-1] = 0.0
    # newest first for the cumulative loop
    size = max(1, cutoff_window_size(ta[::-1], config.cutoff_s, config.hard_cap_w))
    keep = slice(len(memory) - size, len(memory))
    r_hat = grid.m * ta[keep]
    r_hat.setflags(write=False)
    histograms = tuple(HistogramVector(grid, row) for row in masses[keep])
    return WindowState(tuple(memory[keep]), histograms, r_hat, grid)
