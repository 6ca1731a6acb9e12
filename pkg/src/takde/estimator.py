"""Sliding-window kernel density estimation over a stream of batches.

:func:`fit_step` runs the three generators in order (window, bandwidth,
weight) for one new batch and returns an immutable
:class:`EstimatorSnapshot`.  :class:`TAKDE` keeps the bounded raw-batch
memory between calls.
"""

from __future__ import annotations

import enum
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bandwidth import SmoothnessConfig, window_bandwidths
from .batch import Batch
from .errors import EmptyBatchError, InvalidArgumentError
from .kernel import GAUSSIAN, KernelSpec
from .weights import exponential_weights, takde_weights, uniform_weights
from .window import WindowConfig, select_window

logger = logging.getLogger(__name__)

# Reported in place of -inf when even the shifted kernel sum underflows.
LOG_UNDERFLOW = -1e100

# Cap on the size of the (points x kernel centres) work array.
_CHUNK_CELLS = 1 << 22


class WeightScheme(str, enum.Enum):
    TAKDE = "takde"
    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class EstimatorConfig:
    kernel: KernelSpec = GAUSSIAN
    window: WindowConfig = field(default_factory=WindowConfig)
    smoothness: SmoothnessConfig = field(default_factory=SmoothnessConfig)
    weights: WeightScheme = WeightScheme.TAKDE
    decay: float = 0.9

    def __post_init__(self):
        object.__setattr__(self, "weights", WeightScheme(self.weights))
        if self.weights is WeightScheme.EXPONENTIAL and not 0.0 < self.decay < 1.0:
            raise InvalidArgumentError(f"decay must lie in (0, 1), got {self.decay}")


@dataclass(frozen=True, eq=False)
class EstimatorSnapshot:
    """Fitted mixture ``sum_j alpha_j * KDE_j(x; sigma_j)`` for one time stamp.

    All per-batch arrays are ordered oldest to newest, matching ``window``.
    """

    t: int
    window: tuple
    sigmas: np.ndarray
    weights: np.ndarray
    r_hat: np.ndarray
    kernel: KernelSpec = GAUSSIAN

    def __post_init__(self):
        size = len(self.window)
        if size == 0:
            raise InvalidArgumentError("snapshot needs at least one batch")
        if not (len(self.sigmas) == len(self.weights) == len(self.r_hat) == size):
            raise InvalidArgumentError("window, sigmas, weights and r_hat lengths differ")
        for name in ("sigmas", "weights", "r_hat"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(self.sigmas <= 0):
            raise InvalidArgumentError("bandwidths must be positive")
        ns = np.array([b.n for b in self.window])
        centers = np.concatenate([b.points for b in self.window])
        sig = np.repeat(self.sigmas, ns)
        coef = np.repeat(self.weights / ns, ns)
        object.__setattr__(self, "_centers", centers)
        object.__setattr__(self, "_inv_sigma", 1.0 / sig)
        object.__setattr__(self, "_scale", coef / sig)
        with np.errstate(divide="ignore"):
            object.__setattr__(self, "_log_scale", np.log(coef) - np.log(sig))

    @property
    def window_size(self) -> int:
        return len(self.window)

    @property
    def ns(self) -> np.ndarray:
        return np.array([b.n for b in self.window])

    def _chunks(self, xs):
        step = max(1, _CHUNK_CELLS // self._centers.size)
        for start in range(0, xs.size, step):
            yield slice(start, start + step)

    def evaluate(self, xs) -> np.ndarray:
        """Density at each point of ``xs``."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.empty(xs.size)
        for sl in self._chunks(xs):
            u = (xs[sl, None] - self._centers) * self._inv_sigma
            out[sl] = self.kernel.pdf(u) @ self._scale
        return out

    def log_density(self, xs) -> np.ndarray:
        """log of :meth:`evaluate`, accumulated with a per-point max shift."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.empty(xs.size)
        for sl in self._chunks(xs):
            u = (xs[sl, None] - self._centers) * self._inv_sigma
            terms = self.kernel.log_pdf(u) + self._log_scale
            top = terms.max(axis=1)
            with np.errstate(invalid="ignore"):
                out[sl] = top + np.log(np.exp(terms - top[:, None]).sum(axis=1))
        bad = ~np.isfinite(out)
        if bad.any():
            logger.warning("log-density underflow at %d point(s); using %g", bad.sum(), LOG_UNDERFLOW)
            out[bad] = LOG_UNDERFLOW
        return out

    def mean_log_likelihood(self, test_points) -> float:
        test_points = np.asarray(test_points, dtype=float).ravel()
        if test_points.size == 0:
            raise EmptyBatchError("mean log-likelihood needs test points")
        return float(self.log_density(test_points).mean())


def evaluate(snapshot: EstimatorSnapshot, xs) -> np.ndarray:
    return snapshot.evaluate(xs)


def mean_log_likelihood(snapshot: EstimatorSnapshot, test_points) -> float:
    return snapshot.mean_log_likelihood(test_points)


def _check_order(prior_raw: Sequence[Batch], new_batch: Batch):
    ts = [b.t for b in prior_raw]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise InvalidArgumentError(f"prior batch time stamps are not increasing: {ts}")
    if ts and new_batch.t <= ts[-1]:
        raise InvalidArgumentError(f"batch {new_batch.t} does not follow batch {ts[-1]}")


def fit_step(prior_raw: Sequence[Batch], new_batch: Batch, cfg: EstimatorConfig) -> EstimatorSnapshot:
    """Fit the estimator for ``new_batch`` given up to ``w`` earlier batches."""
    _check_order(prior_raw, new_batch)
    memory = list(prior_raw)[-(cfg.window.hard_cap_w - 1):] if cfg.window.hard_cap_w > 1 else []
    memory.append(new_batch)
    state = select_window(memory, cfg.window)
    size = state.window_size
    ns = np.array([b.n for b in state.batches])
    sds = np.array([b.sd for b in state.batches])
    c = cfg.smoothness.resolve(cfg.kernel)
    sigmas = window_bandwidths(sds, ns, size, c, cfg.smoothness.min_sigma)
    if cfg.weights is WeightScheme.TAKDE:
        alphas = takde_weights(sigmas, ns, state.r_hat, cfg.kernel.r_of_k)
    elif cfg.weights is WeightScheme.UNIFORM:
        alphas = uniform_weights(size)
    else:
        alphas = exponential_weights(size, cfg.decay)
    return EstimatorSnapshot(new_batch.t, state.batches, sigmas, alphas, state.r_hat, cfg.kernel)


def static_kde_fit(
    all_points,
    c: float,
    kernel: KernelSpec = GAUSSIAN,
    min_sigma: float = SmoothnessConfig().min_sigma,
    t: int = 0,
) -> EstimatorSnapshot:
    """Ordinary KDE over ``all_points`` with bandwidth ``c * sd * n**(-1/5)``."""
    batch = all_points if isinstance(all_points, Batch) else Batch(t, all_points)
    sigmas = window_bandwidths([batch.sd], [batch.n], 1, c, min_sigma)
    return EstimatorSnapshot(batch.t, (batch,), sigmas, np.ones(1), np.zeros(1), kernel)


class TAKDE:
    """Streaming driver holding at most ``w`` raw batches between steps.

    >>> est = TAKDE()
    >>> snap = est.update([0.1, -0.3, 0.7])
    >>> snap.window_size
    1
    """

    def __init__(self, config: EstimatorConfig | None = None):
        self.config = config or EstimatorConfig()
        self._memory: deque[Batch] = deque(maxlen=self.config.window.hard_cap_w)
        self._next_t = 0

    @property
    def memory(self) -> tuple:
        return tuple(self._memory)

    def update(self, batch) -> EstimatorSnapshot:
        if not isinstance(batch, Batch):
            batch = Batch(self._next_t, batch)
        snap = fit_step(self._memory, batch, self.config)
        self._memory.append(batch)
        self._next_t = batch.t + 1
        return snap

    def run(self, batches: Iterable) -> list[EstimatorSnapshot]:
        return [self.update(b) for b in batches]
