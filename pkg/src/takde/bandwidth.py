"""Per-batch kernel bandwidths from the normal-reference plug-in rule.

Each batch in a window of ``T`` batches gets

    sigma_j = c * sd_j / ((2T - 1) * n_j) ** (1/5)

which is the usual ``c * sd * n**(-1/5)`` rule with the sample size
inflated by ``2T - 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .batch import Batch
from .errors import EmptyBatchError, InvalidArgumentError
from .kernel import GAUSSIAN, KernelSpec

DEFAULT_MIN_SIGMA = 1e-3

# Literal closed-form constants for side-by-side runs.  They do not match the
# normal and oversmoothing rules evaluated at the normalised Gaussian.
LITERAL_NORMAL_C = (32.0 / 3.0) ** 0.2
LITERAL_OVERSMOOTH_C = (972.0 / (35.0 * math.sqrt(math.pi))) ** 0.2


class SmoothnessMode(str, enum.Enum):
    EXPLICIT = "explicit"
    NORMAL_RULE = "normal"
    OVERSMOOTH_RULE = "oversmooth"
    LITERAL_NORMAL = "paper-normal"
    LITERAL_OVERSMOOTH = "paper-oversmooth"


@dataclass(frozen=True)
class SmoothnessConfig:
    """How the smoothness constant ``c`` is chosen.

    ``c`` is only given for ``EXPLICIT`` mode; the other modes derive it
    from the kernel.  ``min_sigma`` floors bandwidths of degenerate batches.
    """

    mode: SmoothnessMode = SmoothnessMode.NORMAL_RULE
    c: float | None = None
    min_sigma: float = DEFAULT_MIN_SIGMA

    def __post_init__(self):
        object.__setattr__(self, "mode", SmoothnessMode(self.mode))
        if self.mode is SmoothnessMode.EXPLICIT:
            if self.c is None or not (self.c > 0 and math.isfinite(self.c)):
                raise InvalidArgumentError(f"explicit smoothness needs c > 0, got {self.c}")
        elif self.c is not None:
            raise InvalidArgumentError(f"c is derived in {self.mode.value!r} mode; use explicit mode")
        if not self.min_sigma > 0:
            raise InvalidArgumentError(f"min_sigma must be positive, got {self.min_sigma}")

    @classmethod
    def explicit(cls, c: float, min_sigma: float = DEFAULT_MIN_SIGMA) -> "SmoothnessConfig":
        return cls(SmoothnessMode.EXPLICIT, c, min_sigma)

    def resolve(self, kernel: KernelSpec = GAUSSIAN) -> float:
        """The numeric smoothness constant for ``kernel``."""
        if self.mode is SmoothnessMode.EXPLICIT:
            return float(self.c)
        if self.mode is SmoothnessMode.NORMAL_RULE:
            return normal_rule_c(kernel)
        if self.mode is SmoothnessMode.OVERSMOOTH_RULE:
            return oversmooth_c(kernel)
        if self.mode is SmoothnessMode.LITERAL_NORMAL:
            return LITERAL_NORMAL_C
        return LITERAL_OVERSMOOTH_C


def sample_std(batch) -> float:
    """Unbiased sample standard deviation; 0 for a single point."""
    if isinstance(batch, Batch):
        return batch.sd
    pts = np.asarray(batch, dtype=float)
    if pts.size == 0:
        raise EmptyBatchError("standard deviation of an empty batch")
    if pts.size == 1:
        return 0.0
    return float(np.std(pts, ddof=1))


def normal_rule_c(kernel: KernelSpec = GAUSSIAN) -> float:
    """``(8 sqrt(pi) R(K) / (3 mu2^2)) ** (1/5)``; 1.0592 for the Gaussian."""
    return (8.0 * math.sqrt(math.pi) * kernel.r_of_k / (3.0 * kernel.mu2**2)) ** 0.2


def oversmooth_c(kernel: KernelSpec = GAUSSIAN) -> float:
    """Terrell's maximal-smoothing constant ``(243 R(K) / (35 mu2^2)) ** (1/5)``."""
    return (243.0 * kernel.r_of_k / (35.0 * kernel.mu2**2)) ** 0.2


def window_bandwidths(sigma_hats, ns, t_window: int, c: float, min_sigma: float = DEFAULT_MIN_SIGMA):
    """Vectorised bandwidths for every batch in a window of size ``t_window``."""
    sigma_hats = np.asarray(sigma_hats, dtype=float)
    ns = np.asarray(ns, dtype=float)
    if t_window < 1:
        raise InvalidArgumentError(f"window size must be >= 1, got {t_window}")
    if np.any(ns < 1):
        raise InvalidArgumentError("batch sizes must be >= 1")
    sigmas = c * sigma_hats * ((2 * t_window - 1) * ns) ** -0.2
    return np.maximum(sigmas, min_sigma)


def batch_bandwidth(
    sigma_hat: float,
    n_j: int,
    t_window: int,
    cfg: SmoothnessConfig,
    kernel: KernelSpec = GAUSSIAN,
) -> float:
    """Bandwidth of one batch of ``n_j`` points inside a window of ``t_window`` batches."""
    if n_j < 1:
        raise InvalidArgumentError(f"batch size must be >= 1, got {n_j}")
    out = window_bandwidths([sigma_hat], [n_j], t_window, cfg.resolve(kernel), cfg.min_sigma)
    return float(out[0])
