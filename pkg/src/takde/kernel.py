"""Kernel functions with unit bandwidth and their moment constants.

A kernel here is a symmetric probability density ``K`` with zero first
moment and finite second moment.  Only the Gaussian kernel ships at the
moment; the constants travel with the spec object so that other kernels
can be added without touching callers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, InvalidBandwidthError

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class KernelKind(str, enum.Enum):
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class KernelSpec:
    """Unit-bandwidth kernel.

    Attributes
    ----------
    kind : KernelKind
    r_of_k : float
        Roughness ``R(K) = int K(x)^2 dx``.
    mu2 : float
        Second moment ``int x^2 K(x) dx``.
    """

    kind: KernelKind
    r_of_k: float
    mu2: float

    def __post_init__(self):
        if not (self.r_of_k > 0 and math.isfinite(self.r_of_k)):
            raise InvalidArgumentError(f"r_of_k must be positive, got {self.r_of_k}")
        if not (self.mu2 > 0 and math.isfinite(self.mu2)):
            raise InvalidArgumentError(f"mu2 must be positive and finite, got {self.mu2}")

    def pdf(self, u):
        return eval_kernel(self, u)

    def log_pdf(self, u):
        """log K(u); finite for every finite u."""
        u = np.asarray(u, dtype=float)
        return -0.5 * u * u - LOG_SQRT_2PI


GAUSSIAN = KernelSpec(KernelKind.GAUSSIAN, r_of_k=1.0 / (2.0 * math.sqrt(math.pi)), mu2=1.0)

_KERNELS = {KernelKind.GAUSSIAN: GAUSSIAN}


def get_kernel(name) -> KernelSpec:
    try:
        return _KERNELS[KernelKind(name)]
    except ValueError:
        raise InvalidArgumentError(f"unknown kernel {name!r}") from None


def eval_kernel(spec: KernelSpec, u):
    """Evaluate ``K(u)``; accepts scalars or arrays."""
    u = np.asarray(u, dtype=float)
    out = INV_SQRT_2PI * np.exp(-0.5 * u * u)
    return float(out) if out.ndim == 0 else out


def eval_scaled(spec: KernelSpec, x, center, sigma):
    """Evaluate ``(1/sigma) K((x - center)/sigma)``."""
    sigma = float(sigma)
    if not sigma > 0:
        raise InvalidBandwidthError(f"bandwidth must be positive, got {sigma}")
    u = (np.asarray(x, dtype=float) - center) / sigma
    return eval_kernel(spec, u) / sigma


def kernel_constants(spec: KernelSpec) -> tuple[float, float]:
    return spec.r_of_k, spec.mu2
