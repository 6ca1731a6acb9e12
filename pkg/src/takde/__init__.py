"""Temporal adaptive kernel density estimation for batched data streams."""

__version__ = "0.1.0"

from .batch import Batch
from .bandwidth import SmoothnessConfig, SmoothnessMode
from .estimator import (
    TAKDE,
    EstimatorConfig,
    EstimatorSnapshot,
    WeightScheme,
    fit_step,
    static_kde_fit,
)
from .kernel import GAUSSIAN, KernelSpec
from .window import WindowConfig

__all__ = [
    "Batch",
    "EstimatorConfig",
    "EstimatorSnapshot",
    "GAUSSIAN",
    "KernelSpec",
    "SmoothnessConfig",
    "SmoothnessMode",
    "TAKDE",
    "WeightScheme",
    "WindowConfig",
    "fit_step",
    "static_kde_fit",
]
