"""Mixing weights over the batches of a window, ordered oldest to newest."""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError


def amise_scores(sigmas, ns, r_hats, r_of_k: float) -> np.ndarray:
    """Per-batch scores ``S_j = 5 R(K) / (4 n_j sigma_j) + (2T - 1) R_hat_j``.

    The optimal weights are proportional to ``1 / S_j``.
    """
    sigmas = np.asarray(sigmas, dtype=float)
    ns = np.asarray(ns, dtype=float)
    r_hats = np.asarray(r_hats, dtype=float)
    if not (sigmas.shape == ns.shape == r_hats.shape) or sigmas.ndim != 1:
        raise InvalidArgumentError(
            f"length mismatch: {sigmas.shape}, {ns.shape}, {r_hats.shape}"
        )
    if sigmas.size == 0:
        raise InvalidArgumentError("empty window")
    if np.any(sigmas <= 0) or np.any(ns < 1) or np.any(r_hats < 0):
        raise InvalidArgumentError("need sigmas > 0, ns >= 1 and r_hats >= 0")
    t_window = sigmas.size
    return 5.0 * r_of_k / (4.0 * ns * sigmas) + (2 * t_window - 1) * r_hats


def takde_weights(sigmas, ns, r_hats, r_of_k: float) -> np.ndarray:
    """AMISE-optimal weights, normalised reciprocals of :func:`amise_scores`."""
    inv = 1.0 / amise_scores(sigmas, ns, r_hats, r_of_k)
    return inv / inv.sum()


def uniform_weights(t_window: int) -> np.ndarray:
    if t_window < 1:
        raise InvalidArgumentError(f"window size must be >= 1, got {t_window}")
    return np.full(t_window, 1.0 / t_window)


def exponential_weights(t_window: int, decay_e: float) -> np.ndarray:
    """Geometric decay: newest gets ``1 - e``, the oldest takes the remaining ``e**(T-1)``."""
    if not 0.0 < decay_e < 1.0:
        raise InvalidArgumentError(f"decay must lie in (0, 1), got {decay_e}")
    if t_window < 1:
        raise InvalidArgumentError(f"window size must be >= 1, got {t_window}")
    # age 0 is the newest batch
    ages = np.arange(t_window - 1, -1, -1)
    alphas = (1.0 - decay_e) * decay_e**ages
    alphas[0] = decay_e ** (t_window - 1)
    return alphas
