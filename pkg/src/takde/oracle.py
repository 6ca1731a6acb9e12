"""Numerical checks for the error theory behind the estimator.

Everything here works against analytic densities: roughness functionals
``R(f) = int f^2`` by composite Simpson quadrature, the AMISE upper bound
for a weighted sliding-window KDE, Monte-Carlo MISE, and a randomized
check that a weight vector minimises ``sum_j alpha_j^2 S_j`` on the
simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .errors import InvalidArgumentError, NumericError
from .kernel import GAUSSIAN, KernelSpec

SIMPLEX_TOL = 1e-9


@dataclass(frozen=True)
class Quadrature:
    """Composite Simpson rule on ``n_nodes`` equally spaced nodes over ``[lo, hi]``."""

    lo: float = -15.0
    hi: float = 15.0
    n_nodes: int = 6001

    def __post_init__(self):
        if not self.hi > self.lo:
            raise InvalidArgumentError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.n_nodes < 3 or self.n_nodes % 2 == 0:
            raise InvalidArgumentError(f"Simpson needs an odd node count >= 3, got {self.n_nodes}")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_nodes)

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.n_nodes - 1)

    def integrate_values(self, values) -> float:
        return float(simpson(np.asarray(values, dtype=float), dx=self.step))

    def integrate(self, f: Callable) -> float:
        x = self.nodes
        y = np.asarray(f(x), dtype=float)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape)
        bad = ~np.isfinite(y)
        if bad.any():
            node = float(x[np.argmax(bad)])
            raise NumericError(f"integrand is not finite at x={node}", node=node)
        return self.integrate_values(y)

    @classmethod
    def covering(cls, lo: float, hi: float, max_step: float, min_nodes: int = 2001) -> "Quadrature":
        """Rule on ``[lo, hi]`` with node spacing at most ``max_step``."""
        n = max(min_nodes, int(np.ceil((hi - lo) / max_step)) + 1)
        return cls(lo, hi, n + (n % 2 == 0))


DEFAULT_QUADRATURE = Quadrature()


def r_functional(f: Callable, quad: Quadrature = DEFAULT_QUADRATURE) -> float:
    """Roughness ``int f(x)^2 dx`` over the quadrature interval."""
    return quad.integrate(lambda x: np.square(f(x)))


def exact_r_b(p_i, p_t, quad: Quadrature = DEFAULT_QUADRATURE) -> float:
    """``R(p_i - p_t)`` for two analytic densities."""
    return r_functional(lambda x: p_i.pdf(x) - p_t.pdf(x), quad)


def r_second_derivative(p, quad: Quadrature = DEFAULT_QUADRATURE) -> float:
    """``R(p'')`` for a density exposing ``pdf_second_derivative``."""
    return r_functional(p.pdf_second_derivative, quad)


def _check_simplex(alphas):
    alphas = np.asarray(alphas, dtype=float)
    if alphas.ndim != 1 or alphas.size == 0:
        raise InvalidArgumentError("weights must be a non-empty vector")
    if np.any(alphas < 0) or abs(alphas.sum() - 1.0) > SIMPLEX_TOL:
        raise InvalidArgumentError(f"weights are not on the simplex (sum={alphas.sum()})")
    return alphas


def amise_terms(alphas, sigmas, ns, r_b, r_pdd, kernel: KernelSpec = GAUSSIAN) -> tuple[float, float, float]:
    """Variance term, drift-bias term and smoothing-bias term of the bound."""
    alphas = _check_simplex(alphas)
    sigmas, ns, r_b, r_pdd = (np.asarray(a, dtype=float) for a in (sigmas, ns, r_b, r_pdd))
    if not (alphas.shape == sigmas.shape == ns.shape == r_b.shape == r_pdd.shape):
        raise InvalidArgumentError("all per-batch arrays must have the same length")
    if np.any(sigmas <= 0) or np.any(ns < 1) or np.any(r_b < 0) or np.any(r_pdd < 0):
        raise InvalidArgumentError("need sigmas > 0, ns >= 1 and non-negative roughness values")
    a2 = alphas**2
    inflate = 2 * alphas.size - 1
    variance = float(np.sum(a2 * kernel.r_of_k / (ns * sigmas)))
    drift = float(inflate * np.sum(a2 * r_b))
    smooth = float(inflate / 4.0 * kernel.mu2**2 * np.sum(a2 * sigmas**4 * r_pdd))
    return variance, drift, smooth


def amise_upper_bound(alphas, sigmas, ns, r_b, r_pdd, kernel: KernelSpec = GAUSSIAN) -> float:
    """AMISE upper bound of a weighted sliding-window KDE (sum of :func:`amise_terms`)."""
    return sum(amise_terms(alphas, sigmas, ns, r_b, r_pdd, kernel))


def integrated_squared_error(estimate, truth, quad: Quadrature = DEFAULT_QUADRATURE) -> float:
    """``int (estimate - truth)^2``; both arguments are callables or expose ``pdf``/``evaluate``."""
    f = _as_callable(estimate)
    g = _as_callable(truth)
    return quad.integrate(lambda x: np.square(f(x) - g(x)))


def _as_callable(obj) -> Callable:
    for name in ("evaluate", "pdf"):
        if hasattr(obj, name):
            return getattr(obj, name)
    return obj


def numerical_mise(
    estimator_factory: Callable[[np.random.Generator], object],
    true_density,
    n_replicates: int,
    quad: Quadrature = DEFAULT_QUADRATURE,
    seed=None,
) -> float:
    """Monte-Carlo MISE: mean ISE over replicates.

    ``estimator_factory(rng)`` builds one fitted estimate from fresh data;
    each replicate gets an independent generator spawned from ``seed``.
    """
    if n_replicates < 1:
        raise InvalidArgumentError("need at least one replicate")
    children = np.random.SeedSequence(seed).spawn(n_replicates)
    errors = [
        integrated_squared_error(estimator_factory(np.random.default_rng(ss)), true_density, quad)
        for ss in children
    ]
    return float(np.mean(errors))


def weight_objective(alphas, S) -> np.ndarray:
    """``sum_j alpha_j^2 S_j``; ``alphas`` may be a stack of vectors (last axis)."""
    return np.sum(np.square(alphas) * S, axis=-1)


def check_weight_optimality(S, alphas, trials: int = 1000, seed=None) -> tuple[bool, float]:
    """Compare ``alphas`` against random simplex points.

    Trial points mix ``alphas`` with a Dirichlet draw at a random ratio, so
    both small perturbations and far-away vertices are probed.  Returns
    ``(passed, worst)`` where ``worst`` is the largest amount by which
    ``alphas`` scores above a trial point (negative when every trial is worse).
    """
    S = np.asarray(S, dtype=float)
    alphas = _check_simplex(alphas)
    if S.shape != alphas.shape or np.any(S <= 0):
        raise InvalidArgumentError("S must be positive and match the weights")
    rng = np.random.default_rng(seed)
    mix = rng.uniform(size=(trials, 1))
    trial = (1.0 - mix) * alphas + mix * rng.dirichlet(np.ones(S.size), size=trials)
    worst = float(np.max(weight_objective(alphas, S) - weight_objective(trial, S)))
    return worst <= SIMPLEX_TOL, worst
