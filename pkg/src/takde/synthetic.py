"""Dynamic synthetic benchmark built from the Marron & Wand (1992) mixtures.

A stream of ``N`` batches is split into 14 consecutive sections.  Inside
section ``j`` the density slides linearly from mixture ``g_j`` towards
``g_{j+1}``, so every mixture is visited once and never returns.

Structure (section sizes, per-batch training sizes) comes from one seed and
the sampled points from another, so Monte-Carlo replicates share the same
schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .batch import Batch
from .errors import InvalidArgumentError
from .kernel import INV_SQRT_2PI

N_SECTIONS = 14


@dataclass(frozen=True, eq=False)
class GaussianMixture:
    """Univariate Gaussian mixture with components ``(weight, mean, std)``."""

    weights: np.ndarray
    means: np.ndarray
    stds: np.ndarray

    def __post_init__(self):
        w, mu, sd = (np.array(a, dtype=float).ravel() for a in (self.weights, self.means, self.stds))
        if not (w.size == mu.size == sd.size) or w.size == 0:
            raise InvalidArgumentError("mixture needs matching non-empty component arrays")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise InvalidArgumentError(f"mixture weights must lie on the simplex (sum={w.sum()})")
        if np.any(sd <= 0):
            raise InvalidArgumentError("component standard deviations must be positive")
        for name, arr in (("weights", w), ("means", mu), ("stds", sd)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_components(cls, components) -> "GaussianMixture":
        w, mu, sd = zip(*components)
        return cls(np.array(w), np.array(mu), np.array(sd))

    @property
    def components(self) -> list[tuple[float, float, float]]:
        return list(zip(self.weights.tolist(), self.means.tolist(), self.stds.tolist()))

    def _z(self, x):
        x = np.asarray(x, dtype=float)
        return (x[..., None] - self.means) / self.stds

    def pdf(self, x):
        z = self._z(x)
        return (np.exp(-0.5 * z * z) * (self.weights * INV_SQRT_2PI / self.stds)).sum(axis=-1)

    def pdf_second_derivative(self, x):
        """``p''(x)``, using ``phi''(z) = (z^2 - 1) phi(z)`` per component."""
        z = self._z(x)
        scale = self.weights * INV_SQRT_2PI / self.stds**3
        return ((z * z - 1.0) * np.exp(-0.5 * z * z) * scale).sum(axis=-1)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw a component per point, then a normal variate from it."""
        comp = rng.choice(self.weights.size, size=n, p=self.weights)
        return self.means[comp] + self.stds[comp] * rng.standard_normal(n)

    def blend(self, other: "GaussianMixture", lam: float) -> "GaussianMixture":
        """``(1 - lam) * self + lam * other``; zero-weight parts are dropped."""
        parts = []
        if lam < 1.0:
            parts.append((self, 1.0 - lam))
        if lam > 0.0:
            parts.append((other, lam))
        w = np.concatenate([g.weights * a for g, a in parts])
        mu = np.concatenate([g.means for g, _ in parts])
        sd = np.concatenate([g.stds for g, _ in parts])
        return GaussianMixture(w / w.sum(), mu, sd)


def _mw_components(k: int) -> list[tuple[float, float, float]]:
    if k == 1:  # Gaussian
        return [(1.0, 0.0, 1.0)]
    if k == 2:  # Skewed unimodal
        return [(1 / 5, 0.0, 1.0), (1 / 5, 1 / 2, 2 / 3), (3 / 5, 13 / 12, 5 / 9)]
    if k == 3:  # Strongly skewed
        return [(1 / 8, 3 * ((2 / 3) ** l - 1), (2 / 3) ** l) for l in range(8)]
    if k == 4:  # Kurtotic unimodal
        return [(2 / 3, 0.0, 1.0), (1 / 3, 0.0, 1 / 10)]
    if k == 5:  # Outlier
        return [(1 / 10, 0.0, 1.0), (9 / 10, 0.0, 1 / 10)]
    if k == 6:  # Bimodal
        return [(1 / 2, -1.0, 2 / 3), (1 / 2, 1.0, 2 / 3)]
    if k == 7:  # Separated bimodal
        return [(1 / 2, -3 / 2, 1 / 2), (1 / 2, 3 / 2, 1 / 2)]
    if k == 8:  # Skewed bimodal
        return [(3 / 4, 0.0, 1.0), (1 / 4, 3 / 2, 1 / 3)]
    if k == 9:  # Trimodal
        return [(9 / 20, -6 / 5, 3 / 5), (9 / 20, 6 / 5, 3 / 5), (1 / 10, 0.0, 1 / 4)]
    if k == 10:  # Claw
        return [(1 / 2, 0.0, 1.0)] + [(1 / 10, l / 2 - 1, 1 / 10) for l in range(5)]
    if k == 11:  # Double claw
        return [(49 / 100, -1.0, 2 / 3), (49 / 100, 1.0, 2 / 3)] + [
            (1 / 350, (l - 3) / 2, 1 / 100) for l in range(7)
        ]
    if k == 12:  # Asymmetric claw
        return [(1 / 2, 0.0, 1.0)] + [
            (2 ** (1 - l) / 31, l + 1 / 2, 2.0 ** (-l) / 10) for l in range(-2, 3)
        ]
    if k == 13:  # Asymmetric double claw
        return (
            [(46 / 100, 2 * l - 1, 2 / 3) for l in range(2)]
            + [(1 / 300, -l / 2, 1 / 100) for l in range(1, 4)]
            + [(7 / 300, l / 2, 7 / 100) for l in range(1, 4)]
        )
    if k == 14:  # Smooth comb
        return [
            (2 ** (5 - l) / 63, (65 - 96 * 0.5**l) / 21, (32 / 63) / 2**l) for l in range(6)
        ]
    if k == 15:  # Discrete comb
        return [(2 / 7, (12 * l - 15) / 7, 2 / 7) for l in range(3)] + [
            (1 / 21, 2 * l / 7, 1 / 21) for l in range(8, 11)
        ]
    raise InvalidArgumentError(f"Marron-Wand density id must be in 1..15, got {k}")


MW_NAMES = (
    "Gaussian",
    "Skewed Unimodal",
    "Strongly Skewed",
    "Kurtotic Unimodal",
    "Outlier",
    "Bimodal",
    "Separated Bimodal",
    "Skewed Bimodal",
    "Trimodal",
    "Claw",
    "Double Claw",
    "Asymmetric Claw",
    "Asymmetric Double Claw",
    "Smooth Comb",
    "Discrete Comb",
)


def marron_wand(k: int) -> GaussianMixture:
    """Marron-Wand benchmark density number ``k`` (1..15)."""
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= 15):
        raise InvalidArgumentError(f"Marron-Wand density id must be in 1..15, got {k}")
    comps = _mw_components(int(k))
    w = np.array([c[0] for c in comps])
    # the printed weights are exact fractions; renormalise away float dust
    return GaussianMixture(w / w.sum(), [c[1] for c in comps], [c[2] for c in comps])


@dataclass(frozen=True, eq=False)
class StreamPlan:
    """Section layout of a synthetic stream.

    ``mixtures`` holds the ``N_SECTIONS + 1`` anchor densities; section ``j``
    (0-based) moves from ``mixtures[j]`` to ``mixtures[j + 1]``.
    """

    section_sizes: tuple
    seed: int | None = None
    mixtures: tuple = tuple(marron_wand(k) for k in range(1, N_SECTIONS + 2))

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.section_sizes)
        if len(sizes) != N_SECTIONS or any(s < 1 for s in sizes):
            raise InvalidArgumentError(f"need {N_SECTIONS} positive section sizes, got {sizes}")
        if len(self.mixtures) != len(sizes) + 1:
            raise InvalidArgumentError("need one more anchor mixture than sections")
        object.__setattr__(self, "section_sizes", sizes)
        object.__setattr__(self, "_starts", np.cumsum((0,) + sizes))

    @property
    def total(self) -> int:
        return int(self._starts[-1])

    def locate(self, index: int) -> tuple[int, int]:
        """``(section j, position i)`` of a 0-based global batch index, both 1-based."""
        if not 0 <= index < self.total:
            raise InvalidArgumentError(f"batch index {index} outside plan of {self.total}")
        j = int(np.searchsorted(self._starts, index, side="right"))
        return j, index - int(self._starts[j - 1]) + 1


def make_plan(total_batches: int, seed=None) -> StreamPlan:
    """Random composition of ``total_batches`` into 14 positive section sizes."""
    if total_batches < N_SECTIONS:
        raise InvalidArgumentError(f"need at least {N_SECTIONS} batches, got {total_batches}")
    rng = np.random.default_rng(seed)
    cuts = np.sort(rng.choice(np.arange(1, total_batches), size=N_SECTIONS - 1, replace=False))
    sizes = np.diff(np.concatenate(([0], cuts, [total_batches])))
    return StreamPlan(tuple(sizes.tolist()), seed)


def batch_density(plan: StreamPlan, global_batch_index: int) -> GaussianMixture:
    """True density of batch ``global_batch_index`` (0-based)."""
    j, i = plan.locate(global_batch_index)
    size = plan.section_sizes[j - 1]
    return plan.mixtures[j - 1].blend(plan.mixtures[j], (i - 1) / size)


def true_density(handle: GaussianMixture, x):
    return handle.pdf(x)


@dataclass(frozen=True, eq=False)
class StreamItem:
    train: Batch
    test: np.ndarray
    density: GaussianMixture


def batch_sizes(plan: StreamPlan, size_range=(5, 20), seed=None) -> np.ndarray:
    """Training sizes per batch, uniform on the inclusive ``size_range``."""
    lo, hi = size_range
    if not 1 <= lo <= hi:
        raise InvalidArgumentError(f"bad batch size range {size_range}")
    rng = np.random.default_rng(seed)
    return rng.integers(lo, hi + 1, size=plan.total)


def sample_stream(
    plan: StreamPlan,
    batch_size_range=(5, 20),
    test_size: int = 500,
    seed=None,
    sizes=None,
) -> Iterator[StreamItem]:
    """Yield training batch, test points and true density for every batch.

    ``sizes`` fixes the per-batch training sizes (drawn from the plan seed
    when omitted); ``seed`` drives only the sampled points.
    """
    if sizes is None:
        sizes = batch_sizes(plan, batch_size_range, plan.seed)
    sizes = np.asarray(sizes)
    if sizes.size != plan.total:
        raise InvalidArgumentError(f"{sizes.size} sizes for a plan of {plan.total} batches")
    rng = np.random.default_rng(seed)
    for t in range(plan.total):
        dens = batch_density(plan, t)
        train = dens.sample(int(sizes[t]), rng)
        test = dens.sample(test_size, rng)
        yield StreamItem(Batch(t, train), test, dens)
