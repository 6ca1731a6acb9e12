"""Monte-Carlo comparison of weight schemes on the synthetic stream.

The structural seed fixes the section layout and per-batch training sizes
once; each replicate then draws fresh points from its own sampling seed.
Every (scheme, cutoff) cell of a replicate sees the same data.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .bandwidth import SmoothnessConfig
from .errors import InvalidArgumentError
from .estimator import EstimatorConfig, TAKDE, WeightScheme
from .kernel import GAUSSIAN, KernelSpec
from .synthetic import batch_sizes, make_plan, sample_stream
from .window import WindowConfig


@dataclass(frozen=True)
class BenchResult:
    scheme: str
    cutoff: float
    replicate: int
    seed: int
    mean_log_lik: float
    time_per_batch: float

    def as_row(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BenchSettings:
    batches: int = 100
    replicates: int = 30
    cutoffs: tuple = (1.0, 2.0, 3.0, 4.0, 5.0)
    schemes: tuple = ("takde", "uniform", "exponential")
    seed: int = 0
    hard_cap: int = 16
    smoothness: SmoothnessConfig = field(default_factory=SmoothnessConfig)
    decay: float = 0.9
    kernel: KernelSpec = GAUSSIAN
    batch_size_range: tuple = (5, 20)
    test_size: int = 500

    def __post_init__(self):
        if self.batches < 14:
            raise InvalidArgumentError(f"bench needs at least 14 batches, got {self.batches}")
        if self.replicates < 1:
            raise InvalidArgumentError("bench needs at least one replicate")
        if not self.cutoffs or any(c < 0 for c in self.cutoffs):
            raise InvalidArgumentError(f"cutoffs must be non-negative, got {self.cutoffs}")
        object.__setattr__(self, "schemes", tuple(WeightScheme(s).value for s in self.schemes))
        object.__setattr__(self, "cutoffs", tuple(float(c) for c in self.cutoffs))


def sampling_seed(seed: int, replicate: int) -> int:
    """Integer sampling seed of one replicate, derived from the structural seed."""
    return int(np.random.SeedSequence([seed, replicate]).generate_state(1, np.uint64)[0])


def stream_log_likelihood(items, cfg: EstimatorConfig) -> tuple[float, float]:
    """Mean test log-likelihood over all batches, and mean seconds per batch.

    Only fitting and evaluation are timed.
    """
    est = TAKDE(cfg)
    scores = np.empty(len(items))
    elapsed = 0.0
    for k, item in enumerate(items):
        start = time.perf_counter()
        snap = est.update(item.train)
        scores[k] = snap.mean_log_likelihood(item.test)
        elapsed += time.perf_counter() - start
    return float(scores.mean()), elapsed / len(items)


def _run_replicate(settings: BenchSettings, replicate: int) -> list[BenchResult]:
    plan = make_plan(settings.batches, settings.seed)
    sizes = batch_sizes(plan, settings.batch_size_range, settings.seed)
    seed = sampling_seed(settings.seed, replicate)
    items = list(sample_stream(plan, settings.batch_size_range, settings.test_size, seed, sizes))
    out = []
    for scheme in settings.schemes:
        for cutoff in settings.cutoffs:
            cfg = EstimatorConfig(
                kernel=settings.kernel,
                window=WindowConfig(cutoff, settings.hard_cap),
                smoothness=settings.smoothness,
                weights=scheme,
                decay=settings.decay,
            )
            ll, per_batch = stream_log_likelihood(items, cfg)
            out.append(BenchResult(scheme, cutoff, replicate, seed, ll, per_batch))
    return out


def default_workers() -> int:
    env = os.environ.get("TAKDE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidArgumentError(f"TAKDE_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def run_bench(settings: BenchSettings, workers: int | None = None) -> list[BenchResult]:
    """Run every (scheme, cutoff, replicate) cell; rows sorted by scheme, cutoff, replicate."""
    workers = min(workers or default_workers(), settings.replicates)
    reps = range(settings.replicates)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(_run_replicate, [settings] * len(reps), reps))
    else:
        chunks = [_run_replicate(settings, r) for r in reps]
    rows = [r for chunk in chunks for r in chunk]
    return sorted(rows, key=lambda r: (r.scheme, r.cutoff, r.replicate))


def summarize(results: Sequence[BenchResult]) -> list[dict]:
    """Mean log-likelihood, its standard error and mean latency per (scheme, cutoff)."""
    cells: dict[tuple, list[BenchResult]] = {}
    for r in results:
        cells.setdefault((r.scheme, r.cutoff), []).append(r)
    rows = []
    for (scheme, cutoff), group in sorted(cells.items()):
        ll = np.array([g.mean_log_lik for g in group])
        se = float(ll.std(ddof=1) / np.sqrt(ll.size)) if ll.size > 1 else 0.0
        rows.append(
            {
                "scheme": scheme,
                "cutoff": cutoff,
                "replicates": ll.size,
                "mean_log_lik": float(ll.mean()),
                "stderr": se,
                "time_per_batch": float(np.mean([g.time_per_batch for g in group])),
            }
        )
    return rows
