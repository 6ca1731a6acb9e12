"""End-to-end acceptance checks.

Each test prints one ``PASS``/``FAIL`` line with the measured values, then
asserts.  Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
The Monte-Carlo checks are marked ``slow``; together they take several
minutes on a single core.
"""

import time

import numpy as np
import pytest

from takde import TAKDE, Batch, EstimatorConfig, EstimatorSnapshot, WindowConfig, static_kde_fit
from takde.bandwidth import SmoothnessConfig, SmoothnessMode, normal_rule_c, oversmooth_c, window_bandwidths
from takde.bench import BenchSettings, run_bench, summarize
from takde.histogram import sturges_bins
from takde.kernel import GAUSSIAN
from takde.oracle import (
    Quadrature,
    amise_upper_bound,
    check_weight_optimality,
    exact_r_b,
    numerical_mise,
    r_second_derivative,
)
from takde.synthetic import batch_density, make_plan, marron_wand, sample_stream
from takde.weights import amise_scores, takde_weights
from takde.window import cutoff_window_size

STRUCTURE_SEED = 2023


def report(name, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def bench_table(batches, cutoffs, schemes):
    settings = BenchSettings(batches=batches, replicates=30, cutoffs=cutoffs, schemes=schemes, seed=STRUCTURE_SEED)
    rows = summarize(run_bench(settings))
    return {(r["scheme"], r["cutoff"]): r["mean_log_lik"] for r in rows}


@pytest.fixture(scope="module")
def bench_100():
    return bench_table(100, (1.0, 2.0, 3.0, 4.0, 5.0), ("takde", "uniform", "exponential"))


@pytest.mark.slow
def test_weight_scheme_dominance(bench_100):
    lines, ok = [], True
    for s in (1.0, 2.0, 3.0, 4.0, 5.0):
        tk, un, ex = (bench_100[(k, s)] for k in ("takde", "uniform", "exponential"))
        ok &= tk >= un and tk >= ex
        lines.append(f"s={s:g} takde={tk:.4f} uniform={un:.4f} exp={ex:.4f}")
    report("1 weight-scheme dominance", ok, "; ".join(lines))


@pytest.mark.slow
def test_dominance_gap_shrinks_with_slower_drift(bench_100):
    gap_100 = bench_100[("takde", 3.0)] - bench_100[("uniform", 3.0)]
    t500 = bench_table(500, (3.0,), ("takde", "uniform"))
    gap_500 = t500[("takde", 3.0)] - t500[("uniform", 3.0)]
    # A dominance gap that shrinks moves towards zero; a growing deficit
    # would also make the signed difference smaller, so compare magnitudes.
    ok = abs(gap_500) < abs(gap_100)
    report(
        "2 dominance gap shrinks 100->500 batches",
        ok,
        f"takde-uniform at s=3: 100 batches {gap_100:+.4f}, 500 batches {gap_500:+.4f}",
    )


def test_static_reduction():
    cfg = EstimatorConfig(window=WindowConfig(0.0, 16))
    c = normal_rule_c(GAUSSIAN)
    grid = np.linspace(-6, 6, 201)
    rng = np.random.default_rng(3)
    est = TAKDE(cfg)
    worst, sizes = 0.0, set()
    for t in range(50):
        pts = rng.normal(loc=0.05 * t, scale=1 + 0.02 * t, size=rng.integers(5, 21))
        snap = est.update(pts)
        ref = static_kde_fit(pts, c)
        worst = max(worst, float(np.max(np.abs(snap.evaluate(grid) - ref.evaluate(grid)))))
        sizes.add(snap.window_size)
    report("3 static reduction at cutoff 0", worst <= 1e-12 and sizes == {1}, f"max |diff|={worst:.3e}, window sizes {sizes}")


def test_proper_density():
    rng = np.random.default_rng(4)
    masses = []
    for stream in range(4):
        plan = make_plan(60, seed=[4, stream])
        picks = set(rng.choice(60, size=50, replace=False).tolist())
        est = TAKDE(EstimatorConfig(window=WindowConfig(float(rng.uniform(0.5, 5)), 16)))
        for item in sample_stream(plan, seed=[4, stream, 1], test_size=1):
            snap = est.update(item.train)
            if item.train.t not in picks:
                continue
            pts = np.concatenate([b.points for b in snap.window])
            pad = 12 * snap.sigmas.max()
            quad = Quadrature.covering(pts.min() - pad, pts.max() + pad, snap.sigmas.min() / 5)
            masses.append(quad.integrate(snap.evaluate))
    masses = np.array(masses)
    ok = masses.size == 200 and np.all((masses >= 0.9999) & (masses <= 1.0001))
    report("4 proper density", ok, f"{masses.size} snapshots, mass in [{masses.min():.8f}, {masses.max():.8f}]")


def test_weight_optimality():
    rng = np.random.default_rng(5)
    worst = -np.inf
    passed = True
    for k in range(100):
        t = int(rng.integers(2, 17))
        ns = rng.integers(5, 21, size=t)
        sigmas = rng.uniform(0.05, 1.5, size=t)
        r_hats = np.concatenate([rng.exponential(0.3, size=t - 1), [0.0]])
        S = amise_scores(sigmas, ns, r_hats, GAUSSIAN.r_of_k)
        alphas = takde_weights(sigmas, ns, r_hats, GAUSSIAN.r_of_k)
        ok, w = check_weight_optimality(S, alphas, trials=1000, seed=[5, k])
        passed &= ok
        worst = max(worst, w)
    report("5 weight optimality", passed and worst <= 1e-9, f"max violation {worst:.3e} over 100 score vectors")


@pytest.mark.slow
def test_consistency():
    quad = Quadrature(-8, 8, 801)

    def factory_for(n):
        def build(rng):
            est = TAKDE(EstimatorConfig(window=WindowConfig(1.0, 8)))
            for _ in range(10):
                snap = est.update(rng.standard_normal(n))
            return snap

        return build

    mise = [numerical_mise(factory_for(n), marron_wand(1), 30, quad, seed=[6, n]) for n in (100, 1000, 10000)]
    decreasing = mise[0] > mise[1] > mise[2]

    # one stale batch with fixed positive drift estimate, newest batch exact
    grid_n = np.array([10, 100, 1000, 10**4, 10**5, 10**6])
    alpha_new = []
    for n in grid_n:
        ns = np.array([n, n])
        sig = window_bandwidths(np.ones(2), ns, 2, normal_rule_c(GAUSSIAN), 1e-3)
        alpha_new.append(takde_weights(sig, ns, [0.05, 0.0], GAUSSIAN.r_of_k)[-1])
    increasing = bool(np.all(np.diff(alpha_new) > 0))
    report(
        "6 consistency",
        decreasing and increasing,
        f"MISE n=100/1000/10000: {mise[0]:.3e} {mise[1]:.3e} {mise[2]:.3e}; "
        f"newest weight {alpha_new[0]:.4f} -> {alpha_new[-1]:.4f}",
    )


@pytest.mark.slow
def test_amise_bound_holds():
    quad = Quadrature(-6, 6, 1201)
    ratios = []
    for cfg_id in range(20):
        rng = np.random.default_rng([7, cfg_id])
        total = 14 + int(rng.integers(0, 60))
        plan = make_plan(total, seed=[7, cfg_id])
        sizes = rng.integers(500, 1001, size=total)
        stop = int(rng.integers(0, total))
        est = TAKDE(EstimatorConfig())
        for item in sample_stream(plan, seed=[7, cfg_id, 1], sizes=sizes, test_size=1):
            pilot = est.update(item.train)
            if item.train.t == stop:
                break
        stamps = [b.t for b in pilot.window]
        dens = [batch_density(plan, t) for t in stamps]
        current = dens[-1]
        bound = amise_upper_bound(
            pilot.weights,
            pilot.sigmas,
            pilot.ns,
            [exact_r_b(d, current) for d in dens],
            [r_second_derivative(d) for d in dens],
        )

        def refit(g, pilot=pilot, stamps=stamps, dens=dens):
            window = tuple(Batch(t, d.sample(int(n), g)) for t, d, n in zip(stamps, dens, pilot.ns))
            return EstimatorSnapshot(stamps[-1], window, pilot.sigmas, pilot.weights, pilot.r_hat)

        ratios.append(numerical_mise(refit, current, 30, quad, seed=[7, cfg_id, 2]) / bound)
    worst = max(ratios)
    report("7 AMISE upper bound", worst <= 1.1, f"max MISE/bound over 20 configurations {worst:.4f}")


def test_golden_constants():
    checks = [
        ("R(K)", GAUSSIAN.r_of_k, 0.2820948, 1e-7),
        ("mu2", GAUSSIAN.mu2, 1.0, 1e-12),
        ("normal c", normal_rule_c(GAUSSIAN), 1.0592238, 1e-6),
        ("literal normal c", SmoothnessConfig(SmoothnessMode.LITERAL_NORMAL).resolve(), 1.6056, 1e-3),
        ("oversmooth c", oversmooth_c(GAUSSIAN), 1.1439, 1e-3),
        ("literal oversmooth c", SmoothnessConfig("paper-oversmooth").resolve(), 1.7338, 1e-3),
        ("Sturges(100)", sturges_bins(100), 8, 0),
    ]
    bad = [f"{name}={got}" for name, got, want, tol in checks if abs(got - want) > tol]
    report("8 golden constants", not bad, "; ".join(bad) or f"{len(checks)} values within tolerance")


def test_runtime():
    plan = make_plan(500, seed=9)
    items = list(sample_stream(plan, seed=1, test_size=500))
    est = TAKDE(EstimatorConfig(window=WindowConfig(1.0, 16)))
    start = time.perf_counter()
    for item in items:
        est.update(item.train).mean_log_likelihood(item.test)
    takde_time = time.perf_counter() - start

    c = normal_rule_c(GAUSSIAN)
    history = []
    start = time.perf_counter()
    for item in items:
        history.append(item.train.points)
        static_kde_fit(np.concatenate(history), c).mean_log_likelihood(item.test)
    naive_time = time.perf_counter() - start

    per_batch_ms = 1e3 * takde_time / len(items)
    report(
        "9 runtime",
        takde_time < naive_time and per_batch_ms < 5.0,
        f"takde {takde_time:.3f}s ({per_batch_ms:.3f} ms/batch), full-history KDE {naive_time:.3f}s",
    )


def test_window_behaviour():
    rng = np.random.default_rng(10)
    est = TAKDE(EstimatorConfig(window=WindowConfig(1.0, 16)))
    static_sizes = [est.update(rng.normal(size=200)).window_size for _ in range(30)]

    plan = make_plan(40, seed=10)
    est0 = TAKDE(EstimatorConfig(window=WindowConfig(0.0, 16)))
    zero_sizes = {est0.update(item.train).window_size for item in sample_stream(plan, seed=11, test_size=1)}

    walked = cutoff_window_size([0.0, 0.3, 0.5, 0.4], 1.0, 16)
    ok = static_sizes[-1] == 16 and max(static_sizes) == 16 and zero_sizes == {1} and walked == 3
    report(
        "10 window behaviour",
        ok,
        f"static stream final T={static_sizes[-1]}; cutoff 0 sizes {zero_sizes}; hand-walked T={walked}",
    )
