"""Command-line interface: ``takde run | bench | synth``.

Exit codes: 0 on success, 1 on data errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bandwidth import SmoothnessConfig, SmoothnessMode
from .bench import BenchSettings, run_bench, summarize
from .batch import Batch
from .errors import TakdeError
from .estimator import EstimatorConfig, TAKDE, WeightScheme
from .kernel import get_kernel
from .streamio import atomic_write, format_stream, read_stream
from .synthetic import make_plan, sample_stream
from .window import WindowConfig

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_grid(text: str) -> np.ndarray:
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise UsageError(f"--grid expects lo:hi:count, got {text!r}") from None
    if count < 2 or not hi > lo:
        raise UsageError(f"--grid needs lo < hi and count >= 2, got {text!r}")
    return np.linspace(lo, hi, count)


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _smoothness(args) -> SmoothnessConfig:
    if args.smoothness is not None:
        if args.smoothness_mode is not None:
            raise UsageError("--smoothness and --smoothness-mode are mutually exclusive")
        if not args.smoothness > 0:
            raise UsageError("--smoothness must be positive")
        return SmoothnessConfig.explicit(args.smoothness)
    return SmoothnessConfig(SmoothnessMode(args.smoothness_mode or "normal"))


def _estimator_config(args) -> EstimatorConfig:
    if args.cutoff < 0:
        raise UsageError("--cutoff must be non-negative")
    if args.hard_cap < 1:
        raise UsageError("--hard-cap must be at least 1")
    if not 0 < args.decay < 1:
        raise UsageError("--decay must lie in (0, 1)")
    return EstimatorConfig(
        kernel=get_kernel(args.kernel),
        window=WindowConfig(args.cutoff, args.hard_cap),
        smoothness=_smoothness(args),
        weights=args.weights,
        decay=args.decay,
    )


def _emit(text: str, output):
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        atomic_write(output, text)


def cmd_run(args) -> int:
    cfg = _estimator_config(args)
    grid = parse_grid(args.grid) if args.grid else None
    batches = read_stream(args.input)
    tests = {b.t: b.points for b in read_stream(args.test)} if args.test else {}
    est = TAKDE(cfg)
    lines = []
    for batch in batches:
        snap = est.update(batch)
        rec = {
            "t": snap.t,
            "window_size": snap.window_size,
            "sigmas": snap.sigmas.tolist(),
            "alphas": snap.weights.tolist(),
            "r_hat": snap.r_hat.tolist(),
        }
        if batch.t in tests:
            rec["mean_log_lik"] = snap.mean_log_likelihood(tests[batch.t])
        if grid is not None:
            rec["density"] = snap.evaluate(grid).tolist()
        lines.append(json.dumps(rec))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.batches < 14:
        raise UsageError("--batches must be at least 14")
    if args.replicates < 1:
        raise UsageError("--replicates must be at least 1")
    cutoffs = _float_list(args.cutoffs)
    if not cutoffs or any(c < 0 for c in cutoffs):
        raise UsageError("--cutoffs must be non-negative numbers")
    try:
        schemes = tuple(WeightScheme(s.strip()).value for s in args.schemes.split(",") if s.strip())
    except ValueError:
        raise UsageError(f"--schemes must be drawn from takde,uniform,exponential; got {args.schemes!r}") from None
    if not 0 < args.decay < 1:
        raise UsageError("--decay must lie in (0, 1)")
    settings = BenchSettings(
        batches=args.batches,
        replicates=args.replicates,
        cutoffs=cutoffs,
        schemes=schemes,
        seed=args.seed,
        hard_cap=args.hard_cap,
        smoothness=_smoothness(args),
        decay=args.decay,
        kernel=get_kernel(args.kernel),
    )
    results = run_bench(settings)
    header = "scheme,cutoff,replicate,seed,mean_log_lik,time_per_batch"
    rows = [
        f"{r.scheme},{r.cutoff!r},{r.replicate},{r.seed},{r.mean_log_lik!r},{r.time_per_batch!r}"
        for r in results
    ]
    if args.output:
        _emit("\n".join([header, *rows]) + "\n", args.output)
    print(f"{'scheme':<12} {'cutoff':>6} {'reps':>5} {'mean_log_lik':>13} {'stderr':>8} {'ms/batch':>9}")
    for row in summarize(results):
        print(
            f"{row['scheme']:<12} {row['cutoff']:>6g} {row['replicates']:>5d} "
            f"{row['mean_log_lik']:>13.5f} {row['stderr']:>8.5f} {1e3 * row['time_per_batch']:>9.3f}"
        )
    return EXIT_OK


def test_path_for(out: Path) -> Path:
    return out.with_name(f"{out.stem}.test{out.suffix or '.csv'}")


def cmd_synth(args) -> int:
    if args.batches < 14:
        raise UsageError("--batches must be at least 14 (one per section)")
    if args.test_size < 1:
        raise UsageError("--test-size must be at least 1")
    plan = make_plan(args.batches, args.seed)
    items = list(sample_stream(plan, test_size=args.test_size, seed=[args.seed, 1]))
    out = Path(args.out)
    test_out = Path(args.test_out) if args.test_out else test_path_for(out)
    atomic_write(out, format_stream(it.train for it in items))
    atomic_write(test_out, format_stream(Batch(it.train.t, it.test) for it in items))
    print(f"wrote {len(items)} batches to {out} and test points to {test_out}", file=sys.stderr)
    return EXIT_OK


def _add_estimator_flags(p: argparse.ArgumentParser):
    p.add_argument("--hard-cap", type=int, default=16, help="maximum batches kept in memory (default 16)")
    p.add_argument("--smoothness", type=float, default=None, help="explicit smoothness constant c")
    p.add_argument(
        "--smoothness-mode",
        choices=[m.value for m in SmoothnessMode if m is not SmoothnessMode.EXPLICIT],
        default=None,
        help="rule deriving c from the kernel (default: normal)",
    )
    p.add_argument("--decay", type=float, default=0.9, help="decay ratio for exponential weights")
    p.add_argument("--kernel", choices=["gaussian"], default="gaussian")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="takde", description="Temporal adaptive KDE for batched streams.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="fit the estimator over a CSV stream")
    run.add_argument("--input", required=True, help="CSV with header batch,value")
    run.add_argument("--test", help="CSV of test points per batch, same format")
    run.add_argument("--output", help="JSON-lines output (default stdout)")
    run.add_argument("--cutoff", type=float, default=1.0, help="cumulative TA-distance cutoff s")
    run.add_argument("--weights", choices=[s.value for s in WeightScheme], default="takde")
    run.add_argument("--grid", help="evaluate densities on lo:hi:count")
    _add_estimator_flags(run)
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("bench", help="compare weight schemes on the synthetic stream")
    bench.add_argument("--batches", type=int, default=100)
    bench.add_argument("--replicates", type=int, default=30)
    bench.add_argument("--cutoffs", default="1,2,3,4,5")
    bench.add_argument("--schemes", default="takde,uniform,exponential")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--output", help="per-replicate CSV rows")
    _add_estimator_flags(bench)
    bench.set_defaults(func=cmd_bench)

    synth = sub.add_parser("synth", help="write a synthetic Marron-Wand stream")
    synth.add_argument("--batches", type=int, required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True, help="training stream CSV")
    synth.add_argument("--test-out", help="test CSV (default: <out>.test.csv)")
    synth.add_argument("--test-size", type=int, default=500)
    synth.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (TakdeError, OSError) as exc:
        print(f"takde: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
