"""Command-line front end: ``boostrp {synth,train,eval,benchmark}``.

Exit codes: 0 success, 2 usage/config error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

import numpy as np

from . import __version__
from .benchmark import FAMILIES, VARIANTS, rank_cells, run_benchmark, write_outputs
from .boosting import BoostConfig, Variant, fit, staged_scores
from .data import Task, load_csv, save_csv
from .errors import BoostrpError, ConfigError, ShapeError
from .losses import Loss, mean_loss
from .metrics import METRICS, REPORTS
from .modelio import load_model, save_model
from .projections import Scheme
from .synthetic import INPUT_DISTRIBUTIONS, Family, SyntheticSpec, generate
from .tree import TreeConfig

log = logging.getLogger("boostrp")


class UsageError(Exception):
    pass


def _enum_arg(enum_cls):
    def parse(text):
        try:
            return enum_cls(text.replace("-", "_"))
        except ValueError:
            choices = ", ".join(e.value.replace("_", "-") for e in enum_cls)
            raise argparse.ArgumentTypeError(f"invalid choice {text!r} (choose from {choices})")
    parse.__name__ = enum_cls.__name__.lower()
    return parse


def _k_arg(text):
    if text in ("all", "sqrt"):
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--k expects all, sqrt, a fraction or a count, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("--k must be positive")
    return value


def resolve_k(k, p):
    """Map a --k value to a feature count in [1, p] (None means all)."""
    if k == "all":
        return None
    if k == "sqrt":
        return max(1, int(round(math.sqrt(p))))
    if k < 1:
        return max(1, int(round(k * p)))
    return min(p, int(k))


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(prog="boostrp", description="Multi-output gradient tree boosting.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a friedman1 multi-output dataset as CSV")
    p.add_argument("--family", type=_enum_arg(Family), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=1.0, help="output noise standard deviation")
    p.add_argument("--noisy-outputs", action="store_true",
                   help="append d outputs that are row-permuted copies of the originals")
    p.add_argument("--inputs", choices=INPUT_DISTRIBUTIONS, default="normal")
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("train", help="fit a boosted ensemble on a CSV file")
    p.add_argument("train_csv")
    p.add_argument("--n-outputs", type=int, required=True)
    p.add_argument("--task", type=_enum_arg(Task), default=Task.REGRESSION)
    p.add_argument("--variant", type=_enum_arg(Variant), default=Variant.GBMO)
    p.add_argument("--loss", type=_enum_arg(Loss), default=Loss.L2)
    p.add_argument("--projection", type=_enum_arg(Scheme), default=Scheme.SUBSAMPLE)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--mu", type=float, default=0.1)
    p.add_argument("--stages", type=int, default=100)
    p.add_argument("--max-leaves", type=int, default=2)
    p.add_argument("--k", type=_k_arg, default="all")
    p.add_argument("--min-samples-leaf", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-budget", type=float, default=None, help="wall-clock seconds")
    p.add_argument("--validation-csv", help="score every stage on this file")
    p.add_argument("--metric", choices=sorted(METRICS), default=None)
    p.add_argument("-o", "--model-out", required=True)
    p.add_argument("--report", help="write the run report here instead of stdout")
    p.add_argument("--curve", help="write stage,seconds,train_loss,val_metric CSV here")
    p.add_argument("--explicit-projections", action="store_true",
                   help="store projection matrices instead of their seeds")

    p = sub.add_parser("eval", help="score a saved model on a CSV file")
    p.add_argument("model")
    p.add_argument("test_csv")
    p.add_argument("--metric", choices=sorted(METRICS), default=None)
    p.add_argument("--per-output", action="store_true")

    p = sub.add_parser("benchmark", help="compare the variants on the friedman1 families")
    p.add_argument("--suite", choices=("friedman", "friedman-noisy"), default="friedman")
    p.add_argument("--stages", type=int, default=1000, help="weak models per variant")
    p.add_argument("--time-budget", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-train", type=int, default=300)
    p.add_argument("--n-test", type=int, default=4000)
    p.add_argument("--d", type=int, default=16)
    p.add_argument("--inputs", choices=INPUT_DISTRIBUTIONS, default="normal")
    p.add_argument("--mu-grid", type=_float_list, default=[0.1])
    p.add_argument("--leaves-grid", type=_int_list, default=[2])
    p.add_argument("--families", type=lambda s: [_enum_arg(Family)(v) for v in s.split(",")],
                   default=list(FAMILIES))
    p.add_argument("--variants", type=lambda s: [_enum_arg(Variant)(v) for v in s.split(",")],
                   default=list(VARIANTS))
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("-o", "--out-dir", required=True)
    return parser


def _default_metric(task):
    return "lrap" if task is Task.MULTILABEL else "macro_r2"


def cmd_synth(args):
    if args.n < 1 or args.d < 1:
        raise UsageError("--n and --d must be positive")
    spec = SyntheticSpec(args.family, args.n, args.d, args.sigma, args.seed,
                         args.noisy_outputs, args.inputs)
    ds = generate(spec)
    save_csv(ds, args.out)
    print(f"wrote {args.out}: n={ds.n} p={ds.p} d={ds.d} family={args.family.value}")
    return 0


def cmd_train(args):
    if not 0.0 < args.mu <= 1.0:
        raise UsageError(f"--mu must be in (0, 1], got {args.mu}")
    if args.stages < 0:
        raise UsageError("--stages must be nonnegative")
    if args.max_leaves < 2:
        raise UsageError("--max-leaves must be at least 2")
    if args.loss is Loss.LOGISTIC and args.task is not Task.MULTILABEL:
        raise UsageError("--loss logistic needs --task multilabel")
    train = load_csv(args.train_csv, args.n_outputs, args.task)
    tree = TreeConfig(args.max_leaves, resolve_k(args.k, train.p), args.min_samples_leaf)
    try:
        config = BoostConfig(args.variant, args.loss, args.stages, args.mu, args.projection,
                             args.q, tree, args.seed, args.time_budget)
    except ConfigError as exc:
        raise UsageError(str(exc))
    model = fit(train, config)
    save_model(model, args.model_out, args.explicit_projections)

    metric_name = args.metric or _default_metric(train.task)
    val_trace = None
    if args.validation_csv:
        val = load_csv(args.validation_csv, args.n_outputs, args.task)
        val_trace = staged_scores(model, val.features, val.targets, METRICS[metric_name])

    trace = model.trace
    lines = [
        "# boostrp run report",
        "command=train",
        f"train_csv={args.train_csv}",
        f"variant={config.variant.value}",
        f"loss={config.loss.value}",
        f"task={train.task.value}",
        f"projection={config.scheme.value}",
        f"q={config.q}",
        f"mu={config.learning_rate!r}",
        f"stages_requested={config.n_stages}",
        f"max_leaves={tree.max_leaves}",
        f"k_features={tree.k_features if tree.k_features is not None else train.p}",
        f"min_samples_leaf={tree.min_samples_leaf}",
        f"seed={config.seed}",
        f"n={train.n}",
        f"p={train.p}",
        f"d={train.d}",
    ]
    for m, (tl, s) in enumerate(zip(trace.train_loss, trace.seconds)):
        extra = f" val_{metric_name}={val_trace[m]!r}" if val_trace is not None else ""
        lines.append(f"stage={m} train_loss={tl!r}{extra} seconds={s:.6f}")
    lines.append(f"stages_fitted={len(model.stages)}")
    lines.append(f"final_train_loss={trace.train_loss[-1]!r}")
    if val_trace is not None:
        lines.append(f"final_val_{metric_name}={val_trace[-1]!r}")
    lines.append(f"seconds={trace.seconds[-1]:.6f}")
    text = "\n".join(lines) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if args.curve:
        with open(args.curve, "w", encoding="utf-8") as fh:
            fh.write("stage,seconds,train_loss,val_metric\n")
            for m, (tl, s) in enumerate(zip(trace.train_loss, trace.seconds)):
                v = repr(val_trace[m]) if val_trace is not None else ""
                fh.write(f"{m},{s:.6f},{tl!r},{v}\n")
    return 0


def cmd_eval(args):
    model = load_model(args.model)
    test = load_csv(args.test_csv, model.n_outputs, model.task)
    if test.p != model.n_features:
        raise ShapeError(f"model was trained on p={model.n_features} features but "
                         f"{args.test_csv} has p={test.p}")
    metric_name = args.metric or _default_metric(model.task)
    report = REPORTS[metric_name](test.targets, model.predict(test.features))
    print(f"{metric_name}={report.value!r}")
    if args.per_output and report.per_output is not None:
        for j, v in enumerate(report.per_output):
            print(f"{metric_name}[{j}]={v!r}")
    if report.skipped_rows:
        print(f"skipped_rows={report.skipped_rows}")
    return 0


def cmd_benchmark(args):
    if args.stages < 0:
        raise UsageError("--stages must be nonnegative")
    if any(not 0.0 < mu <= 1.0 for mu in args.mu_grid):
        raise UsageError("every --mu-grid value must be in (0, 1]")
    if any(v < 2 for v in args.leaves_grid):
        raise UsageError("every --leaves-grid value must be at least 2")
    results = run_benchmark(args.stages, args.seed, suite=args.suite, families=args.families,
                            variants=args.variants, n_train=args.n_train, n_test=args.n_test,
                            d=args.d, inputs=args.inputs, learning_rates=args.mu_grid,
                            max_leaves=args.leaves_grid, time_budget=args.time_budget)
    paths = write_outputs(results, args.out_dir)
    if not args.no_figures:
        from .plotting import plot_learning_curves

        paths += plot_learning_curves(results, args.out_dir)
    ranks = rank_cells(results)
    print(f"{'family':<8} {'variant':<16} {'macro_r2':>9} {'stage':>6} {'rank':>4}")
    for r in results:
        if r.error is not None:
            print(f"{r.family.value:<8} {r.variant.value:<16} {'failed':>9}  {r.error}")
            continue
        print(f"{r.family.value:<8} {r.variant.value:<16} {r.test_score:>9.4f} "
              f"{r.best_stage:>6} {ranks[(r.family, r.variant)]:>4}")
    for path in paths:
        log.info("wrote %s", path)
    return 0


COMMANDS = {"synth": cmd_synth, "train": cmd_train, "eval": cmd_eval, "benchmark": cmd_benchmark}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"boostrp {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (BoostrpError, OSError) as exc:
        print(f"boostrp {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
