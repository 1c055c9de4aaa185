"""Command-line front end: ``lmknn <command> --dataset PATH ...``.

Every command writes CSV only; see README for the column layouts.
"""

import argparse
import csv
import logging
import sys
from pathlib import Path

from .evaluation import (ConfigError, ExperimentConfig, SweepError, read_config, run_experiment, sweep,
                         write_fold_csv, write_summary_csv)
from .ingest import DatasetSpec, ParseError, kfold_split, load
from .landmark import Strategy
from .measures import Measure

_log = logging.getLogger("lmknn")

ALL_STRATEGIES = [s.value for s in Strategy]
ALL_MEASURES = [m.label for m in Measure]


def parse_landmarks(text):
    """``20`` -> [20]; ``10:100:10`` -> [10, 20, ..., 100] (inclusive stop)."""
    parts = text.split(":")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad landmark count/range {text!r}") from None
    if len(nums) == 1:
        return nums
    if len(nums) != 3 or nums[2] <= 0 or nums[0] > nums[1]:
        raise argparse.ArgumentTypeError(f"range must be START:STOP:STEP, got {text!r}")
    return list(range(nums[0], nums[1] + 1, nums[2]))


def _csv_list(choices):
    def parse(text):
        items = [t.strip().lower() for t in text.split(",") if t.strip()]
        bad = [t for t in items if t not in choices]
        if bad:
            raise argparse.ArgumentTypeError(f"invalid choice(s) {bad}; expected from {choices}")
        return items
    return parse


def _add_dataset(p):
    g = p.add_argument_group("dataset")
    g.add_argument("--dataset", required=True, help="ratings file")
    g.add_argument("--format", default="ml-100k", choices=["ml-100k", "ml-1m", "csv"])
    g.add_argument("--sep", default=None, help="field separator for --format csv")
    g.add_argument("--header", action="store_true", help="csv file has a header line")
    g.add_argument("--columns", default="user,item,rating,timestamp", help="csv column order")
    g.add_argument("--scale", default="1:5", help="rating scale MIN:MAX")
    g.add_argument("--cut", type=int, default=None, help="keep only the N earliest ratings")


def _add_eval(p, landmarks_default="20"):
    p.add_argument("--orientation", type=_csv_list(["user", "item"]), default=["user"],
                   help="user, item or user,item")
    p.add_argument("--k", type=int, default=13)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rating-step", type=float, default=1.0,
                   help="round predictions onto the rating grid; 0 keeps them continuous")
    p.add_argument("--timing-mode", choices=["single", "parallel"], default="parallel")
    p.add_argument("--out", default="results", help="output directory")


def _dataset_spec(args):
    lo, hi = (float(x) for x in args.scale.split(":"))
    return DatasetSpec(path=args.dataset, format=args.format, sep=args.sep, has_header=args.header,
                       columns=tuple(args.columns.split(",")), scale=(lo, hi))


def _base_config(args, orientation, **kw):
    return ExperimentConfig(orientation=orientation, k=args.k, k_folds=args.folds, seed=args.seed,
                            rating_step=args.rating_step, dataset=_dataset_spec(args), cut=args.cut, **kw)


def _outdir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _stem(args):
    stem = Path(args.dataset).stem
    return f"{stem}-cut{args.cut}" if args.cut else stem


def cmd_stats(args):
    data = load(_dataset_spec(args), cut=args.cut)
    print("#ratings, #users, #items, sparsity(%)")
    print(f"{len(data.ratings)}, {data.num_users}, {data.num_items}, {data.sparsity:.2f}")
    return 0


def cmd_split(args):
    data = load(_dataset_spec(args), cut=args.cut)
    folds = kfold_split(len(data.ratings), args.folds, args.seed)
    path = _outdir(args) / f"folds_{_stem(args)}_k{args.folds}_s{args.seed}.csv"
    folds.to_csv(path)
    print(f"wrote {path} (fold sizes {folds.sizes().tolist()})")
    return 0


def cmd_run(args):
    if args.config:
        configs = [read_config(args.config)]
    else:
        kw = dict(algorithm=args.algorithm, measure=args.measure, d1=args.d1, d2=args.d2)
        if args.algorithm == "landmark":
            kw.update(strategy=args.strategy, n=args.landmarks[0])
        configs = [_base_config(args, o, **kw) for o in args.orientation]
    reports = sweep(configs, timing_mode=args.timing_mode)
    out = _outdir(args)
    write_fold_csv(reports, out / "folds.csv")
    write_summary_csv(reports, out / "summary.csv")
    for r in reports:
        print(f"{r.config.config_id}: MAE {r.mean_mae:.5f}, runtime {r.mean_total_s:.3f}s")
        for w in r.warnings:
            print(f"warning: {w}", file=sys.stderr)
    return 0


def _baseline_configs(args, orientation, measures):
    return [_base_config(args, orientation, algorithm="baseline", measure=m) for m in measures]


def cmd_sweep_landmarks(args):
    out = _outdir(args)
    data = load(_dataset_spec(args), cut=args.cut)
    all_reports = []
    for orientation in args.orientation:
        grid = [_base_config(args, orientation, strategy=s, n=n, d1=args.d1, d2=args.d2)
                for n in args.landmarks for s in args.strategies]
        base = _baseline_configs(args, orientation, args.baselines)
        reports = sweep(grid + base, data=data, timing_mode=args.timing_mode)
        all_reports += reports
        lm = {(r.config.n, r.config.strategy.value): r for r in reports[:len(grid)]}
        bl = reports[len(grid):]
        path = out / f"sweep_landmarks_{_stem(args)}_{orientation}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", *args.strategies, *(f"baseline_{m}" for m in args.baselines)])
            for n in args.landmarks:
                w.writerow([n, *(f"{lm[(n, s)].mean_mae:.5f}" for s in args.strategies),
                            *(f"{r.mean_mae:.5f}" for r in bl)])
        print(f"wrote {path}")
    write_fold_csv(all_reports, out / "sweep_landmarks_folds.csv")
    write_summary_csv(all_reports, out / "sweep_landmarks_summary.csv")
    return 0


def cmd_sweep_measures(args):
    out = _outdir(args)
    data = load(_dataset_spec(args), cut=args.cut)
    n = args.landmarks[0]
    all_reports = []
    for orientation in args.orientation:
        grid = [(d1, d2, s) for d1 in ALL_MEASURES for d2 in ALL_MEASURES for s in args.strategies]
        configs = [_base_config(args, orientation, strategy=s, n=n, d1=d1, d2=d2) for d1, d2, s in grid]
        reports = sweep(configs, data=data, timing_mode=args.timing_mode)
        all_reports += reports
        by = {key: r for key, r in zip(grid, reports)}
        path = out / f"sweep_measures_{_stem(args)}_{orientation}_n{n}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["d1", "d2", *(f"{s}_mae" for s in args.strategies), *(f"{s}_runtime_s" for s in args.strategies)])
            for d1 in ALL_MEASURES:
                for d2 in ALL_MEASURES:
                    rs = [by[(d1, d2, s)] for s in args.strategies]
                    w.writerow([d1, d2, *(f"{r.mean_mae:.5f}" for r in rs), *(f"{r.mean_total_s:.5f}" for r in rs)])
        print(f"wrote {path}")
    write_fold_csv(all_reports, out / "sweep_measures_folds.csv")
    write_summary_csv(all_reports, out / "sweep_measures_summary.csv")
    return 0


def cmd_compare_baselines(args):
    out = _outdir(args)
    data = load(_dataset_spec(args), cut=args.cut)
    all_reports = []
    for orientation in args.orientation:
        configs = _baseline_configs(args, orientation, ALL_MEASURES)
        configs.append(_base_config(args, orientation, strategy=args.strategy, n=args.landmarks[0],
                                    d1=args.d1, d2=args.d2))
        reports = sweep(configs, data=data, timing_mode=args.timing_mode)
        all_reports += reports
        ref = reports[-1].mean_total_s
        names = [f"{m.capitalize()} kNN" for m in ALL_MEASURES] + ["Landmarks kNN"]
        path = out / f"compare_baselines_{_stem(args)}_{orientation}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["algorithm", "mean_mae", "mean_runtime_s", "slowdown"])
            for name, r in zip(names, reports):
                w.writerow([name, f"{r.mean_mae:.5f}", f"{r.mean_total_s:.5f}", f"{r.mean_total_s / ref:.2f}"])
                print(f"{orientation:4s} {name:14s} MAE {r.mean_mae:.5f}  runtime {r.mean_total_s:.3f}s  "
                      f"slowdown {r.mean_total_s / ref:.1f}x")
        print(f"wrote {path}")
    write_fold_csv(all_reports, out / "compare_baselines_folds.csv")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="lmknn", description="Landmark-accelerated kNN collaborative filtering")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="data set characteristics")
    _add_dataset(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("split", help="export a seeded k-fold assignment")
    _add_dataset(p)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="results")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("run", help="cross-validate one configuration")
    _add_dataset(p)
    _add_eval(p)
    p.add_argument("--config", help="INI file with an [experiment] section (overrides flags)")
    p.add_argument("--algorithm", choices=["landmark", "baseline"], default="landmark")
    p.add_argument("--strategy", choices=ALL_STRATEGIES, default="popularity")
    p.add_argument("--landmarks", type=parse_landmarks, default=[20])
    p.add_argument("--d1", choices=ALL_MEASURES, default="cosine")
    p.add_argument("--d2", choices=ALL_MEASURES, default="cosine")
    p.add_argument("--measure", choices=ALL_MEASURES, default="cosine", help="baseline similarity")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep-landmarks", help="MAE per landmark count and strategy")
    _add_dataset(p)
    _add_eval(p)
    p.add_argument("--strategies", "--strategy", type=_csv_list(ALL_STRATEGIES), default=ALL_STRATEGIES)
    p.add_argument("--landmarks", type=parse_landmarks, default=parse_landmarks("10:100:10"))
    p.add_argument("--d1", choices=ALL_MEASURES, default="cosine")
    p.add_argument("--d2", choices=ALL_MEASURES, default="cosine")
    p.add_argument("--baselines", type=_csv_list(ALL_MEASURES), default=ALL_MEASURES)
    p.set_defaults(func=cmd_sweep_landmarks)

    p = sub.add_parser("sweep-measures", help="MAE for every d1/d2 combination at fixed n")
    _add_dataset(p)
    _add_eval(p)
    p.add_argument("--strategies", "--strategy", type=_csv_list(ALL_STRATEGIES), default=ALL_STRATEGIES)
    p.add_argument("--landmarks", type=parse_landmarks, default=[20])
    p.set_defaults(func=cmd_sweep_measures)

    p = sub.add_parser("compare-baselines", help="landmark kNN against full-matrix kNN")
    _add_dataset(p)
    _add_eval(p)
    p.add_argument("--strategy", choices=ALL_STRATEGIES, default="popularity")
    p.add_argument("--landmarks", type=parse_landmarks, default=[20])
    p.add_argument("--d1", choices=ALL_MEASURES, default="cosine")
    p.add_argument("--d2", choices=ALL_MEASURES, default="cosine")
    p.set_defaults(func=cmd_compare_baselines)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
