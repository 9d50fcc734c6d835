"""``clusterbench`` command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 partial failure (see
``errors.json`` in the output directory).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import experiment
from .baseline import run_baseline, write_baseline_csv
from .data import DatasetError
from .suite import ManifestError, build_suite, default_baseline_path, load_baseline_table

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_out() -> str:
    return os.environ.get("CLUSTERBENCH_OUT", "clusterbench_out")


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clusterbench", description="Clustering benchmark problems for black-box optimizers.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, budget=5000, reps=25):
        p.add_argument("--manifest", help="suite manifest JSON (default: bundled 40-problem suite)")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--out", default=None, help="output directory (default: $CLUSTERBENCH_OUT)")
        if budget is not None:
            p.add_argument("--budget", type=_positive, default=budget)
        if reps is not None:
            p.add_argument("--reps", type=_positive, default=reps)

    p = sub.add_parser("suite-list", help="list problems")
    p.add_argument("--manifest")

    p = sub.add_parser("run", help="run the config x problem x repetition grid")
    common(p)
    p.add_argument("--configs", default="all", help='comma-separated config ids or "all"')
    p.add_argument("--problem", default="all", help='comma-separated problem ids or "all"')
    p.add_argument("--jobs", type=_positive, default=1)

    p = sub.add_parser("baseline", help="K-Means++ baselines")
    common(p, budget=None, reps=100)

    p = sub.add_parser("basin", help="basin analysis with region-constrained local search")
    common(p, budget=5000, reps=None)
    p.add_argument("--problem", required=True, help='problem id(s) or "all"')
    p.add_argument("--starts", type=_positive, default=50)
    p.add_argument("--no-probe", action="store_true", help="skip representative connectivity probes")

    p = sub.add_parser("transform-compare", help="default ES on original vs stick-breaking space")
    common(p)
    p.add_argument("--problem", default="all")
    p.add_argument("--jobs", type=_positive, default=1)

    p = sub.add_parser("report", help="analysis bundle from a run directory")
    p.add_argument("--runs", default=None, help="run-log directory (default: <out>/runs)")
    p.add_argument("--baselines", default=None, help="baseline CSV (default: bundled table)")
    p.add_argument("--features", default=None, help="CSV of feature vectors: problem_id, f1, f2, ...")
    p.add_argument("--standardize", action="store_true", help="z-score feature columns first")
    p.add_argument("--out", default=None)
    return parser


def cmd_suite_list(args) -> int:
    suite = build_suite(args.manifest, with_baselines=False)
    print("problem_id\tdataset\tk\tm")
    for p in suite:
        print(f"{p.problem_id}\t{p.data.name}\t{p.k}\t{p.dimension}")
    return EXIT_OK


def cmd_run(args) -> int:
    res = experiment.run_grid(args.out, args.manifest, args.configs, args.problem, args.budget,
                              args.reps, args.seed, args.jobs)
    print(f"written {res['written']}, skipped {res['skipped']}, failed cells {len(res['errors'])}")
    if res["errors"]:
        print(f"see {Path(args.out) / 'errors.json'}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_baseline(args) -> int:
    suite = build_suite(args.manifest, with_baselines=False)
    results = [run_baseline(p, args.reps, args.seed) for p in suite]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_baseline_csv(results, out / "baselines.csv")
    print(f"wrote {len(results)} rows to {out / 'baselines.csv'}")
    return EXIT_OK


def cmd_basin(args) -> int:
    summaries = experiment.basin_batch(args.out, args.manifest, args.problem, args.starts,
                                       args.seed, args.budget, probe=not args.no_probe)
    for s in summaries:
        print(f"{s['problem_id']}: retention {s['retention']:.3f}, "
              f"distinct solutions {s['distinct_solutions']}")
    return EXIT_OK


def cmd_transform_compare(args) -> int:
    rows = experiment.transform_compare(args.out, args.manifest, args.problem, args.budget,
                                        args.reps, args.seed, args.jobs)
    for r in rows:
        print(f"{r[0]}\t{r[4]:+.3e}")
    return EXIT_OK


def _read_features(path, standardize: bool) -> dict:
    feats = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for row in reader:
            if row:
                feats[row[0]] = np.array([float(v) for v in row[1:]])
    if standardize:
        from .analysis import standardize_features
        feats = standardize_features(feats)
    return feats


def cmd_report(args) -> int:
    runs = Path(args.runs) if args.runs else Path(args.out) / "runs"
    base_path = Path(args.baselines) if args.baselines else default_baseline_path()
    baselines = load_baseline_table(base_path)
    if not baselines:
        raise experiment.ExperimentError(f"no baselines found at {base_path}")
    features = _read_features(args.features, args.standardize) if args.features else None
    summary = experiment.write_report(runs, Path(args.out) / "report", baselines, features)
    print(json.dumps({k: summary[k] for k in ("runs", "configs", "eaf_files")}))
    return EXIT_OK


COMMANDS = {
    "suite-list": cmd_suite_list,
    "run": cmd_run,
    "baseline": cmd_baseline,
    "basin": cmd_basin,
    "transform-compare": cmd_transform_compare,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "out", "unset") is None:
        args.out = _default_out()
    try:
        return COMMANDS[args.command](args)
    except (ManifestError, DatasetError, experiment.ExperimentError) as exc:
        print(f"clusterbench: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"clusterbench: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
