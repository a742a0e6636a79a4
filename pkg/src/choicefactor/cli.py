"""Command-line front end for generation, sampling, estimation and benchmarks.

Exit codes: 0 success, 1 runtime/I-O error, 2 usage or validation error.
All randomness sits behind explicit seed flags; identical invocations
produce identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import BenchConfig, run_benchmark, write_records
from .model import (
    dataset_from_json,
    dataset_to_json,
    sample_dataset,
    sample_ground_truth,
    truth_from_json,
    truth_to_json,
)
from .pipeline import compute_metrics, estimate, metrics_to_json, result_to_json
from .stage import ConvergenceError


class InputFileError(Exception):
    """A required input file is missing, unreadable, or malformed."""


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFileError(f"cannot parse {path}: {exc}") from exc


def _decode(path, decoder, obj):
    try:
        return decoder(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFileError(f"invalid contents in {path}: {exc}") from exc


def _write_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def cmd_generate(args) -> int:
    truth = sample_ground_truth(args.choices, args.attributes, args.seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(truth_to_json(truth), out_dir / "truth.json")
    print(f"K={truth.n_choices} L={truth.n_attributes} M={truth.p.shape[0]}")
    return 0


def cmd_sample(args) -> int:
    truth = _decode(args.truth, truth_from_json, _load_json(args.truth))
    data = sample_dataset(truth, args.samples, args.bins, args.seed)
    _write_json(dataset_to_json(data), args.out)
    return 0


def cmd_estimate(args) -> int:
    data = _decode(args.dataset, dataset_from_json, _load_json(args.dataset))
    result = estimate(data)
    _write_json(result_to_json(result), args.out)
    if args.truth is not None:
        truth = _decode(args.truth, truth_from_json, _load_json(args.truth))
        metrics = compute_metrics(truth, result, data)
        metrics_path = (
            args.metrics
            if args.metrics is not None
            else Path(args.out).parent / "metrics.json"
        )
        _write_json(metrics_to_json(metrics), metrics_path)
    return 0


def cmd_bench(args) -> int:
    config = _decode(args.config, BenchConfig.from_json, _load_json(args.config))
    records = run_benchmark(config, threads=args.threads)
    write_records(records, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choicefactor",
        description="Multi-attribute choice model generation, sampling, "
        "estimation, and benchmarking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="draw ground-truth factors")
    gen.add_argument("--choices", type=int, required=True)
    gen.add_argument("--attributes", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True, help="output directory")
    gen.set_defaults(func=cmd_generate)

    smp = sub.add_parser("sample", help="sample a binned choice dataset")
    smp.add_argument("--truth", required=True)
    smp.add_argument("--samples", type=int, required=True)
    smp.add_argument("--bins", type=int, required=True)
    smp.add_argument("--seed", type=int, required=True)
    smp.add_argument("--out", required=True, help="output dataset file")
    smp.set_defaults(func=cmd_sample)

    est = sub.add_parser("estimate", help="run the sequential estimator")
    est.add_argument("--dataset", required=True)
    est.add_argument("--truth", default=None)
    est.add_argument("--out", required=True, help="output estimates file")
    est.add_argument("--metrics", default=None)
    est.set_defaults(func=cmd_estimate)

    ben = sub.add_parser("bench", help="run the Monte Carlo benchmark")
    ben.add_argument("--config", required=True)
    ben.add_argument("--out", required=True, help="output CSV file")
    ben.add_argument("--threads", type=int, default=1)
    ben.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
