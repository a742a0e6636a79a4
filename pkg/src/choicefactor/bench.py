"""Monte Carlo benchmark driver: sweep samples-per-bin over seeded runs.

Each run draws one ground truth (seed = master_seed + run index) that is
shared across the whole sweep, so the error curves isolate the effect of
data volume. Records are emitted in (run, sweep) order regardless of any
internal concurrency.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

from .model import sample_dataset, sample_ground_truth
from .pipeline import compute_metrics, estimate

CSV_HEADER = "run_id,samples_per_bin,seed,avg_deviation,p_err,q_err,w_err"


@dataclass
class BenchConfig:
    n_choices: int
    n_attributes: int
    n_bins: int
    sample_sweep: list[int]
    mc_runs: int
    master_seed: int
    output_path: str | None = None

    def validate(self) -> "BenchConfig":
        if self.mc_runs < 1:
            raise ValueError(f"mc_runs must be >= 1, got {self.mc_runs}")
        if not self.sample_sweep:
            raise ValueError("sample_sweep must be non-empty")
        if self.sample_sweep[0] < 1 or any(
            b <= a for a, b in zip(self.sample_sweep, self.sample_sweep[1:])
        ):
            raise ValueError("sample_sweep must be strictly increasing and >= 1")
        return self

    @classmethod
    def from_json(cls, obj) -> "BenchConfig":
        return cls(
            n_choices=int(obj["K"]),
            n_attributes=int(obj["L"]),
            n_bins=int(obj["N"]),
            sample_sweep=[int(c) for c in obj["sample_sweep"]],
            mc_runs=int(obj["mc_runs"]),
            master_seed=int(obj["master_seed"]),
            output_path=obj.get("output_path"),
        ).validate()


@dataclass
class BenchRecord:
    run_id: int
    samples_per_bin: int
    seed: int
    avg_deviation: float
    p_err: float
    q_err: float
    w_err: float


def _one_run(config: BenchConfig, run_id: int) -> list[BenchRecord]:
    run_seed = config.master_seed + run_id
    truth = sample_ground_truth(config.n_choices, config.n_attributes, run_seed)
    records = []
    for per_bin in config.sample_sweep:
        try:
            data = sample_dataset(
                truth, per_bin * config.n_bins, config.n_bins, run_seed
            )
            result = estimate(data)
            met = compute_metrics(truth, result, data)
        except Exception as exc:
            raise RuntimeError(
                f"run {run_id}, samples_per_bin {per_bin}: {exc}"
            ) from exc
        records.append(
            BenchRecord(
                run_id=run_id,
                samples_per_bin=per_bin,
                seed=run_seed,
                avg_deviation=met.avg_deviation,
                p_err=met.p_err,
                q_err=met.q_err,
                w_err=met.w_err,
            )
        )
    return records


def run_benchmark(config: BenchConfig, threads: int = 1) -> list[BenchRecord]:
    """Run the full Monte Carlo sweep; one record per (run, sweep point)."""
    config.validate()
    run_ids = range(config.mc_runs)
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            per_run = list(pool.map(lambda r: _one_run(config, r), run_ids))
    else:
        per_run = [_one_run(config, r) for r in run_ids]
    return [rec for run in per_run for rec in run]


def write_records(records, path) -> None:
    """Write benchmark records as CSV with full-precision floats."""
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(
                f"{r.run_id},{r.samples_per_bin},{r.seed},"
                f"{r.avg_deviation!r},{r.p_err!r},{r.q_err!r},{r.w_err!r}\n"
            )
