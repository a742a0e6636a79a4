"""Full sequential estimation: stage 1 through stage 2^L in lattice order.

Stages are scheduled by cardinality level; stages within a level depend
only on strictly smaller subsets, so any intra-level order yields
bit-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import AttributeLattice, enumerate_subsets
from .model import ChoiceDataset, GroundTruth, StructuredWeightMatrix
from .stage import ConvergenceError, build_stage_problem, solve_simplex_ls, solve_stage1
from .stochastic import (
    average_deviation,
    check_stochastic,
    frobenius_distance,
    matrix_from_json,
    matrix_to_json,
)


@dataclass
class EstimationResult:
    """Assembled factor estimates with per-stage diagnostics."""

    w_hat: StructuredWeightMatrix
    q_hat: np.ndarray
    per_stage_residuals: list[float]
    avg_deviation: float
    degenerate_stages: list[int]


@dataclass
class MetricRecord:
    """Deviation objective plus Frobenius errors against the ground truth."""

    avg_deviation: float
    p_err: float
    q_err: float
    w_err: float
    samples_per_bin: int
    seed: int


def _default_schedule(lattice: AttributeLattice) -> list[list[int]]:
    return [level for level in lattice.levels()[1:] if level]


def _check_schedule(schedule, lattice: AttributeLattice) -> None:
    flat = sorted(i for level in schedule for i in level)
    if flat != list(range(2, lattice.size + 1)):
        raise ValueError("schedule must cover stages 2..2^L exactly once")
    seen_cards = []
    for level in schedule:
        cards = {lattice.cardinality(i) for i in level}
        if len(cards) != 1:
            raise ValueError("each schedule level must hold one cardinality")
        seen_cards.append(cards.pop())
    if seen_cards != sorted(seen_cards):
        raise ValueError("schedule levels must be in ascending cardinality")


def estimate(
    data: ChoiceDataset,
    lattice: AttributeLattice | None = None,
    schedule: list[list[int]] | None = None,
) -> EstimationResult:
    """Run the sequential estimator and assemble (W_hat, Q_hat)."""
    lat = lattice if lattice is not None else enumerate_subsets(data.n_attributes)
    m = lat.size
    k = data.n_choices
    if data.bins.ndim != 3 or data.bins.shape[1:] != (m, k):
        raise ValueError(
            f"dataset bins shape {data.bins.shape} incompatible with "
            f"lattice size {m} and {k} choices"
        )
    if schedule is None:
        schedule = _default_schedule(lat)
    else:
        _check_schedule(schedule, lat)

    q_rows: dict[int, np.ndarray] = {1: solve_stage1(data)}
    w = np.zeros((m, m))
    w[0, 0] = 1.0
    residuals = [0.0] * m
    degenerate: list[int] = []
    for level in schedule:
        for i in level:
            problem = build_stage_problem(i, q_rows, data, lat)
            try:
                sol = solve_simplex_ls(problem)
            except ConvergenceError as exc:
                raise ConvergenceError(
                    f"stage {i} failed to converge: {exc}",
                    last_iterate=exc.last_iterate,
                    residual=exc.residual,
                ) from exc
            q_rows[i] = sol.q_row
            row = w[i - 1]
            for pos, j in enumerate(problem.support):
                row[j - 1] = sol.w_row[pos]
            row[i - 1] = 1.0 - sol.w_row.sum()
            residuals[i - 1] = sol.residual
            if sol.degenerate:
                degenerate.append(i)
    q_hat = np.stack([q_rows[i] for i in range(1, m + 1)])
    w_hat = StructuredWeightMatrix(lat, w).validate()
    f = average_deviation(w, q_hat, data.bins)
    return EstimationResult(w_hat, q_hat, residuals, f, sorted(degenerate))


def compute_metrics(
    truth: GroundTruth, result: EstimationResult, data: ChoiceDataset
) -> MetricRecord:
    """Deviation objective and Frobenius errors of the factor estimates."""
    p_hat = result.w_hat.entries @ result.q_hat
    return MetricRecord(
        avg_deviation=result.avg_deviation,
        p_err=frobenius_distance(truth.p, p_hat),
        q_err=frobenius_distance(truth.q, result.q_hat),
        w_err=frobenius_distance(truth.w.entries, result.w_hat.entries),
        samples_per_bin=data.samples_per_bin,
        seed=data.seed,
    )


def result_to_json(result: EstimationResult) -> dict:
    return {
        "L": result.w_hat.lattice.n_attributes,
        "W_hat": matrix_to_json(result.w_hat.entries),
        "Q_hat": matrix_to_json(result.q_hat),
        "per_stage_residuals": [float(r) for r in result.per_stage_residuals],
        "avg_deviation": float(result.avg_deviation),
        "degenerate_stages": list(result.degenerate_stages),
    }


def result_from_json(obj) -> EstimationResult:
    lat = enumerate_subsets(int(obj["L"]))
    w_hat = StructuredWeightMatrix(lat, matrix_from_json(obj["W_hat"])).validate()
    q_hat = check_stochastic(matrix_from_json(obj["Q_hat"]), name="Q_hat")
    return EstimationResult(
        w_hat=w_hat,
        q_hat=q_hat,
        per_stage_residuals=[float(r) for r in obj["per_stage_residuals"]],
        avg_deviation=float(obj["avg_deviation"]),
        degenerate_stages=[int(i) for i in obj["degenerate_stages"]],
    )


def metrics_to_json(record: MetricRecord) -> dict:
    return {
        "avg_deviation": float(record.avg_deviation),
        "p_err": float(record.p_err),
        "q_err": float(record.q_err),
        "w_err": float(record.w_err),
        "samples_per_bin": int(record.samples_per_bin),
        "seed": int(record.seed),
    }
