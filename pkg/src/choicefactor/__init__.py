"""Multi-attribute choice factorization: forward model, sampling, estimation."""

from .lattice import AttributeLattice, enumerate_subsets, is_subset
from .stochastic import (
    average_deviation,
    frobenius_distance,
    project_to_simplex,
)
from .model import (
    ChoiceDataset,
    GroundTruth,
    StructuredWeightMatrix,
    forward,
    sample_dataset,
    sample_ground_truth,
)
from .stage import (
    ConvergenceError,
    StageProblem,
    StageSolution,
    build_stage_problem,
    extract_estimates,
    solve_simplex_ls,
    solve_stage1,
)
from .pipeline import EstimationResult, MetricRecord, compute_metrics, estimate
from .bench import BenchConfig, BenchRecord, run_benchmark, write_records

__all__ = [
    "AttributeLattice",
    "BenchConfig",
    "BenchRecord",
    "ChoiceDataset",
    "ConvergenceError",
    "EstimationResult",
    "GroundTruth",
    "MetricRecord",
    "StageProblem",
    "StageSolution",
    "StructuredWeightMatrix",
    "average_deviation",
    "build_stage_problem",
    "compute_metrics",
    "enumerate_subsets",
    "estimate",
    "extract_estimates",
    "forward",
    "frobenius_distance",
    "is_subset",
    "project_to_simplex",
    "run_benchmark",
    "sample_dataset",
    "sample_ground_truth",
    "solve_simplex_ls",
    "solve_stage1",
    "write_records",
]
