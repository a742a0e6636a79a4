"""Forward choice model and seeded data generation.

Ground-truth factors (W, Q) are drawn uniformly on their feasible
simplices, the forward model is P = W @ Q, and binned choice data is
sampled per (message, bin) cell from independent seeded substreams so the
result does not depend on iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import AttributeLattice, enumerate_subsets
from .stochastic import (
    check_stochastic,
    matrix_from_json,
    matrix_to_json,
)

WEIGHT_TOL = 1e-9
MAX_MODEL_ATTRIBUTES = 10


@dataclass
class StructuredWeightMatrix:
    """Row-stochastic M x M weight matrix with subset-support sparsity.

    Row i may place mass only on strict subsets of subset i (plus the
    diagonal); every other entry is exactly zero, and the diagonal entry
    equals one minus the off-diagonal row mass.
    """

    lattice: AttributeLattice
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)

    def validate(self, tol: float = WEIGHT_TOL) -> "StructuredWeightMatrix":
        m = self.lattice.size
        if self.entries.shape != (m, m):
            raise ValueError(
                f"weight matrix shape {self.entries.shape} does not match "
                f"lattice size {m}"
            )
        check_stochastic(self.entries, tol=tol, name="weight matrix")
        for i in range(1, m + 1):
            support = set(self.lattice.sub_support(i))
            row = self.entries[i - 1]
            for j in range(1, m + 1):
                if j != i and j not in support and row[j - 1] != 0.0:
                    raise ValueError(
                        f"structural zero violated at ({i}, {j}): {row[j - 1]!r}"
                    )
            off_mass = sum(row[j - 1] for j in support)
            if abs(row[i - 1] - (1.0 - off_mass)) > tol:
                raise ValueError(
                    f"diagonal of row {i} is not 1 - off-diagonal mass"
                )
        if abs(self.entries[0, 0] - 1.0) > tol:
            raise ValueError("null-message row must have unit diagonal")
        return self


@dataclass
class GroundTruth:
    """True factors (W, Q) and their product P, with generation metadata."""

    w: StructuredWeightMatrix
    q: np.ndarray
    p: np.ndarray
    n_choices: int
    n_attributes: int
    seed: int


@dataclass
class ChoiceDataset:
    """Binned empirical choice frequencies P(1)..P(N), shape (N, M, K)."""

    bins: np.ndarray
    n_choices: int
    n_attributes: int
    n_bins: int
    total_samples: int
    seed: int

    @property
    def samples_per_bin(self) -> int:
        return self.total_samples // self.n_bins


def _rng(*key: int) -> np.random.Generator:
    """Deterministic generator keyed by a tuple of integers."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(list(key))))


def _simplex_draw(rng: np.random.Generator, dim: int) -> np.ndarray:
    # flat Dirichlet via normalized standard exponentials
    e = rng.standard_exponential(dim)
    return e / e.sum()


def sample_ground_truth(n_choices: int, n_attributes: int, seed: int) -> GroundTruth:
    """Draw (W, Q) uniformly on their constraint sets and form P = W @ Q.

    Each row of Q is uniform on the K-simplex; each row i of W is uniform
    on the simplex restricted to the strict-subset support plus the
    diagonal. Deterministic given the seed.
    """
    if n_choices < 2:
        raise ValueError(f"need at least 2 choices, got {n_choices}")
    if not 0 <= n_attributes <= MAX_MODEL_ATTRIBUTES:
        raise ValueError(
            f"attribute count must be in 0..{MAX_MODEL_ATTRIBUTES}, got {n_attributes}"
        )
    lattice = enumerate_subsets(n_attributes)
    m = lattice.size
    rng = _rng(seed)
    q = np.stack([_simplex_draw(rng, n_choices) for _ in range(m)])
    w = np.zeros((m, m))
    for i in range(1, m + 1):
        free = lattice.sub_support(i) + [i]
        w[i - 1, [j - 1 for j in free]] = _simplex_draw(rng, len(free))
    weight = StructuredWeightMatrix(lattice, w).validate()
    p = w @ q
    return GroundTruth(weight, q, p, n_choices, n_attributes, int(seed))


def forward(w, q) -> np.ndarray:
    """Evaluate the choice model P = W @ Q."""
    w_mat = w.entries if isinstance(w, StructuredWeightMatrix) else np.asarray(w, float)
    q = check_stochastic(q, name="preference matrix")
    if w_mat.shape[1] != q.shape[0]:
        raise ValueError(
            f"incompatible shapes {w_mat.shape} and {q.shape}"
        )
    return w_mat @ q


def sample_dataset(
    truth: GroundTruth, total_samples: int, n_bins: int, seed: int
) -> ChoiceDataset:
    """Sample binned empirical frequency matrices from the true P.

    For each message row and bin, draws total_samples / n_bins categorical
    choices and stores the empirical frequencies (exact count ratios).
    Each (message, bin) cell uses its own substream keyed by
    (seed, message, bin), so cells are order-independent.
    """
    if n_bins < 1:
        raise ValueError(f"need at least one bin, got {n_bins}")
    if total_samples % n_bins != 0:
        raise ValueError(
            f"total samples {total_samples} not divisible by {n_bins} bins"
        )
    per_bin = total_samples // n_bins
    if per_bin < 1:
        raise ValueError("samples per bin must be at least 1")
    m, k = truth.p.shape
    bins = np.zeros((n_bins, m, k))
    for mi in range(m):
        row = truth.p[mi]
        pvals = row / row.sum()
        for n in range(n_bins):
            counts = _rng(seed, mi + 1, n + 1).multinomial(per_bin, pvals)
            bins[n, mi] = counts / per_bin
    return ChoiceDataset(
        bins=bins,
        n_choices=k,
        n_attributes=truth.n_attributes,
        n_bins=n_bins,
        total_samples=int(total_samples),
        seed=int(seed),
    )


def truth_to_json(truth: GroundTruth) -> dict:
    return {
        "K": truth.n_choices,
        "L": truth.n_attributes,
        "seed": truth.seed,
        "W": matrix_to_json(truth.w.entries),
        "Q": matrix_to_json(truth.q),
        "P": matrix_to_json(truth.p),
    }


def truth_from_json(obj) -> GroundTruth:
    lattice = enumerate_subsets(int(obj["L"]))
    w = StructuredWeightMatrix(lattice, matrix_from_json(obj["W"])).validate()
    q = check_stochastic(matrix_from_json(obj["Q"]), name="Q")
    p = check_stochastic(matrix_from_json(obj["P"]), name="P")
    return GroundTruth(w, q, p, int(obj["K"]), int(obj["L"]), int(obj["seed"]))


def dataset_to_json(data: ChoiceDataset) -> dict:
    return {
        "K": data.n_choices,
        "L": data.n_attributes,
        "N": data.n_bins,
        "C": data.total_samples,
        "seed": data.seed,
        "bins": [matrix_to_json(b) for b in data.bins],
    }


def dataset_from_json(obj) -> ChoiceDataset:
    bins = np.stack([matrix_from_json(b) for b in obj["bins"]])
    data = ChoiceDataset(
        bins=bins,
        n_choices=int(obj["K"]),
        n_attributes=int(obj["L"]),
        n_bins=int(obj["N"]),
        total_samples=int(obj["C"]),
        seed=int(obj["seed"]),
    )
    if bins.shape[0] != data.n_bins:
        raise ValueError("bin count does not match N")
    for b in bins:
        check_stochastic(b, name="bin")
    return data
