"""Per-stage constrained least-squares solves and factor extraction.

Stage 1 has the closed-form bin-mean solution. Every later stage solves a
simplex-constrained least squares whose coefficient matrix carries the
previously estimated preference rows plus an identity block; because the
identity block can reproduce any simplex target, the optimal residual is
always zero and the solver returns the minimum-Euclidean-norm point of
the zero-residual face as the canonical representative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import AttributeLattice
from .model import ChoiceDataset
from .stochastic import check_simplex, project_to_simplex

DEGENERACY_TOL = 1e-8
RESIDUAL_TOL = 1e-8
_FEAS_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """Solver failed to reach a feasible optimum within the iteration cap."""

    def __init__(self, message: str, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


@dataclass
class StageProblem:
    """Least-squares data for one stage: columns [q_j for j in support | I_K]."""

    stage_index: int
    coeff: np.ndarray
    mean_target: np.ndarray
    support: tuple[int, ...]


@dataclass
class StageSolution:
    x: np.ndarray
    residual: float
    w_row: np.ndarray
    q_row: np.ndarray
    degenerate: bool


def solve_stage1(data: ChoiceDataset) -> np.ndarray:
    """Closed-form first-stage estimate: the bin average of first rows."""
    if data.bins.shape[0] == 0:
        raise ValueError("empty dataset: at least one bin required")
    q1 = data.bins[:, 0, :].mean(axis=0)
    drift = abs(q1.sum() - 1.0)
    if drift > 1e-12 or q1.min() < -1e-12:
        q1 = project_to_simplex(q1)
    return q1


def build_stage_problem(
    i: int,
    q_estimates,
    data: ChoiceDataset,
    lattice: AttributeLattice,
) -> StageProblem:
    """Assemble the stage-i coefficient matrix and bin-mean target.

    q_estimates maps stage index -> estimated preference row; all strict
    subsets of subset i must already be present. Structural zeros are
    excluded from the variable vector entirely.
    """
    if not 2 <= i <= lattice.size:
        raise IndexError(f"stage index {i} outside 2..{lattice.size}")
    support = lattice.sub_support(i)
    k = data.n_choices
    cols = []
    for j in support:
        if j not in q_estimates:
            raise ValueError(f"stage {i} requires the stage-{j} estimate")
        cols.append(check_simplex(q_estimates[j], name=f"estimate {j}"))
    blocks = ([np.column_stack(cols)] if cols else []) + [np.eye(k)]
    coeff = np.hstack(blocks)
    target = check_simplex(
        data.bins[:, i - 1, :].mean(axis=0), name=f"stage-{i} target"
    )
    return StageProblem(i, coeff, target, tuple(support))


def _project_origin_on_polytope(a, b) -> np.ndarray:
    """Project the origin onto {x : a x = b, x >= 0}.

    Works through the dual: maximizing
    -0.5 ||max(a^T lam, 0)||^2 + b^T lam over the (few) equality
    multipliers is smooth and concave, and the primal optimum is
    max(a^T lam*, 0). The face the dual identifies is then polished with
    an exact affine min-norm solve. Deterministic.
    """
    from scipy.optimize import minimize

    def neg_dual(lam):
        zp = np.maximum(a.T @ lam, 0.0)
        return 0.5 * zp @ zp - b @ lam, a @ zp - b

    res = minimize(
        neg_dual,
        np.zeros(len(b)),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": 20_000, "ftol": 1e-18, "gtol": 1e-13},
    )
    x = np.maximum(a.T @ res.x, 0.0)
    violation = np.max(np.abs(a @ x - b))
    free = x > 1e-10
    if free.any():
        xf = np.linalg.lstsq(a[:, free], b, rcond=None)[0]
        cand = np.zeros_like(x)
        cand[free] = xf
        cand_violation = np.max(np.abs(a @ cand - b))
        if xf.min() >= -1e-12 and cand_violation <= max(violation, 1e-12):
            x = np.maximum(cand, 0.0)
            violation = np.max(np.abs(a @ x - b))
    if violation > 1e-9:
        raise ConvergenceError(
            "polytope projection did not reach feasibility",
            last_iterate=x,
            residual=float(violation),
        )
    return x


def solve_simplex_ls(problem: StageProblem) -> StageSolution:
    """Minimize ||coeff x - mean_target||^2 over the probability simplex.

    Equality constraints (zero residual, unit sum) are always jointly
    attainable, so the minimizer set is the polytope
    {x >= 0, coeff x = target, sum x = 1}; the returned point is its
    minimum-norm element. When the affine minimum-norm solution is
    nonnegative it is exact; otherwise the point is the projection of the
    origin onto the polytope, computed by least-distance programming.
    """
    phi = np.asarray(problem.coeff, dtype=float)
    target = np.asarray(problem.mean_target, dtype=float)
    d = phi.shape[1]
    a = np.vstack([phi, np.ones((1, d))])
    b = np.append(target, 1.0)
    x = np.linalg.lstsq(a, b, rcond=None)[0]
    if x.min() < -_FEAS_TOL:
        x = _project_origin_on_polytope(a, b)
    x = np.clip(x, 0.0, None)
    x /= x.sum()
    residual = float(np.sum((phi @ x - target) ** 2))
    if residual > RESIDUAL_TOL:
        raise ConvergenceError(
            f"stage {problem.stage_index}: residual {residual:.3e} above "
            f"{RESIDUAL_TOL:.0e}",
            last_iterate=x,
            residual=residual,
        )
    n_support = len(problem.support)
    w_row, q_row, degenerate = extract_estimates(x, n_support, phi.shape[0])
    return StageSolution(x, residual, w_row, q_row, degenerate)


def extract_estimates(
    x, n_support: int, n_choices: int, eps: float = DEGENERACY_TOL
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Split a stage solution into weight entries and a preference row.

    The leading n_support entries are the weights; the tail divided by the
    self-weight s = 1 - sum(weights) is the preference row. When s <= eps
    the preference row is unidentified: it is set to uniform, the weights
    are rescaled to unit sum, and the degenerate flag is raised.
    """
    x = np.asarray(x, dtype=float)
    if x.size != n_support + n_choices:
        raise ValueError(
            f"solution length {x.size} != support {n_support} + choices {n_choices}"
        )
    w_row = x[:n_support].copy()
    tail = x[n_support:]
    s = 1.0 - w_row.sum()
    if s > eps:
        return w_row, tail / s, False
    total = w_row.sum()
    return w_row / total, np.full(n_choices, 1.0 / n_choices), True
