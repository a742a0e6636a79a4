"""Row-stochastic matrix primitives.

Validation, exact sort-based Euclidean projection onto the probability
simplex, Frobenius metrics, and the binned average-deviation objective.
All functions are pure.
"""

from __future__ import annotations

import numpy as np

STOCHASTIC_TOL = 1e-9


def check_stochastic(mat, tol: float = STOCHASTIC_TOL, name: str = "matrix") -> np.ndarray:
    """Validate a row-stochastic matrix and return it as a float array."""
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValueError(f"{name} has non-finite entries")
    if mat.size and (mat.min() < -tol or mat.max() > 1.0 + tol):
        raise ValueError(f"{name} has entries outside [0, 1] beyond tolerance {tol}")
    row_err = np.abs(mat.sum(axis=1) - 1.0)
    if mat.size and row_err.max() > tol:
        raise ValueError(
            f"{name} rows do not sum to 1 within {tol} (max error {row_err.max():.3e})"
        )
    return mat


def check_simplex(vec, tol: float = STOCHASTIC_TOL, name: str = "vector") -> np.ndarray:
    """Validate a probability vector and return it as a float array."""
    vec = np.asarray(vec, dtype=float)
    if vec.ndim != 1 or vec.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d vector")
    check_stochastic(vec[None, :], tol=tol, name=name)
    return vec


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex.

    Exact O(d log d) sort-based algorithm; idempotent.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("input must be a non-empty 1-d vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("input has non-finite entries")
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u * idx > css)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def frobenius_distance(a, b) -> float:
    """Frobenius norm of the difference of two equal-shape matrices."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def average_deviation(w, q, bins) -> float:
    """Mean squared Frobenius distance from the product w @ q to each bin.

    bins is an (N, M, K) stack of empirical row-stochastic matrices.
    """
    w = np.asarray(w, dtype=float)
    q = np.asarray(q, dtype=float)
    bins = np.asarray(bins, dtype=float)
    if w.ndim != 2 or q.ndim != 2 or w.shape[1] != q.shape[0]:
        raise ValueError(f"incompatible factor shapes {w.shape} and {q.shape}")
    if bins.ndim != 3 or bins.shape[1:] != (w.shape[0], q.shape[1]):
        raise ValueError(
            f"bins shape {bins.shape} incompatible with product shape "
            f"{(w.shape[0], q.shape[1])}"
        )
    if bins.shape[0] == 0:
        raise ValueError("empty dataset: at least one bin required")
    prod = w @ q
    diff = prod[None, :, :] - bins
    return float(np.mean(np.sum(diff * diff, axis=(1, 2))))


def least_squares_gradient(a, x, b) -> np.ndarray:
    """Gradient of x -> ||a x - b||^2."""
    a = np.asarray(a, dtype=float)
    return 2.0 * a.T @ (a @ np.asarray(x, dtype=float) - np.asarray(b, dtype=float))


def matrix_to_json(mat) -> dict:
    """Serialize a matrix as {"rows", "cols", "data"} with row-major data."""
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2:
        raise ValueError(f"matrix must be 2-dimensional, got shape {mat.shape}")
    return {
        "rows": int(mat.shape[0]),
        "cols": int(mat.shape[1]),
        "data": [float(x) for x in mat.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    """Inverse of matrix_to_json."""
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = np.asarray(obj["data"], dtype=float)
    if data.size != rows * cols:
        raise ValueError(
            f"matrix data length {data.size} does not match {rows}x{cols}"
        )
    return data.reshape(rows, cols)
