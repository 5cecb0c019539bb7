"""Dense matrix kernels and the two norms the error-bound formulas need.

Matrices are plain 2-D float64 numpy arrays in row-major order.  Only the
operations the bound evaluation actually uses live here; anything fancier
(solvers, factorizations) is deliberately out of scope.
"""

from __future__ import annotations

import numpy as np

MAX_POWER_ITERATIONS = 10_000


def as_matrix(m) -> np.ndarray:
    """Validate and coerce to a contiguous 2-D float64 array."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return np.ascontiguousarray(a)


def frobenius_norm(m) -> float:
    a = as_matrix(m)
    return float(np.sqrt(np.sum(a * a)))


def matmul_transpose(a, b) -> np.ndarray:
    """Product a @ b.T with an explicit inner-dimension check."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}^T")
    return a @ b.T


def operator_norm(m, tol: float = 1e-12) -> float:
    """Largest singular value, by power iteration on the Gram matrix.

    Deterministic start (normalized all-ones); stops once successive
    Rayleigh quotients agree to a relative `tol`.  If the start vector
    happens to lie in the null space the iteration restarts from a
    deterministically seeded direction, so results stay reproducible.
    """
    a = as_matrix(m)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if not np.any(a):
        return 0.0
    n = a.shape[1]
    v = np.full(n, 1.0 / np.sqrt(n))
    lam = 0.0
    converged_once = False
    for it in range(MAX_POWER_ITERATIONS):
        w = a.T @ (a @ v)
        wnorm = float(np.linalg.norm(w))
        if wnorm == 0.0:
            # start vector fell into the null space of a nonzero matrix
            v = np.random.default_rng(it + 1).standard_normal(n)
            v /= np.linalg.norm(v)
            continue
        lam_new = float(v @ w)  # Rayleigh quotient of the Gram matrix
        v = w / wnorm
        if converged_once and abs(lam_new - lam) <= tol * abs(lam_new):
            return float(np.sqrt(max(lam_new, 0.0)))
        converged_once = True
        lam = lam_new
    raise ArithmeticError(
        f"power iteration did not converge within {MAX_POWER_ITERATIONS} iterations"
    )
