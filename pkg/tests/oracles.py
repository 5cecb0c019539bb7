"""Independent reference implementations used only by the test suite.

Everything here is deliberately written against different algorithms (or
different traversal orders) than the library, so agreement is evidence
rather than tautology.
"""

from __future__ import annotations

import math

import numpy as np


def jacobi_eigenvalues(sym, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(sym, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("jacobi oracle needs a square matrix")
    scale = max(1.0, float(np.sqrt(np.sum(np.diag(a) ** 2))))
    for _ in range(max_sweeps):
        off = float(np.sqrt(np.sum(np.tril(a, -1) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                if theta == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
    return np.sort(np.diag(a))


def spectral_norm_oracle(m) -> float:
    """Largest singular value via Jacobi eigendecomposition of the Gram matrix."""
    m = np.asarray(m, dtype=float)
    top = float(jacobi_eigenvalues(m.T @ m)[-1])
    return math.sqrt(max(top, 0.0))


def frobenius_column_major(m) -> float:
    """Frobenius norm accumulated column by column (reverse traversal)."""
    m = np.asarray(m, dtype=float)
    total = 0.0
    for j in range(m.shape[1] - 1, -1, -1):
        for i in range(m.shape[0] - 1, -1, -1):
            total += m[i, j] * m[i, j]
    return math.sqrt(total)


def naive_matmul_transpose(a, b) -> np.ndarray:
    """Triple-loop a @ b.T."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.zeros((a.shape[0], b.shape[0]))
    for i in range(a.shape[0]):
        for j in range(b.shape[0]):
            acc = 0.0
            for k in range(a.shape[1]):
                acc += a[i, k] * b[j, k]
            out[i, j] = acc
    return out


def dense_transmit_blocks(x) -> np.ndarray:
    """The 2M x 2KM block matrix that left-multiplies the fading vector.

    Row 2m (real output) carries the symbol vector of channel use m in the
    real-part block, row 2m+1 the same vector in the imaginary block.
    """
    x = np.asarray(x, dtype=float)
    K, M = x.shape
    q = np.zeros((2 * M, 2 * K * M))
    for m in range(M):
        q[2 * m, (2 * m) * K:(2 * m + 1) * K] = x[:, m]
        q[2 * m + 1, (2 * m + 1) * K:(2 * m + 2) * K] = x[:, m]
    return q


def energy_quadratic_form(x, h, n) -> float:
    """Received energy as the explicit quadratic form ||Q h + n||^2."""
    q = dense_transmit_blocks(x)
    y = q @ np.asarray(h, dtype=float) + np.asarray(n, dtype=float)
    return float(y @ y)


def iid_l_term(total_spread, max_spread, sigma_f, sigma_n, power) -> float:
    """Closed form of the operator-norm term for independent fading/noise."""
    return (math.sqrt(total_spread) * sigma_f
            + math.sqrt(max_spread / power) * sigma_n) ** 2


def iid_f_term(K, total_spread, max_spread, sigma_f, sigma_n, power) -> float:
    """Closed form of the mixed term for independent fading/noise."""
    return iid_l_term(total_spread, max_spread, sigma_f, sigma_n, power) * (
        math.sqrt(2.0 * K * total_spread) * sigma_f
        + math.sqrt(2.0 * max_spread / power) * sigma_n) ** 2


def tail_bound_reference(m_uses, phi_inv_eps, l_term, f_term, d_term) -> float:
    """Independent re-evaluation of the two-tail bound (uncapped)."""
    num = m_uses * phi_inv_eps * phi_inv_eps
    out = 0.0
    for denom in (16.0 * f_term + d_term + 4.0 * phi_inv_eps * l_term,
                  256.0 * f_term + 32.0 * phi_inv_eps * l_term):
        if denom > 0.0:
            out += 2.0 * math.exp(-num / denom)
    return out
