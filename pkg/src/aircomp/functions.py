"""Aggregate target functions of the form outer(sum_k inner_k(s_k)).

Targets come from a closed-form registry (mean, Euclidean norm, weighted
sum) so the per-user ranges, the growth envelope of the outer map and its
inverse are exact rather than numerically estimated.  The bound formulas
and the power encoder consume these quantities directly; estimating them
from samples would contaminate bound validation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class FmonFunction:
    """A decomposable aggregate together with its exact metadata.

    ``phi`` dominates output increments (|outer(x) - outer(y)| <=
    phi(|x - y|)) and ``phi_inv`` is its exact inverse.  ``phi_min`` and
    ``phi_max`` are the per-user extrema of the inner maps over their
    (closed, bounded) domains.
    """

    name: str
    K: int
    domains: np.ndarray                        # (K, 2) closed intervals
    inner: Callable[[np.ndarray], np.ndarray]  # vectorized per-user maps
    outer: Callable[[float], float]
    phi: Callable[[float], float]
    phi_inv: Callable[[float], float]
    phi_min: np.ndarray
    phi_max: np.ndarray
    lipschitz_c: Optional[float] = None


@dataclass(frozen=True)
class SpreadSummary:
    total_spread: float     # sum over users of the inner-map range widths
    max_spread: float       # largest single range width
    relative_spread: float  # power * total / max, 0 if all maps constant


def make_mean(K: int) -> FmonFunction:
    """Arithmetic mean of K inputs in [0, 1]."""
    if K < 1:
        raise ValueError("K must be at least 1")
    return FmonFunction(
        name="mean",
        K=K,
        domains=np.tile([0.0, 1.0], (K, 1)),
        inner=lambda s: np.asarray(s, dtype=float) * 1.0,
        outer=lambda x: x / K,
        phi=lambda t: t / K,
        phi_inv=lambda e: K * e,
        phi_min=np.zeros(K),
        phi_max=np.ones(K),
        lipschitz_c=1.0 / K,
    )


def make_euclidean_norm(K: int) -> FmonFunction:
    """Euclidean norm of K inputs in [0, 1]; output range [0, sqrt(K)].

    The square root is not Lipschitz at zero, so no Lipschitz constant is
    recorded; clamping in the decoder keeps its argument nonnegative.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    return FmonFunction(
        name="norm",
        K=K,
        domains=np.tile([0.0, 1.0], (K, 1)),
        inner=lambda s: np.asarray(s, dtype=float) ** 2,
        outer=lambda x: float(np.sqrt(x)),
        phi=lambda t: float(np.sqrt(t)),
        phi_inv=lambda e: e * e,
        phi_min=np.zeros(K),
        phi_max=np.ones(K),
    )


def make_weighted_sum(weights) -> FmonFunction:
    """Weighted sum with positive weights, inputs in [0, 1]."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a nonempty vector")
    if not np.all(w > 0.0):
        raise ValueError("weights must be strictly positive")
    K = int(w.size)
    return FmonFunction(
        name="wsum",
        K=K,
        domains=np.tile([0.0, 1.0], (K, 1)),
        inner=lambda s, w=w: w * np.asarray(s, dtype=float),
        outer=lambda x: x,
        phi=lambda t: t,
        phi_inv=lambda e: e,
        phi_min=np.zeros(K),
        phi_max=w.copy(),
        lipschitz_c=1.0,
    )


def make_constant(K: int, value: float = 0.0) -> FmonFunction:
    """Degenerate target with constant inner maps (zero spread).

    Useful as a fixture: the encoder transmits nothing and the decoder
    returns outer(K * value) exactly, independent of channel noise.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    c = float(value)
    return FmonFunction(
        name="const",
        K=K,
        domains=np.tile([0.0, 1.0], (K, 1)),
        inner=lambda s, c=c: np.full(np.asarray(s).shape, c),
        outer=lambda x: x,
        phi=lambda t: t,
        phi_inv=lambda e: e,
        phi_min=np.full(K, c),
        phi_max=np.full(K, c),
        lipschitz_c=1.0,
    )


def resolve_function(spec: str, K: int) -> FmonFunction:
    """Build a registry function from a CLI-style spec string.

    Accepted forms: ``mean``, ``norm``, ``wsum:<w1,w2,...>`` and the test
    fixture ``const:<value>``.  For ``wsum`` the number of weights must
    match K.
    """
    if spec == "mean":
        return make_mean(K)
    if spec == "norm":
        return make_euclidean_norm(K)
    if spec.startswith("wsum:"):
        try:
            w = [float(tok) for tok in spec[len("wsum:"):].split(",") if tok]
        except ValueError as exc:
            raise ValueError(f"bad weight list in {spec!r}") from exc
        if len(w) != K:
            raise ValueError(f"wsum has {len(w)} weights but K={K}")
        return make_weighted_sum(w)
    if spec.startswith("const:"):
        return make_constant(K, float(spec[len("const:"):]))
    raise ValueError(f"unknown function spec {spec!r}")


def check_domain(f: FmonFunction, s) -> np.ndarray:
    """Validate an input vector against the per-user domains."""
    v = np.asarray(s, dtype=float)
    if v.shape != (f.K,):
        raise ValueError(f"expected {f.K} inputs, got shape {v.shape}")
    lo, hi = f.domains[:, 0], f.domains[:, 1]
    bad = np.where((v < lo) | (v > hi))[0]
    if bad.size:
        k = int(bad[0])
        raise ValueError(
            f"input {k} out of domain: {v[k]!r} not in [{lo[k]}, {hi[k]}]"
        )
    return v


def evaluate(f: FmonFunction, s) -> float:
    v = check_domain(f, s)
    return float(f.outer(float(np.sum(f.inner(v)))))


def spreads(f: FmonFunction, power: float) -> SpreadSummary:
    if power <= 0.0:
        raise ValueError("power must be positive")
    widths = f.phi_max - f.phi_min
    total = float(np.sum(widths))
    biggest = float(np.max(widths))
    rel = power * total / biggest if biggest > 0.0 else 0.0
    return SpreadSummary(total_spread=total, max_spread=biggest, relative_spread=rel)


def output_range_width(f: FmonFunction) -> float:
    """Width of the reachable output range outer([sum phi_min, sum phi_max])."""
    lo = float(f.outer(float(np.sum(f.phi_min))))
    hi = float(f.outer(float(np.sum(f.phi_max))))
    return abs(hi - lo)
