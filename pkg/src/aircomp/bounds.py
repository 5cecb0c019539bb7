"""Finite-blocklength error-probability bound and blocklength sizing.

The bound controls P(|estimate - true value| >= eps) for the energy-based
scheme through four quantities derived from the correlation factors a and
b and from the target's spreads: an operator-norm term `l_term`, a mixed
operator/Frobenius term `f_term`, a cross-correlation term `d_term` fed
by `eta` (how far a is from some user-uncorrelated approximation a_i),
and the inverted growth envelope `phi_inv_eps`.

For the built-in i.i.d. and AR families the norms come from closed forms
of the structured factors; dense evaluation is reserved for explicit
(small) models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from . import channel, functions, linalg
from .channel import CorrelationModel, SubgaussianKind
from .functions import FmonFunction

AI_STRATEGIES = ("same", "zero", "mask")

AiSpec = Union[str, np.ndarray]


@dataclass(frozen=True)
class BoundTerms:
    eta: float          # operator norm of (a + a_i)(a - a_i)^T
    l_term: float
    f_term: float
    d_term: float
    phi_inv_eps: float
    M: int


def cross_user_correlation(a, a_i, tol: float = 1e-12) -> float:
    """Residual cross-user correlation: ||(a + a_i)(a - a_i)^T||_op.

    Zero when a itself generates user-uncorrelated fading and a_i = a;
    equal to ||a||_op^2 for the trivial approximation a_i = 0.
    """
    a = linalg.as_matrix(a)
    a_i = linalg.as_matrix(a_i)
    if a.shape != a_i.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {a_i.shape}")
    return linalg.operator_norm(linalg.matmul_transpose(a + a_i, a - a_i), tol)


def user_uncorrelated_approximation(a, K: int, M: int, strategy: str) -> np.ndarray:
    """Build a_i from a named strategy.

    "same" returns a itself (only valid if a already generates
    user-uncorrelated fading), "zero" always works, and "mask" zeroes
    every generator coordinate shared between users, which yields a valid
    approximation by construction.
    """
    a = linalg.as_matrix(a)
    if strategy == "same":
        if not channel.validate_user_uncorrelated(a, K, M):
            raise ValueError("'same' strategy invalid: a is not user-uncorrelated")
        return a.copy()
    if strategy == "zero":
        return np.zeros_like(a)
    if strategy == "mask":
        nonzero = a != 0.0
        users = np.zeros(a.shape[1], dtype=int)
        for k in range(K):
            rows = (np.add.outer(2 * np.arange(M), np.array([0, 1])).ravel()) * K + k
            users += nonzero[rows].any(axis=0)
        masked = a.copy()
        masked[:, users > 1] = 0.0
        return masked
    raise ValueError(f"unknown a_i strategy {strategy!r}")


@dataclass(frozen=True)
class _ModelNorms:
    op_a: float
    fro_a: float
    op_b: float
    fro_b: float
    fro_ab_t: float
    eta: float


def _builtin_norms(model: CorrelationModel, ai: AiSpec, tol: float) -> _ModelNorms:
    K, M = model.K, model.M
    if model.family == "iid":
        op_a = model.sigma_f
    else:  # ar: the factor is block-diagonal with one triangular block per track
        if M > channel.MAX_DENSE_DIM:
            raise ValueError("AR operator norm needs M <= MAX_DENSE_DIM")
        op_a = model.sigma_f * linalg.operator_norm(channel._ar_factor(M, model.rho), tol)
    fro_a = model.sigma_f * math.sqrt(2.0 * M * K)  # stationary unit-norm rows
    op_b = model.sigma_n
    fro_b = model.sigma_n * math.sqrt(2.0 * M)
    if isinstance(ai, str):
        if ai not in AI_STRATEGIES:
            raise ValueError(f"unknown a_i strategy {ai!r}")
        # both built-in families are user-uncorrelated, so masking changes nothing
        eta = 0.0 if ai in ("same", "mask") else op_a ** 2
    else:
        eta = cross_user_correlation(channel.dense_a(model), ai, tol)
    # fading and noise use disjoint generator coordinates: a b^T = 0
    return _ModelNorms(op_a, fro_a, op_b, fro_b, 0.0, eta)


def _dense_norms(model: CorrelationModel, ai: AiSpec, tol: float) -> _ModelNorms:
    a, b = model.a, model.b
    if isinstance(ai, str):
        ai_mat = user_uncorrelated_approximation(a, model.K, model.M, ai)
    else:
        ai_mat = linalg.as_matrix(ai)
    op_a = linalg.operator_norm(a, tol) if np.any(a) else 0.0
    fro_a = float(np.sqrt(np.sum(a * a)))
    op_b = linalg.operator_norm(b, tol) if np.any(b) else 0.0
    fro_b = float(np.sqrt(np.sum(b * b)))
    ab_t = a @ b.T
    fro_ab_t = float(np.sqrt(np.sum(ab_t * ab_t)))
    if not np.any(a) and not np.any(ai_mat):
        eta = 0.0
    else:
        eta = cross_user_correlation(a, ai_mat, tol)
    return _ModelNorms(op_a, fro_a, op_b, fro_b, fro_ab_t, eta)


def bound_terms(f: FmonFunction, model: CorrelationModel, a_i: AiSpec,
                power: float, eps: float, *, use_lipschitz: bool = False,
                tol: float = 1e-12) -> BoundTerms:
    """Evaluate all bound ingredients for one (function, model, a_i) triple.

    ``a_i`` is either an explicit matrix or a strategy name from
    AI_STRATEGIES.  With ``use_lipschitz`` the inverted growth envelope is
    replaced by eps / C for a C-Lipschitz outer map, which can only
    improve the bound for targets where the two coincide or better.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if f.K != model.K:
        raise ValueError(f"function has K={f.K} but model has K={model.K}")
    sp = functions.spreads(f, power)
    if sp.max_spread == 0.0:
        raise ValueError("degenerate function: zero max-spread")
    if model.family == "custom":
        norms = _dense_norms(model, a_i, tol)
    else:
        norms = _builtin_norms(model, a_i, tol)

    tbar, dmax, M = sp.total_spread, sp.max_spread, model.M
    l_term = (math.sqrt(tbar) * norms.op_a + math.sqrt(dmax / power) * norms.op_b) ** 2
    f_term = l_term * (math.sqrt(tbar / M) * norms.fro_a
                       + math.sqrt(dmax / (power * M)) * norms.fro_b) ** 2
    d_term = (4.0 * math.sqrt(2.0 * M) * tbar * norms.eta
              + 4.0 * dmax / math.sqrt(power * M) * norms.fro_ab_t) ** 2

    if use_lipschitz:
        if f.lipschitz_c is None:
            raise ValueError(f"function {f.name!r} has no Lipschitz constant")
        phi_inv_eps = eps / f.lipschitz_c
    else:
        phi_inv_eps = float(f.phi_inv(eps))
    return BoundTerms(eta=norms.eta, l_term=l_term, f_term=f_term,
                      d_term=d_term, phi_inv_eps=phi_inv_eps, M=M)


def _tail(numerator: float, denominator: float) -> float:
    # a zero denominator is the vanishing-variance limit: the tail is gone
    if denominator <= 0.0:
        return 0.0
    return 2.0 * math.exp(-numerator / denominator)


def error_probability_bound_raw(terms: BoundTerms) -> float:
    """Sum of the two exponential tails, possibly exceeding 1."""
    num = terms.M * terms.phi_inv_eps ** 2
    d1 = 16.0 * terms.f_term + terms.d_term + 4.0 * terms.phi_inv_eps * terms.l_term
    d2 = 256.0 * terms.f_term + 32.0 * terms.phi_inv_eps * terms.l_term
    return _tail(num, d1) + _tail(num, d2)


def error_probability_bound(terms: BoundTerms) -> float:
    """The raw bound capped at 1 (it is vacuous beyond that)."""
    return min(1.0, error_probability_bound_raw(terms))


def gamma_ceiling(terms: BoundTerms) -> float:
    """Largest of the two tail denominators; drives the blocklength bound."""
    return max(16.0 * terms.f_term + terms.d_term + 4.0 * terms.phi_inv_eps * terms.l_term,
               256.0 * terms.f_term + 32.0 * terms.phi_inv_eps * terms.l_term)


ModelFamily = Callable[[int], Tuple[CorrelationModel, AiSpec]]


def iid_family(K: int, sigma_f: float, sigma_n: float,
               r_kind: SubgaussianKind = SubgaussianKind.STANDARD_GAUSSIAN,
               ai: AiSpec = "same") -> ModelFamily:
    """Blocklength-parameterized builder for independent fading and noise."""
    return lambda M: (channel.iid_model(K, M, sigma_f, sigma_n, r_kind), ai)


def ar_family(K: int, rho: float, sigma_f: float, sigma_n: float,
              r_kind: SubgaussianKind = SubgaussianKind.STANDARD_GAUSSIAN,
              ai: AiSpec = "same") -> ModelFamily:
    """Blocklength-parameterized builder for temporal AR(1) fading."""
    return lambda M: (channel.temporal_ar_model(K, M, rho, sigma_f, sigma_n, r_kind), ai)


def communication_cost(f: FmonFunction, eps: float, delta: float,
                       family: ModelFamily, power: float,
                       m_max: int = 4096, *,
                       use_lipschitz: bool = False) -> Optional[int]:
    """Smallest number of channel uses with bound <= delta, or None.

    Independent fading with a_i = a admits a closed form, because the
    bound ingredients are blocklength-invariant there; the result is
    returned directly (m_max does not apply).  Every other family gets an
    ascending scan up to m_max: the cross-correlation term can grow with
    the blocklength, so the bound need not be monotone and bisection is
    not licensed.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie strictly between 0 and 1")
    if eps <= 0.0:
        raise ValueError("eps must be positive")

    probe_model, probe_ai = family(1)
    if probe_model.family == "iid" and isinstance(probe_ai, str) and probe_ai == "same":
        terms = bound_terms(f, probe_model, probe_ai, power, eps,
                            use_lipschitz=use_lipschitz)
        gamma = gamma_ceiling(terms)
        if gamma == 0.0:
            return 1
        needed = (math.log(4.0) - math.log(delta)) / terms.phi_inv_eps ** 2 * gamma
        return max(int(math.ceil(needed)), 1)

    for m in range(1, m_max + 1):
        model, ai = family(m)
        terms = bound_terms(f, model, ai, power, eps, use_lipschitz=use_lipschitz)
        if error_probability_bound(terms) <= delta:
            return m
    return None
