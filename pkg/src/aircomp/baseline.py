"""TDMA comparison scheme: one user at a time, same analog protection.

Each user gets a dedicated block of channel uses and transmits its
power-encoded value there with random signs, exactly like the shared
scheme; the receiver forms a per-user energy estimate from that user's
slots.  With fewer channel uses than users the scheme cannot run at all.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import channel, dfa
from .channel import CorrelationModel
from .dfa import DfaConfig
from .functions import FmonFunction


def slot_counts(K: int, M: int) -> np.ndarray:
    """Slots per user: floor(M/K) each, remainder to the lowest indices."""
    if K < 1 or M < K:
        raise ValueError("need at least one slot per user")
    counts = np.full(K, M // K, dtype=int)
    counts[: M % K] += 1
    return counts


def run_tdma(f: FmonFunction, model: CorrelationModel, s, cfg: DfaConfig,
             rng: np.random.Generator,
             channel_rng: Optional[np.random.Generator] = None) -> Optional[float]:
    """One TDMA shot; returns None when M < K (scheme infeasible).

    The harness records an infeasible run with the worst-case absolute
    error, i.e. the full output range width.
    """
    dfa._check_compatible(f, model, cfg)
    K, M = model.K, model.M
    if M < K:
        return None

    cw = dfa.encode(f, s, cfg, M, rng)
    x_full = dfa.transmit_matrix(cw)
    counts = slot_counts(K, M)
    stops = np.cumsum(counts)
    starts = stops - counts
    x = np.zeros_like(x_full)
    for k in range(K):
        x[k, starts[k]:stops[k]] = x_full[k, starts[k]:stops[k]]

    realization = channel.sample(model, channel_rng if channel_rng is not None else rng)
    y = channel.apply(model, realization, x)
    energy_per_use = y.real ** 2 + y.imag ** 2

    spread = float(np.max(f.phi_max - f.phi_min))
    estimates = np.empty(K)
    for k in range(K):
        m_k = int(counts[k])
        scale = spread / (2.0 * cfg.sigma_f ** 2 * m_k * cfg.power)
        received = float(np.sum(energy_per_use[starts[k]:stops[k]]))
        expected = channel.noise_energy_in_slots(model, int(starts[k]), int(stops[k]))
        est = scale * (received - expected) + float(f.phi_min[k])
        if cfg.clamp:
            est = min(max(est, float(f.phi_min[k])), float(f.phi_max[k]))
        estimates[k] = est
    return float(f.outer(float(np.sum(estimates))))
