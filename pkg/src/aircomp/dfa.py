"""Distributed function approximation over the shared channel.

Transmitters encode their inner-map values as transmit *power* with
random signs; the receiver needs no channel state at all, it just
measures total received energy, subtracts the expected noise energy and
inverts the affine power map before applying the outer function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import channel, functions
from .channel import CorrelationModel
from .functions import FmonFunction


@dataclass(frozen=True)
class Codeword:
    """Per-user transmit powers and the sign sequence spread over M uses."""

    amplitudes: np.ndarray  # (K,), each in [0, power]
    signs: np.ndarray       # (K, M) of +-1

    def __post_init__(self):
        if self.amplitudes.ndim != 1 or self.signs.ndim != 2:
            raise ValueError("amplitudes must be (K,), signs (K, M)")
        if self.signs.shape[0] != self.amplitudes.shape[0]:
            raise ValueError("amplitudes and signs disagree on user count")


@dataclass(frozen=True)
class DfaConfig:
    power: float        # peak power limit per transmitted symbol
    sigma_f: float      # per-real-component fading std assumed by the decoder
    clamp: bool = True  # clip the decoded inner sum into its reachable range

    def __post_init__(self):
        if self.power <= 0.0:
            raise ValueError("power must be positive")
        if self.sigma_f <= 0.0:
            raise ValueError("sigma_f must be positive")


def encode(f: FmonFunction, s, cfg: DfaConfig, m_uses: int,
           rng: np.random.Generator) -> Codeword:
    """Map inputs to transmit powers a_k and draw i.i.d. uniform signs.

    ``a_k = power / max_spread * (inner_k(s_k) - phi_min_k)``, which lands
    in [0, power] for every user; a zero-spread (constant) target
    transmits nothing.  The signs are the transmitter's private
    randomness, independent of the channel.
    """
    v = functions.check_domain(f, s)
    if m_uses < 1:
        raise ValueError("need at least one channel use")
    widths = f.phi_max - f.phi_min
    biggest = float(np.max(widths))
    if biggest > 0.0:
        amps = (cfg.power / biggest) * (f.inner(v) - f.phi_min)
    else:
        amps = np.zeros(f.K)
    signs = 2 * rng.integers(0, 2, size=(f.K, m_uses), dtype=np.int8) - 1
    return Codeword(amplitudes=amps, signs=signs)


def transmit_matrix(cw: Codeword) -> np.ndarray:
    """Symbols sqrt(a_k) * sign_k(m) as a K x M float matrix."""
    return np.sqrt(cw.amplitudes)[:, None] * cw.signs


def decode_sum(f: FmonFunction, received_energy: float,
               expected_noise_energy: float, m_uses: int,
               cfg: DfaConfig) -> float:
    """Affine pre-image of the received energy: the raw inner-sum estimate.

    No clamping and no outer map; exposed separately so unbiasedness of
    the inner-sum estimator can be checked directly.
    """
    if m_uses < 1:
        raise ValueError("need at least one channel use")
    spread = float(np.max(f.phi_max - f.phi_min))
    scale = spread / (2.0 * cfg.sigma_f ** 2 * m_uses * cfg.power)
    return scale * (received_energy - expected_noise_energy) + float(np.sum(f.phi_min))


def decode(f: FmonFunction, received_energy: float, expected_noise_energy: float,
           m_uses: int, cfg: DfaConfig) -> float:
    """Full post-processing: energy -> inner sum -> (clamp) -> outer map.

    The energy statistic can undershoot the expected noise energy, giving
    pre-images outside the reachable sum range where the outer map may be
    undefined (square root of a negative, say); clamping absorbs that.
    """
    total = decode_sum(f, received_energy, expected_noise_energy, m_uses, cfg)
    if cfg.clamp:
        lo = float(np.sum(f.phi_min))
        hi = float(np.sum(f.phi_max))
        total = min(max(total, lo), hi)
    return float(f.outer(total))


def _check_compatible(f: FmonFunction, model: CorrelationModel, cfg: DfaConfig) -> None:
    if f.K != model.K:
        raise ValueError(f"function has K={f.K} but model has K={model.K}")
    if model.family != "custom" and not np.isclose(cfg.sigma_f, model.sigma_f):
        raise ValueError(
            f"decoder sigma_f={cfg.sigma_f} inconsistent with model sigma_f={model.sigma_f}"
        )


def run_dfa(f: FmonFunction, model: CorrelationModel, s, cfg: DfaConfig,
            rng: np.random.Generator,
            channel_rng: Optional[np.random.Generator] = None) -> float:
    """One complete shot: encode, transmit over M uses, decode from energy.

    ``rng`` drives the transmitter signs; pass ``channel_rng`` to keep the
    channel on an independent stream (the Monte Carlo harness does).
    """
    _check_compatible(f, model, cfg)
    cw = encode(f, s, cfg, model.M, rng)
    x = transmit_matrix(cw)
    realization = channel.sample(model, channel_rng if channel_rng is not None else rng)
    y = channel.apply(model, realization, x)
    energy = float(np.sum(y.real ** 2 + y.imag ** 2))
    return decode(f, energy, channel.expected_noise_energy(model), model.M, cfg)
