"""Monte Carlo experiment driver: message model, sweeps and CSV output.

Random streams are derived from the root seed and the *content* of each
grid point (users, channel uses, noise level, run index, role), so adding
grid points, runs or schemes never disturbs the draws of existing ones,
and the two schemes see identical message vectors in every run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import baseline, channel, dfa, functions

CSV_HEADER = "function,scheme,users,chuses,noise_db,runs,mse,mse_stderr,infeasible_frac,seed"

# per-real-component fading std: unit variance per real part, or unit
# power per complex dimension
FADING_PRESETS = {"theory": 1.0, "experiments": 2.0 ** -0.5}

SCHEMES = ("dfa", "tdma")

ROLE_MESSAGES = 0
ROLE_DFA_SIGNS = 1
ROLE_DFA_CHANNEL = 2
ROLE_TDMA_SIGNS = 3
ROLE_TDMA_CHANNEL = 4


def noise_db_to_sigma(noise_db: float) -> float:
    """Noise power in dB per complex dimension -> per-real-component std."""
    return float(np.sqrt(10.0 ** (noise_db / 10.0) / 2.0))


def derive_rng(root_seed: int, users: int, chuses: int, noise_db: float,
               run: int, role: int) -> np.random.Generator:
    """Independent stream for one (grid point, run, role) combination."""
    db_bits = int(np.float64(noise_db).view(np.uint64))
    key = (int(users), int(chuses), db_bits, int(run), int(role))
    return np.random.default_rng(np.random.SeedSequence(entropy=int(root_seed),
                                                        spawn_key=key))


def messages_given_mu(K: int, mu: float, rng: np.random.Generator) -> np.ndarray:
    """Messages with common conditional mean mu.

    Each user independently draws from U[0, mu] with probability 1 - mu
    and from U[mu, 1] otherwise; that mixture weight is the unique choice
    with expectation mu.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValueError("mu must lie in [0, 1]")
    pick_low = rng.random(K) < (1.0 - mu)
    low = mu * rng.random(K)
    high = mu + (1.0 - mu) * rng.random(K)
    return np.where(pick_low, low, high)


def generate_messages(K: int, rng: np.random.Generator) -> np.ndarray:
    """Correlated message model: one shared mean, then per-user mixtures."""
    if K < 1:
        raise ValueError("K must be at least 1")
    mu = float(rng.random())
    return messages_given_mu(K, mu, rng)


def iid_messages(K: int, rng: np.random.Generator) -> np.ndarray:
    """Plain i.i.d. uniform messages (testing only; see SweepConfig)."""
    return rng.random(K)


@dataclass(frozen=True)
class SweepConfig:
    function: str
    schemes: Tuple[str, ...]
    users: Tuple[int, ...]
    chuses: Tuple[int, ...]
    noise_db: Tuple[float, ...]
    runs: int
    root_seed: int
    power: float = 1.0
    fading: str = "experiments"
    correlation: str = "iid"
    clamp: bool = True
    iid_messages: bool = False  # hidden knob for unbiasedness testing

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if not self.users or not self.chuses or not self.noise_db:
            raise ValueError("users, chuses and noise_db grids must be nonempty")
        if not all(np.isfinite(db) for db in self.noise_db):
            raise ValueError("noise_db values must be finite")
        if not self.schemes or any(s not in SCHEMES for s in self.schemes):
            raise ValueError(f"schemes must be a nonempty subset of {SCHEMES}")
        if self.fading not in FADING_PRESETS:
            raise ValueError(f"unknown fading preset {self.fading!r}")
        if self.power <= 0.0:
            raise ValueError("power must be positive")
        _parse_correlation(self.correlation)


@dataclass(frozen=True)
class SweepRow:
    function: str
    scheme: str
    users: int
    chuses: int
    noise_db: float
    runs: int
    mse: float
    mse_stderr: float
    infeasible_frac: float
    seed: int


@dataclass(frozen=True)
class SweepResult:
    rows: Tuple[SweepRow, ...]


def _parse_correlation(spec: str) -> Tuple[str, Optional[str]]:
    if spec == "iid":
        return "iid", None
    if spec.startswith("ar:"):
        try:
            rho = float(spec[3:])
        except ValueError as exc:
            raise ValueError(f"bad AR coefficient in {spec!r}") from exc
        if not abs(rho) < 1.0:
            raise ValueError("AR coefficient must satisfy |rho| < 1")
        return "ar", spec[3:]
    if spec.startswith("file:"):
        return "file", spec[5:]
    raise ValueError(f"unknown correlation spec {spec!r}")


def build_model(correlation: str, K: int, M: int, sigma_f: float,
                sigma_n: float) -> channel.CorrelationModel:
    """Instantiate the correlation model for one grid point."""
    kind, arg = _parse_correlation(correlation)
    if kind == "iid":
        return channel.iid_model(K, M, sigma_f, sigma_n)
    if kind == "ar":
        return channel.temporal_ar_model(K, M, float(arg), sigma_f, sigma_n)
    model = channel.load_model(arg)
    if model.K != K or model.M != M:
        raise ValueError(
            f"model file has K={model.K}, M={model.M}; grid point wants K={K}, M={M}"
        )
    return model


def _decoder_sigma_f(model: channel.CorrelationModel, preset_sigma_f: float) -> float:
    if model.family != "custom":
        return model.sigma_f
    # calibrate to the average per-component fading variance of the file model
    return float(np.sqrt(np.sum(model.a ** 2) / (2.0 * model.K * model.M)))


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Run every (grid point, scheme) cell and aggregate squared errors.

    Fully deterministic given the config; both schemes share each run's
    message draw but use their own sign and channel streams.
    """
    rows = []
    for K in cfg.users:
        f = functions.resolve_function(cfg.function, K)
        sup_sq = functions.output_range_width(f) ** 2
        for M in cfg.chuses:
            for db in cfg.noise_db:
                sigma_n = noise_db_to_sigma(db)
                sigma_f = FADING_PRESETS[cfg.fading]
                model = build_model(cfg.correlation, K, M, sigma_f, sigma_n)
                run_cfg = dfa.DfaConfig(power=cfg.power,
                                        sigma_f=_decoder_sigma_f(model, sigma_f),
                                        clamp=cfg.clamp)
                for scheme in cfg.schemes:
                    sq = np.empty(cfg.runs)
                    infeasible = 0
                    for run in range(cfg.runs):
                        msg_rng = derive_rng(cfg.root_seed, K, M, db, run, ROLE_MESSAGES)
                        if cfg.iid_messages:
                            s = iid_messages(K, msg_rng)
                        else:
                            s = generate_messages(K, msg_rng)
                        truth = functions.evaluate(f, s)
                        if scheme == "dfa":
                            est = dfa.run_dfa(
                                f, model, s, run_cfg,
                                derive_rng(cfg.root_seed, K, M, db, run, ROLE_DFA_SIGNS),
                                channel_rng=derive_rng(cfg.root_seed, K, M, db, run,
                                                       ROLE_DFA_CHANNEL))
                            sq[run] = (est - truth) ** 2
                        else:
                            est = baseline.run_tdma(
                                f, model, s, run_cfg,
                                derive_rng(cfg.root_seed, K, M, db, run, ROLE_TDMA_SIGNS),
                                channel_rng=derive_rng(cfg.root_seed, K, M, db, run,
                                                       ROLE_TDMA_CHANNEL))
                            if est is None:
                                infeasible += 1
                                sq[run] = sup_sq
                            else:
                                sq[run] = (est - truth) ** 2
                    mse = float(np.mean(sq))
                    stderr = (float(np.std(sq, ddof=1) / np.sqrt(cfg.runs))
                              if cfg.runs > 1 else 0.0)
                    rows.append(SweepRow(
                        function=cfg.function, scheme=scheme, users=K, chuses=M,
                        noise_db=float(db), runs=cfg.runs, mse=mse,
                        mse_stderr=stderr, infeasible_frac=infeasible / cfg.runs,
                        seed=cfg.root_seed))
    rows.sort(key=lambda r: (r.function, r.scheme, r.users, r.chuses, r.noise_db))
    return SweepResult(rows=tuple(rows))


def _fmt(x: float) -> str:
    # shortest round-trip decimal, stable across platforms
    return repr(float(x))


def emit_csv(result: SweepResult, path: str) -> None:
    """Write the sweep table; floats in shortest round-trip decimals."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in result.rows:
            fh.write(
                f"{r.function},{r.scheme},{r.users},{r.chuses},{_fmt(r.noise_db)},"
                f"{r.runs},{_fmt(r.mse)},{_fmt(r.mse_stderr)},"
                f"{_fmt(r.infeasible_frac)},{r.seed}\n"
            )
