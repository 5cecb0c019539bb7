"""Correlated fading/noise models and the shared-medium vector channel.

Index conventions (fixed; the dense energy oracle and the decoder depend
on them):

* the fading vector ``h`` has length 2*K*M, grouped into 2M blocks of K
  entries: block ``2m`` holds the real parts of all K coefficients at
  channel use ``m``, block ``2m+1`` the imaginary parts, i.e.
  ``h[(2m + c) * K + k]`` is component c (0 real, 1 imaginary) of user k;
* the noise vector ``n`` has length 2*M with interleaved components,
  ``n[2m + c]``;
* both are linear images ``h = A r`` and ``n = B r`` of a single vector
  ``r`` of 2*K*M + 2*M independent unit-variance entries, which is what
  lets one correlation model cover dependence across users, across time
  and between fading and noise.

The built-in families (i.i.d. and per-user temporal AR(1)) are sampled
through their recurrences without materializing A and B; the dense
matrices exist on demand for bound evaluation and cross-checks, capped at
``MAX_DENSE_DIM`` columns.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import lfilter

MAX_DENSE_DIM = 4096

_SQRT3 = float(np.sqrt(3.0))


class SubgaussianKind(str, enum.Enum):
    """Unit-variance generator families for the driving vector r.

    All three have variance exactly 1 and light (gaussian-dominated)
    tails; the bounded kinds take values in [-sqrt(3), sqrt(3)].
    """

    STANDARD_GAUSSIAN = "standard_gaussian"
    RADEMACHER = "rademacher"
    UNIFORM_UNIT_VARIANCE = "uniform_unit_variance"


def draw_r(kind: SubgaussianKind, size: int, rng: np.random.Generator) -> np.ndarray:
    if kind == SubgaussianKind.STANDARD_GAUSSIAN:
        return rng.standard_normal(size)
    if kind == SubgaussianKind.RADEMACHER:
        return 2.0 * rng.integers(0, 2, size=size) - 1.0
    if kind == SubgaussianKind.UNIFORM_UNIT_VARIANCE:
        return rng.uniform(-_SQRT3, _SQRT3, size=size)
    raise ValueError(f"unknown generator kind {kind!r}")


@dataclass(frozen=True)
class CorrelationModel:
    """Joint law of fading and noise for K users over M channel uses.

    ``family`` is one of "iid", "ar" or "custom".  Built-in families keep
    only their scalar parameters; custom models carry dense a and b.
    """

    K: int
    M: int
    r_kind: SubgaussianKind
    family: str
    sigma_f: float = 0.0   # per-real-component fading std (built-ins)
    sigma_n: float = 0.0   # per-real-component noise std (built-ins)
    rho: float = 0.0       # temporal AR(1) coefficient ("ar" only)
    a: Optional[np.ndarray] = None
    b: Optional[np.ndarray] = None


@dataclass(frozen=True)
class ChannelRealization:
    h: np.ndarray  # length 2*K*M
    n: np.ndarray  # length 2*M


def _check_dims(K: int, M: int) -> None:
    if K < 1 or M < 1:
        raise ValueError("K and M must be at least 1")


def iid_model(
    K: int,
    M: int,
    sigma_f: float,
    sigma_n: float,
    r_kind: SubgaussianKind = SubgaussianKind.STANDARD_GAUSSIAN,
) -> CorrelationModel:
    """Independent fading and noise: a = (sigma_f I | 0), b = (0 | sigma_n I)."""
    _check_dims(K, M)
    if sigma_f < 0.0 or sigma_n < 0.0:
        raise ValueError("standard deviations must be nonnegative")
    return CorrelationModel(K=K, M=M, r_kind=r_kind, family="iid",
                            sigma_f=float(sigma_f), sigma_n=float(sigma_n))


def temporal_ar_model(
    K: int,
    M: int,
    rho: float,
    sigma_f: float,
    sigma_n: float,
    r_kind: SubgaussianKind = SubgaussianKind.STANDARD_GAUSSIAN,
) -> CorrelationModel:
    """Per-user temporal AR(1) fading, independent across users.

    Each user's real and imaginary fading tracks follow
    ``z[m] = rho z[m-1] + sqrt(1 - rho^2) fresh``, scaled by sigma_f, so
    every coefficient keeps stationary variance sigma_f^2 while adjacent
    channel uses correlate with coefficient rho.  Users draw from disjoint
    coordinates of r, which keeps the fading independent across users.
    Noise is as in the i.i.d. model.
    """
    _check_dims(K, M)
    if not abs(rho) < 1.0:
        raise ValueError("AR coefficient must satisfy |rho| < 1")
    if sigma_f < 0.0 or sigma_n < 0.0:
        raise ValueError("standard deviations must be nonnegative")
    return CorrelationModel(K=K, M=M, r_kind=r_kind, family="ar",
                            sigma_f=float(sigma_f), sigma_n=float(sigma_n),
                            rho=float(rho))


def custom_model(
    K: int,
    M: int,
    a,
    b,
    r_kind: SubgaussianKind = SubgaussianKind.STANDARD_GAUSSIAN,
) -> CorrelationModel:
    """Model from explicit dense factors (small dimensions only)."""
    _check_dims(K, M)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    cols = 2 * K * M + 2 * M
    if cols > MAX_DENSE_DIM:
        raise ValueError(
            f"dense models are limited to {MAX_DENSE_DIM} generator coordinates, got {cols}"
        )
    if a.shape != (2 * K * M, cols):
        raise ValueError(f"a must have shape {(2 * K * M, cols)}, got {a.shape}")
    if b.shape != (2 * M, cols):
        raise ValueError(f"b must have shape {(2 * M, cols)}, got {b.shape}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("model factors must be finite")
    return CorrelationModel(K=K, M=M, r_kind=r_kind, family="custom",
                            a=a.copy(), b=b.copy())


class CorrelationFileError(ValueError):
    """Malformed correlation-model file; message carries path and line."""


def load_model(path: str) -> CorrelationModel:
    """Parse a dense correlation model from the v1 text format.

    Layout: header ``aircomp-corr v1 K=<k> M=<m> rkind=<kind>``, then
    ``A <rows> <cols>`` followed by that many rows of space-separated
    floats, then ``B <rows> <cols>`` likewise.  Any structural problem is
    reported with its line number.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()

    def fail(lineno: int, msg: str) -> CorrelationFileError:
        return CorrelationFileError(f"{path}:{lineno}: {msg}")

    if not lines:
        raise fail(1, "empty file")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "aircomp-corr" or head[1] != "v1":
        raise fail(1, "expected header 'aircomp-corr v1 K=<k> M=<m> rkind=<kind>'")
    try:
        fields = dict(tok.split("=", 1) for tok in head[2:])
        K = int(fields["K"])
        M = int(fields["M"])
        kind = SubgaussianKind(fields["rkind"])
    except (ValueError, KeyError) as exc:
        raise fail(1, f"bad header field: {exc}") from exc
    if K < 1 or M < 1:
        raise fail(1, "K and M must be at least 1")
    cols_expected = 2 * K * M + 2 * M
    if cols_expected > MAX_DENSE_DIM:
        raise fail(1, f"model too large for dense storage ({cols_expected} > {MAX_DENSE_DIM})")

    cursor = 1

    def read_block(tag: str, rows_expected: int) -> np.ndarray:
        nonlocal cursor
        if cursor >= len(lines):
            raise fail(len(lines), f"missing '{tag}' block")
        head = lines[cursor].split()
        if len(head) != 3 or head[0] != tag:
            raise fail(cursor + 1, f"expected '{tag} <rows> <cols>'")
        try:
            rows, cols = int(head[1]), int(head[2])
        except ValueError:
            raise fail(cursor + 1, f"non-integer dimensions in '{tag}' header") from None
        if rows != rows_expected or cols != cols_expected:
            raise fail(
                cursor + 1,
                f"dimension mismatch: {tag} is {rows}x{cols}, "
                f"expected {rows_expected}x{cols_expected}",
            )
        cursor += 1
        out = np.empty((rows, cols))
        for i in range(rows):
            if cursor >= len(lines):
                raise fail(len(lines), f"unexpected end of file inside '{tag}' block")
            toks = lines[cursor].split()
            if len(toks) != cols:
                raise fail(cursor + 1, f"expected {cols} values, got {len(toks)}")
            try:
                out[i] = [float(t) for t in toks]
            except ValueError:
                raise fail(cursor + 1, "non-numeric matrix entry") from None
            cursor += 1
        return out

    a = read_block("A", 2 * K * M)
    b = read_block("B", 2 * M)
    while cursor < len(lines):
        if lines[cursor].strip():
            raise fail(cursor + 1, "trailing content after matrix blocks")
        cursor += 1
    return custom_model(K, M, a, b, kind)


def _ar_factor(M: int, rho: float) -> np.ndarray:
    """Lower-triangular map from M fresh innovations to a stationary AR(1) track."""
    t = np.zeros((M, M))
    powers = rho ** np.arange(M)
    scale = float(np.sqrt(1.0 - rho * rho))
    for i in range(M):
        t[i, 0] = powers[i]
        if i >= 1:
            t[i, 1:i + 1] = scale * powers[i - 1::-1]
    return t


def dense_a(model: CorrelationModel) -> np.ndarray:
    """Materialize the fading factor (on-demand, small dimensions only)."""
    cols = 2 * model.K * model.M + 2 * model.M
    if cols > MAX_DENSE_DIM:
        raise ValueError(
            f"dense materialization limited to {MAX_DENSE_DIM} coordinates, got {cols}"
        )
    if model.family == "custom":
        return model.a.copy()
    K, M = model.K, model.M
    a = np.zeros((2 * K * M, cols))
    if model.family == "iid":
        np.fill_diagonal(a[:, : 2 * K * M], model.sigma_f)
        return a
    block = model.sigma_f * _ar_factor(M, model.rho)
    for k in range(K):
        for c in (0, 1):
            rows = (2 * np.arange(M) + c) * K + k
            col0 = 2 * M * k + c * M
            a[np.ix_(rows, col0 + np.arange(M))] = block
    return a


def dense_b(model: CorrelationModel) -> np.ndarray:
    """Materialize the noise factor."""
    cols = 2 * model.K * model.M + 2 * model.M
    if cols > MAX_DENSE_DIM:
        raise ValueError(
            f"dense materialization limited to {MAX_DENSE_DIM} coordinates, got {cols}"
        )
    if model.family == "custom":
        return model.b.copy()
    b = np.zeros((2 * model.M, cols))
    np.fill_diagonal(b[:, 2 * model.K * model.M:], model.sigma_n)
    return b


def sample(model: CorrelationModel, rng: np.random.Generator) -> ChannelRealization:
    """Draw one joint fading/noise realization.

    The generator vector r is drawn in a fixed coordinate order (fading
    coordinates first, then noise), so a given seed reproduces the same
    realization whether the model is sampled structurally or through its
    dense factors.
    """
    K, M = model.K, model.M
    r = draw_r(model.r_kind, 2 * K * M + 2 * M, rng)
    if model.family == "custom":
        return ChannelRealization(h=model.a @ r, n=model.b @ r)
    if model.family == "iid":
        return ChannelRealization(h=model.sigma_f * r[: 2 * K * M],
                                  n=model.sigma_n * r[2 * K * M:])
    # AR(1): filter each user's real/imaginary innovation track
    eps = r[: 2 * K * M].reshape(K, 2, M)
    innov = eps.copy()
    innov[:, :, 1:] *= np.sqrt(1.0 - model.rho * model.rho)
    z = lfilter([1.0], [1.0, -model.rho], innov, axis=-1)
    h = np.ascontiguousarray((model.sigma_f * z).transpose(2, 1, 0)).reshape(-1)
    return ChannelRealization(h=h, n=model.sigma_n * r[2 * K * M:])


def apply(model: CorrelationModel, realization: ChannelRealization, x) -> np.ndarray:
    """Push a K x M real transmit matrix through one channel realization.

    Returns the complex output per channel use:
    ``y[m] = sum_k (h_r + i h_i) x[k, m] + n_r + i n_i``.
    """
    K, M = model.K, model.M
    x = np.asarray(x, dtype=float)
    if x.shape != (K, M):
        raise ValueError(f"transmit matrix must be {K}x{M}, got {x.shape}")
    if realization.h.shape != (2 * K * M,) or realization.n.shape != (2 * M,):
        raise ValueError("realization does not match model dimensions")
    h3 = realization.h.reshape(M, 2, K)
    n2 = realization.n.reshape(M, 2)
    xt = x.T
    yr = np.sum(h3[:, 0, :] * xt, axis=1) + n2[:, 0]
    yi = np.sum(h3[:, 1, :] * xt, axis=1) + n2[:, 1]
    return yr + 1j * yi


def validate_user_uncorrelated(a, K: int, M: int) -> bool:
    """Check the sufficient structural condition for cross-user independence.

    True iff no generator coordinate feeds rows of two different users; a
    function of disjoint independent coordinates is independent across
    users regardless of the generator's distribution.
    """
    a = np.asarray(a, dtype=float)
    if a.shape[0] != 2 * K * M:
        raise ValueError(f"matrix has {a.shape[0]} rows, expected {2 * K * M}")
    nonzero = a != 0.0
    support = np.zeros((K, a.shape[1]), dtype=bool)
    for k in range(K):
        rows = (np.add.outer(2 * np.arange(M), np.array([0, 1])).ravel()) * K + k
        support[k] = nonzero[rows].any(axis=0)
    return bool(np.all(support.sum(axis=0) <= 1))


def noise_energy_in_slots(model: CorrelationModel, start: int, stop: int) -> float:
    """Expected noise energy over the channel uses [start, stop)."""
    if not (0 <= start <= stop <= model.M):
        raise ValueError("bad slot range")
    if model.family == "custom":
        rows = model.b[2 * start: 2 * stop]
        return float(np.sum(rows * rows))
    return 2.0 * (stop - start) * model.sigma_n ** 2


def expected_noise_energy(model: CorrelationModel) -> float:
    """Expected total noise energy; equals the squared Frobenius norm of b."""
    return noise_energy_in_slots(model, 0, model.M)
