import numpy as np
import pytest

from aircomp.baseline import run_tdma, slot_counts
from aircomp.channel import iid_model, temporal_ar_model
from aircomp.dfa import DfaConfig, run_dfa
from aircomp.functions import make_constant, make_euclidean_norm, make_mean
from aircomp.harness import SweepConfig, run_sweep


CFG = DfaConfig(power=1.0, sigma_f=1.0)


def _rng(seed):
    return np.random.default_rng(seed)


def test_slot_counts_accounting():
    for K, M in [(3, 7), (4, 12), (5, 5), (7, 23)]:
        counts = slot_counts(K, M)
        assert counts.sum() == M
        assert counts.max() - counts.min() <= 1
        # remainder goes to the lowest-indexed users
        assert np.all(np.diff(counts) <= 0)


def test_infeasible_when_fewer_uses_than_users():
    f = make_mean(5)
    model = iid_model(5, 3, 1.0, 1.0)
    assert run_tdma(f, model, np.full(5, 0.5), CFG, _rng(0)) is None


def test_single_user_matches_shared_scheme_bit_exactly():
    # with one user the slotted scheme occupies every use: same draws,
    # same arithmetic, identical output bits
    for f in (make_mean(1), make_euclidean_norm(1)):
        model = iid_model(1, 64, 1.0, 0.7)
        s = np.array([0.37])
        for seed in range(10):
            a = run_dfa(f, model, s, CFG, _rng((1, seed)), channel_rng=_rng((2, seed)))
            b = run_tdma(f, model, s, CFG, _rng((1, seed)), channel_rng=_rng((2, seed)))
            assert a == b


def test_constant_function_noiseless_is_exact():
    f = make_constant(3, 0.2)
    model = iid_model(3, 9, 1.0, 0.0)
    want = float(f.outer(float(np.sum(f.phi_min))))
    assert run_tdma(f, model, np.full(3, 0.5), CFG, _rng(3)) == want


def test_per_user_estimates_unbiased():
    # single user isolates one per-user estimator; clamp off to see raw bias
    cfg = DfaConfig(power=1.0, sigma_f=1.0, clamp=False)
    f = make_mean(1)
    model = iid_model(1, 16, 1.0, 1.0)
    s = np.array([0.35])
    ests = np.array([
        run_tdma(f, model, s, cfg, _rng((4, i)), channel_rng=_rng((5, i)))
        for i in range(10_000)
    ])
    se = ests.std(ddof=1) / np.sqrt(ests.size)
    assert abs(ests.mean() - 0.35) <= 5.0 * se


def test_works_on_temporally_correlated_fading():
    f = make_mean(2)
    model = temporal_ar_model(2, 32, 0.6, 1.0, 0.3)
    est = run_tdma(f, model, np.array([0.2, 0.8]), CFG, _rng(6), channel_rng=_rng(7))
    assert 0.0 <= est <= 1.0


def test_scaling_disadvantage_against_shared_scheme():
    # many users, few uses each: the slotted baseline falls behind
    common = dict(users=(64,), chuses=(512,), noise_db=(0.0,), runs=500,
                  root_seed=1205, fading="experiments", correlation="iid")
    for function in ("mean", "norm"):
        cfg = SweepConfig(function=function, schemes=("dfa", "tdma"), **common)
        rows = {r.scheme: r for r in run_sweep(cfg).rows}
        assert rows["dfa"].mse < rows["tdma"].mse
