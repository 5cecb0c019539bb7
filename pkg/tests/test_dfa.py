import numpy as np
import pytest

from aircomp import channel
from aircomp.channel import SubgaussianKind, custom_model, expected_noise_energy, iid_model
from aircomp.dfa import DfaConfig, decode, decode_sum, encode, run_dfa, transmit_matrix
from aircomp.functions import make_constant, make_euclidean_norm, make_mean


CFG = DfaConfig(power=1.0, sigma_f=1.0)


def _rng(seed):
    return np.random.default_rng(seed)


def test_config_validation():
    with pytest.raises(ValueError):
        DfaConfig(power=0.0, sigma_f=1.0)
    with pytest.raises(ValueError):
        DfaConfig(power=1.0, sigma_f=0.0)


def test_encode_zero_at_lower_extreme():
    f = make_mean(4)
    cw = encode(f, np.zeros(4), CFG, 8, _rng(0))
    np.testing.assert_array_equal(cw.amplitudes, np.zeros(4))


def test_encode_hits_peak_power_at_upper_extreme():
    f = make_mean(3)
    cw = encode(f, np.ones(3), CFG, 8, _rng(0))
    np.testing.assert_array_equal(cw.amplitudes, np.ones(3))


def test_encode_midpoint_amplitude_and_peak_constraint():
    f = make_mean(2)
    cw = encode(f, np.full(2, 0.5), CFG, 16, _rng(1))
    np.testing.assert_allclose(cw.amplitudes, 0.5)
    x = transmit_matrix(cw)
    assert np.max(x ** 2) <= CFG.power + 1e-12


def test_encode_signs_are_plus_minus_one():
    f = make_euclidean_norm(5)
    cw = encode(f, np.full(5, 0.3), CFG, 64, _rng(2))
    assert set(np.unique(cw.signs)) == {-1, 1}


def test_peak_power_holds_over_random_inputs():
    rng = np.random.default_rng(3)
    for f in (make_mean(6), make_euclidean_norm(6)):
        for _ in range(200):
            s = rng.uniform(0.0, 1.0, 6)
            x = transmit_matrix(encode(f, s, CFG, 4, rng))
            assert np.max(x ** 2) <= CFG.power + 1e-12


def test_decode_zero_statistic_returns_lower_output():
    f = make_mean(4)
    assert decode(f, 5.0, 5.0, 10, CFG) == 0.0


def test_decode_hand_inverted_example():
    f = make_mean(2)
    # energy excess of 2*M*P*1.0 maps back to inner sum 1.0, mean 0.5
    assert decode(f, 20.0, 0.0, 10, CFG) == pytest.approx(0.5, rel=1e-12)


def test_decode_clamps_negative_preimage_for_norm():
    f = make_euclidean_norm(2)
    out = decode(f, 0.0, 1e6, 10, CFG)
    assert out == 0.0 and not np.isnan(out)


def test_decode_without_clamp_exposes_raw_preimage():
    f = make_mean(2)
    cfg = DfaConfig(power=1.0, sigma_f=1.0, clamp=False)
    assert decode(f, 0.0, 40.0, 10, cfg) < 0.0


def test_run_dfa_constant_function_noiseless_is_exact():
    f = make_constant(3, 0.4)
    model = iid_model(3, 16, 1.0, 0.0)
    est = run_dfa(f, model, np.full(3, 0.9), CFG, _rng(5))
    assert est == pytest.approx(3 * 0.4, abs=0.0)


def test_run_dfa_constant_function_noisy_is_exact_too():
    # zero spread means zero decode scale: noise cannot move the estimate
    f = make_constant(2, 0.25)
    model = iid_model(2, 8, 1.0, 5.0)
    est = run_dfa(f, model, np.full(2, 0.1), CFG, _rng(6))
    assert est == 0.5


def test_run_dfa_deterministic_given_streams():
    f = make_mean(4)
    model = iid_model(4, 32, 1.0, 0.5)
    a = run_dfa(f, model, np.full(4, 0.6), CFG, _rng(42), channel_rng=_rng(43))
    b = run_dfa(f, model, np.full(4, 0.6), CFG, _rng(42), channel_rng=_rng(43))
    assert a == b


def test_run_dfa_validates_dimension_and_scale():
    f = make_mean(3)
    with pytest.raises(ValueError, match="K="):
        run_dfa(f, iid_model(2, 8, 1.0, 1.0), np.zeros(3), CFG, _rng(0))
    with pytest.raises(ValueError, match="sigma_f"):
        run_dfa(f, iid_model(3, 8, 0.5, 1.0), np.zeros(3), CFG, _rng(0))


def test_run_dfa_mean_close_to_truth_at_low_noise():
    f = make_mean(5)
    model = iid_model(5, 200, 1.0, 0.1)
    s = np.array([0.9, 0.2, 0.5, 0.7, 0.4])
    truth = float(np.mean(s))
    ests = np.array([
        run_dfa(f, model, s, CFG, _rng((7, i)), channel_rng=_rng((8, i)))
        for i in range(2000)
    ])
    assert abs(ests.mean() - truth) <= 0.02 * truth


def test_sum_estimate_unbiased_under_correlated_noise():
    # independent fading but noise coupled to it; bounded generator entries
    rng = np.random.default_rng(10)
    K, M = 2, 8
    a = np.hstack([np.eye(2 * K * M), np.zeros((2 * K * M, 2 * M))])
    theta = 0.4 * rng.standard_normal((2 * M, 2 * K * M))
    b = np.hstack([theta, 0.8 * np.eye(2 * M)])
    model = custom_model(K, M, a, b, SubgaussianKind.RADEMACHER)
    noise_energy = expected_noise_energy(model)

    for s in (np.array([0.2, 0.9]), np.array([0.6, 0.6]), np.array([1.0, 0.1])):
        for f in (make_mean(K), make_euclidean_norm(K)):
            truth = float(np.sum(f.inner(s)))
            sums = np.empty(10_000)
            for i in range(sums.size):
                cw = encode(f, s, CFG, M, _rng((11, i)))
                y = channel.apply(model, channel.sample(model, _rng((12, i))),
                                  transmit_matrix(cw))
                energy = float(np.sum(y.real ** 2 + y.imag ** 2))
                sums[i] = decode_sum(f, energy, noise_energy, M, CFG)
            se = sums.std(ddof=1) / np.sqrt(sums.size)
            assert abs(sums.mean() - truth) <= 5.0 * se


def test_accuracy_improves_with_more_channel_uses():
    f = make_mean(3)
    s = np.array([0.8, 0.3, 0.5])
    truth = float(np.mean(s))
    mses = {}
    for M in (250, 2000):
        model = iid_model(3, M, 1.0, 1.0)
        errs = np.array([
            (run_dfa(f, model, s, CFG, _rng((M, i)), channel_rng=_rng((M, i, 1))) - truth) ** 2
            for i in range(1000)
        ])
        mses[M] = errs.mean()
    assert mses[2000] <= 1.2 * mses[250]


def test_clamped_estimates_stay_in_output_range():
    rng = np.random.default_rng(14)
    f = make_euclidean_norm(4)
    model = iid_model(4, 8, 1.0, 3.0)  # very noisy: preimages often negative
    hi = float(np.sqrt(4.0))
    for i in range(500):
        s = rng.uniform(0.0, 1.0, 4)
        est = run_dfa(f, model, s, CFG, _rng((15, i)), channel_rng=_rng((16, i)))
        assert 0.0 <= est <= hi
