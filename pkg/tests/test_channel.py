"""Channel simulator tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tbteq.channel import (
    DESK_TAPS,
    ChannelConfig,
    ChannelState,
    RandomWalk,
    Saturating,
    Sinusoidal,
    Static,
    noise_variance_from_snr,
    propagate,
    read_sequence_file,
    repeat_to_length,
    saturate,
    tap_trajectory,
    taps_at,
    training_sequence,
)
from tbteq.errors import ConfigError, DomainError, ParseError


def _noiseless(**kw):
    return ChannelConfig(noiseless=True, time_variation=Static(), **kw)


class TestConfig:
    def test_defaults(self):
        cfg = ChannelConfig()
        assert cfg.base_taps == DESK_TAPS
        assert list(cfg.lags) == [-1, 0, 1, 2, 3]

    def test_tap_count_mismatch(self):
        with pytest.raises(ConfigError):
            ChannelConfig(base_taps=(1.0, 0.5))

    @pytest.mark.parametrize("kw", [
        {"time_variation": Sinusoidal(amplitude=1.0)},
        {"time_variation": RandomWalk(-1.0)},
        {"nonlinearity": Saturating(0.0)},
        {"snr_db": math.inf},
        {"causal_taps": -1},
    ])
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            ChannelConfig(**kw)


class TestNoise:
    def test_variance_formula(self):
        cfg = ChannelConfig(snr_db=20.0)
        assert noise_variance_from_snr(cfg) == pytest.approx(sum(g * g for g in DESK_TAPS) / 100.0)

    def test_zero_taps(self):
        cfg = ChannelConfig(base_taps=(0.0,), causal_taps=0, anticausal_taps=0)
        with pytest.raises(DomainError):
            noise_variance_from_snr(cfg)

    def test_empirical_noise_power(self):
        cfg = ChannelConfig(snr_db=10.0, time_variation=Static(), seed=3)
        bits = training_sequence("pseudo_random", 200_000, seed=1)
        noise = propagate(cfg, bits) - propagate(ChannelConfig(snr_db=10.0, time_variation=Static(), noiseless=True), bits)
        assert np.var(noise) == pytest.approx(noise_variance_from_snr(cfg), rel=0.02)


class TestTaps:
    def test_static(self):
        traj = tap_trajectory(ChannelConfig(time_variation=Static()), 5)
        np.testing.assert_array_equal(traj, np.tile(DESK_TAPS, (5, 1)))

    def test_sinusoidal_formula(self):
        tv = Sinusoidal(0.2, (1e-3, 2e-3, 0.0, 1e-2, 5e-3), 0.4)
        cfg = ChannelConfig(time_variation=tv)
        t = 137
        expected = np.array(DESK_TAPS) * (1 + 0.2 * np.sin(2 * np.pi * np.array(tv.frequency) * t + 0.4))
        np.testing.assert_allclose(taps_at(cfg, t), expected, rtol=1e-14)

    def test_random_walk_deterministic_and_scaled(self):
        cfg = ChannelConfig(time_variation=RandomWalk(0.01), seed=5)
        a, b = tap_trajectory(cfg, 4000), tap_trajectory(cfg, 4000)
        np.testing.assert_array_equal(a, b)
        np.testing.assert_array_equal(a[0], DESK_TAPS)
        assert np.std(np.diff(a, axis=0)) == pytest.approx(0.01, rel=0.05)

    def test_channel_state_advances(self):
        cfg = ChannelConfig(time_variation=RandomWalk(0.1), seed=2)
        state = ChannelState.start(cfg)
        first = state.advance(0.1)
        assert state.time_index == 1
        np.testing.assert_array_equal(first, tap_trajectory(cfg, 2)[1])

    def test_negative_time(self):
        with pytest.raises(DomainError):
            taps_at(ChannelConfig(), -1)


class TestPropagate:
    @given(st.lists(st.sampled_from([-1.0, 1.0]), min_size=1, max_size=60))
    def test_noiseless_is_convolution(self, bits):
        cfg = _noiseless()
        b = np.array(bits)
        # r(t) = sum_k g_k b(t - k), lags -1..3: full convolution shifted by one
        full = np.convolve(b, np.array(DESK_TAPS))
        np.testing.assert_allclose(propagate(cfg, b), full[1 : 1 + b.size], atol=1e-14)

    def test_identity_channel(self):
        cfg = ChannelConfig(base_taps=(1.0,), causal_taps=0, anticausal_taps=0, noiseless=True,
                            time_variation=Static())
        b = training_sequence("pseudo_random", 50, seed=0)
        np.testing.assert_array_equal(propagate(cfg, b), b)

    def test_deterministic(self):
        cfg = ChannelConfig(seed=11, nonlinearity=Saturating(1.0))
        b = training_sequence("pseudo_random", 500, seed=2)
        np.testing.assert_array_equal(propagate(cfg, b), propagate(cfg, b))

    def test_seed_changes_noise(self):
        b = training_sequence("pseudo_random", 100, seed=2)
        assert not np.array_equal(propagate(ChannelConfig(seed=1), b), propagate(ChannelConfig(seed=2), b))

    def test_saturation_applied_last(self):
        b = training_sequence("pseudo_random", 64, seed=4)
        plain = propagate(_noiseless(), b)
        np.testing.assert_allclose(propagate(_noiseless(nonlinearity=Saturating(0.7)), b), saturate(plain, 0.7))

    def test_bad_input(self):
        with pytest.raises(DomainError):
            propagate(ChannelConfig(), [])


class TestSaturate:
    @given(st.floats(-1e6, 1e6), st.floats(0.1, 10.0))
    def test_odd_and_bounded(self, r, s):
        out = saturate(np.array([r, -r]), s)
        assert out[0] == -out[1]
        assert abs(out[0]) < s
        assert abs(out[0]) <= abs(r)

    @settings(max_examples=50)
    @given(st.floats(-100, 100), st.floats(-100, 100))
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert saturate(np.array(lo), 1.0) <= saturate(np.array(hi), 1.0)


class TestSequences:
    def test_file_tokens(self, tmp_path):
        p = tmp_path / "seq.txt"
        p.write_text("+1 -1\n1 −1\n", encoding="utf-8")
        np.testing.assert_array_equal(read_sequence_file(p), [1, -1, 1, -1])
        np.testing.assert_array_equal(training_sequence("file", 3, path=p), [1, -1, 1])

    def test_file_errors(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("+1 0", encoding="utf-8")
        with pytest.raises(ParseError):
            read_sequence_file(p)
        p.write_text("", encoding="utf-8")
        with pytest.raises(ParseError):
            read_sequence_file(p)
        with pytest.raises(ConfigError):
            training_sequence("file", 3)

    def test_pseudo_random(self):
        a = training_sequence("pseudo_random", 1000, seed=9)
        assert set(np.unique(a)) == {-1.0, 1.0}
        np.testing.assert_array_equal(a, training_sequence("pseudo_random", 1000, seed=9))
        assert abs(a.mean()) < 0.1

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            training_sequence("turyn", 10)
        with pytest.raises(DomainError):
            training_sequence("pseudo_random", 0)

    def test_repeat(self):
        np.testing.assert_array_equal(repeat_to_length(np.array([1.0, -1.0, -1.0]), 7), [1, -1, -1, 1, -1, -1, 1])
