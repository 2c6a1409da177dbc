import math

import numpy as np
import pytest

from spikebench.detrng import Stream, resolve_path
from spikebench.encoding import (
    EncoderConfig,
    SpikeRaster,
    binned_features,
    encode_counts_batch,
    encode_sample,
    expected_spike_count,
    feature_rates,
    rate_features,
    tuning_rates,
)


class TestConfig:
    def test_centers_single_neuron(self):
        assert EncoderConfig(neurons_per_feature=1).centers.tolist() == [0.5]

    def test_centers_include_endpoints(self):
        centers = EncoderConfig(neurons_per_feature=4).centers
        assert centers[0] == 0.0 and centers[-1] == 1.0
        assert np.allclose(np.diff(centers), 1.0 / 3.0)

    def test_rejects_invalid_probability(self):
        with pytest.raises(ValueError):
            EncoderConfig(peak_rate_hz=2000.0, dt_s=0.001)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(neurons_per_feature=0),
            dict(tuning_width=0.0),
            dict(window_bins=0),
            dict(centers_mode="log-spaced"),
        ],
    )
    def test_rejects_bad_fields(self, kwargs):
        with pytest.raises(ValueError):
            EncoderConfig(**kwargs)


class TestTuningRates:
    def test_peak_at_center(self):
        cfg = EncoderConfig()
        rates = tuning_rates(1.0 / 3.0, cfg)
        assert rates[1] == pytest.approx(200.0, abs=1e-9)

    def test_one_width_from_center(self):
        cfg = EncoderConfig()
        x = cfg.centers[1] + cfg.tuning_width
        expected = 200.0 * math.exp(-0.5)
        assert tuning_rates(x, cfg)[1] == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(121.306, abs=1e-3)

    def test_flat_limit_for_huge_width(self):
        cfg = EncoderConfig(tuning_width=1e6)
        rates = tuning_rates(0.31, cfg)
        assert np.all(np.abs(rates / cfg.peak_rate_hz - 1.0) < 1e-6)

    @pytest.mark.parametrize("x", [-0.01, 1.01])
    def test_rejects_unnormalized_input(self, x):
        with pytest.raises(ValueError):
            tuning_rates(x, EncoderConfig())


class TestEncodeSample:
    def test_deterministic(self):
        cfg = EncoderConfig()
        feats = np.linspace(0, 1, 8)
        a = encode_sample(feats, cfg, Stream(777))
        b = encode_sample(feats, cfg, Stream(777))
        assert np.array_equal(a.spikes, b.spikes)

    def test_matches_bernoulli_loop(self):
        # raster must equal explicit channel-major bernoulli draws
        cfg = EncoderConfig(neurons_per_feature=2, window_bins=5)
        feats = np.array([0.2, 0.9])
        raster = encode_sample(feats, cfg, Stream(4242))
        oracle_stream = Stream(4242)
        probs = feature_rates(feats, cfg) * cfg.dt_s
        expected = np.zeros((4, 5), dtype=np.uint8)
        for c in range(4):
            for t in range(5):
                expected[c, t] = oracle_stream.bernoulli(float(probs[c]))
        assert np.array_equal(raster.spikes, expected)

    def test_zero_features_still_fire(self):
        # the center-zero channel sits exactly on x=0 and fires at peak rate
        cfg = EncoderConfig()
        feats = np.zeros(8)
        assert expected_spike_count(feats, cfg) > 0.0
        raster = encode_sample(feats, cfg, Stream(3))
        assert raster.spikes.sum() > 0

    def test_empirical_mean_within_three_sigma(self, digits):
        cfg = EncoderConfig()
        feats = digits.features[0]
        probs = feature_rates(feats, cfg) * cfg.dt_s
        mean = expected_spike_count(feats, cfg)
        var = float((probs * (1.0 - probs)).sum() * cfg.window_bins)
        n = 10**4
        states = resolve_path([("enc-test", 0)])
        from spikebench.detrng import derive_child_states

        counts = encode_counts_batch(
            np.tile(feats, (n, 1)), cfg,
            derive_child_states(states.state, np.arange(n, dtype=np.uint64)),
        ).sum(axis=1)
        assert abs(counts.mean() - mean) < 3.0 * math.sqrt(var / n)


class TestBatchEncoding:
    def test_batch_equals_per_sample(self, digits):
        cfg = EncoderConfig()
        idx = np.arange(5)
        base = resolve_path([("batch-check", 0)])
        from spikebench.detrng import derive_child_states

        states = derive_child_states(base.state, idx.astype(np.uint64))
        batch = encode_counts_batch(digits.features[idx], cfg, states)
        for i in idx:
            raster = encode_sample(digits.features[i], cfg, Stream(int(states[i])))
            assert np.array_equal(batch[i], rate_features(raster))


class TestRateFeatures:
    def test_zero_raster(self):
        raster = SpikeRaster(np.zeros((6, 10), dtype=np.uint8))
        assert rate_features(raster).tolist() == [0] * 6

    def test_single_spike(self):
        spikes = np.zeros((6, 10), dtype=np.uint8)
        spikes[4, 7] = 1
        counts = rate_features(SpikeRaster(spikes))
        assert counts[4] == 1 and counts.sum() == 1

    def test_matches_brute_force(self):
        rng = np.random.default_rng(5)
        spikes = (rng.random((32, 120)) < 0.1).astype(np.uint8)
        raster = SpikeRaster(spikes)
        brute = [sum(int(v) for v in row) for row in spikes]
        assert rate_features(raster).tolist() == brute


class TestBinnedFeatures:
    def test_single_bin_equals_rate(self):
        rng = np.random.default_rng(6)
        raster = SpikeRaster((rng.random((8, 120)) < 0.2).astype(np.uint8))
        assert np.array_equal(binned_features(raster, 1), rate_features(raster))

    def test_full_bins_recover_raster(self):
        rng = np.random.default_rng(7)
        raster = SpikeRaster((rng.random((4, 12)) < 0.5).astype(np.uint8))
        out = binned_features(raster, 12)
        assert np.array_equal(out.reshape(4, 12), raster.spikes)

    def test_matches_brute_force_windows(self):
        rng = np.random.default_rng(8)
        spikes = (rng.random((16, 120)) < 0.15).astype(np.uint8)
        raster = SpikeRaster(spikes)
        out = binned_features(raster, 10)
        for c in range(16):
            for b in range(10):
                window = spikes[c, b * 12 : (b + 1) * 12]
                assert out[c * 10 + b] == sum(int(v) for v in window)

    def test_rejects_non_dividing_bins(self):
        raster = SpikeRaster(np.zeros((2, 120), dtype=np.uint8))
        with pytest.raises(ValueError):
            binned_features(raster, 7)


class TestExpectedSpikeCount:
    def test_zero_rate(self):
        cfg = EncoderConfig(peak_rate_hz=0.0)
        assert expected_spike_count(np.array([0.3]), cfg) == 0.0

    def test_single_neuron_at_center(self):
        cfg = EncoderConfig(neurons_per_feature=1)
        assert expected_spike_count(np.array([0.5]), cfg) == pytest.approx(24.0)

    def test_per_bin_probability_bounded(self, digits):
        cfg = EncoderConfig()
        probs = feature_rates(digits.features[17], cfg) * cfg.dt_s
        assert probs.min() >= 0.0 and probs.max() <= 0.2

    def test_single_feature_change_is_local_to_its_channels(self):
        cfg = EncoderConfig()
        feats = np.full(8, 0.4)
        base = feature_rates(feats, cfg)
        poked = feats.copy()
        poked[3] = 0.9
        k = cfg.neurons_per_feature
        changed = feature_rates(poked, cfg)
        affected = slice(3 * k, 4 * k)
        assert np.all(changed[affected] != base[affected])
        mask = np.ones(base.size, dtype=bool)
        mask[affected] = False
        assert np.array_equal(changed[mask], base[mask])
