import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uwmimo.clock_drift import (
    AffineDrift,
    GaussianEstimationError,
    OscillatorSpec,
    average_relative_drift,
    beacon_frequency_estimate,
    frequency_sync_error,
    operating_frequency,
)
from uwmimo.sync_protocol import ACOUSTIC, MI

finite = st.floats(-1e6, 1e6, allow_nan=False)


class TestAverageDrift:
    def test_identity_profile(self):
        assert average_relative_drift(1.0, 5.0) == 1.0

    @pytest.mark.parametrize("interval", [1e-3, 1.0, 1e4])
    def test_constant_profile(self, interval):
        assert average_relative_drift(1.0001, interval) == 1.0001

    def test_linear_ramp(self):
        assert average_relative_drift(AffineDrift(1.0, 1e-6), 2.0) == pytest.approx(1 + 1e-6, abs=1e-15)

    def test_callable_matches_affine(self):
        ramp = AffineDrift(1.0, 1e-6)
        assert average_relative_drift(lambda t: ramp(t), 2.0) == pytest.approx(1 + 1e-6, abs=1e-14)

    def test_oscillator_spec_accepted(self):
        osc = OscillatorSpec(1e5, 1.00002)
        assert average_relative_drift(osc, 3.0) == 1.00002

    @pytest.mark.parametrize("interval", [0.0, -1.0])
    def test_rejects_non_positive_interval(self, interval):
        with pytest.raises(ValueError):
            average_relative_drift(1.0, interval)

    def test_rejects_negative_callable(self):
        with pytest.raises(ValueError):
            average_relative_drift(lambda t: 1 - t, 2.0)

    @given(st.floats(1e-6, 10.0), st.floats(1e-6, 1e6))
    def test_constant_exact(self, a, interval):
        assert average_relative_drift(a, interval) == a


class TestOperatingFrequency:
    def test_mi(self):
        assert operating_frequency(OscillatorSpec(100e3), 100) == pytest.approx(10e6, rel=1e-15)

    def test_acoustic(self):
        assert operating_frequency(OscillatorSpec(100e3), 0.1) == pytest.approx(10e3, rel=1e-15)

    def test_unit(self):
        assert operating_frequency(OscillatorSpec(1.0), 1) == 1.0

    @pytest.mark.parametrize("k", [0.0, -2.0])
    def test_rejects_bad_multiplier(self, k):
        with pytest.raises(ValueError):
            operating_frequency(OscillatorSpec(1.0), k)

    def test_rejects_bad_oscillator(self):
        with pytest.raises(ValueError):
            OscillatorSpec(0.0)
        with pytest.raises(ValueError):
            OscillatorSpec(1e5, -1.0)


class TestFrequencySyncError:
    def test_perfect_estimate(self):
        assert frequency_sync_error(0.0, 100) == 0.0

    def test_mi(self):
        assert frequency_sync_error(1.0, 100) == pytest.approx(0.01, rel=1e-15)

    def test_acoustic(self):
        assert frequency_sync_error(1.0, 0.1) == pytest.approx(10.0, rel=1e-15)

    def test_array_input(self):
        out = frequency_sync_error([1.0, -2.0], 100)
        np.testing.assert_allclose(out, [0.01, -0.02])

    def test_rejects_bad_multiplier(self):
        with pytest.raises(ValueError):
            frequency_sync_error(1.0, 0.0)

    @given(finite, st.floats(-1e3, 1e3, allow_nan=False), st.sampled_from([100.0, 0.1, 1.0, 7.5]))
    def test_linear(self, eps, c, k):
        assert frequency_sync_error(c * eps, k) == pytest.approx(c * frequency_sync_error(eps, k), rel=1e-12, abs=1e-300)

    @given(finite.filter(lambda x: abs(x) > 1e-300))
    def test_medium_ratio(self, eps):
        ratio = frequency_sync_error(eps, ACOUSTIC.multiplier) / frequency_sync_error(eps, MI.multiplier)
        assert abs(ratio - 1000) <= 1e-12 * 1000


class TestBeaconEstimate:
    def test_matched_clocks(self):
        r = beacon_frequency_estimate(10e6, 1.0, 0.0, 100)
        assert (r.estimated_beacon_hz, r.offset_hz, r.residual_error_hz) == (10e6, 0.0, 0.0)

    def test_drifting_slave(self):
        r = beacon_frequency_estimate(10e6, 1.0001, 0.0, 100)
        assert r.estimated_beacon_hz == pytest.approx(10.001e6, rel=1e-12)
        assert r.offset_hz == pytest.approx(10.0, rel=1e-9)
        assert r.residual_error_hz == 0.0

    def test_estimation_error_only(self):
        r = beacon_frequency_estimate(10e6, 1.0, 2.0, 100)
        assert r.offset_hz == pytest.approx(0.02, rel=1e-12)
        assert r.residual_error_hz == pytest.approx(0.02, rel=1e-12)

    def test_rejects_bad_beacon(self):
        with pytest.raises(ValueError):
            beacon_frequency_estimate(0.0, 1.0, 0.0)

    @given(st.floats(1.0, 1e9), st.floats(0.01, 1e3))
    def test_zero_offset_for_perfect_lock(self, beacon, k):
        r = beacon_frequency_estimate(beacon, 1.0, 0.0, k)
        assert r.offset_hz == 0.0 and r.residual_error_hz == 0.0


class TestGaussianError:
    def test_zero_std(self):
        rng = np.random.default_rng(0)
        assert GaussianEstimationError(0.0).sample(rng) == 0.0
        assert not np.any(GaussianEstimationError(0.0).sample(rng, 4))

    def test_std(self):
        draws = GaussianEstimationError(200.0).sample(np.random.default_rng(1), 200_000)
        assert draws.std() == pytest.approx(200.0, rel=0.01)
        assert abs(draws.mean()) < 2.0

    @pytest.mark.parametrize("std", [-1.0, math.nan])
    def test_rejects_bad_std(self, std):
        with pytest.raises(ValueError):
            GaussianEstimationError(std)
