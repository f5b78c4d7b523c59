import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uwmimo.baseband import (
    SrrcSpec,
    bpsk_demodulate,
    bpsk_modulate,
    cascade_isi,
    matched_filter,
    measure_ber,
    pulse_shape,
    srrc_taps,
)
from uwmimo.baseband.modulation import DEFAULT_SAMPLE_RATE


class TestBpsk:
    def test_mapping(self):
        np.testing.assert_array_equal(bpsk_modulate([1, 0, 1]), [1, -1, 1])
        np.testing.assert_array_equal(bpsk_demodulate([1, -1, 1]), [1, 0, 1])

    def test_sign_rule(self):
        assert bpsk_demodulate([0.2 + 0.9j]).tolist() == [1]
        assert bpsk_demodulate([-0.2 + 0.9j]).tolist() == [0]

    def test_round_trip(self):
        bits = np.random.default_rng(0).integers(0, 2, 100_000)
        assert measure_ber(bits, bpsk_demodulate(bpsk_modulate(bits))) == 0.0

    def test_rejects_non_bits(self):
        with pytest.raises(ValueError):
            bpsk_modulate([0, 2])


class TestBer:
    def test_identical(self):
        assert measure_ber([1, 0, 1], [1, 0, 1]) == 0.0

    def test_complement(self):
        bits = np.array([1, 0, 0, 1])
        assert measure_ber(bits, 1 - bits) == 1.0

    def test_one_in_thousand(self):
        a = np.zeros(1000, dtype=int)
        b = a.copy()
        b[417] = 1
        assert measure_ber(a, b) == 0.001

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            measure_ber([1, 0], [1])
        with pytest.raises(ValueError):
            measure_ber([], [])


def _textbook_srrc(alpha, sps, span):
    # independent closed-form SRRC, sampled away from its removable singularities
    t = (np.arange(span * sps + 1) - span * sps / 2) / sps
    t = np.where(np.abs(np.abs(4 * alpha * t) - 1) < 1e-9, t + 1e-9, t)
    t = np.where(t == 0, 1e-12, t)
    num = np.sin(math.pi * t * (1 - alpha)) + 4 * alpha * t * np.cos(math.pi * t * (1 + alpha))
    h = num / (math.pi * t * (1 - (4 * alpha * t) ** 2))
    return h / np.linalg.norm(h)


class TestSrrc:
    spec = SrrcSpec()

    def test_defaults(self):
        assert self.spec.sample_rate_hz == DEFAULT_SAMPLE_RATE
        assert self.spec.n_taps == 33
        assert self.spec.group_delay == 16

    def test_symmetric_and_peaked(self):
        h = srrc_taps(self.spec)
        np.testing.assert_allclose(h, h[::-1], atol=1e-15)
        assert np.argmax(h) == len(h) // 2

    def test_unit_energy(self):
        assert np.sum(srrc_taps(self.spec) ** 2) == pytest.approx(1.0, abs=1e-9)

    def test_cascade_nyquist(self):
        # direct convolution oracle, independent of cascade_isi
        h = srrc_taps(self.spec)
        c = np.convolve(h, h)
        mid = len(c) // 2
        offsets = [mid + k * 4 for k in range(-8, 9) if k and 0 <= mid + k * 4 < len(c)]
        assert max(abs(c[i]) for i in offsets) / c[mid] < 1e-3
        assert cascade_isi(h, 4) < 1e-3

    def test_close_to_textbook_pulse(self):
        h = srrc_taps(self.spec)
        ref = _textbook_srrc(0.3, 4, 8)
        assert np.max(np.abs(h - ref)) < 0.03 * np.max(ref)
        assert np.linalg.norm(h - ref) < 0.04

    def test_truncated_textbook_pulse_misses_target(self):
        assert cascade_isi(_textbook_srrc(0.3, 4, 8), 4) > 1e-3

    @pytest.mark.parametrize("rolloff,sps,span", [(0.5, 4, 8), (0.3, 8, 10), (1.0, 2, 6)])
    def test_other_shapes(self, rolloff, sps, span):
        spec = SrrcSpec(sps / DEFAULT_SAMPLE_RATE, rolloff, sps, span)
        h = srrc_taps(spec)
        assert len(h) == span * sps + 1
        assert np.sum(h**2) == pytest.approx(1.0, abs=1e-9)
        assert cascade_isi(h, sps) < 1e-3

    @pytest.mark.parametrize("kwargs", [{"rolloff": -0.1}, {"rolloff": 1.1}, {"samples_per_symbol": 1},
                                        {"span_symbols": 7}, {"symbol_duration_s": 0.0}])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            SrrcSpec(**kwargs)


class TestShaping:
    def test_peak_positions(self):
        y = pulse_shape([1.0], SrrcSpec())
        assert np.argmax(np.abs(y)) == SrrcSpec().group_delay

    def test_unit_power(self):
        symbols = bpsk_modulate(np.random.default_rng(1).integers(0, 2, 20_000))
        y = pulse_shape(symbols)
        assert np.mean(np.abs(y) ** 2) == pytest.approx(1.0, rel=0.02)

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=200))
    def test_matched_filter_recovers_symbols(self, bits):
        symbols = bpsk_modulate(bits)
        out = matched_filter(pulse_shape(symbols), n_symbols=len(bits))
        np.testing.assert_allclose(out, symbols, atol=1e-4)

    def test_too_many_symbols(self):
        with pytest.raises(ValueError):
            matched_filter(pulse_shape([1.0, -1.0]), n_symbols=50)
