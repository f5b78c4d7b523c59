"""scikit-learn style wrappers around the modem blocks.

Each wrapper takes one complex sample (or symbol) buffer as ``X``; ``y`` is
ignored.  Fitted state carries a trailing underscore as usual.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .._validation import check_samples
from .alamouti import AlamoutiFrame, alamouti_combine, estimate_channel_from_pilots
from .modulation import SrrcSpec, bpsk_demodulate, matched_filter, pulse_shape, srrc_taps
from .preamble import ChirpSpec, PreambleLayout
from .sync import DEFAULT_DETECTION_THRESHOLD, apply_cfo, detect_packet_offset, estimate_cfo


class PulseShaper(TransformerMixin, BaseEstimator):
    """SRRC shaping (``transform``) and matched filtering (``inverse_transform``)."""

    def __init__(self, rolloff=0.3, samples_per_symbol=4, span_symbols=8, symbol_duration_s=4 / 195312.5):
        self.rolloff = rolloff
        self.samples_per_symbol = samples_per_symbol
        self.span_symbols = span_symbols
        self.symbol_duration_s = symbol_duration_s

    def _spec(self):
        return SrrcSpec(self.symbol_duration_s, self.rolloff, self.samples_per_symbol, self.span_symbols)

    def fit(self, X=None, y=None):
        self.spec_ = self._spec()
        self.taps_ = srrc_taps(self.spec_)
        return self

    def transform(self, X):
        check_is_fitted(self, "taps_")
        return pulse_shape(check_samples(X, "symbols"), self.spec_)

    def inverse_transform(self, X, n_symbols=None):
        check_is_fitted(self, "taps_")
        return matched_filter(X, self.spec_, n_symbols=n_symbols)


class ChirpDetector(TransformerMixin, BaseEstimator):
    """Finds the chirp; ``transform`` trims everything before it."""

    def __init__(self, chirp=None, threshold=DEFAULT_DETECTION_THRESHOLD):
        self.chirp = chirp
        self.threshold = threshold

    def fit(self, X, y=None):
        chirp = self.chirp or ChirpSpec()
        self.offset_, self.peak_ = detect_packet_offset(X, chirp, self.threshold, return_peak=True)
        return self

    def transform(self, X):
        check_is_fitted(self, "offset_")
        return check_samples(X)[self.offset_:]


class CfoEstimator(TransformerMixin, BaseEstimator):
    """Estimates the carrier offset from the preamble and counter-rotates.

    ``X`` must begin at the first shaped preamble sample.
    """

    def __init__(self, sample_rate_hz=195312.5, layout=None, srrc=None, refine=True):
        self.sample_rate_hz = sample_rate_hz
        self.layout = layout
        self.srrc = srrc
        self.refine = refine

    def fit(self, X, y=None):
        layout = self.layout or PreambleLayout()
        self.cfo_hz_ = estimate_cfo(X, layout, self.sample_rate_hz, self.srrc, refine=self.refine)
        return self

    def transform(self, X):
        check_is_fitted(self, "cfo_hz_")
        return apply_cfo(X, -self.cfo_hz_, self.sample_rate_hz)


class AlamoutiDecoder(ClassifierMixin, BaseEstimator):
    """Channel estimate from the silent pilots, then combining and BPSK slicing.

    ``fit`` takes the received pilot section (``2 * pilot_length`` symbols)
    and the transmitted :class:`AlamoutiFrame` as ``y``.
    """

    def __init__(self):
        pass

    def fit(self, X, y):
        if not isinstance(y, AlamoutiFrame):
            raise TypeError("y must be the transmitted AlamoutiFrame")
        self.channel_ = estimate_channel_from_pilots(X, y)
        self.classes_ = np.array([0, 1])
        return self

    def decision_function(self, X):
        check_is_fitted(self, "channel_")
        return alamouti_combine(X, self.channel_).real

    def predict(self, X):
        return bpsk_demodulate(self.decision_function(X))
