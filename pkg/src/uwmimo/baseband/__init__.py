"""Sample-level BPSK modem: shaping, detection, CFO correction and Alamouti coding."""

from .alamouti import (
    AlamoutiFrame,
    alamouti_combine,
    alamouti_decode,
    alamouti_encode,
    estimate_channel_from_pilots,
)
from .estimators import AlamoutiDecoder, CfoEstimator, ChirpDetector, PulseShaper
from .link import (
    AntennaPath,
    ModemConfig,
    ReceiveResult,
    alamouti_transmit,
    bf_transmit,
    propagate,
    receive_alamouti,
    receive_bf,
)
from .modulation import (
    SrrcSpec,
    bpsk_demodulate,
    bpsk_modulate,
    cascade_isi,
    matched_filter,
    measure_ber,
    pulse_shape,
    srrc_taps,
)
from .preamble import ChirpSpec, PreambleLayout, chirp_waveform, lfsr_sequence, long_pn, short_pn
from .sync import apply_cfo, coarse_cfo_range, detect_packet_offset, estimate_cfo

__all__ = [
    "AlamoutiDecoder",
    "AlamoutiFrame",
    "AntennaPath",
    "CfoEstimator",
    "ChirpDetector",
    "ChirpSpec",
    "ModemConfig",
    "PreambleLayout",
    "PulseShaper",
    "ReceiveResult",
    "SrrcSpec",
    "alamouti_combine",
    "alamouti_decode",
    "alamouti_encode",
    "alamouti_transmit",
    "apply_cfo",
    "bf_transmit",
    "bpsk_demodulate",
    "bpsk_modulate",
    "cascade_isi",
    "chirp_waveform",
    "coarse_cfo_range",
    "detect_packet_offset",
    "estimate_cfo",
    "estimate_channel_from_pilots",
    "lfsr_sequence",
    "long_pn",
    "matched_filter",
    "measure_ber",
    "propagate",
    "pulse_shape",
    "receive_alamouti",
    "receive_bf",
    "short_pn",
    "srrc_taps",
]
