import dataclasses
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from uwmimo.mimo_analysis import db_to_linear
from uwmimo.scenario import ConfigError, ScenarioConfig, load_config, parse_config, render_config
from uwmimo.scenario.config import parse_assignments
from uwmimo.sync_protocol import ACOUSTIC, MI

positive = st.floats(1e-6, 1e9, allow_nan=False, allow_infinity=False)
FIELD_VALUES = {
    "float": positive,
    "int": st.integers(1, 2**62),
    "bool": st.booleans(),
    "tuple": st.lists(st.floats(0.01, 1e3), min_size=1, max_size=6).map(tuple),
}


def _kind(f):
    value = getattr(ScenarioConfig(), f.name)
    return type(value).__name__


@st.composite
def configs(draw):
    base = ScenarioConfig()
    names = draw(st.sets(st.sampled_from([f.name for f in dataclasses.fields(base)]), max_size=8))
    changes = {}
    for name in names:
        kind = _kind(next(f for f in dataclasses.fields(base) if f.name == name))
        if kind == "str":
            if name == "stbc_model":
                changes[name] = draw(st.sampled_from(["printed", "coherent"]))
            else:
                changes[name] = draw(st.sampled_from(["thorp", "0.0", "0.002"]))
        else:
            changes[name] = draw(FIELD_VALUES[kind])
    try:
        return base.replace(**changes)
    except ConfigError:
        assume(False)


class TestDefaults:
    def test_shipped_file_matches_dataclass(self):
        assert ScenarioConfig.default() == ScenarioConfig()

    def test_calibration_values(self):
        c = ScenarioConfig.default()
        assert (c.tx_power_mw, c.noise_power_mw, c.snr_threshold_db) == (10.0, 9.81e-3, 25.0)
        assert db_to_linear(c.snr_threshold_db) == pytest.approx(316.23, abs=0.01)
        assert (c.n_slaves, c.radius_m, c.trials) == (5, 10.0, 100)
        assert (c.min_nodes, c.max_nodes) == (2, 20)
        assert (c.uplink_bits, c.downlink_bits, c.sync_nodes, c.sync_distance_m) == (100, 200, 10, 20.0)

    def test_media(self):
        c = ScenarioConfig.default()
        assert c.mi_medium == MI
        assert c.acoustic_medium.bandwidth_hz == ACOUSTIC.bandwidth_hz
        assert c.acoustic_medium.multiplier == pytest.approx(ACOUSTIC.multiplier, rel=1e-15)

    def test_absorption(self):
        assert ScenarioConfig(absorption="0.01").absorption_model()(1e4) == 0.01
        assert ScenarioConfig().absorption_model()(1e4) > 0


class TestRoundTrip:
    def test_default(self):
        c = ScenarioConfig()
        assert parse_config(render_config(c)) == c

    @settings(max_examples=200)
    @given(configs())
    def test_any(self, config):
        assert parse_config(render_config(config)) == config

    def test_large_seed_exact(self):
        c = ScenarioConfig(rng_seed=2**64 - 1)
        assert parse_config(render_config(c)).rng_seed == 2**64 - 1


class TestParsing:
    def test_comments_and_blank_lines(self):
        c = parse_config("# header\n\ntrials = 7   # fewer\nradius_m=2.5\n")
        assert c.trials == 7 and c.radius_m == 2.5

    def test_tuple_and_bool(self):
        c = parse_config("ber_distances_m = 0.1, 0.2\nber_noise = False\n")
        assert c.ber_distances_m == (0.1, 0.2) and c.ber_noise is False

    def test_int_written_as_float(self):
        assert parse_config("trials = 1e2").trials == 100

    @pytest.mark.parametrize("text", [
        "bogus = 1", "trials", "trials = 2.5", "trials = abc", "ber_noise = maybe", "radius_m = -1",
        "trials = 0", "stbc_model = other", "absorption = -0.1", "absorption = wet", "radius_m = nan",
        "ber_payload_bits = 11", "max_nodes = 1", "trials = 1e400",
    ])
    def test_rejects(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_error_names_line(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config("trials = 3\nnot a line\n")


class TestLoad:
    def test_layers(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("trials = 3\nradius_m = 4\n")
        c = load_config(path, ["radius_m = 6"])
        assert (c.trials, c.radius_m) == (3, 6.0)
        assert c.n_slaves == ScenarioConfig().n_slaves

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_config(tmp_path / "nope.cfg")

    def test_overrides_only(self):
        assert parse_assignments(["trials=9"]).trials == 9
        assert math.isfinite(load_config(None, ["doppler_scale = 2e-4"]).doppler_scale)
