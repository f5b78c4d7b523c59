import math

import numpy as np
import pytest

from uwmimo.mimo_analysis import Scheme, capacity, channel_matrix, coherence_time, snr_with_errors, throughput_upper_bound
from uwmimo.scenario import (
    CsvTable,
    ScenarioConfig,
    deploy_random,
    run_baseband_ber,
    run_comm_time_sweep,
    run_snr_trace,
    run_sync_error_sweep,
    run_throughput_sweep,
)
from uwmimo.scenario.ber import ber_spread
from uwmimo.scenario.runner import hybrid_pure_ratio, simulate_deployment, trial_rng

SMALL = ScenarioConfig(trials=4, min_nodes=2, max_nodes=4)


class TestGeometry:
    def test_master_only(self):
        g = deploy_random(0, 10.0, np.random.default_rng(0))
        assert g.n_nodes == 1 and g.slaves.shape == (0, 3)
        assert g.distances_to_base().tolist() == [5.0]

    def test_within_radius(self):
        for seed in range(20):
            g = deploy_random(5, 10.0, np.random.default_rng(seed), min_spacing_m=0.5)
            assert np.all(g.slave_distances() <= 10.0)
            nodes = g.nodes
            gaps = [np.linalg.norm(a - b) for i, a in enumerate(nodes) for b in nodes[i + 1:]]
            assert min(gaps) >= 0.5

    def test_deterministic(self):
        a = deploy_random(5, 10.0, np.random.default_rng(3))
        b = deploy_random(5, 10.0, np.random.default_rng(3))
        np.testing.assert_array_equal(a.nodes, b.nodes)

    def test_uniform_over_disc(self):
        g = deploy_random(4000, 10.0, np.random.default_rng(1))
        # half the area lies inside radius 10/sqrt(2)
        assert np.mean(g.slave_distances() <= 10 / math.sqrt(2)) == pytest.approx(0.5, abs=0.03)

    def test_impossible_spacing(self):
        with pytest.raises(ValueError):
            deploy_random(50, 1.0, np.random.default_rng(0), min_spacing_m=1.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            deploy_random(-1, 10.0, 0)
        with pytest.raises(ValueError):
            deploy_random(2, 0.0, 0)


class TestTable:
    def test_csv(self, tmp_path):
        t = CsvTable(["a", "b"], [[1, 0.1], [2.5, -3e-20]])
        assert t.to_csv() == "a,b\n1.0,0.1\n2.5,-3e-20\n"
        t.write(tmp_path / "t.csv")
        assert CsvTable.read(tmp_path / "t.csv") == t

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            CsvTable(["a"], [[math.inf]])
        with pytest.raises(ValueError):
            CsvTable(["a"], [[math.nan]])

    def test_rejects_ragged(self):
        with pytest.raises(ValueError):
            CsvTable(["a", "b"], [[1.0]])


def test_trial_streams_independent_of_order():
    a = trial_rng(7, 5, 3).integers(2**63, size=4)
    trial_rng(7, 5, 2).integers(2**63, size=100)
    b = trial_rng(7, 5, 3).integers(2**63, size=4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, trial_rng(7, 5, 4).integers(2**63, size=4))


class TestSyncSweep:
    table = run_sync_error_sweep(ScenarioConfig(trials=5), seed=1)

    def test_zero_row(self):
        row = self.table.rows[0]
        assert row[0] == 0 and not any(row[1:])

    def test_ratio_is_thousand(self):
        mi = self.table.column("mi_freq_error_hz")[1:]
        ac = self.table.column("acoustic_freq_error_hz")[1:]
        np.testing.assert_allclose(ac / mi, 1000.0, rtol=1e-12)

    def test_mi_time_error_smaller(self):
        mi = self.table.column("mi_time_error_s")[1:]
        ac = self.table.column("acoustic_time_error_s")[1:]
        assert np.all(mi < ac)


class TestSnrTrace:
    table = run_snr_trace(ScenarioConfig(), seed=3)

    def test_shape(self):
        t = self.table.column("time_s")
        assert t[0] == 0 and t[-1] == pytest.approx(1.5) and len(t) == 1501

    def test_bound_constant(self):
        for scheme in ("bf", "stbc"):
            bound = self.table.column(f"{scheme}_bound_db")
            assert np.all(bound == bound[0])

    def test_below_bound(self):
        for scheme in ("bf", "stbc"):
            bound = self.table.column(f"{scheme}_bound_db")
            for medium in ("mi", "acoustic"):
                assert np.all(self.table.column(f"{scheme}_{medium}_db") <= bound + 1e-9)

    def test_mi_starts_near_bound(self):
        assert self.table.column("bf_mi_db")[0] >= self.table.column("bf_bound_db")[0] - 1.0


class TestNodeSweeps:
    comm = run_comm_time_sweep(SMALL, seed=5)
    thr = run_throughput_sweep(SMALL, seed=5)

    def test_node_counts(self):
        assert self.comm.column("n_nodes").tolist() == [2, 3, 4]

    def test_capped_by_coherence(self):
        tc = coherence_time(SMALL.acoustic_frequency_hz, SMALL.doppler_scale)
        for col in self.comm.header[1:-1]:
            assert np.all(self.comm.column(col) <= tc + 1e-12)
        assert np.all(self.comm.column("coherence_time_s") == tc)

    def test_deterministic(self):
        assert run_comm_time_sweep(SMALL, seed=5).to_csv() == self.comm.to_csv()

    def test_seed_matters(self):
        assert run_throughput_sweep(SMALL, seed=6).to_csv() != self.thr.to_csv()

    def test_ratio_helper(self):
        t = CsvTable(["n_nodes", "bf_hybrid", "bf_pure"], [[2, 1.0, 0.0], [3, 2.0, 0.5]])
        ratio = hybrid_pure_ratio(t, "bf")
        assert ratio[0] == math.inf and ratio[1] == 4.0


def test_throughput_without_overhead_is_capacity():
    trial = simulate_deployment(SMALL, 3, trial_rng(1, 3, 0))
    states = trial.states["mi"]
    snr0 = snr_with_errors(states, trial.budget, Scheme.BF, 0.0)
    c = capacity(snr0, channel_matrix(states, SMALL.acoustic_frequency_hz), 1)
    assert throughput_upper_bound(0.2, c, 0.0, 0.0) == pytest.approx(c, rel=1e-12)


def test_deployment_shares_draws_between_media():
    trial = simulate_deployment(SMALL, 4, trial_rng(2, 4, 0))
    mi, ac = trial.states["mi"], trial.states["acoustic"]
    assert [s.envelope for s in mi] == [s.envelope for s in ac]
    np.testing.assert_allclose([s.freq_error_hz * 1000 for s in mi], [s.freq_error_hz for s in ac], rtol=1e-12)
    assert trial.sync_time_s["acoustic"] > trial.sync_time_s["mi"]


class TestBer:
    tiny = ScenarioConfig(ber_trials=2, ber_payload_bits=200, ber_distances_m=(0.2, 0.5))

    def test_noiseless_perfect_sync(self):
        config = self.tiny.replace(ber_noise=False, estimation_error_std_hz=0.0)
        table = run_baseband_ber(config, seed=0)
        for col in table.header[2:]:
            assert np.all(table.column(col) == 0)

    def test_columns_and_determinism(self):
        a = run_baseband_ber(self.tiny, seed=4)
        assert a.header == ("distance_m", "direct_snr_db", "bf_mi_ber", "bf_acoustic_ber", "stbc_mi_ber",
                            "stbc_acoustic_ber")
        assert a.to_csv() == run_baseband_ber(self.tiny, seed=4).to_csv()
        assert np.all(np.diff(a.column("direct_snr_db")) < 0)

    def test_spread(self):
        t = CsvTable(["distance_m", "bf_mi_ber"], [[1, 0.01], [2, 0.1]])
        assert ber_spread(t, "bf") == pytest.approx(10.0)
        t0 = CsvTable(["distance_m", "bf_mi_ber"], [[1, 0.0], [2, 0.1]])
        assert ber_spread(t0, "bf") == math.inf
