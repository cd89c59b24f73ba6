import csv
import io
import json
import math

import pytest

from kerr_cluster.circuits import Circuit
from kerr_cluster.experiment import (
    CSV_FIELDS,
    ExperimentConfig,
    run_experiment,
    run_shot,
    shot_rng,
    stats_to_csv,
    stats_to_json,
    sweep,
)
from kerr_cluster.homodyne import error_probability, peak_separation
from kerr_cluster.state import InvalidParameterError, norm


def theta_for(alpha, x_d):
    return math.acos(1 - x_d / (2 * alpha))


def within_3_sigma(k, n, p):
    return abs(k / n - p) <= 3 * math.sqrt(p * (1 - p) / n)


class TestConfig:
    def test_defaults(self):
        c = ExperimentConfig()
        assert c.circuit is Circuit.CHI and c.alpha == 400 and c.theta == 0.1
        assert peak_separation(c.alpha, c.theta) == pytest.approx(4.0, abs=0.01)

    @pytest.mark.parametrize("kwargs", [
        {"alpha": 0.0}, {"alpha": -1.0}, {"theta": 0.0}, {"theta": math.pi / 2},
        {"shots": 0}, {"seed": -1}, {"seed": 2**64}, {"format": "xml"},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(**kwargs)

    def test_bad_circuit(self):
        with pytest.raises(ValueError):
            ExperimentConfig(circuit="ghz")


class TestDeterminism:
    def test_shot_streams_are_independent_of_order(self):
        a = [shot_rng(5, i).random() for i in range(5)]
        b = [shot_rng(5, i).random() for i in reversed(range(5))][::-1]
        assert a == b and len(set(a)) == 5

    def test_same_seed_same_stats(self):
        c = ExperimentConfig(shots=300, seed=7)
        assert stats_to_json(c, run_experiment(c)) == stats_to_json(c, run_experiment(c))

    def test_different_seed(self):
        a = run_experiment(ExperimentConfig(shots=300, seed=1))
        b = run_experiment(ExperimentConfig(shots=300, seed=2))
        assert a.parity_histogram != b.parity_histogram

    def test_parallel_matches_serial(self):
        serial = ExperimentConfig(circuit="cluster", shots=200, seed=3)
        parallel = ExperimentConfig(circuit="cluster", shots=200, seed=3, workers=2)
        assert run_experiment(serial) == run_experiment(parallel)

    def test_run_shot_reproducible(self):
        c = ExperimentConfig(seed=11)
        assert run_shot(c, 4).to_json() == run_shot(c, 4).to_json()


class TestStatistics:
    def test_heralded_fraction_with_feed_forward(self):
        s = run_experiment(ExperimentConfig(shots=500, seed=0))
        assert s.heralded_success_fraction == 1.0
        assert s.shots == 500
        for h in s.parity_histogram:
            assert h["even"] + h["odd"] == 500

    def test_final_states_normalized(self):
        c = ExperimentConfig(circuit="cluster", seed=4)
        for i in range(50):
            assert norm(run_shot(c, i).final_state) == pytest.approx(1, abs=1e-12)

    @pytest.mark.parametrize("circuit", ["chi", "cluster"])
    def test_misclassification_within_3_sigma(self, circuit):
        c = ExperimentConfig(circuit=circuit, shots=1000, seed=21)
        s = run_experiment(c)
        k = round(s.misclassification_rate_empirical * 3 * c.shots)
        assert within_3_sigma(k, 3 * c.shots, s.misclassification_rate_analytic)
        assert s.misclassification_rate_analytic == pytest.approx(error_probability(400, 0.1))

    def test_x_d_8_fidelity(self):
        c = ExperimentConfig(alpha=400.0, theta=theta_for(400.0, 8), shots=10_000, seed=0)
        s = run_experiment(c)
        assert s.true_fidelity_mean >= 1 - 3 * 3 * error_probability(c.alpha, c.theta)

    def test_large_separation_no_misclassification(self):
        c = ExperimentConfig(circuit="cluster", alpha=400.0, theta=theta_for(400.0, 12),
                             shots=10_000, seed=0)
        assert run_experiment(c).misclassification_rate_empirical == 0.0

    def test_no_feed_forward_heralding(self):
        c = ExperimentConfig(shots=4000, seed=2, feed_forward=False)
        s = run_experiment(c)
        assert abs(s.heralded_success_fraction - 1 / 8) < 0.02
        assert s.true_fidelity_mean > 0.9

    def test_nothing_heralded(self):
        c = ExperimentConfig(shots=1, seed=0, feed_forward=False)
        s = run_experiment(c)
        if s.heralded_success_fraction == 0:
            assert s.true_fidelity_mean is None
        assert "true_fidelity_mean" in json.loads(stats_to_json(c, s))


class TestSweep:
    def test_single_point_equals_run(self):
        [(config, stats)] = sweep([400.0], [0.1], shots=200, seed=9)
        assert stats == run_experiment(ExperimentConfig(shots=200, seed=9))
        assert config.alpha == 400.0

    def test_row_count(self):
        rows = sweep([300.0, 400.0], [0.1, 0.12, 0.14], shots=5, seed=0)
        assert len(rows) == 6
        table = list(csv.DictReader(io.StringIO(stats_to_csv(rows))))
        assert len(table) == 6
        assert list(table[0]) == CSV_FIELDS

    def test_monotone_in_separation(self):
        alpha = 100.0
        thetas = [theta_for(alpha, x_d) for x_d in (1.0, 2.0, 3.0)]
        rows = sweep([alpha], thetas, shots=2000, seed=5)
        rates = [s.misclassification_rate_empirical for _, s in rows]
        assert rates[0] > rates[1] > rates[2]


def test_json_schema():
    c = ExperimentConfig(shots=20, seed=0)
    doc = json.loads(stats_to_json(c, run_experiment(c)))
    assert doc["schema"] == 1
    assert {"shots", "heralded_success_fraction", "true_fidelity_mean",
            "misclassification_rate_empirical", "misclassification_rate_analytic",
            "parity_histogram"} <= set(doc)
    assert len(doc["parity_histogram"]) == 3
