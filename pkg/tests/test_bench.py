import csv
import io
import itertools
import math

import numpy as np
import pytest

from sotmatch.bench import (RECORD_FIELDS, SUMMARY_FIELDS, BenchRecord, ErConfig,
                            generate_er_instance, records_to_csv, run_benchmark,
                            summarize, summary_to_csv, trial_seed)
from sotmatch.graph import feature_cost_matrix, is_connected, structure_matrix
from sotmatch.matcher import MatchConfig

from oracles import brute_force_matches


class TestGenerate:
    def test_deterministic(self):
        cfg = ErConfig(n=40, feature_model="levels20", noise_sigma=0.1)
        a = generate_er_instance(cfg, 17)
        b = generate_er_instance(cfg, 17)
        assert a[0].same_as(b[0]) and a[1].same_as(b[1]) and a[2] == b[2]
        c = generate_er_instance(cfg, 18)
        assert not (a[0].same_as(c[0]) and a[2] == c[2])

    def test_noise_free_copies(self):
        source, query, planted = generate_er_instance(ErConfig(n=30), 4)
        rows = sorted(planted)
        np.testing.assert_array_equal(np.sort(query.features[:, 0]),
                                      np.sort(source.features[rows, 0]))

    @pytest.mark.parametrize("model", ["uniform", "levels20"])
    def test_sizes_and_planted_block(self, model):
        cfg = ErConfig(n=100, m=5, feature_model=model)
        source, query, planted = generate_er_instance(cfg, trial_seed(0, 3))
        assert source.n_nodes == 100 and query.n_nodes == 5
        assert len(planted) == 5
        assert is_connected(query)
        # some ordering of the planted nodes copies both features and edges
        copies = [perm for perm in itertools.permutations(sorted(planted))
                  if np.array_equal(source.features[list(perm)], query.features)
                  and np.array_equal(source.adjacency[np.ix_(perm, perm)],
                                     query.adjacency)]
        assert copies

    def test_levels_are_discrete(self):
        source, _, _ = generate_er_instance(ErConfig(n=200, feature_model="levels20"), 1)
        k = source.features[:, 0] * 20
        np.testing.assert_allclose(k, np.round(k), atol=1e-12)
        assert k.min() >= 1 and k.max() <= 20

    def test_noise_applied_to_query_only(self):
        cfg = ErConfig(n=30, noise_sigma=0.3)
        source, query, planted = generate_er_instance(cfg, 2)
        clean, _, planted0 = generate_er_instance(ErConfig(n=30), 2)
        np.testing.assert_array_equal(source.features, clean.features)
        assert planted == planted0
        assert not np.isin(query.features[:, 0], source.features[:, 0]).all()

    def test_average_degree_concentrates(self):
        cfg = ErConfig(n=100)
        degrees = [generate_er_instance(cfg, trial_seed(9, t))[0].adjacency.sum() / 100
                   for t in range(100)]
        assert 2.5 <= float(np.mean(degrees)) <= 3.5

    def test_trial_seeds_are_stable(self):
        assert trial_seed(0, 5) == trial_seed(0, 5)
        assert len({trial_seed(0, t) for t in range(200)}) == 200

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ErConfig(n=5, m=5)
        with pytest.raises(ValueError):
            ErConfig(feature_model="gaussian")
        with pytest.raises(ValueError):
            ErConfig(noise_sigma=-1)


class TestRunBenchmark:
    def test_trivially_recoverable(self):
        cfg = ErConfig(n=8, m=3, trials=1, seed=2)
        source, query, planted = generate_er_instance(cfg, trial_seed(2, 0))
        scored = brute_force_matches(feature_cost_matrix(source, query),
                                     structure_matrix(source),
                                     structure_matrix(query))
        assert scored[0][0] == 0.0 and scored[1][0] > 0
        assert frozenset(scored[0][1]) == planted
        records, summary = run_benchmark(cfg, "sot")
        assert summary["success_rate"] == 1.0
        assert records[0].success and records[0].method == "SOT"

    def test_all_failures(self):
        cfg = ErConfig(n=20, m=3, trials=4, noise_sigma=2.0)
        records, summary = run_benchmark(
            cfg, "ssot", MatchConfig(feature_threshold=1e-12))
        assert summary["success_rate"] == 0.0
        assert all(not r.success and math.isnan(r.objective) for r in records)
        assert summary["trials"] == 4

    def test_success_rate_is_exact_fraction(self):
        recs = [BenchRecord(t, "SSOT", t % 3 == 0, 0.0, 0.1, 0) for t in range(7)]
        assert summarize(recs, "ssot")["success_rate"] == 3 / 7

    def test_timing_off(self):
        records, summary = run_benchmark(ErConfig(n=12, m=3, trials=2), "ssot",
                                         timing=False)
        assert all(math.isnan(r.query_time_s) for r in records)
        assert math.isnan(summary["mean_query_time_s"])

    def test_timing_nonnegative(self):
        records, summary = run_benchmark(ErConfig(n=12, m=3, trials=2), "sot")
        assert all(r.query_time_s >= 0 for r in records)
        assert summary["mean_query_time_s"] >= 0


class TestCsv:
    def test_schemas(self):
        records, summary = run_benchmark(ErConfig(n=12, m=3, trials=3), "ssot")
        rows = list(csv.reader(io.StringIO(records_to_csv(records))))
        assert rows[0] == RECORD_FIELDS == ["trial", "method", "success", "objective",
                                            "query_time_s", "seed"]
        assert len(rows) == 4
        assert [r[0] for r in rows[1:]] == ["0", "1", "2"]
        srows = list(csv.reader(io.StringIO(summary_to_csv([summary]))))
        assert srows[0] == SUMMARY_FIELDS == ["method", "trials", "success_rate",
                                              "mean_query_time_s"]
        assert float(srows[1][2]) == summary["success_rate"]

    def test_nan_written_empty(self):
        rec = BenchRecord(0, "SOT", False, math.nan, math.nan, 1)
        line = records_to_csv([rec]).splitlines()[1]
        assert line == "0,SOT,0,,,1"
