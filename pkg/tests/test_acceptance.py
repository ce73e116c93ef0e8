"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, shown in the terminal summary (and
printed directly under ``pytest -s``).
"""

import time

import numpy as np
import pytest

from sotmatch import cli, fgw
from sotmatch.bench import ErConfig, run_benchmark
from sotmatch.fgw import FgwProblem, gradient, objective, objective_terms, tensor_product_apply
from sotmatch.graph import feature_cost_matrix, structure_matrix
from sotmatch.matcher import MatchConfig, sot_match, ssot_match
from sotmatch.transport import solve_transport_lp

from conftest import ACCEPTANCE_LINES, AUDIT
from oracles import (brute_force_matches, finite_difference_gradient,
                     lp_vertex_enumeration, planted_instance, random_feasible_plan,
                     tensor_apply_oracle)


def record(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def random_symmetric(rng, n):
    A = np.triu((rng.random((n, n)) < 0.5).astype(float), 1)
    return A + A.T


def random_problem(rng, n, m, alpha=0.5):
    M = np.hstack([rng.random((n, m)), np.zeros((n, 1))])
    return FgwProblem(M, random_symmetric(rng, n), random_symmetric(rng, m),
                      np.full(n, 1 / n), np.append(np.full(m, 1 / n), 1 - m / n),
                      alpha=alpha, feature_scale=n / m, structure_scale=(n / m) ** 2)


def test_criterion_1_fast_tensor_product_oracle():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst, dummy_ok = 0.0, True
    for _ in range(200):
        n, m = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        C_s, C_q = random_symmetric(rng, n), random_symmetric(rng, m)
        p = np.full(n, 1 / n)
        q = rng.dirichlet(np.ones(m + 1))
        T = random_feasible_plan(rng, p, q)
        out = tensor_product_apply(C_s, C_q, T)
        worst = max(worst, float(np.abs(out - tensor_apply_oracle(C_s, C_q, T)).max()))
        dummy_ok &= bool(np.all(out[:, -1] == 0))
    elapsed = time.perf_counter() - start
    record(1, worst <= 1e-10 and dummy_ok and elapsed < 10,
           f"max entry error {worst:.1e} (tol 1e-10), dummy column exactly zero "
           f"{dummy_ok}, {elapsed:.1f}s (< 10s)")


def test_criterion_2_gradient_check():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(m, 6))
        prob = random_problem(rng, n, m, alpha=float(rng.random()))
        T = random_feasible_plan(rng, prob.p, prob.q_hat)
        fd = finite_difference_gradient(lambda X: objective(prob, X), T, h=1e-6)
        worst = max(worst, float(np.abs(gradient(prob, T) - fd).max()))
    elapsed = time.perf_counter() - start
    record(2, worst <= 1e-5 and elapsed < 30,
           f"max |grad - FD| {worst:.1e} (tol 1e-5), {elapsed:.1f}s (< 30s)")


def test_criterion_3_normalized_term_bounds():
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    lo, hi = np.inf, -np.inf
    for _ in range(100):
        m = int(rng.integers(1, 7))
        n = int(rng.integers(m, 10))
        prob = random_problem(rng, n, m)
        T = random_feasible_plan(rng, prob.p, prob.q_hat)
        terms = objective_terms(prob, T)
        lo, hi = min(lo, *terms), max(hi, *terms)
    elapsed = time.perf_counter() - start
    record(3, lo >= 0 and hi <= 1 + 1e-12 and elapsed < 10,
           f"terms within [{lo:.3g}, {hi:.6g}] (need [0, 1+1e-12]), {elapsed:.1f}s")


def test_criterion_4_descent_and_feasibility():
    # a dedicated battery; the autouse audit covers every other run as well
    rng = np.random.default_rng(4)
    runs_before = AUDIT.runs
    for _ in range(60):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(m + 1, 25))
        fgw.frank_wolfe(random_problem(rng, n, m, alpha=float(rng.random())))
    for _ in range(10):
        source, query, _ = planted_instance(rng, 12, 3)
        sot_match(source, query)
        ssot_match(source, query)
    runs = AUDIT.runs - runs_before
    record(4, not AUDIT.failures and runs >= 80,
           f"{runs} solver runs in battery, {AUDIT.iterates} iterates audited so far, "
           f"{len(AUDIT.failures)} violations (trace slack 1e-12, marginals 1e-9)")


def test_criterion_5_lp_exactness():
    rng = np.random.default_rng(5)
    start = time.perf_counter()
    worst = 0.0
    for n, m in [(3, 3)] * 50 + [(4, 3)] * 50:
        C = rng.random((n, m))
        p, q = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(m))
        q[-1] += p.sum() - q.sum()
        worst = max(worst, abs(solve_transport_lp(C, p, q).value
                               - lp_vertex_enumeration(C, p, q)))
    elapsed = time.perf_counter() - start
    record(5, worst <= 1e-10 and elapsed < 30,
           f"max |simplex - enumeration| {worst:.1e} (tol 1e-10), {elapsed:.1f}s")


def test_criterion_6_brute_force_agreement():
    rng = np.random.default_rng(6)
    start = time.perf_counter()
    certified = sot_hits = ssot_hits = 0
    for _ in range(50):
        m = int(rng.integers(2, 5))
        n = int(rng.integers(m + 2, 9))
        source, query, rows = planted_instance(rng, n, m)
        scored = brute_force_matches(feature_cost_matrix(source, query),
                                     structure_matrix(source), structure_matrix(query))
        certified += scored[0] == (0.0, tuple(rows)) and scored[1][0] > 0
        planted = frozenset(rows)
        sot_hits += sot_match(source, query).matched_nodes == planted
        ssot_hits += ssot_match(source, query).matched_nodes == planted
    elapsed = time.perf_counter() - start
    record(6, certified == 50 and sot_hits >= 45 and ssot_hits >= 48 and elapsed < 120,
           f"certified unique zero-cost {certified}/50, SOT {sot_hits}/50 (>= 45), "
           f"SSOT {ssot_hits}/50 (>= 48), {elapsed:.1f}s")


@pytest.mark.slow
def test_criterion_7_noise_free_reproduction():
    cfg = ErConfig(n=100, m=5, feature_model="levels20", noise_sigma=0.0,
                   trials=100, seed=0)
    start = time.perf_counter()
    _, summary = run_benchmark(cfg, "ssot",
                               MatchConfig(alpha=0.5, feature_threshold=1e-9))
    elapsed = time.perf_counter() - start
    rate = summary["success_rate"]
    record(7, rate >= 0.90 and elapsed < 600,
           f"SSOT success {rate:.2f} (>= 0.90) on 100 levels20 trials, {elapsed:.0f}s")


@pytest.mark.slow
def test_criterion_8_noise_trend():
    start = time.perf_counter()
    rates = {}
    for sigma in (0.0, 0.2, 0.4):
        cfg = ErConfig(n=100, m=5, feature_model="uniform", noise_sigma=sigma,
                       trials=50, seed=0)
        _, summary = run_benchmark(cfg, "ssot",
                                   MatchConfig(alpha=0.5, feature_threshold=1.0))
        rates[sigma] = summary["success_rate"]
    elapsed = time.perf_counter() - start
    trend = all(rates[s] <= rates[0.0] + 0.1 for s in (0.2, 0.4))
    record(8, trend and rates[0.0] >= 0.85 and elapsed < 900,
           "SSOT success by sigma " + ", ".join(f"{s}: {r:.2f}" for s, r in rates.items())
           + f" (sigma=0 >= 0.85, others <= sigma0 + 0.1), {elapsed:.0f}s")


@pytest.mark.slow
def test_criterion_9_query_time_scaling():
    times = {"ssot": {}, "sot": {}}
    for n in (100, 200, 400):
        for method in times:
            # the noise-free setup: discrete features, near-zero threshold
            cfg = ErConfig(n=n, m=5, feature_model="levels20", trials=10, seed=0)
            _, summary = run_benchmark(
                cfg, method, MatchConfig(alpha=0.5, feature_threshold=1e-9))
            times[method][n] = summary["mean_query_time_s"]
    ssot, sot = times["ssot"], times["sot"]
    linear = all(ssot[n] <= 2 * (n / 100) * ssot[100] for n in (200, 400))
    ordered = sot[400] > ssot[400]
    detail = ("mean SSOT s " + ", ".join(f"n={n}: {t:.4f}" for n, t in ssot.items())
              + f" (linear within 2x: {linear}); mean SOT s "
              + ", ".join(f"n={n}: {t:.4f}" for n, t in sot.items())
              + f" (SOT > SSOT at n=400: {ordered})")
    record(9, linear and ordered, detail)


def test_criterion_10_determinism(tmp_path):
    argv = ["bench", "--n", "100", "--m", "5", "--trials", "5", "--noise", "0.1",
            "--method", "ssot", "--seed", "7", "--features", "uniform"]
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        assert cli.main(argv + ["--csv", str(path), "--no-timing"]) == 0
    identical = paths[0].read_bytes() == paths[1].read_bytes()

    # with timing on, everything except the wall-clock column must agree
    timed = [tmp_path / "c.csv", tmp_path / "d.csv"]
    for path in timed:
        assert cli.main(argv + ["--csv", str(path)]) == 0

    def strip_time(path):
        rows = [line.split(",") for line in path.read_text().splitlines()]
        return [r[:4] + r[5:] for r in rows]

    stable = strip_time(timed[0]) == strip_time(timed[1]) == strip_time(paths[0])
    record(10, identical and stable,
           f"--no-timing CSVs byte-identical {identical}; timed runs equal outside "
           f"query_time_s {stable}")
