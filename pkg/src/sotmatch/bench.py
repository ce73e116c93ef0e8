"""
Planted-query benchmark on Erdős–Rényi graphs.

A connected ER query graph is planted in a larger sparse random source
graph; the matcher has to recover the planted node set.
"""

import csv
import io
import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import SotMatchError
from .graph import Graph, is_connected
from .matcher import MatchConfig, sot_match, ssot_match

FEATURE_MODELS = ("uniform", "levels20")
METHODS = {"sot": sot_match, "ssot": ssot_match}

RECORD_FIELDS = ["trial", "method", "success", "objective", "query_time_s", "seed"]
SUMMARY_FIELDS = ["method", "trials", "success_rate", "mean_query_time_s"]


@dataclass(frozen=True)
class ErConfig:
    n: int = 100
    m: int = 5
    query_edge_prob: float = 0.5
    avg_degree: float = 3.0
    feature_model: str = "uniform"
    noise_sigma: float = 0.0
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.m < self.n:
            raise ValueError("need 0 < m < n")
        if not 0.0 <= self.query_edge_prob <= 1.0:
            raise ValueError("query_edge_prob must lie in [0, 1]")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError("avg_degree too large for n")
        if self.feature_model not in FEATURE_MODELS:
            raise ValueError(f"feature_model must be one of {FEATURE_MODELS}")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        if self.trials < 0:
            raise ValueError("trials must be nonnegative")

    @property
    def edge_prob(self):
        return self.avg_degree / (self.n - 1)


@dataclass
class BenchRecord:
    trial: int
    method: str
    success: bool
    objective: float
    query_time_s: float
    seed: int


def trial_seed(seed, trial):
    """Per-trial integer seed, independent of how many trials are run."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial,))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def _sample_features(rng, model, size):
    if model == "uniform":
        return rng.random(size)
    return rng.integers(1, 21, size=size) / 20.0


def _connected_er(rng, m, prob):
    while True:
        upper = np.triu(rng.random((m, m)) < prob, 1)
        adj = (upper | upper.T).astype(float)
        g = Graph(tuple(range(m)), np.zeros((m, 1)), adj)
        if is_connected(g):
            return adj


def generate_er_instance(cfg, seed):
    """Sample ``(source, query, planted)`` for one trial.

    The query is ER(m, ``query_edge_prob``), resampled until connected. The
    source holds a copy of it at random positions among ``n`` nodes; all
    other node pairs are joined with probability ``avg_degree / (n - 1)``.
    Source features come from ``cfg.feature_model``; query features are the
    planted features plus Gaussian noise.
    """
    rng = np.random.default_rng(seed)
    n, m = cfg.n, cfg.m
    q_adj = _connected_er(rng, m, cfg.query_edge_prob)

    planted = rng.permutation(n)[:m]
    upper = np.triu(rng.random((n, n)) < cfg.edge_prob, 1)
    adj = (upper | upper.T).astype(float)
    adj[np.ix_(planted, planted)] = q_adj

    feats = _sample_features(rng, cfg.feature_model, n)
    noise = rng.normal(0.0, cfg.noise_sigma, size=m) if cfg.noise_sigma > 0 \
        else np.zeros(m)
    source = Graph(tuple(range(n)), feats[:, None], adj)
    query = Graph(tuple(range(m)), (feats[planted] + noise)[:, None], q_adj)
    return source, query, frozenset(int(i) for i in planted)


def run_benchmark(cfg, method="ssot", match_cfg=MatchConfig(), timing=True):
    """Run ``cfg.trials`` planted-query trials with one matcher.

    A trial succeeds when the matched node set equals the planted set.
    Matcher exceptions count as failures. Instance generation is not timed.

    Returns
    -------
    records : list of BenchRecord
    summary : dict
        ``method``, ``trials``, ``success_rate``, ``mean_query_time_s``.
    """
    match = METHODS[method]
    records = []
    for t in range(cfg.trials):
        seed = trial_seed(cfg.seed, t)
        source, query, planted = generate_er_instance(cfg, seed)
        start = time.perf_counter()
        try:
            res = match(source, query, match_cfg)
        except (SotMatchError, ValueError, ArithmeticError):
            success, obj = False, math.nan
        else:
            success, obj = res.matched_nodes == planted, res.objective
        elapsed = time.perf_counter() - start if timing else math.nan
        records.append(BenchRecord(t, method.upper(), bool(success), float(obj),
                                   elapsed, seed))
    return records, summarize(records, method)


def summarize(records, method):
    trials = len(records)
    wins = sum(r.success for r in records)
    times = [r.query_time_s for r in records]
    return {
        "method": method.upper(),
        "trials": trials,
        "success_rate": wins / trials if trials else math.nan,
        "mean_query_time_s": float(np.mean(times)) if trials else math.nan,
    }


def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_FIELDS)
    for r in records:
        w.writerow([r.trial, r.method, int(r.success), _num(r.objective),
                    _num(r.query_time_s), r.seed])
    return buf.getvalue()


def summary_to_csv(summaries):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_FIELDS)
    for s in summaries:
        w.writerow([s["method"], s["trials"], _num(s["success_rate"]),
                    _num(s["mean_query_time_s"])])
    return buf.getvalue()


def _num(x):
    # unmeasured values are left empty rather than written as nan
    return "" if math.isnan(x) else repr(float(x))
