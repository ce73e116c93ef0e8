"""
Subgraph matching pipelines.

* :func:`sot_match` solves one partial fused Gromov-Wasserstein problem
  between the whole source graph and the query.
* :func:`ssot_match` slides a k-hop window over the source, prunes windows
  whose features cannot host the query, and keeps the best-scoring window.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (DegeneratePlan, DisconnectedGraph, DisconnectedQuery,
                     NoCandidates, QueryTooLarge)
from .fgw import DEFAULT_DELTA, DEFAULT_MAX_ITER, FgwProblem, frank_wolfe
from .graph import (_adjacency_lists, _check_compatible, feature_cost_matrix,
                    k_hop_neighborhood, query_radius, structure_matrix)
from .transport import partial_wasserstein_value


@dataclass(frozen=True)
class MatchConfig:
    """Settings shared by both pipelines.

    ``feature_threshold`` is the pruning threshold of the sliding variant;
    :func:`sot_match` ignores it.
    """

    alpha: float = 0.5
    feature_threshold: float = 1.0
    normalize: bool = True
    delta: float = DEFAULT_DELTA
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not self.feature_threshold > 0:
            raise ValueError("feature threshold must be positive")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")


SsotConfig = MatchConfig


@dataclass
class MatchResult:
    matched_nodes: frozenset
    mapping: dict
    objective: float
    plan: np.ndarray
    iterations: int
    converged: bool
    elapsed: float
    candidate_stats: dict = field(default=None)
    center: object = None

    @property
    def m(self):
        return len(self.mapping)


def _problem_from_costs(M, C_s, C_q, cfg, allow_equal=False):
    n, m = M.shape
    if m > n or (m == n and not allow_equal):
        raise QueryTooLarge(f"query too large: {m} query nodes vs {n} source nodes")
    p = np.full(n, 1.0 / n)
    dummy = 1.0 - m / n
    q_hat = np.append(np.full(m, 1.0 / n), dummy if dummy > 0 else 0.0)
    M_hat = np.hstack([M, np.zeros((n, 1))])
    if cfg.normalize:
        fs, ss = n / m, (n / m) ** 2
    else:
        fs = ss = 1.0
    return FgwProblem(M_hat, C_s, C_q, p, q_hat, alpha=cfg.alpha,
                      feature_scale=fs, structure_scale=ss)


def build_sot_problem(source, query, cfg=MatchConfig(), allow_equal=False):
    """Dummy-augmented problem between ``source`` and ``query``.

    The query gets an isolated dummy node of mass ``1 - m/n`` that every
    source node can reach for free. Query graphs as large as the source are
    refused unless ``allow_equal`` is set, in which case the dummy carries no
    mass.
    """
    _check_compatible(source, query)
    n, m = source.n_nodes, query.n_nodes
    if m == 0:
        raise ValueError("query graph is empty")
    if m > n or (m == n and not allow_equal):
        raise QueryTooLarge(f"query too large: {m} query nodes vs {n} source nodes")
    M = feature_cost_matrix(source, query)
    return _problem_from_costs(M, structure_matrix(source),
                               structure_matrix(query), cfg, allow_equal)


def extract_matching(plan):
    """Injective query-to-source assignment read off a plan.

    Solves a maximum-weight assignment between source rows and the
    non-dummy columns of ``plan``. Among equally heavy assignments the one
    using lower source indices is preferred.

    Returns
    -------
    dict
        ``{query_column: source_row}``
    """
    plan = np.asarray(plan, dtype=float)
    W = plan[:, :-1]
    n, m = W.shape
    if m > n:
        raise DegeneratePlan("more query columns than source rows")
    dead = np.flatnonzero(W.max(axis=0, initial=0.0) <= 0)
    if dead.size:
        raise DegeneratePlan(f"query column(s) {dead.tolist()} carry no mass")
    # a row-index penalty far below any meaningful weight breaks exact ties
    scale = W.max()
    tiebreak = (np.arange(n) / max(n, 1))[:, None] * (1e-12 * scale)
    rows, cols = linear_sum_assignment(W - tiebreak, maximize=True)
    return {int(c): int(r) for r, c in zip(rows, cols)}


def _result_from_plan(report, source_ids, query_ids, elapsed, rows=None,
                      stats=None, center=None):
    assignment = extract_matching(report.plan)
    rows = rows if rows is not None else range(len(source_ids))
    rows = list(rows)
    mapping = {query_ids[j]: source_ids[rows[i]] for j, i in sorted(assignment.items())}
    return MatchResult(matched_nodes=frozenset(mapping.values()), mapping=mapping,
                       objective=max(float(report.objective), 0.0),
                       plan=report.plan, iterations=report.iterations,
                       converged=report.converged, elapsed=elapsed,
                       candidate_stats=stats, center=center)


def sot_match(source, query, cfg=MatchConfig()):
    """Match ``query`` inside ``source`` with a single global solve."""
    start = time.perf_counter()
    prob = build_sot_problem(source, query, cfg)
    report = frank_wolfe(prob, delta=cfg.delta, max_iter=cfg.max_iter)
    elapsed = time.perf_counter() - start
    return _result_from_plan(report, source.node_ids, query.node_ids, elapsed)


def candidate_filter(candidate, query, threshold, cost=None):
    """Whether a sliding window may contain the query.

    True iff the window has at least as many nodes as the query and the
    partial transport cost between the features is below ``threshold``.
    ``cost`` optionally supplies the window-by-query feature costs.
    """
    m = query.n_nodes
    if len(candidate) < m:
        return False
    if cost is None:
        cost = feature_cost_matrix(candidate.as_graph(), query)
    # every query column takes 1/n_s of mass at no less than its cheapest
    # cost, so this bound can only reject windows the exact value rejects
    if cost.min(axis=0).sum() / len(candidate) >= threshold:
        return False
    return partial_wasserstein_value(cost) < threshold


def ssot_match(source, query, cfg=MatchConfig()):
    """Sliding-window matching.

    Every source node centers a window made of its ``k``-hop neighborhood,
    ``k`` being the query radius. Windows that pass :func:`candidate_filter`
    are solved as small partial problems with window-local uniform masses;
    the lowest objective wins, ties going to the lowest center index.

    Raises
    ------
    DisconnectedQuery
        The query radius is undefined.
    NoCandidates
        Every window was filtered out; a larger threshold may help.
    """
    start = time.perf_counter()
    _check_compatible(source, query)
    m = query.n_nodes
    if m == 0:
        raise ValueError("query graph is empty")
    if m > source.n_nodes:
        raise QueryTooLarge(
            f"query too large: {m} query nodes vs {source.n_nodes} source nodes")
    try:
        k = query_radius(query)
    except DisconnectedGraph as exc:
        raise DisconnectedQuery("query graph must be connected") from exc

    M_full = feature_cost_matrix(source, query)
    C_src = structure_matrix(source)
    C_q = structure_matrix(query)
    lists = _adjacency_lists(source)
    stats = {"generated": 0, "size_rejected": 0, "feature_rejected": 0,
             "solved": 0}
    best = None
    for v in range(source.n_nodes):
        window = k_hop_neighborhood(source, v, k, adj_lists=lists)
        stats["generated"] += 1
        if len(window) < m:
            stats["size_rejected"] += 1
            continue
        idx = np.asarray(window.member_indices)
        M = M_full[idx]
        if not candidate_filter(window, query, cfg.feature_threshold, cost=M):
            stats["feature_rejected"] += 1
            continue
        prob = _problem_from_costs(M, C_src[np.ix_(idx, idx)], C_q, cfg,
                                   allow_equal=True)
        report = frank_wolfe(prob, delta=cfg.delta, max_iter=cfg.max_iter)
        stats["solved"] += 1
        # strict comparison keeps the lowest center on ties
        if best is None or report.objective < best[0].objective:
            best = (report, idx, v)
    if best is None:
        raise NoCandidates(
            "no sliding subgraph passed the feature filter; "
            "try a larger threshold")
    report, idx, v = best
    elapsed = time.perf_counter() - start
    return _result_from_plan(report, source.node_ids, query.node_ids, elapsed,
                             rows=idx, stats=stats, center=source.node_ids[v])
