"""
Exact discrete optimal transport.

:func:`solve_transport_lp` solves

.. math::
    \\min_{T \\geq 0,\\ T 1 = p,\\ T^\\top 1 = q} \\langle C, T \\rangle

with the transportation simplex (MODI potentials on a spanning-tree basis).
The returned plan is a vertex of the transportation polytope, which is what
the Frank-Wolfe linear minimization step needs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (InfeasibleMarginals, NonFiniteCost, ShapeMismatch,
                     SolverError)

MASS_TOL = 1e-12
# consecutive degenerate pivots tolerated before switching to Bland's rule
_DEGENERATE_RUN = 20


@dataclass(frozen=True)
class Marginals:
    """Source masses ``p`` and target masses ``q``."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).ravel()
        q = np.asarray(self.q, dtype=float).ravel()
        if np.any(p < 0) or np.any(q < 0):
            raise InfeasibleMarginals("marginals must be nonnegative")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
            raise InfeasibleMarginals("marginals must be finite")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def imbalance(self):
        return float(self.p.sum() - self.q.sum())


@dataclass
class TransportPlan:
    matrix: np.ndarray
    value: float
    pivots: int = 0

    @property
    def shape(self):
        return self.matrix.shape


def _northwest_corner(a, b):
    """Initial basis: ``n + m - 1`` cells, degenerate ones carry zero flow."""
    n, m = len(a), len(b)
    a = a.copy()
    b = b.copy()
    rows, cols, flows = [], [], []
    i = j = 0
    while True:
        x = min(a[i], b[j])
        rows.append(i)
        cols.append(j)
        flows.append(x)
        a[i] -= x
        b[j] -= x
        if i == n - 1 and j == m - 1:
            break
        if j == m - 1 or (i < n - 1 and a[i] <= b[j]):
            i += 1
        else:
            j += 1
    return rows, cols, flows


class _SpanningTreeBasis:
    """Basis of the transportation simplex stored as a bipartite tree.

    Tree nodes ``0..n-1`` are rows, ``n..n+m-1`` are columns; basic cell
    ``k`` is the edge ``(rows[k], n + cols[k])``. Potentials ``pot`` satisfy
    ``u_i + v_j = c_ij`` on every basic cell and are kept up to date across
    pivots.
    """

    def __init__(self, C, rows, cols, flows):
        n, m = C.shape
        self.n, self.m = n, m
        self.C = C
        self.rows = list(rows)
        self.cols = list(cols)
        self.flows = list(flows)
        # incident[node] maps basic cell -> the node at its other end
        self.incident = [dict() for _ in range(n + m)]
        for k, (i, j) in enumerate(zip(self.rows, self.cols)):
            self.incident[i][k] = n + j
            self.incident[n + j][k] = i
        self.pot = self._solve_potentials()

    def _solve_potentials(self):
        n = self.n
        pot = np.zeros(n + self.m)
        seen = [False] * (n + self.m)
        seen[0] = True
        stack = [0]
        while stack:
            node = stack.pop()
            for k, other in self.incident[node].items():
                if not seen[other]:
                    seen[other] = True
                    pot[other] = self.C[self.rows[k], self.cols[k]] - pot[node]
                    stack.append(other)
        return pot

    def _component(self, start, cut):
        """Tree nodes reachable from ``start`` without crossing cell ``cut``."""
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for k, other in self.incident[node].items():
                if k != cut and other not in seen:
                    seen.add(other)
                    stack.append(other)
        return seen

    def cycle(self, i, j):
        """Basic cells on the tree path from row ``i`` to column ``j``.

        Returned from the column end, so even positions lose flow when the
        entering cell ``(i, j)`` gains it.
        """
        target = self.n + j
        parent_edge = {i: None}
        stack = [i]
        while stack:
            node = stack.pop()
            if node == target:
                break
            for k, other in self.incident[node].items():
                if other not in parent_edge:
                    parent_edge[other] = k
                    stack.append(other)
        path = []
        node = target
        while node != i:
            k = parent_edge[node]
            path.append(k)
            node = self.incident[node][k]
        return path

    def pivot(self, enter_i, enter_j, path, reduced_cost):
        n, m = self.n, self.m
        minus = path[0::2]
        plus = path[1::2]
        theta = min(self.flows[k] for k in minus)
        leave = min((k for k in minus if self.flows[k] == theta),
                    key=lambda k: self.rows[k] * m + self.cols[k])
        for k in minus:
            self.flows[k] -= theta
        for k in plus:
            self.flows[k] += theta
        # shift potentials on the side cut off together with column enter_j
        side = np.fromiter(self._component(n + enter_j, leave), dtype=int)
        self.pot[side[side < n]] -= reduced_cost
        self.pot[side[side >= n]] += reduced_cost
        # the leaving slot is reused for the entering cell
        del self.incident[self.rows[leave]][leave]
        del self.incident[n + self.cols[leave]][leave]
        self.rows[leave] = enter_i
        self.cols[leave] = enter_j
        self.flows[leave] = theta
        self.incident[enter_i][leave] = n + enter_j
        self.incident[n + enter_j][leave] = enter_i
        return theta

    def dense(self):
        T = np.zeros((self.n, self.m))
        for i, j, x in zip(self.rows, self.cols, self.flows):
            T[i, j] += x
        return T


def _transport_simplex(C, a, b, max_pivots=None):
    n, m = C.shape
    # a single row or column leaves exactly one feasible plan
    if n == 1:
        return b[None, :].copy(), 0
    if m == 1:
        return a[:, None].copy(), 0
    basis = _SpanningTreeBasis(C, *_northwest_corner(a, b))
    scale = max(1.0, float(np.max(np.abs(C))))
    eps = 1e-12 * scale
    degenerate_run = 0
    pivots = 0
    limit = max_pivots if max_pivots is not None else 50 * (n * m + n + m)
    while True:
        if pivots and pivots % 64 == 0:
            # bound the drift of incrementally updated potentials
            basis.pot = basis._solve_potentials()
        u, v = basis.pot[:n], basis.pot[n:]
        reduced = (C - u[:, None] - v[None, :]).ravel()
        if degenerate_run >= _DEGENERATE_RUN:
            # Bland: lowest-index improving cell, cannot cycle
            candidates = np.flatnonzero(reduced < -eps)
            if candidates.size == 0:
                break
            k = int(candidates[0])
        else:
            k = int(np.argmin(reduced))
            if reduced[k] >= -eps:
                break
        if pivots >= limit:
            raise SolverError("transportation simplex exceeded its pivot budget")
        i, j = divmod(k, m)
        theta = basis.pivot(i, j, basis.cycle(i, j), reduced[k])
        pivots += 1
        degenerate_run = degenerate_run + 1 if theta == 0 else 0
    return basis.dense(), pivots


def solve_transport_lp(cost, marg, q=None):
    """Exact optimal transport plan between two discrete measures.

    Parameters
    ----------
    cost : array-like, shape (n, m)
        Finite cost matrix.
    marg : Marginals or array-like
        The marginals, or the source masses ``p`` when ``q`` is also given.
    q : array-like, optional
        Target masses, when ``marg`` is passed as a plain vector.

    Returns
    -------
    TransportPlan
        Vertex-optimal plan and its value ``<cost, T>``.

    Raises
    ------
    InfeasibleMarginals
        If ``sum(p)`` and ``sum(q)`` differ by more than ``1e-12``.
    NonFiniteCost
        If ``cost`` contains ``inf`` or ``nan``.

    Notes
    -----
    The basis is initialized by the northwest-corner rule. Entering cells
    follow the most negative reduced cost (lowest flat index on ties); after
    a run of degenerate pivots the rule switches to Bland's, which rules out
    cycling. Rows and columns of zero mass are dropped before solving and
    come back as zero rows and columns.
    """
    if not isinstance(marg, Marginals):
        marg = Marginals(marg, q)
    C = np.asarray(cost, dtype=float)
    p, q = marg.p, marg.q
    if C.shape != (len(p), len(q)):
        raise ShapeMismatch(
            f"cost shape {C.shape} does not match marginals ({len(p)}, {len(q)})")
    if not np.all(np.isfinite(C)):
        raise NonFiniteCost("cost matrix must be finite")
    if abs(marg.imbalance) > MASS_TOL:
        raise InfeasibleMarginals(
            f"source mass {p.sum()!r} differs from target mass {q.sum()!r}")

    T = np.zeros(C.shape)
    rows = np.flatnonzero(p > 0)
    cols = np.flatnonzero(q > 0)
    if rows.size == 0 or cols.size == 0:
        return TransportPlan(T, 0.0)
    a = p[rows].copy()
    b = q[cols].copy()
    # absorb the (sub-tolerance) imbalance into the largest target
    b[np.argmax(b)] += a.sum() - b.sum()
    sub, pivots = _transport_simplex(C[np.ix_(rows, cols)], a, b)
    T[np.ix_(rows, cols)] = sub
    return TransportPlan(T, float(np.sum(C * T)), pivots)


def partial_wasserstein_value(M, total_mass=None):
    """Optimal partial-transport value between uniform node masses.

    Every one of the ``n_s`` rows and ``m`` columns of ``M`` carries mass
    ``1 / n_s``, so exactly ``m / n_s`` is moved. The problem is lifted to a
    balanced one by a zero-cost dummy column holding ``1 - m / n_s``.

    ``total_mass`` is accepted only for symmetry with the mathematical
    statement and must equal ``m / n_s`` when given.
    """
    M = np.asarray(M, dtype=float)
    n_s, m = M.shape
    if n_s < m:
        raise ShapeMismatch(f"need at least as many rows as columns, got {M.shape}")
    if total_mass is not None and not np.isclose(total_mass, m / n_s):
        raise ValueError("transported mass is fixed to m / n_s")
    lifted = np.hstack([M, np.zeros((n_s, 1))])
    p = np.full(n_s, 1.0 / n_s)
    q = np.append(np.full(m, 1.0 / n_s), max(0.0, 1.0 - m / n_s))
    q[-1] += p.sum() - q.sum()
    q[-1] = max(q[-1], 0.0)
    return solve_transport_lp(lifted, Marginals(p, q)).value
