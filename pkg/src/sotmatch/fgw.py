"""
Partial fused Gromov-Wasserstein objective and its Frank-Wolfe solver.

The partial problem is handled through a dummy target node: the plan has
shape ``(n, m + 1)`` and its last column absorbs the source mass that is
not matched to any query node, at zero feature and zero structure cost.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import AsymmetricStructure, ShapeMismatch
from .transport import Marginals, solve_transport_lp

DEFAULT_DELTA = 1e-9
DEFAULT_MAX_ITER = 1000


@dataclass(eq=False)
class FgwProblem:
    """Inputs of a dummy-augmented fused Gromov-Wasserstein problem.

    Parameters
    ----------
    M_hat : ndarray, shape (n, m + 1)
        Feature costs; the last (dummy) column must be zero.
    C_s : ndarray, shape (n, n)
        Source structure matrix.
    C_q : ndarray, shape (m, m)
        Query structure matrix.
    p : ndarray, shape (n,)
        Source masses.
    q_hat : ndarray, shape (m + 1,)
        Query masses followed by the dummy mass.
    alpha : float
        Weight of the structure term, in ``[0, 1]``.
    feature_scale, structure_scale : float
        Multipliers of the feature and structure terms (``n/m`` and
        ``n^2/m^2`` for the normalized variant, ``1`` otherwise).
    """

    M_hat: np.ndarray
    C_s: np.ndarray
    C_q: np.ndarray
    p: np.ndarray
    q_hat: np.ndarray
    alpha: float = 0.5
    feature_scale: float = 1.0
    structure_scale: float = 1.0
    symmetric: bool = field(init=False)

    def __post_init__(self):
        self.M_hat = np.asarray(self.M_hat, dtype=float)
        self.C_s = np.asarray(self.C_s, dtype=float)
        self.C_q = np.asarray(self.C_q, dtype=float)
        self.p = np.asarray(self.p, dtype=float)
        self.q_hat = np.asarray(self.q_hat, dtype=float)
        n, m = self.C_s.shape[0], self.C_q.shape[0]
        if (self.C_s.shape != (n, n) or self.C_q.shape != (m, m)
                or self.M_hat.shape != (n, m + 1)
                or self.p.shape != (n,) or self.q_hat.shape != (m + 1,)):
            raise ShapeMismatch("inconsistent problem dimensions")
        if np.any(self.M_hat[:, -1] != 0):
            raise ValueError("dummy column of M_hat must be zero")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.feature_scale <= 0 or self.structure_scale <= 0:
            raise ValueError("scales must be positive")
        self.symmetric = bool(np.array_equal(self.C_s, self.C_s.T)
                              and np.array_equal(self.C_q, self.C_q.T))
        self._Cs2 = self.C_s ** 2
        self._Cq2 = self.C_q ** 2

    @property
    def n(self):
        return self.C_s.shape[0]

    @property
    def m(self):
        return self.C_q.shape[0]

    @property
    def marginals(self):
        return Marginals(self.p, self.q_hat)

    def initial_plan(self):
        """Product coupling ``p q_hat^T``, always feasible."""
        return np.outer(self.p, self.q_hat)


@dataclass
class SolveReport:
    plan: np.ndarray
    objective: float
    iterations: int
    objective_trace: list
    converged: bool


def _check_plan(C_s, C_q, T):
    n, m = C_s.shape[0], C_q.shape[0]
    if T.shape != (n, m + 1):
        raise ShapeMismatch(f"plan must be {(n, m + 1)}, got {T.shape}")


def tensor_product_apply(C_s, C_q, T, _squares=None):
    """Structure tensor applied to a dummy-augmented plan.

    Computes ``(L_hat (x) T)`` for the square loss in ``O(n^2 m + m^2 n)``
    instead of the naive ``O(n^2 m^2)`` sum. The dummy column of the result
    is zero; the others use the row and column sums of the non-dummy block
    of ``T``, so the map is linear in ``T`` (on feasible plans the column
    sums equal the query masses).

    Parameters
    ----------
    C_s : ndarray, shape (n, n)
    C_q : ndarray, shape (m, m)
    T : ndarray, shape (n, m + 1)

    Returns
    -------
    ndarray, shape (n, m + 1)
    """
    C_s = np.asarray(C_s, dtype=float)
    C_q = np.asarray(C_q, dtype=float)
    T = np.asarray(T, dtype=float)
    _check_plan(C_s, C_q, T)
    Cs2, Cq2 = _squares if _squares is not None else (C_s ** 2, C_q ** 2)
    block = T[:, :-1]
    out = np.zeros_like(T)
    out[:, :-1] = (
        (Cs2 @ block.sum(axis=1))[:, None]
        + (Cq2 @ block.sum(axis=0))[None, :]
        - 2.0 * C_s @ block @ C_q.T
    )
    return out


def _apply(prob, T):
    return tensor_product_apply(prob.C_s, prob.C_q, T,
                                _squares=(prob._Cs2, prob._Cq2))


def objective_terms(prob, T, LT=None):
    """Scaled feature and structure terms, before the ``alpha`` weighting."""
    T = np.asarray(T, dtype=float)
    if LT is None:
        LT = _apply(prob, T)
    feat = prob.feature_scale * float(np.sum(prob.M_hat * T))
    struct = prob.structure_scale * float(np.sum(LT * T))
    return feat, struct


def objective(prob, T, LT=None):
    """Value of the (scaled) fused Gromov-Wasserstein objective at ``T``."""
    T = np.asarray(T, dtype=float)
    _check_plan(prob.C_s, prob.C_q, T)
    feat, struct = objective_terms(prob, T, LT)
    return (1.0 - prob.alpha) * feat + prob.alpha * struct


def gradient(prob, T, LT=None):
    """Gradient of :func:`objective`; the dummy column is exactly zero.

    Only valid for symmetric structure matrices, which is enforced.
    """
    if not prob.symmetric:
        raise AsymmetricStructure("gradient requires symmetric C_s and C_q")
    T = np.asarray(T, dtype=float)
    if LT is None:
        LT = _apply(prob, T)
    G = ((1.0 - prob.alpha) * prob.feature_scale * prob.M_hat
         + 2.0 * prob.alpha * prob.structure_scale * LT)
    G[:, -1] = 0.0
    return G


def _quadratic_coefficients(prob, T, D, LT, LD):
    a = prob.alpha * prob.structure_scale * float(np.sum(LD * D))
    b = ((1.0 - prob.alpha) * prob.feature_scale * float(np.sum(prob.M_hat * D))
         + 2.0 * prob.alpha * prob.structure_scale * float(np.sum(LT * D)))
    return a, b


def _minimize_quadratic(a, b, null_direction):
    if null_direction:
        return 0.0
    if a > 0:
        return float(min(max(-b / (2.0 * a), 0.0), 1.0))
    # concave or linear on [0, 1]: best endpoint, ties go to the full step
    return 1.0 if a + b <= 0 else 0.0


def line_search(prob, T, D, LT=None, LD=None):
    """Exact step size ``argmin_{g in [0, 1]} J(T + g D)``.

    ``J`` restricted to the segment is the quadratic ``a g^2 + b g + c``;
    the closed form relies on symmetric structure matrices.
    """
    if not prob.symmetric:
        raise AsymmetricStructure("line search requires symmetric C_s and C_q")
    T = np.asarray(T, dtype=float)
    D = np.asarray(D, dtype=float)
    if LT is None:
        LT = _apply(prob, T)
    if LD is None:
        LD = _apply(prob, D)
    a, b = _quadratic_coefficients(prob, T, D, LT, LD)
    return _minimize_quadratic(a, b, not np.any(D))


def frank_wolfe(prob, delta=DEFAULT_DELTA, max_iter=DEFAULT_MAX_ITER, T0=None,
                callback=None):
    """Conditional gradient descent over the transportation polytope.

    Parameters
    ----------
    prob : FgwProblem
    delta : float
        Stop once two successive objective values differ by less than this.
    max_iter : int
        Safety bound on the number of iterations.
    T0 : ndarray, optional
        Feasible starting plan; defaults to ``p q_hat^T``.
    callback : callable, optional
        Called as ``callback(k, T, J)`` for the start point (``k = 0``) and
        after every update.

    Returns
    -------
    SolveReport
        ``converged`` is False only when ``max_iter`` was exhausted. A zero
        step size ends the run as converged, since no further progress is
        possible from that iterate.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be a positive integer")
    if not prob.symmetric:
        raise AsymmetricStructure("Frank-Wolfe requires symmetric C_s and C_q")

    T = prob.initial_plan() if T0 is None else np.array(T0, dtype=float)
    marg = prob.marginals
    LT = _apply(prob, T)
    J = objective(prob, T, LT)
    trace = [J]
    if callback is not None:
        callback(0, T, J)

    converged = False
    k = 0
    while k < max_iter:
        G = gradient(prob, T, LT)
        vertex = solve_transport_lp(G, marg).matrix
        D = vertex - T
        L_vertex = _apply(prob, vertex)
        LD = L_vertex - LT
        a, b = _quadratic_coefficients(prob, T, D, LT, LD)
        gamma = _minimize_quadratic(a, b, not np.any(D))
        k += 1
        if gamma == 0.0:
            trace.append(J)
            converged = True
            break
        if gamma == 1.0:
            T, LT = vertex, L_vertex
        else:
            T = T + gamma * D
            LT = LT + gamma * LD
        J_new = objective(prob, T, LT)
        trace.append(J_new)
        if callback is not None:
            callback(k, T, J_new)
        if abs(J_new - J) < delta:
            J = J_new
            converged = True
            break
        J = J_new

    return SolveReport(plan=T, objective=J, iterations=k,
                       objective_trace=trace, converged=converged)
