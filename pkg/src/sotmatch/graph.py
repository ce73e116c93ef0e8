"""
Undirected node-featured graphs, neighborhoods and feature costs.

Node features are either real vectors of a fixed dimension (``kind ==
"vector"``) or finite integer sets (``kind == "intset"``).
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionMismatch, DisconnectedGraph,
                     FeatureKindMismatch, GraphError)

VECTOR = "vector"
INTSET = "intset"


def _as_features(features):
    """Normalize a feature payload, returning ``(kind, data)``."""
    if isinstance(features, np.ndarray) and features.dtype != object:
        arr = np.asarray(features, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise GraphError("vector features must be a 2-D array")
        return VECTOR, arr
    features = list(features)
    if not features:
        return VECTOR, np.zeros((0, 0))
    first = features[0]
    if isinstance(first, (set, frozenset)):
        out = []
        for f in features:
            if not isinstance(f, (set, frozenset)):
                raise FeatureKindMismatch("mixed feature kinds within one graph")
            if not all(isinstance(x, (int, np.integer)) for x in f):
                raise FeatureKindMismatch("integer-set features must hold integers")
            out.append(frozenset(int(x) for x in f))
        return INTSET, out
    rows = []
    for f in features:
        if isinstance(f, (set, frozenset)):
            raise FeatureKindMismatch("mixed feature kinds within one graph")
        rows.append(np.atleast_1d(np.asarray(f, dtype=float)))
    dims = {r.shape for r in rows}
    if len(dims) != 1:
        raise DimensionMismatch("vector features must share one dimension")
    return VECTOR, np.vstack(rows)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected graph with one feature per node.

    Parameters
    ----------
    node_ids : sequence
        Unique, hashable node identifiers. Their order defines the node
        indices used by every matrix in the package.
    features : array-like or sequence of sets
        Either an ``(n, d)`` array (or a sequence of length-``d`` vectors),
        or a sequence of integer sets.
    adjacency : array-like, shape (n, n)
        Symmetric 0/1 matrix. Diagonal entries mark self-loops.
    """

    node_ids: tuple
    features: object
    adjacency: np.ndarray
    kind: str = field(init=False)

    def __post_init__(self):
        ids = tuple(self.node_ids)
        if len(set(ids)) != len(ids):
            raise GraphError("node ids must be unique")
        kind, feats = _as_features(self.features)
        adj = np.asarray(self.adjacency, dtype=float)
        n = len(ids)
        if adj.shape != (n, n):
            raise GraphError(f"adjacency must be {n}x{n}, got {adj.shape}")
        if not np.all((adj == 0) | (adj == 1)):
            raise GraphError("adjacency entries must be 0 or 1")
        if not np.array_equal(adj, adj.T):
            raise GraphError("adjacency must be symmetric (undirected graphs only)")
        if len(feats) != n:
            raise GraphError("exactly one feature per node is required")
        if kind == VECTOR and n == 0:
            feats = np.zeros((0, 0))
        adj.setflags(write=False)
        if kind == VECTOR:
            feats.setflags(write=False)
        else:
            feats = tuple(feats)
        object.__setattr__(self, "node_ids", ids)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def from_edges(cls, node_ids, features, edges):
        """Build a graph from an iterable of ``(id, id)`` pairs."""
        ids = tuple(node_ids)
        index = {v: i for i, v in enumerate(ids)}
        adj = np.zeros((len(ids), len(ids)))
        for a, b in edges:
            i, j = index[a], index[b]
            adj[i, j] = adj[j, i] = 1.0
        return cls(ids, features, adj)

    def __len__(self):
        return len(self.node_ids)

    @property
    def n_nodes(self):
        return len(self.node_ids)

    @property
    def dim(self):
        """Feature dimension for vector graphs, ``None`` for set features."""
        return self.features.shape[1] if self.kind == VECTOR else None

    def index_of(self, node_id):
        return self.node_ids.index(node_id)

    def neighbors(self, i):
        """Indices adjacent to node ``i``, self excluded."""
        nb = np.flatnonzero(self.adjacency[i])
        return nb[nb != i]

    def edges(self):
        """Undirected edge list ``(i, j)`` with ``i <= j``, in index order."""
        ii, jj = np.nonzero(np.triu(self.adjacency))
        return list(zip(ii.tolist(), jj.tolist()))

    def induced(self, indices):
        """Materialize the induced subgraph on ``indices`` (in that order)."""
        idx = np.asarray(indices, dtype=int)
        if self.kind == VECTOR:
            feats = self.features[idx]
        else:
            feats = [self.features[i] for i in idx]
        return Graph(tuple(self.node_ids[i] for i in idx), feats,
                     self.adjacency[np.ix_(idx, idx)])

    def same_as(self, other):
        """Structural equality: ids, features and adjacency all identical."""
        if self.kind != other.kind or self.node_ids != other.node_ids:
            return False
        if not np.array_equal(self.adjacency, other.adjacency):
            return False
        if self.kind == VECTOR:
            return (self.features.shape == other.features.shape
                    and np.array_equal(self.features, other.features))
        return tuple(self.features) == tuple(other.features)


@dataclass(frozen=True, eq=False)
class SubgraphView:
    """Induced subgraph of ``parent`` on ``member_indices`` (kept in order)."""

    parent: Graph
    member_indices: tuple

    def __post_init__(self):
        members = tuple(int(i) for i in self.member_indices)
        if len(set(members)) != len(members):
            raise GraphError("member indices must be distinct")
        n = self.parent.n_nodes
        if any(i < 0 or i >= n for i in members):
            raise GraphError("member index out of range")
        object.__setattr__(self, "member_indices", members)

    def __len__(self):
        return len(self.member_indices)

    @property
    def node_ids(self):
        return tuple(self.parent.node_ids[i] for i in self.member_indices)

    @property
    def adjacency(self):
        idx = np.asarray(self.member_indices, dtype=int)
        return self.parent.adjacency[np.ix_(idx, idx)]

    @property
    def features(self):
        if self.parent.kind == VECTOR:
            return self.parent.features[list(self.member_indices)]
        return tuple(self.parent.features[i] for i in self.member_indices)

    def as_graph(self):
        return self.parent.induced(self.member_indices)


def structure_matrix(g):
    """Structure matrix used by the Gromov-Wasserstein term: the adjacency."""
    return np.array(g.adjacency, dtype=float)


def _bfs_distances(adj_lists, source):
    dist = np.full(len(adj_lists), -1, dtype=int)
    dist[source] = 0
    order = [source]
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj_lists[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                order.append(w)
                queue.append(w)
    return dist, order


def _adjacency_lists(g):
    return [g.neighbors(i).tolist() for i in range(g.n_nodes)]


def eccentricities(g):
    """Unweighted eccentricity of every node.

    Raises
    ------
    DisconnectedGraph
        If some pair of nodes is unreachable.
    """
    lists = _adjacency_lists(g)
    ecc = np.empty(g.n_nodes, dtype=int)
    for v in range(g.n_nodes):
        dist, _ = _bfs_distances(lists, v)
        if np.any(dist < 0):
            raise DisconnectedGraph("graph is not connected")
        ecc[v] = dist.max()
    return ecc


def query_radius(g):
    """Smallest eccentricity over the nodes of ``g`` (the graph radius)."""
    if g.n_nodes == 0:
        raise GraphError("radius of an empty graph is undefined")
    return int(eccentricities(g).min())


def is_connected(g):
    if g.n_nodes == 0:
        return True
    dist, _ = _bfs_distances(_adjacency_lists(g), 0)
    return bool(np.all(dist >= 0))


def k_hop_neighborhood(g, center, k, adj_lists=None):
    """All nodes within ``k`` hops of ``center``.

    Members are ordered by BFS distance, ties by parent index, so the
    resulting view (and any plan computed on it) is reproducible.

    ``adj_lists`` may carry precomputed neighbor lists when the same graph
    is queried repeatedly.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if not 0 <= center < g.n_nodes:
        raise GraphError(f"center {center} out of range")
    lists = adj_lists if adj_lists is not None else _adjacency_lists(g)
    dist = {center: 0}
    frontier = [center]
    for d in range(1, k + 1):
        nxt = set()
        for u in frontier:
            for w in lists[u]:
                if w not in dist:
                    nxt.add(w)
        if not nxt:
            break
        frontier = sorted(nxt)
        for w in frontier:
            dist[w] = d
    members = sorted(dist, key=lambda v: (dist[v], v))
    return SubgraphView(g, tuple(members))


def _check_compatible(gs, gq):
    if gs.kind != gq.kind:
        raise FeatureKindMismatch(
            f"feature kinds differ: {gs.kind!r} vs {gq.kind!r}")
    if gs.kind == VECTOR and gs.n_nodes and gq.n_nodes and gs.dim != gq.dim:
        raise DimensionMismatch(
            f"feature dimensions differ: {gs.dim} vs {gq.dim}")


def vector_cost(xs, xq):
    """Normalized squared Euclidean cost ``1 - 1/(1 + |x - y|^2)``."""
    xs = np.asarray(xs, dtype=float)
    xq = np.asarray(xq, dtype=float)
    diff = xs[:, None, :] - xq[None, :, :]
    sq = np.einsum("ijk,ijk->ij", diff, diff)
    return sq / (1.0 + sq)


def jaccard_cost(sets_s, sets_q):
    """Jaccard dissimilarity between integer sets; two empty sets cost 0."""
    vocab = sorted(set().union(*sets_s, *sets_q))
    pos = {v: i for i, v in enumerate(vocab)}

    def incidence(sets):
        out = np.zeros((len(sets), len(vocab)))
        for r, s in enumerate(sets):
            out[r, [pos[v] for v in s]] = 1.0
        return out

    a, b = incidence(sets_s), incidence(sets_q)
    inter = a @ b.T
    union = a.sum(1)[:, None] + b.sum(1)[None, :] - inter
    with np.errstate(invalid="ignore", divide="ignore"):
        sim = np.where(union > 0, inter / np.where(union > 0, union, 1.0), 1.0)
    return 1.0 - sim


def feature_cost_matrix(gs, gq):
    """Pairwise feature cost between nodes of ``gs`` (rows) and ``gq``.

    Entries lie in ``[0, 1]`` and vanish exactly for identical features.
    """
    _check_compatible(gs, gq)
    if gs.kind == VECTOR:
        return vector_cost(gs.features, gq.features)
    return jaccard_cost(list(gs.features), list(gq.features))
