"""
Plain-text graph files and match-result documents.

Graph files are line oriented::

    #version 1
    #features vector:2
    node a 0.5 1.0
    node b 0.25 0.0
    edge a b

With ``#features intset`` the node payload is a (possibly empty) list of
distinct integers. Edges are undirected; ``edge a b`` and ``edge b a`` are
the same edge and may not both appear. Blank lines are ignored.
"""

import json
from pathlib import Path

import numpy as np

from .errors import (DanglingEdge, DuplicateEdge, DuplicateNode,
                     FeatureKindMismatch, ParseError)
from .graph import INTSET, VECTOR, Graph

FORMAT_VERSION = 1


def _parse_kind(value, line):
    if value == "intset":
        return INTSET, None
    if value.startswith("vector:"):
        try:
            dim = int(value.split(":", 1)[1])
        except ValueError:
            raise ParseError(f"bad vector dimension in {value!r}", line) from None
        if dim < 1:
            raise ParseError("vector dimension must be positive", line)
        return VECTOR, dim
    raise ParseError(f"unknown feature kind {value!r}", line)


def parse_graph(text):
    """Parse the contents of a graph file into a :class:`Graph`."""
    version = kind = dim = None
    ids, feats, edges = [], [], []
    index = {}
    seen_edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(" ")
            value = value.strip()
            if key == "version":
                if value != str(FORMAT_VERSION):
                    raise ParseError(f"unsupported version {value!r}", lineno)
                version = FORMAT_VERSION
            elif key == "features":
                kind, dim = _parse_kind(value, lineno)
            else:
                raise ParseError(f"unknown header {key!r}", lineno)
            continue
        if version is None:
            raise ParseError("missing '#version' header", lineno)
        if kind is None:
            raise ParseError("missing '#features' header", lineno)
        tokens = line.split()
        record = tokens[0]
        if record == "node":
            if len(tokens) < 2:
                raise ParseError("node record without id", lineno)
            node_id, payload = tokens[1], tokens[2:]
            if node_id in index:
                raise DuplicateNode(f"duplicate node {node_id!r}", lineno)
            feats.append(_parse_payload(payload, kind, dim, lineno))
            index[node_id] = len(ids)
            ids.append(node_id)
        elif record == "edge":
            if len(tokens) != 3:
                raise ParseError("edge record needs exactly two ids", lineno)
            a, b = tokens[1], tokens[2]
            for end in (a, b):
                if end not in index:
                    raise DanglingEdge(f"edge endpoint {end!r} is not a node", lineno)
            key = frozenset((a, b))
            if key in seen_edges:
                raise DuplicateEdge(f"duplicate edge {a} {b}", lineno)
            seen_edges.add(key)
            edges.append((index[a], index[b]))
        else:
            raise ParseError(f"unknown record {record!r}", lineno)
    if version is None or kind is None:
        raise ParseError("missing header")

    n = len(ids)
    adj = np.zeros((n, n))
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1.0
    if kind == VECTOR:
        features = np.array(feats, dtype=float).reshape(n, dim)
    else:
        features = feats
    return Graph(tuple(ids), features, adj)


def _parse_payload(tokens, kind, dim, lineno):
    if kind == VECTOR:
        if len(tokens) != dim:
            raise FeatureKindMismatch(
                f"line {lineno}: expected {dim} values, got {len(tokens)}")
        try:
            return [float(t) for t in tokens]
        except ValueError:
            raise FeatureKindMismatch(
                f"line {lineno}: non-numeric vector feature") from None
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise FeatureKindMismatch(
            f"line {lineno}: integer-set payload must hold integers") from None
    if len(set(values)) != len(values):
        raise ParseError("integer set with repeated values", lineno)
    return frozenset(values)


def format_graph(g):
    """Inverse of :func:`parse_graph` for graphs with whitespace-free ids."""
    for v in g.node_ids:
        s = str(v)
        if not s or any(c.isspace() for c in s):
            raise ValueError(f"node id {v!r} cannot be written")
    header = "intset" if g.kind == INTSET else f"vector:{max(g.dim or 0, 1)}"
    lines = [f"#version {FORMAT_VERSION}", f"#features {header}"]
    for i, v in enumerate(g.node_ids):
        if g.kind == VECTOR:
            payload = [repr(float(x)) for x in g.features[i]]
        else:
            payload = [str(x) for x in sorted(g.features[i])]
        lines.append(" ".join(["node", str(v), *payload]))
    for i, j in g.edges():
        lines.append(f"edge {g.node_ids[i]} {g.node_ids[j]}")
    return "\n".join(lines) + "\n"


def load_graph(path):
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def save_graph(g, path):
    Path(path).write_text(format_graph(g), encoding="utf-8")


def result_to_dict(result):
    doc = {
        "matched_nodes": sorted(result.matched_nodes, key=str),
        "mapping": [[q, s] for q, s in result.mapping.items()],
        "objective": float(result.objective),
        "iterations": int(result.iterations),
        "converged": bool(result.converged),
        "elapsed": float(result.elapsed),
    }
    if result.candidate_stats is not None:
        doc["candidate_stats"] = dict(result.candidate_stats)
    if result.center is not None:
        doc["center"] = result.center
    return doc


def save_result(result, path):
    """Write a match result as a JSON document."""
    text = json.dumps(result_to_dict(result), indent=2, default=_jsonable)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_result(path):
    """Read back a document written by :func:`save_result` as a dict."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    doc["matched_nodes"] = set(doc["matched_nodes"])
    doc["mapping"] = {q: s for q, s in doc["mapping"]}
    return doc


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")
