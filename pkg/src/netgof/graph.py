"""Adjacency-matrix construction and edge-list I/O.

Graphs are plain dense numpy arrays: symmetric 0/1 with zero diagonal.
Dense storage is deliberate; every downstream computation (residual
matrices, eigensolves, the cubed-trace statistic) is dense anyway.
"""

import io
import warnings
from dataclasses import dataclass

import numpy as np

from .validation import check_adjacency, check_symmetric

__all__ = [
    "LoadStats",
    "GraphSummary",
    "load_edge_list",
    "save_edge_list",
    "degrees",
    "summarize",
    "threshold_weight_matrix",
]


@dataclass(frozen=True)
class LoadStats:
    """Bookkeeping from one edge-list parse."""

    edges: int
    self_loops_dropped: int
    duplicates_merged: int


@dataclass(frozen=True)
class GraphSummary:
    n: int
    edges: int
    d_max: int
    d_min: int
    mean_degree: float


def _tokenize(line):
    return line.replace(",", " ").split()


def load_edge_list(source, indexing="one-based", n_nodes=None, return_stats=False):
    """Parse an undirected edge list into an adjacency matrix.

    ``source`` is a path, text stream, or string. Lines hold two integer
    node ids separated by whitespace or commas; '#' starts a comment.
    ``indexing`` is "one-based" or "zero-based". The node count is
    inferred from the largest id unless ``n_nodes`` overrides it.

    Duplicate edges (either orientation) are merged, self-loops are
    dropped with a warning, and the parse counters are returned alongside
    the matrix when ``return_stats`` is true.
    """
    if indexing not in ("one-based", "zero-based"):
        raise ValueError(f"unknown indexing {indexing!r}")
    offset = 1 if indexing == "one-based" else 0

    if isinstance(source, str) and "\n" not in source and "," not in source:
        # Heuristic: a single-line string without separators is a path.
        stream = open(source, "r", encoding="utf-8")
        close = True
    elif isinstance(source, str):
        stream = io.StringIO(source)
        close = False
    else:
        stream = source
        close = False

    pairs = set()
    self_loops = 0
    duplicates = 0
    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = _tokenize(line)
            if len(tokens) != 2:
                raise ValueError(
                    f"line {lineno}: expected two node ids, got {raw.strip()!r}"
                )
            try:
                u, v = (int(t) for t in tokens)
            except ValueError:
                raise ValueError(
                    f"line {lineno}: non-integer node id in {raw.strip()!r}"
                ) from None
            u -= offset
            v -= offset
            if u < 0 or v < 0:
                raise ValueError(
                    f"line {lineno}: node id below {offset} under {indexing} indexing"
                )
            if u == v:
                self_loops += 1
                continue
            key = (min(u, v), max(u, v))
            if key in pairs:
                duplicates += 1
            else:
                pairs.add(key)
    finally:
        if close:
            stream.close()

    if not pairs:
        raise ValueError("edge list is empty (no valid edges)")
    max_id = max(max(p) for p in pairs)
    n = max_id + 1
    if n_nodes is not None:
        if n_nodes < n:
            raise ValueError(f"n_nodes={n_nodes} smaller than largest id + 1 = {n}")
        n = n_nodes

    A = np.zeros((n, n))
    for u, v in pairs:
        A[u, v] = A[v, u] = 1.0
    if self_loops:
        warnings.warn(f"dropped {self_loops} self-loop(s)", stacklevel=2)

    stats = LoadStats(
        edges=len(pairs), self_loops_dropped=self_loops, duplicates_merged=duplicates
    )
    return (A, stats) if return_stats else A


def save_edge_list(A, path_or_stream, indexing="one-based"):
    """Write the upper triangle of ``A`` as an edge list (sorted pairs)."""
    A = check_adjacency(A)
    offset = 1 if indexing == "one-based" else 0
    rows, cols = np.nonzero(np.triu(A, 1))
    if isinstance(path_or_stream, (str, bytes)):
        with open(path_or_stream, "w", encoding="utf-8") as fh:
            for u, v in zip(rows, cols):
                fh.write(f"{u + offset} {v + offset}\n")
    else:
        for u, v in zip(rows, cols):
            path_or_stream.write(f"{u + offset} {v + offset}\n")


def degrees(A):
    """Row sums of the adjacency matrix, as integers."""
    A = check_adjacency(A)
    return A.sum(axis=1).astype(int)


def summarize(A):
    d = degrees(A)
    return GraphSummary(
        n=A.shape[0],
        edges=int(d.sum()) // 2,
        d_max=int(d.max()),
        d_min=int(d.min()),
        mean_degree=float(d.mean()),
    )


def threshold_weight_matrix(W):
    """Binarize a symmetric weight matrix at the median positive pair weight.

    A_ij = 1 when W_ij is at least the 50% quantile of the upper-triangle
    weights {W_ij : i < j}; used to turn valued interaction data (e.g.
    bilateral trade volumes) into an unweighted graph.
    """
    W = check_symmetric(np.asarray(W, dtype=float), tol=1e-8, name="weight matrix")
    n = W.shape[0]
    iu = np.triu_indices(n, 1)
    cutoff = np.quantile(W[iu], 0.5)
    A = (W >= cutoff).astype(float)
    A = np.maximum(A, A.T)
    np.fill_diagonal(A, 0.0)
    return A
