"""Deterministic numerical kernels.

Everything here is a pure function of its inputs: seeded random streams,
a symmetric eigensolver with a fixed sign convention, k-means with
restarts, simplex vertex hunting by successive projection, and the normal
distribution functions used for p-values.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .validation import check_square, check_symmetric

__all__ = [
    "SeededStream",
    "derive_stream",
    "trace_cubed",
    "EigenPairs",
    "sym_eigs",
    "kmeans",
    "spa_vertices",
    "normal_cdf",
    "normal_quantile",
    "as_generator",
    "as_stream",
]

_MASK64 = (1 << 64) - 1


def _splitmix64(x):
    """One step of the SplitMix64 mixer (Steele, Lea & Flood 2014)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _fnv1a64(text):
    """FNV-1a 64-bit hash of a string, used to key named experiments."""
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK64
    return h


def _as_id(value):
    if isinstance(value, str):
        return _fnv1a64(value)
    return int(value) & _MASK64


@dataclass(frozen=True)
class SeededStream:
    """A reproducible random stream identified by (base_seed, stream_id).

    Identical field values produce identical variate sequences on every
    run and under any thread schedule; the stream owns no shared state.
    """

    base_seed: int
    stream_id: int

    def generator(self):
        """Fresh numpy Generator positioned at the start of this stream."""
        return np.random.Generator(np.random.PCG64(self.stream_id & _MASK64))

    def child(self, key):
        """Derive a dependent stream, keyed by an integer or label."""
        mixed = _splitmix64(self.stream_id ^ _splitmix64(_as_id(key)))
        return SeededStream(self.base_seed, mixed)


def derive_stream(base_seed, experiment_id, replication_index):
    """Mix (base_seed, experiment_id, replication_index) into a stream.

    The mixing is three rounds of SplitMix64, xoring in each component in
    turn, so replications are mutually independent and can be generated in
    any execution order. ``experiment_id`` may be an integer or a string
    (hashed with FNV-1a 64).
    """
    s = _splitmix64(int(base_seed) & _MASK64)
    s = _splitmix64(s ^ _splitmix64(_as_id(experiment_id)))
    s = _splitmix64(s ^ _splitmix64(int(replication_index) & _MASK64))
    return SeededStream(int(base_seed) & _MASK64, s)


def as_generator(random_state=None):
    """Normalize seed-like inputs to a numpy Generator.

    Accepts None (fresh entropy), an int seed, a SeededStream, or an
    existing Generator (returned as-is).
    """
    if random_state is None:
        return np.random.default_rng()
    if isinstance(random_state, np.random.Generator):
        return random_state
    if isinstance(random_state, SeededStream):
        return random_state.generator()
    return np.random.default_rng(int(random_state))


def as_stream(random_state=None):
    """Normalize seed-like inputs to a SeededStream.

    None yields a stream seeded from fresh OS entropy; an int is treated
    as a base seed; Generators contribute one draw as the stream id.
    """
    if isinstance(random_state, SeededStream):
        return random_state
    if random_state is None:
        entropy = np.random.SeedSequence().entropy & _MASK64
        return SeededStream(0, _splitmix64(entropy))
    if isinstance(random_state, np.random.Generator):
        return SeededStream(0, int(random_state.integers(0, 2**63)))
    return derive_stream(int(random_state), 0, 0)


def trace_cubed(M):
    """tr(M^3) without an eigendecomposition.

    Computed as sum_ij (M^2)_ij M_ji, one dense matmul. ``M`` must be
    square; the callers here always pass symmetric matrices.
    """
    M = check_square(M)
    return float(np.einsum("ij,ji->", M @ M, M))


@dataclass(frozen=True)
class EigenPairs:
    """Top eigenpairs ordered by descending |eigenvalue|.

    ``values`` has shape (k,), ``vectors`` (n, k) with orthonormal columns.
    Each vector is sign-fixed so its largest-magnitude entry is positive.
    """

    values: np.ndarray
    vectors: np.ndarray


def sym_eigs(M, k):
    """Top-k eigenpairs of a symmetric matrix by |eigenvalue|.

    Full LAPACK tridiagonalization (numpy.linalg.eigh) followed by a
    stable magnitude sort; adequate at the dense sizes this package
    targets. Ties in |eigenvalue| keep eigh's ascending order.
    """
    M = check_symmetric(M)
    n = M.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    values, vectors = np.linalg.eigh(M)
    order = np.argsort(-np.abs(values), kind="stable")[:k]
    values = values[order]
    vectors = vectors[:, order].copy()
    for s in range(k):
        peak = np.argmax(np.abs(vectors[:, s]))
        if vectors[peak, s] < 0:
            vectors[:, s] = -vectors[:, s]
    return EigenPairs(values=values, vectors=vectors)


def _kmeans_pp_init(X, k, rng):
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            probs = d2 / total
            idx = rng.choice(n, p=probs)
        else:
            idx = rng.integers(n)
        centers[j] = X[idx]
        d2 = np.minimum(d2, ((X - centers[j]) ** 2).sum(axis=1))
    return centers


def kmeans(points, k, restarts=10, max_iter=100, random_state=None):
    """k-means with k-means++ seeding and restarts.

    Returns (labels, centers) of the restart with the lowest
    within-cluster sum of squares. Deterministic given the stream;
    assignment ties break toward the lowest center index (argmin).
    """
    X = np.atleast_2d(np.asarray(points, dtype=float))
    n = X.shape[0]
    if k > n:
        raise ValueError(f"k={k} exceeds number of points {n}")
    if k > np.unique(X, axis=0).shape[0]:
        raise ValueError("k exceeds the number of distinct points")
    rng = as_generator(random_state)
    best_labels, best_centers, best_wcss = None, None, np.inf
    for _ in range(restarts):
        centers = _kmeans_pp_init(X, k, rng)
        labels = None
        for _ in range(max_iter):
            dist = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            labels = dist.argmin(axis=1)
            new_centers = centers.copy()
            for j in range(k):
                members = labels == j
                if members.any():
                    new_centers[j] = X[members].mean(axis=0)
            if np.array_equal(new_centers, centers):
                break
            centers = new_centers
        wcss = float(((X - centers[labels]) ** 2).sum())
        if wcss < best_wcss:
            best_labels, best_centers, best_wcss = labels.copy(), centers.copy(), wcss
    return best_labels, best_centers


def spa_vertices(points, n_vertices):
    """Corner rows of a simplex cloud via successive projection.

    Rows are treated as affine combinations of the corners, so they are
    first lifted with a unit homogeneous coordinate; in the lifted space
    the algorithm repeatedly takes the row of maximal norm and projects
    every row onto its orthogonal complement. The lift is what makes all
    ``n_vertices`` corners recoverable from (n_vertices - 1)-dimensional
    input. Returns the selected row indices; the first index always
    maximizes the original row norm.
    """
    X = np.atleast_2d(np.asarray(points, dtype=float))
    n = X.shape[0]
    if n_vertices < 1:
        raise ValueError("n_vertices must be >= 1")
    if n < n_vertices:
        raise ValueError(f"need at least {n_vertices} rows, got {n}")
    lifted = np.hstack([X, np.ones((n, 1))])
    residual = lifted.copy()
    tol = 1e-15 * float(np.einsum("ij,ij->i", lifted, lifted).max())
    chosen = []
    for _ in range(n_vertices):
        norms = np.einsum("ij,ij->i", residual, residual)
        if chosen:
            norms[chosen] = -np.inf
        j = int(np.argmax(norms))
        if norms[j] <= tol:
            raise ValueError("degenerate input: residual rows are all zero")
        chosen.append(j)
        u = residual[j] / np.sqrt(norms[j])
        residual -= np.outer(residual @ u, u)
    return np.asarray(chosen, dtype=int)


def normal_cdf(x):
    """Standard normal CDF (double-precision erfc path)."""
    return ndtr(x) if np.ndim(x) else float(ndtr(x))


def normal_quantile(q):
    """Standard normal quantile; requires q in the open interval (0, 1)."""
    arr = np.asarray(q, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("quantile argument must lie strictly inside (0, 1)")
    return ndtri(q) if np.ndim(q) else float(ndtri(q))
