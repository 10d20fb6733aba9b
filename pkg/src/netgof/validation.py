"""Input validation helpers shared by the estimators and test routines."""

import numpy as np

__all__ = [
    "check_square",
    "check_symmetric",
    "check_adjacency",
    "check_probability_matrix",
]


def check_square(M, name="matrix"):
    """Return ``M`` as a 2-d float array, raising if it is not square."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    return M


def check_symmetric(M, tol=1e-10, name="matrix"):
    M = check_square(M, name=name)
    if not np.allclose(M, M.T, atol=tol, rtol=0.0):
        raise ValueError(f"{name} must be symmetric (tol={tol})")
    return M


def check_adjacency(A):
    """Validate an undirected, unweighted adjacency matrix.

    Requires a square symmetric 0/1 matrix with zero diagonal and at least
    two nodes. Returns the validated float array.
    """
    A = check_symmetric(A, name="adjacency matrix")
    n = A.shape[0]
    if n < 2:
        raise ValueError("adjacency matrix needs at least 2 nodes")
    if np.any(np.diag(A) != 0):
        raise ValueError("adjacency matrix must have zero diagonal (no self-loops)")
    if not np.isin(A, (0.0, 1.0)).all():
        raise ValueError("adjacency matrix entries must be 0 or 1")
    return A


def check_probability_matrix(P, name="probability matrix"):
    """Validate a symmetric matrix of edge probabilities in [0, 1].

    Diagonal entries are not constrained; consumers ignore them.
    """
    P = check_symmetric(P, name=name)
    off = ~np.eye(P.shape[0], dtype=bool)
    if np.any(P[off] < 0.0) or np.any(P[off] > 1.0):
        bad = np.argwhere(off & ((P < 0.0) | (P > 1.0)))[0]
        raise ValueError(
            f"{name} entry ({bad[0]}, {bad[1]}) = {P[bad[0], bad[1]]} outside [0, 1]"
        )
    return P
