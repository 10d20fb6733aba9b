"""Per-family parameter estimation with a scikit-learn estimator API.

Each estimator consumes a symmetric data matrix (normally a 0/1 adjacency
matrix) via ``fit`` and exposes the fitted parameters plus ``phat_``, the
plug-in edge-probability matrix used by the goodness-of-fit machinery.
Off-diagonal entries of ``phat_`` are clipped into
[EPS_CLIP, 1 - EPS_CLIP] so the residual normalization never divides by
zero; the perturbation is far below the estimation-error scale that the
test tolerates.
"""

import warnings

import numpy as np
from sklearn.base import BaseEstimator, clone

from .numerics import as_generator, kmeans, spa_vertices, sym_eigs
from .validation import check_adjacency, check_symmetric

__all__ = [
    "EPS_CLIP",
    "FitError",
    "ErdosRenyiEstimator",
    "BetaModelEstimator",
    "BlockModelEstimator",
    "DegreeCorrectedBlockModelEstimator",
    "MixedMembershipEstimator",
    "LatentSpaceEstimator",
    "make_estimator",
    "fit_model",
]

EPS_CLIP = 1e-6


class FitError(RuntimeError):
    """Estimation failed in a way that makes the candidate untestable."""


def clip_probabilities(P):
    """Clip off-diagonal entries into [EPS_CLIP, 1 - EPS_CLIP], zero diagonal.

    Also symmetrizes, so products like X B X' that are symmetric only up
    to rounding come out bitwise symmetric.
    """
    P = (P + P.T) / 2.0
    P = np.clip(P, EPS_CLIP, 1.0 - EPS_CLIP)
    np.fill_diagonal(P, 0.0)
    return P


def _score_ratios(A, k):
    """SCORE embedding: entrywise ratios of eigenvectors 2..k over the first.

    The leading vector is sign-fixed by ``sym_eigs``; near-zero entries in
    it are floored (sign-preserving) and the ratios are truncated to
    +-log(n), the standard SCORE safeguard.
    """
    n = A.shape[0]
    pairs = sym_eigs(A, k)
    lead = pairs.vectors[:, 0]
    tiny = 1e-12 * max(1.0, float(np.abs(lead).max()))
    safe = np.where(np.abs(lead) < tiny, np.where(lead >= 0, tiny, -tiny), lead)
    ratios = pairs.vectors[:, 1:] / safe[:, None]
    bound = np.log(n)
    return pairs, np.clip(ratios, -bound, bound)


def _global_density(A):
    n = A.shape[0]
    return float(A.sum() - np.trace(A)) / (n * (n - 1))


class ErdosRenyiEstimator(BaseEstimator):
    """Shared edge probability: the mean of the off-diagonal entries."""

    family = "er"

    def fit(self, A, y=None):
        A = check_symmetric(A, name="data matrix")
        self.n_ = A.shape[0]
        self.p_ = _global_density(A)
        self.phat_ = clip_probabilities(np.full((self.n_, self.n_), self.p_))
        return self

    def describe(self):
        return {"family": self.family, "p": self.p_}


class BetaModelEstimator(BaseEstimator):
    """Maximum-likelihood node attractiveness via fixed-point iteration.

    Iterates beta_i <- log d_i - log sum_{j != i} 1/(exp(-beta_j) +
    exp(beta_i)) until the degree equations are satisfied to ``tol``,
    starting from zeros or from the logit-degree heuristic
    0.5 * logit(d_i / (n - 1)). The MLE does not exist when some degree
    is 0 or n - 1, and the iteration is refused in that case.
    """

    family = "beta"

    def __init__(self, tol=1e-8, max_iter=500, init="zeros"):
        self.tol = tol
        self.max_iter = max_iter
        self.init = init

    def fit(self, A, y=None):
        A = check_adjacency(A)
        n = A.shape[0]
        d = A.sum(axis=1)
        bad = np.flatnonzero((d == 0) | (d == n - 1))
        if bad.size:
            raise FitError(
                "attractiveness MLE does not exist: degrees 0 or n-1 at nodes "
                f"{bad.tolist()}"
            )
        if self.init == "zeros":
            beta = np.zeros(n)
        elif self.init == "logit":
            frac = d / (n - 1.0)
            beta = 0.5 * np.log(frac / (1.0 - frac))
        else:
            raise ValueError(f"unknown init {self.init!r}")
        residual = np.inf
        for iteration in range(1, self.max_iter + 1):
            eb = np.exp(beta)
            denom = 1.0 / eb[None, :] + eb[:, None]  # (i, j) -> e^-bj + e^bi
            np.fill_diagonal(denom, np.inf)
            beta_new = np.log(d) - np.log((1.0 / denom).sum(axis=1))
            beta = beta_new
            residual = self._residual(beta, d)
            if residual <= self.tol:
                break
        if residual > self.tol:
            raise FitError(
                f"attractiveness MLE did not converge in {self.max_iter} iterations "
                f"(residual {residual:.3g}); the network may be too sparse"
            )
        self.beta_ = beta
        self.n_iter_ = iteration
        self.residual_ = residual
        self.phat_ = clip_probabilities(self._probabilities(beta))
        return self

    @staticmethod
    def _probabilities(beta):
        s = beta[:, None] + beta[None, :]
        return 1.0 / (1.0 + np.exp(-s))

    @classmethod
    def _residual(cls, beta, d):
        P = cls._probabilities(beta)
        np.fill_diagonal(P, 0.0)
        return float(np.abs(d - P.sum(axis=1)).max())

    def describe(self):
        return {
            "family": self.family,
            "beta": self.beta_.tolist(),
            "n_iter": self.n_iter_,
            "residual": self.residual_,
        }


class BlockModelEstimator(BaseEstimator):
    """Community labels by SCORE spectral clustering, block-mean plug-in.

    ``embedding`` selects the ratio-of-eigenvectors embedding ("score",
    default) or plain leading eigenvectors ("eigenvectors"). Passing
    ``labels`` skips clustering entirely and uses the given assignment.
    With one community this reduces to the shared-probability fit.
    """

    family = "sbm"

    def __init__(self, n_communities=1, restarts=10, embedding="score",
                 labels=None, random_state=None):
        self.n_communities = n_communities
        self.restarts = restarts
        self.embedding = embedding
        self.labels = labels
        self.random_state = random_state

    def _cluster(self, A):
        k = self.n_communities
        n = A.shape[0]
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=int)
            if labels.shape != (n,):
                raise ValueError("injected labels must have one entry per node")
            return labels
        if k == 1:
            return np.zeros(n, dtype=int)
        if self.embedding == "score":
            _, points = _score_ratios(A, k)
        elif self.embedding == "eigenvectors":
            points = sym_eigs(A, k).vectors
        else:
            raise ValueError(f"unknown embedding {self.embedding!r}")
        rng = as_generator(self.random_state)
        labels, _ = kmeans(points, k, restarts=self.restarts, random_state=rng)
        return labels

    def fit(self, A, y=None):
        A = check_symmetric(A, name="data matrix")
        k = self.n_communities
        labels = self._cluster(A)
        Z = np.zeros((A.shape[0], k))
        Z[np.arange(A.shape[0]), labels] = 1.0
        sizes = Z.sum(axis=0)
        edge_sums = Z.T @ A @ Z
        pair_counts = np.outer(sizes, sizes) - np.diag(sizes)
        with np.errstate(invalid="ignore", divide="ignore"):
            B = edge_sums / pair_counts
        empty = sizes == 0
        if empty.any() or (pair_counts == 0).any():
            warnings.warn(
                "empty community in block fit; filling with global density",
                stacklevel=2,
            )
            B[~np.isfinite(B)] = _global_density(A)
        self.labels_ = labels
        self.block_probs_ = B
        self.phat_ = clip_probabilities(B[labels][:, labels])
        return self

    def describe(self):
        return {
            "family": self.family,
            "n_communities": self.n_communities,
            "labels": self.labels_.tolist(),
            "block_probs": self.block_probs_.tolist(),
        }


class DegreeCorrectedBlockModelEstimator(BlockModelEstimator):
    """SCORE labels plus degree-share plug-ins.

    theta_i is node i's share of its block's total degree and the block
    matrix holds total inter-block edge counts (both endpoints counted
    within a block), so p_ij = theta_i theta_j m_{kl}. With one community
    this is the configuration-model plug-in d_i d_j / (2m).
    """

    family = "dcsbm"

    def fit(self, A, y=None):
        A = check_symmetric(A, name="data matrix")
        k = self.n_communities
        labels = self._cluster(A)
        n = A.shape[0]
        Z = np.zeros((n, k))
        Z[np.arange(n), labels] = 1.0
        d = A.sum(axis=1) - np.diag(A)
        block_degree = Z.T @ d
        denom = block_degree[labels]
        theta = np.where(denom > 0, d / np.where(denom > 0, denom, 1.0), 0.0)
        block_totals = Z.T @ A @ Z
        self.labels_ = labels
        self.theta_ = theta
        self.block_totals_ = block_totals
        self.phat_ = clip_probabilities(
            theta[:, None] * block_totals[labels][:, labels] * theta[None, :]
        )
        return self

    def describe(self):
        return {
            "family": self.family,
            "n_communities": self.n_communities,
            "labels": self.labels_.tolist(),
            "theta": self.theta_.tolist(),
            "block_totals": self.block_totals_.tolist(),
        }


class LatentSpaceEstimator(BaseEstimator):
    """Spectral embedding of the data matrix into latent positions.

    Takes the top ``n_dims`` eigenpairs by magnitude and scales the
    eigenvectors by sqrt(|eigenvalue|). The signature (number of positive
    and negative components of the inner product) defaults to the signs
    of the retained eigenvalues.
    """

    family = "lsm"

    def __init__(self, n_dims=1, signature=None):
        self.n_dims = n_dims
        self.signature = signature

    def fit(self, A, y=None):
        A = check_symmetric(A, name="data matrix")
        d = self.n_dims
        pairs = sym_eigs(A, d)
        if self.signature is None:
            signs = np.where(pairs.values > 0, 1.0, -1.0)
            sig = (int((pairs.values > 0).sum()), int((pairs.values <= 0).sum()))
        else:
            a, b = self.signature
            if a + b != d:
                raise ValueError(f"signature {self.signature} does not sum to {d}")
            signs = np.concatenate([np.ones(a), -np.ones(b)])
            sig = (int(a), int(b))
        self.positions_ = pairs.vectors * np.sqrt(np.abs(pairs.values))[None, :]
        self.eigenvalues_ = pairs.values
        self.signature_ = sig
        self.phat_ = clip_probabilities(
            (self.positions_ * signs) @ self.positions_.T
        )
        return self

    def describe(self):
        return {
            "family": self.family,
            "n_dims": self.n_dims,
            "signature": list(self.signature_),
            "positions": self.positions_.tolist(),
        }


class MixedMembershipEstimator(BaseEstimator):
    """Mixed-membership fit via eigenvector ratios and simplex geometry.

    For one community this is a rank-one fit from the leading eigenpair.
    Otherwise: embed nodes as ratio rows, denoise them with k-means,
    locate the simplex corners among the cluster centers by successive
    projection, solve barycentric weights per node, rescale per community
    so the recovered block matrix has unit diagonal, then refine the
    degree multipliers and block matrix by alternating least squares with
    the membership rows held fixed.
    """

    family = "dcmm"

    def __init__(self, n_communities=1, restarts=10, n_sweeps=20,
                 denoise_clusters=None, random_state=None):
        self.n_communities = n_communities
        self.restarts = restarts
        self.n_sweeps = n_sweeps
        self.denoise_clusters = denoise_clusters
        self.random_state = random_state

    def fit(self, A, y=None):
        A = check_symmetric(A, name="data matrix")
        k = self.n_communities
        if k == 1:
            return self._fit_rank_one(A)
        return self._fit_simplex(A, k)

    def _fit_rank_one(self, A):
        pairs = sym_eigs(A, 1)
        lam = max(float(pairs.values[0]), 0.0)
        theta = np.sqrt(lam) * pairs.vectors[:, 0]
        self.membership_ = np.ones((A.shape[0], 1))
        self.theta_ = theta
        self.block_matrix_ = np.ones((1, 1))
        self.phat_ = clip_probabilities(np.outer(theta, theta))
        return self

    def _fit_simplex(self, A, k):
        n = A.shape[0]
        rng = as_generator(self.random_state)
        pairs, ratios = _score_ratios(A, k)
        lam = pairs.values

        n_clusters = self.denoise_clusters
        if n_clusters is None:
            n_clusters = min(n, max(5 * k, int(round(np.sqrt(n)))))
        n_clusters = max(k, min(n_clusters, n))
        try:
            _, centers = kmeans(ratios, n_clusters, restarts=self.restarts,
                                random_state=rng)
        except ValueError:
            # fewer distinct rows than requested clusters: hunt on raw rows
            centers = ratios
        corner_idx = spa_vertices(centers, k)
        corners = centers[corner_idx]

        system = np.vstack([corners.T, np.ones(k)])
        rhs = np.vstack([ratios.T, np.ones(n)])
        try:
            weights = np.linalg.solve(system, rhs).T
        except np.linalg.LinAlgError:
            raise FitError("degenerate simplex: corner system is singular") from None
        weights = np.clip(weights, 0.0, None)
        sums = weights.sum(axis=1, keepdims=True)
        sums[sums == 0] = 1.0
        weights /= sums

        # Per-community rescaling so the implied block matrix has unit
        # diagonal: row k of the eigen-basis mixing matrix is
        # b1[k] * [1, corner_k], with b1 chosen so that (Q Lam Q')_kk = 1.
        aug = np.hstack([np.ones((k, 1)), corners])
        quad = np.einsum("ks,s,ks->k", aug, lam, aug)
        b1 = 1.0 / np.sqrt(np.maximum(quad, 1e-12))
        membership = weights / b1[None, :]
        membership /= membership.sum(axis=1, keepdims=True)
        theta = pairs.vectors[:, 0] / (membership @ b1)
        theta = np.maximum(theta, 1e-12)
        Q = aug * b1[:, None]
        block = Q @ np.diag(lam) @ Q.T
        block = (block + block.T) / 2.0

        theta, block = self._refine(A, membership, theta, block)
        self.membership_ = membership
        self.theta_ = theta
        self.block_matrix_ = block
        scaled = theta[:, None] * membership
        self.phat_ = clip_probabilities(scaled @ block @ scaled.T)
        return self

    def _refine(self, A, membership, theta, block):
        """Alternating least squares on || A - Theta Pi B Pi' Theta ||_F."""
        n = A.shape[0]
        for _ in range(self.n_sweeps):
            X = theta[:, None] * membership
            gram = X.T @ X
            try:
                half = np.linalg.solve(gram, X.T @ A @ X)
                block = np.linalg.solve(gram, half.T).T
            except np.linalg.LinAlgError:
                block = np.linalg.pinv(gram) @ (X.T @ A @ X) @ np.linalg.pinv(gram)
            block = (block + block.T) / 2.0
            core = membership @ block @ membership.T
            for i in range(n):
                v = theta * core[:, i]
                v[i] = 0.0
                denom = v @ v
                if denom > 0:
                    theta[i] = max(float((A[:, i] @ v) / denom), 1e-12)
        return theta, block

    def describe(self):
        return {
            "family": self.family,
            "n_communities": self.n_communities,
            "membership": self.membership_.tolist(),
            "theta": self.theta_.tolist(),
            "block_matrix": self.block_matrix_.tolist(),
        }


_FAMILIES = {
    "er": ErdosRenyiEstimator,
    "beta": BetaModelEstimator,
    "sbm": BlockModelEstimator,
    "dcsbm": DegreeCorrectedBlockModelEstimator,
    "dcmm": MixedMembershipEstimator,
    "lsm": LatentSpaceEstimator,
}


def make_estimator(family, n_communities=None, n_dims=None, signature=None,
                   random_state=None):
    """Construct an unfitted estimator from a family key.

    Families: er, beta, sbm, dcsbm, dcmm (take ``n_communities``) and lsm
    (takes ``n_dims`` and optional ``signature``).
    """
    try:
        cls = _FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown family {family!r}; choose from {sorted(_FAMILIES)}"
        ) from None
    kwargs = {}
    if family in ("sbm", "dcsbm", "dcmm"):
        kwargs["n_communities"] = 1 if n_communities is None else int(n_communities)
        kwargs["random_state"] = random_state
    elif family == "lsm":
        kwargs["n_dims"] = 1 if n_dims is None else int(n_dims)
        kwargs["signature"] = signature
    return cls(**kwargs)


def fit_model(A, model, random_state=None):
    """Fit a fresh clone of ``model`` to the data matrix ``A``.

    ``random_state`` overrides the clone's own setting when the family
    uses randomness (spectral clustering restarts); errors from the
    family fitters propagate unchanged.
    """
    est = clone(model)
    if random_state is not None and "random_state" in est.get_params():
        est.set_params(random_state=random_state)
    return est.fit(A)
