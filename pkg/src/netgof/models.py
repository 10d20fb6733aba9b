"""Ground-truth model families and samplers.

Six generative families for undirected, unweighted graphs: flat edge
probability, node-attractiveness (logistic) models, block models with and
without degree correction, mixed-membership block models, and latent
inner-product (dot-product) models. Each model builds an explicit n x n
edge-probability matrix; Bernoulli sampling on the upper triangle yields
adjacency matrices.
"""

import inspect
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .numerics import as_generator
from .validation import check_probability_matrix

__all__ = [
    "ErdosRenyi",
    "NodeAttractiveness",
    "BlockModel",
    "DegreeCorrectedBlockModel",
    "MixedMembershipModel",
    "LatentSpaceModel",
    "model_expectation",
    "build_probability_matrix",
    "sample_adjacency",
    "model_to_dict",
    "preset",
    "PRESETS",
    "L_CHOICES",
]


def _freeze(a):
    a = np.asarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ErdosRenyi:
    """Single shared edge probability; ``n`` fixes the node count."""

    p: float
    n: int = None

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")


@dataclass(frozen=True)
class NodeAttractiveness:
    """Logistic node-parameter model: p_ij = sigmoid(beta_i + beta_j)."""

    beta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "beta", _freeze(self.beta))


@dataclass(frozen=True)
class BlockModel:
    """Disjoint communities; edge probability depends only on the labels."""

    block_probs: np.ndarray  # K x K symmetric, entries in [0, 1]
    labels: np.ndarray  # length n, values in 0..K-1

    def __post_init__(self):
        B = _freeze(self.block_probs)
        labels = np.asarray(self.labels, dtype=int)
        labels.setflags(write=False)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise ValueError("block_probs must be square")
        if not np.allclose(B, B.T):
            raise ValueError("block_probs must be symmetric")
        if labels.min() < 0 or labels.max() >= B.shape[0]:
            raise ValueError("labels out of range for block_probs")
        object.__setattr__(self, "block_probs", B)
        object.__setattr__(self, "labels", labels)

    @property
    def n_communities(self):
        return self.block_probs.shape[0]


@dataclass(frozen=True)
class DegreeCorrectedBlockModel(BlockModel):
    """Block model with per-node positive degree multipliers."""

    theta: np.ndarray = None

    def __post_init__(self):
        super().__post_init__()
        if self.theta is None:
            raise ValueError("theta is required")
        theta = _freeze(self.theta)
        if theta.shape != self.labels.shape:
            raise ValueError("theta must have one entry per node")
        if np.any(theta < 0):
            raise ValueError("theta must be nonnegative")
        object.__setattr__(self, "theta", theta)


@dataclass(frozen=True)
class MixedMembershipModel:
    """Degree-corrected model with row-stochastic community weights."""

    block_probs: np.ndarray  # K x K symmetric
    membership: np.ndarray  # n x K, rows nonnegative summing to 1
    theta: np.ndarray  # length n, positive

    def __post_init__(self):
        B = _freeze(self.block_probs)
        Pi = _freeze(self.membership)
        theta = _freeze(self.theta)
        if not np.allclose(B, B.T):
            raise ValueError("block_probs must be symmetric")
        if Pi.ndim != 2 or Pi.shape[1] != B.shape[0]:
            raise ValueError("membership must be n x K matching block_probs")
        if np.any(Pi < -1e-12) or not np.allclose(Pi.sum(axis=1), 1.0, atol=1e-12):
            raise ValueError("membership rows must be nonnegative and sum to 1")
        if theta.shape != (Pi.shape[0],) or np.any(theta < 0):
            raise ValueError("theta must be a nonnegative length-n vector")
        object.__setattr__(self, "block_probs", B)
        object.__setattr__(self, "membership", Pi)
        object.__setattr__(self, "theta", theta)

    @property
    def n_communities(self):
        return self.block_probs.shape[0]


@dataclass(frozen=True)
class LatentSpaceModel:
    """Inner-product latent positions: p_ij = x_i' I_{a,b} x_j.

    ``signature`` = (a, b) selects a positive and b negated coordinates;
    (d, 0) is the plain dot-product graph.
    """

    positions: np.ndarray  # n x d
    signature: tuple = None

    def __post_init__(self):
        X = _freeze(np.atleast_2d(self.positions))
        d = X.shape[1]
        sig = self.signature if self.signature is not None else (d, 0)
        sig = (int(sig[0]), int(sig[1]))
        if sig[0] + sig[1] != d or sig[0] < 0 or sig[1] < 0:
            raise ValueError(f"signature {sig} does not match dimension {d}")
        object.__setattr__(self, "positions", X)
        object.__setattr__(self, "signature", sig)


def model_expectation(model):
    """The full n x n matrix of edge probabilities, diagonal included.

    Raises when any induced entry leaves [0, 1], naming the worst pair
    (possible for indefinite latent-space signatures).
    """
    if isinstance(model, ErdosRenyi):
        if model.n is None:
            raise ValueError("flat model needs a node count n")
        P = np.full((model.n, model.n), model.p)
    elif isinstance(model, NodeAttractiveness):
        P = expit(model.beta[:, None] + model.beta[None, :])
    elif isinstance(model, MixedMembershipModel):
        core = model.membership @ model.block_probs @ model.membership.T
        P = model.theta[:, None] * core * model.theta[None, :]
    elif isinstance(model, DegreeCorrectedBlockModel):
        core = model.block_probs[model.labels][:, model.labels]
        P = model.theta[:, None] * core * model.theta[None, :]
    elif isinstance(model, BlockModel):
        P = model.block_probs[model.labels][:, model.labels]
    elif isinstance(model, LatentSpaceModel):
        a, b = model.signature
        signs = np.concatenate([np.ones(a), -np.ones(b)])
        P = (model.positions * signs) @ model.positions.T
    else:
        raise TypeError(f"unknown model type {type(model).__name__}")

    off = ~np.eye(P.shape[0], dtype=bool)
    bad = off & ((P < -1e-12) | (P > 1.0 + 1e-12))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueError(
            f"model induces probability {P[i, j]:.6g} outside [0, 1] at pair ({i}, {j})"
        )
    return np.clip((P + P.T) / 2.0, 0.0, 1.0)


def build_probability_matrix(model, n=None):
    """Edge-probability matrix of a model, diagonal zeroed by convention."""
    if isinstance(model, ErdosRenyi) and model.n is None:
        if n is None:
            raise ValueError("flat model requires the node count n")
        model = ErdosRenyi(p=model.p, n=n)
    P = model_expectation(model)
    np.fill_diagonal(P, 0.0)
    return check_probability_matrix(P)


def sample_adjacency(P, random_state=None):
    """Independent Bernoulli draws on the upper triangle, mirrored."""
    P = check_probability_matrix(np.asarray(P, dtype=float))
    n = P.shape[0]
    rng = as_generator(random_state)
    U = rng.random((n, n))
    A = (np.triu(U, 1) < np.triu(P, 1)).astype(float)
    return A + A.T


def model_to_dict(model):
    """JSON-serializable dump of a model's full generative parameters."""
    if isinstance(model, ErdosRenyi):
        return {"family": "er", "p": model.p, "n": model.n}
    if isinstance(model, NodeAttractiveness):
        return {"family": "beta", "beta": model.beta.tolist()}
    if isinstance(model, DegreeCorrectedBlockModel):
        return {
            "family": "dcsbm",
            "block_probs": model.block_probs.tolist(),
            "labels": model.labels.tolist(),
            "theta": model.theta.tolist(),
        }
    if isinstance(model, BlockModel):
        return {
            "family": "sbm",
            "block_probs": model.block_probs.tolist(),
            "labels": model.labels.tolist(),
        }
    if isinstance(model, MixedMembershipModel):
        return {
            "family": "dcmm",
            "block_probs": model.block_probs.tolist(),
            "membership": model.membership.tolist(),
            "theta": model.theta.tolist(),
        }
    if isinstance(model, LatentSpaceModel):
        return {
            "family": "lsm",
            "positions": model.positions.tolist(),
            "signature": list(model.signature),
        }
    raise TypeError(f"unknown model type {type(model).__name__}")


# ---------------------------------------------------------------------------
# Benchmark presets
# ---------------------------------------------------------------------------


def _preset_beta_linear(n, L=0.0):
    """Attractiveness parameters rising linearly from L/n to L."""
    beta = np.arange(1, n + 1) * (L / n) if L else np.zeros(n)
    return NodeAttractiveness(beta=beta)


def _preset_sbm_planted(n, rho=0.05, n_communities=3, random_state=None):
    """Planted assortative blocks: within 5*rho, between rho, labels uniform."""
    K = int(n_communities)
    rng = as_generator(random_state)
    B = rho * (np.ones((K, K)) + 4.0 * np.eye(K))
    labels = rng.integers(0, K, size=n)
    return BlockModel(block_probs=B, labels=labels)


def _preset_dcsbm_planted(n, rho=0.05, n_communities=3, random_state=None):
    """Planted blocks plus a three-branch degree-multiplier mixture.

    theta_i is uniform on [4/5, 6/5] with probability 0.8 and takes the
    values 9/11 and 13/11 with probability 0.1 each (mean exactly 1).
    """
    rng = as_generator(random_state)
    base = _preset_sbm_planted(n, rho=rho, n_communities=n_communities, random_state=rng)
    branch = rng.choice(3, size=n, p=[0.8, 0.1, 0.1])
    theta = np.where(
        branch == 0,
        rng.uniform(4.0 / 5.0, 6.0 / 5.0, size=n),
        np.where(branch == 1, 9.0 / 11.0, 13.0 / 11.0),
    )
    return DegreeCorrectedBlockModel(
        block_probs=base.block_probs, labels=base.labels, theta=theta
    )


def _preset_lsm_sine(n, rho=1.0):
    """Rank-1 dot-product graph with a half-sine latent curve.

    x_i = rho * (0.8 sin(pi (i-1)/(n-1)) + 0.1), so the largest edge
    probability is (0.9 rho)^2 and the build never leaves [0, 1] for
    rho <= 1.
    """
    base = 0.8 * np.sin(np.pi * np.arange(n) / (n - 1)) + 0.1
    return LatentSpaceModel(positions=(rho * base)[:, None], signature=(1, 0))


def _preset_dcmm_planted(n, x=0.4, n0=80, rho=0.1, z=1.0, n_communities=3,
                         random_state=None):
    """Mixed-membership benchmark with planted pure and mixed nodes.

    B = rho * ones + (1 - rho) * I (unit diagonal). The first K*n0 nodes
    are pure, in community blocks of n0; every remaining node draws one
    of the four rows (x, x, 1-2x), (x, 1-2x, x), (1-2x, x, x),
    (1/3, 1/3, 1/3) with equal probability. Degree multipliers satisfy
    1/theta_i ~ Uniform[1, z]; z = 1 gives theta identically 1.
    """
    K = int(n_communities)
    if K != 3:
        raise ValueError("the planted mixed-membership preset is defined for K=3")
    if not 0.0 < x < 0.5:
        raise ValueError(f"x={x} must lie in (0, 1/2)")
    if K * n0 > n:
        raise ValueError(f"{K} communities of {n0} pure nodes exceed n={n}")
    if z < 1.0:
        raise ValueError("z must be >= 1")
    rng = as_generator(random_state)
    B = rho * np.ones((K, K)) + (1.0 - rho) * np.eye(K)
    Pi = np.zeros((n, K))
    for k in range(K):
        Pi[k * n0 : (k + 1) * n0, k] = 1.0
    mixed_rows = np.array(
        [
            [x, x, 1.0 - 2.0 * x],
            [x, 1.0 - 2.0 * x, x],
            [1.0 - 2.0 * x, x, x],
            [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        ]
    )
    n_mixed = n - K * n0
    if n_mixed:
        Pi[K * n0 :] = mixed_rows[rng.integers(0, 4, size=n_mixed)]
    theta = 1.0 / rng.uniform(1.0, z, size=n) if z > 1.0 else np.ones(n)
    return MixedMembershipModel(block_probs=B, membership=Pi, theta=theta)


def _preset_er(n, p=0.05):
    return ErdosRenyi(p=p, n=n)


PRESETS = {
    "er": _preset_er,
    "beta_linear": _preset_beta_linear,
    "sbm_planted": _preset_sbm_planted,
    "dcsbm_planted": _preset_dcsbm_planted,
    "lsm_sine": _preset_lsm_sine,
    "dcmm_planted": _preset_dcmm_planted,
}

# Named values of the attractiveness range L used by the benchmark grids.
L_CHOICES = {
    "zero": lambda n: 0.0,
    "loglog13": lambda n: math.log(math.log(n)) ** (1.0 / 3.0),
    "loglog12": lambda n: math.log(math.log(n)) ** 0.5,
    "loglog": lambda n: math.log(math.log(n)),
    "log12": lambda n: math.log(n) ** 0.5,
}


def preset(name, n, random_state=None, **params):
    """Instantiate a named benchmark generator at size ``n``.

    Randomized ingredients (labels, degree multipliers, mixed rows) are
    drawn from ``random_state``; deterministic presets ignore it.
    """
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}"
        ) from None
    if "random_state" in inspect.signature(factory).parameters:
        return factory(n, random_state=random_state, **params)
    return factory(n, **params)
