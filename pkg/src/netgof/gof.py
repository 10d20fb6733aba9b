"""The cubed-trace goodness-of-fit test and sequential model selection.

Residuals are standardized entrywise, (A_ij - p_ij) / sqrt(n p_ij (1 -
p_ij)) with a zero diagonal, so that under a correctly specified model
the matrix behaves like a generalized Wigner matrix and the statistic
trace(R^3) / sqrt(6) is asymptotically standard normal. A candidate
model is rejected two-sided at level alpha when the statistic exceeds
the normal quantile; scanning candidate community counts upward and
keeping the first accepted one estimates the number of communities in
mixed-membership models.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .estimators import FitError, MixedMembershipEstimator, fit_model
from .numerics import as_stream, normal_cdf, normal_quantile, trace_cubed
from .validation import check_symmetric

__all__ = [
    "Residuals",
    "TestResult",
    "SelectionResult",
    "normalize_residuals",
    "normalize_true",
    "trace_statistic",
    "gof_test",
    "select_k",
    "delta_cubed_diagnostic",
    "max_abs_deviation",
]

_SQRT6 = math.sqrt(6.0)


@dataclass(frozen=True)
class Residuals:
    """Standardized residual matrix with its provenance.

    ``provenance`` is "fitted" when the normalization used estimated
    probabilities and "oracle" when it used the true ones.
    """

    matrix: np.ndarray
    provenance: str


def _normalize(A, P, provenance):
    A = np.asarray(A, dtype=float)
    P = np.asarray(P, dtype=float)
    if A.shape != P.shape:
        raise ValueError(f"shape mismatch: data {A.shape} vs probabilities {P.shape}")
    n = A.shape[0]
    off = ~np.eye(n, dtype=bool)
    if np.any(P[off] <= 0.0) or np.any(P[off] >= 1.0):
        raise ValueError(
            "off-diagonal probabilities must lie strictly inside (0, 1); "
            "clip fitted matrices before normalizing"
        )
    denom = np.sqrt(n * P * (1.0 - P))
    np.fill_diagonal(denom, 1.0)
    R = (A - P) / denom
    np.fill_diagonal(R, 0.0)
    return Residuals(matrix=R, provenance=provenance)


def normalize_residuals(A, phat):
    """Standardize A by fitted probabilities (clipped upstream)."""
    return _normalize(A, phat, "fitted")


def normalize_true(A, P):
    """Standardize A by the true probabilities, for null-law experiments."""
    return _normalize(A, P, "oracle")


def trace_statistic(residuals):
    """trace(R^3) / sqrt(6) for a residual matrix or plain array."""
    R = residuals.matrix if isinstance(residuals, Residuals) else residuals
    return trace_cubed(R) / _SQRT6


@dataclass(frozen=True)
class TestResult:
    """Outcome of one goodness-of-fit test."""

    statistic: float
    p_value: float
    alpha: float
    decision: str  # "accept" | "reject"
    model: object = None
    residuals: Residuals = field(default=None, repr=False)

    @property
    def reject(self):
        return self.decision == "reject"

    def to_dict(self):
        out = {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "alpha": self.alpha,
            "decision": self.decision,
        }
        if self.model is not None:
            out["model"] = _fit_summary(self.model)
        return out


def _fit_summary(est):
    summary = {"family": getattr(est, "family", type(est).__name__)}
    for attr in ("n_communities", "n_dims"):
        if hasattr(est, attr):
            summary[attr] = getattr(est, attr)
    for attr in ("p_", "n_iter_", "residual_", "signature_"):
        if hasattr(est, attr):
            value = getattr(est, attr)
            summary[attr.rstrip("_")] = (
                list(value) if isinstance(value, (tuple, np.ndarray)) else value
            )
    return summary


def gof_test(A, model, alpha=0.05, random_state=None, keep_residuals=True):
    """Fit a candidate model and test it against the observed graph.

    Returns a TestResult; the fitted estimator and the residual matrix
    stay attached for auditing. Fit failures raise FitError (the
    candidate is untestable, which is not a rejection).
    """
    A = check_symmetric(A, name="data matrix")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha={alpha} must lie in (0, 1)")
    try:
        fitted = fit_model(A, model, random_state=random_state)
    except FitError as err:
        raise FitError(
            f"candidate {getattr(model, 'family', type(model).__name__)!r} "
            f"is untestable: {err}"
        ) from err
    residuals = normalize_residuals(A, fitted.phat_)
    statistic = trace_statistic(residuals)
    p_value = float(2.0 * (1.0 - normal_cdf(abs(statistic))))
    threshold = normal_quantile(1.0 - alpha / 2.0)
    decision = "reject" if abs(statistic) >= threshold else "accept"
    return TestResult(
        statistic=statistic,
        p_value=p_value,
        alpha=alpha,
        decision=decision,
        model=fitted,
        residuals=residuals if keep_residuals else None,
    )


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of the sequential community-count scan."""

    k_hat: object  # int or None when every candidate was rejected
    alpha: float
    k_max: int
    trace: tuple  # one record per evaluated candidate count

    def to_dict(self):
        return {
            "k_hat": self.k_hat,
            "alpha": self.alpha,
            "k_max": self.k_max,
            "trace": [dict(rec) for rec in self.trace],
        }


def select_k(A, k_max=10, alpha=0.001, random_state=None, **estimator_params):
    """Smallest mixed-membership community count accepted by the test.

    Tests k = 1, 2, ... up to ``k_max`` and stops at the first accepted
    candidate; returns k_hat = None when all are rejected. A fit failure
    at some k is recorded in the trace and counted as a rejection with a
    warning rather than aborting the scan.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    A = check_symmetric(A, name="data matrix")
    stream = as_stream(random_state)
    records = []
    k_hat = None
    for k in range(1, k_max + 1):
        candidate = MixedMembershipEstimator(n_communities=k, **estimator_params)
        try:
            result = gof_test(
                A, candidate, alpha=alpha,
                random_state=stream.child(k), keep_residuals=False,
            )
        except FitError as err:
            warnings.warn(
                f"fit failed at k={k} ({err}); counting as rejection", stacklevel=2
            )
            records.append(
                {"k": k, "statistic": None, "p_value": None,
                 "decision": "error", "error": str(err)}
            )
            continue
        records.append(
            {"k": k, "statistic": result.statistic, "p_value": result.p_value,
             "decision": result.decision}
        )
        if not result.reject:
            k_hat = k
            break
    return SelectionResult(
        k_hat=k_hat, alpha=alpha, k_max=k_max, trace=tuple(records)
    )


def delta_cubed_diagnostic(P, phat):
    """Cubed trace of the standardized estimation-error matrix.

    Simulation-only diagnostic: requires the true probabilities, which
    must be strictly inside (0, 1) off the diagonal.
    """
    P = np.asarray(P, dtype=float)
    phat = np.asarray(phat, dtype=float)
    if P.shape != phat.shape:
        raise ValueError("probability matrices must share a shape")
    n = P.shape[0]
    off = ~np.eye(n, dtype=bool)
    if np.any(P[off] <= 0.0) or np.any(P[off] >= 1.0):
        raise ValueError("true probabilities on the boundary {0, 1} are degenerate")
    denom = np.sqrt(n * P * (1.0 - P))
    np.fill_diagonal(denom, 1.0)
    delta = (P - phat) / denom
    np.fill_diagonal(delta, 0.0)
    return trace_cubed(delta)


def max_abs_deviation(P, phat):
    """Largest off-diagonal |phat - P|; diagnostic for estimator accuracy."""
    P = np.asarray(P, dtype=float)
    phat = np.asarray(phat, dtype=float)
    if P.shape != phat.shape:
        raise ValueError("probability matrices must share a shape")
    off = ~np.eye(P.shape[0], dtype=bool)
    return float(np.abs(phat - P)[off].max())
