import numpy as np
import pytest

from netgof.models import (
    BlockModel,
    DegreeCorrectedBlockModel,
    ErdosRenyi,
    LatentSpaceModel,
    MixedMembershipModel,
    NodeAttractiveness,
    build_probability_matrix,
    model_expectation,
    preset,
    sample_adjacency,
)
from netgof.numerics import derive_stream


def test_flat_model_constant_entries():
    P = build_probability_matrix(ErdosRenyi(p=0.3), n=4)
    off = ~np.eye(4, dtype=bool)
    assert np.all(P[off] == 0.3)
    assert np.all(np.diag(P) == 0.0)


def test_attractiveness_zero_gives_half():
    P = build_probability_matrix(NodeAttractiveness(beta=np.zeros(3)))
    off = ~np.eye(3, dtype=bool)
    assert np.all(P[off] == 0.5)


def test_pure_mixed_membership_reduces_to_block_model():
    rng = np.random.default_rng(3)
    labels = rng.integers(0, 3, size=30)
    B = 0.1 * (np.ones((3, 3)) + 4 * np.eye(3))
    Pi = np.zeros((30, 3))
    Pi[np.arange(30), labels] = 1.0
    P_block = build_probability_matrix(BlockModel(block_probs=B, labels=labels))
    P_mixed = build_probability_matrix(
        MixedMembershipModel(block_probs=B, membership=Pi, theta=np.ones(30))
    )
    assert np.array_equal(P_block, P_mixed)  # bitwise


def test_degree_corrected_with_unit_theta_reduces_to_block_model():
    rng = np.random.default_rng(4)
    labels = rng.integers(0, 2, size=20)
    B = np.array([[0.4, 0.1], [0.1, 0.3]])
    P_block = build_probability_matrix(BlockModel(block_probs=B, labels=labels))
    P_dc = build_probability_matrix(
        DegreeCorrectedBlockModel(block_probs=B, labels=labels, theta=np.ones(20))
    )
    assert np.array_equal(P_block, P_dc)


def test_latent_space_out_of_range_names_pair():
    X = np.array([[1.5], [1.5], [0.1]])
    with pytest.raises(ValueError, match=r"\(0, 1\)|outside"):
        build_probability_matrix(LatentSpaceModel(positions=X))


def test_sample_extremes():
    empty = sample_adjacency(np.zeros((5, 5)), 0)
    assert empty.sum() == 0
    full = np.ones((5, 5)) - np.eye(5)
    complete = sample_adjacency(full, 0)
    assert complete.sum() == 20


def test_sample_edge_count_within_binomial_band():
    n, p = 1000, 0.1
    P = build_probability_matrix(ErdosRenyi(p=p, n=n))
    pairs = n * (n - 1) / 2
    sigma = np.sqrt(pairs * p * (1 - p))
    for rep in range(10):
        A = sample_adjacency(P, derive_stream(10, "er-count", rep))
        count = A.sum() / 2
        assert abs(count - pairs * p) <= 4 * sigma


def test_sample_symmetric_zero_diagonal_all_presets():
    cases = [
        ("er", {"p": 0.1}),
        ("beta_linear", {"L": 0.5}),
        ("sbm_planted", {"rho": 0.05}),
        ("dcsbm_planted", {"rho": 0.05}),
        ("lsm_sine", {"rho": 0.5}),
        ("dcmm_planted", {"x": 0.4, "n0": 20, "rho": 0.1, "z": 2.0}),
    ]
    for name, params in cases:
        for rep in range(5):
            stream = derive_stream(3, f"preset-{name}", rep)
            model = preset(name, 90, random_state=stream.child("t"), **params)
            P = build_probability_matrix(model)
            off = ~np.eye(90, dtype=bool)
            assert P[off].min() >= 0.0 and P[off].max() <= 1.0
            A = sample_adjacency(P, stream.child("a"))
            assert np.array_equal(A, A.T)
            assert np.all(np.diag(A) == 0)


def test_beta_linear_preset():
    model = preset("beta_linear", 4, L=0.0)
    assert np.array_equal(model.beta, np.zeros(4))
    model = preset("beta_linear", 100, L=2.0)
    assert model.beta[0] == pytest.approx(2.0 / 100)
    assert model.beta[-1] == pytest.approx(2.0)
    assert np.abs(model.beta).max() == pytest.approx(2.0)


def test_sbm_planted_preset_block_structure():
    model = preset("sbm_planted", 50, rho=0.05, random_state=0)
    B = model.block_probs
    assert np.all(np.diag(B) == 0.25)
    assert np.all(B[~np.eye(3, dtype=bool)] == 0.05)


def test_dcsbm_planted_theta_mixture():
    model = preset("dcsbm_planted", 4000, rho=0.02, random_state=derive_stream(1, "t", 0))
    theta = model.theta
    special = np.isin(theta, (9 / 11, 13 / 11))
    assert 0.1 < special.mean() < 0.3  # two branches at 0.1 each
    body = theta[~special]
    assert body.min() >= 4 / 5 and body.max() <= 6 / 5
    assert theta.mean() == pytest.approx(1.0, abs=0.02)


def test_lsm_sine_entries_bounded():
    for rho in (0.2, 0.5, 1.0):
        model = preset("lsm_sine", 200, rho=rho)
        P = model_expectation(model)
        assert P.max() <= (0.9 * rho) ** 2 + 1e-12


def test_dcmm_planted_layout():
    stream = derive_stream(2, "dcmm", 0)
    model = preset(
        "dcmm_planted", 500, random_state=stream, x=0.4, n0=80, rho=0.1, z=1.0
    )
    Pi = model.membership
    pure = (Pi == 1.0).any(axis=1)
    assert pure.sum() == 240
    assert np.all(np.diag(model.block_probs) == 1.0)
    off = ~np.eye(3, dtype=bool)
    assert np.all(model.block_probs[off] == 0.1)
    assert np.array_equal(model.theta, np.ones(500))
    mixed = Pi[240:]
    allowed = {(0.4, 0.4, 0.2), (0.4, 0.2, 0.4), (0.2, 0.4, 0.4)}
    third = (1 / 3, 1 / 3, 1 / 3)
    for row in mixed:
        key = tuple(np.round(row, 12))
        assert key in allowed or np.allclose(row, third)


def test_dcmm_preset_rejects_bad_x():
    with pytest.raises(ValueError):
        preset("dcmm_planted", 100, x=0.6, n0=10)


def test_membership_closure_under_column_stochastic_maps(rng):
    # any column-stochastic map sends unit-sum vectors to unit-sum vectors
    for _ in range(1000):
        k = int(rng.integers(1, 7))
        l = int(rng.integers(1, 7))
        Q = rng.random((k, l))
        Q /= Q.sum(axis=0, keepdims=True)
        y = rng.normal(size=l)
        y[0] += 2.0 * l  # keep the sum bounded away from zero
        y = y / y.sum()
        x = Q @ y
        assert x.sum() == pytest.approx(1.0, abs=1e-12)


def test_unknown_preset():
    with pytest.raises(ValueError, match="unknown preset"):
        preset("nope", 10)
