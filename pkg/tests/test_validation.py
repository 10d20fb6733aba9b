import numpy as np
import pytest

from netgof.datasets import DATASETS, DatasetMissingError, load_dataset
from netgof.validation import (
    check_adjacency,
    check_probability_matrix,
    check_square,
    check_symmetric,
)


def test_check_square():
    with pytest.raises(ValueError, match="square"):
        check_square(np.ones((2, 3)))
    assert check_square([[1, 0], [0, 1]]).dtype == float


def test_check_symmetric():
    M = np.array([[0.0, 1.0], [0.5, 0.0]])
    with pytest.raises(ValueError, match="symmetric"):
        check_symmetric(M)


def test_check_adjacency_rules():
    good = np.array([[0.0, 1.0], [1.0, 0.0]])
    check_adjacency(good)
    with pytest.raises(ValueError, match="diagonal"):
        check_adjacency(np.eye(3))
    with pytest.raises(ValueError, match="0 or 1"):
        check_adjacency(np.array([[0.0, 0.5], [0.5, 0.0]]))
    with pytest.raises(ValueError, match="2 nodes"):
        check_adjacency(np.zeros((1, 1)))


def test_check_probability_matrix_names_offender():
    P = np.full((3, 3), 0.5)
    P[0, 1] = P[1, 0] = 1.5
    with pytest.raises(ValueError, match="outside"):
        check_probability_matrix(P)


def test_dataset_registry_and_missing():
    assert set(DATASETS) == {"karate", "dolphin", "football", "foodweb", "trade"}
    A = load_dataset("karate")
    assert A.shape == (34, 34)
    with pytest.raises(DatasetMissingError):
        load_dataset("trade")
    with pytest.raises(ValueError, match="unknown dataset"):
        load_dataset("mystery")
