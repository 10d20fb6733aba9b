import io

import numpy as np
import pytest

from netgof.graph import (
    degrees,
    load_edge_list,
    save_edge_list,
    summarize,
    threshold_weight_matrix,
)


def test_load_one_based_basic():
    A = load_edge_list(io.StringIO("1 2\n1 3\n"), indexing="one-based")
    assert A.shape == (3, 3)
    assert np.array_equal(degrees(A), [2, 1, 1])
    assert A[0, 1] == A[1, 0] == 1 and A[0, 2] == 1 and A[1, 2] == 0


def test_load_zero_based_dedup():
    A, stats = load_edge_list(
        io.StringIO("0 1\n1 0\n"), indexing="zero-based", return_stats=True
    )
    assert stats.edges == 1
    assert stats.duplicates_merged == 1
    assert stats.self_loops_dropped == 0
    assert A.sum() == 2  # single undirected edge


def test_load_drops_self_loops_with_warning():
    with pytest.warns(UserWarning, match="self-loop"):
        A, stats = load_edge_list(
            io.StringIO("1 1\n1 2\n"), return_stats=True
        )
    assert stats.self_loops_dropped == 1
    assert A.sum() == 2


def test_load_comments_and_commas():
    text = "# header\n1, 2\n2 3  # trailing comment\n\n"
    A = load_edge_list(io.StringIO(text))
    assert A.sum() == 4


def test_load_malformed_line_reports_number():
    with pytest.raises(ValueError, match="line 2"):
        load_edge_list(io.StringIO("1 2\n1 2 3\n"))
    with pytest.raises(ValueError, match="line 1"):
        load_edge_list(io.StringIO("a b\n"))


def test_load_empty_graph_errors():
    with pytest.raises(ValueError, match="empty"):
        load_edge_list(io.StringIO("# nothing here\n"))


def test_load_respects_node_count_override():
    A = load_edge_list(io.StringIO("1 2\n"), n_nodes=5)
    assert A.shape == (5, 5)
    with pytest.raises(ValueError):
        load_edge_list(io.StringIO("1 4\n"), n_nodes=2)


def test_load_order_insensitive(rng):
    lines = ["1 2", "2 3", "3 4", "1 4", "2 4"]
    A1 = load_edge_list(io.StringIO("\n".join(lines)))
    order = rng.permutation(len(lines))
    A2 = load_edge_list(io.StringIO("\n".join(lines[i] for i in order)))
    assert np.array_equal(A1, A2)


def test_round_trip(rng, tmp_path):
    n = 12
    M = (rng.random((n, n)) < 0.3).astype(float)
    A = np.triu(M, 1)
    A = A + A.T
    path = str(tmp_path / "g.edges")
    save_edge_list(A, path)
    assert np.array_equal(load_edge_list(path), A)


def test_degrees_empty_and_complete():
    n = 4
    empty = np.zeros((3, 3))
    assert np.array_equal(degrees(empty), [0, 0, 0])
    complete = np.ones((n, n)) - np.eye(n)
    assert np.array_equal(degrees(complete), [3, 3, 3, 3])


def test_degree_sum_is_twice_edges(rng):
    M = (rng.random((20, 20)) < 0.2).astype(float)
    A = np.triu(M, 1)
    A = A + A.T
    s = summarize(A)
    assert degrees(A).sum() == 2 * s.edges


def test_summarize_complete_graph():
    A = np.ones((3, 3)) - np.eye(3)
    s = summarize(A)
    assert (s.n, s.edges, s.d_max, s.d_min, s.mean_degree) == (3, 3, 2, 2, 2.0)


def test_karate_summary(karate):
    s = summarize(karate)
    assert (s.n, s.edges, s.d_max, s.d_min) == (34, 78, 17, 1)
    assert s.mean_degree == pytest.approx(4.59, abs=0.005)


def test_threshold_weight_matrix_median_rule():
    W = np.array(
        [
            [0.0, 5.0, 1.0, 2.0],
            [5.0, 0.0, 3.0, 4.0],
            [1.0, 3.0, 0.0, 6.0],
            [2.0, 4.0, 6.0, 0.0],
        ]
    )
    A = threshold_weight_matrix(W)
    # median of {5,1,2,3,4,6} is 3.5: edges where W >= 3.5
    expected = (W >= 3.5).astype(float)
    np.fill_diagonal(expected, 0.0)
    assert np.array_equal(A, expected)
    assert np.array_equal(A, A.T)
