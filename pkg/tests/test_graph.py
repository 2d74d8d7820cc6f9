import numpy as np
import pytest

from mvgcca.errors import ConfigurationError, DimensionError, InputError
from mvgcca.graph import (combine_adjacency, knn_kernel_graph, laplacian, restrict,
                          supervised_cosine_graph)
from mvgcca.kernels import gaussian_kernel

from conftest import random_graph


def brute_neighbors(sim, i, k, allowed=None):
    cands = [j for j in range(sim.shape[0]) if j != i and (allowed is None or allowed[j])]
    cands.sort(key=lambda j: (-sim[i, j], j))
    return set(cands[:k])


def assert_laplacian_ok(L, rng):
    np.testing.assert_allclose(L.sum(axis=1), 0, atol=1e-10)
    for _ in range(20):
        x = rng.standard_normal(L.shape[0])
        assert x @ L @ x >= -1e-8 * (x @ x)


def test_laplacian_examples():
    np.testing.assert_array_equal(laplacian([[0, 1], [1, 0]]), [[1, -1], [-1, 1]])
    np.testing.assert_array_equal(laplacian(np.zeros((3, 3))), np.zeros((3, 3)))
    L = laplacian(np.ones((3, 3)) - np.eye(3))
    np.testing.assert_allclose(L, 2 * np.eye(3) - (np.ones((3, 3)) - np.eye(3)))
    np.testing.assert_allclose(np.linalg.eigvalsh(L), [0, 3, 3], atol=1e-12)


def test_laplacian_validation():
    with pytest.raises(InputError):
        laplacian([[0, 1], [0, 0]])
    with pytest.raises(InputError):
        laplacian([[0, -1], [-1, 0]])


def test_laplacian_random_invariants(rng):
    for _ in range(10):
        assert_laplacian_ok(laplacian(random_graph(rng, 12)), rng)


def test_knn_two_nodes():
    K = np.array([[1.0, 0.3], [0.3, 1.0]])
    np.testing.assert_array_equal(knn_kernel_graph(K, 1), [[0, 0.3], [0.3, 0]])


def test_knn_full_neighborhood(rng):
    X = rng.standard_normal((3, 6))
    K = gaussian_kernel(X).K
    W = knn_kernel_graph(K, 5)
    np.testing.assert_allclose(W, K - np.diag(np.diag(K)))


def test_knn_points_on_line():
    X = np.array([[0.0, 1.0, 3.0, 7.0]])
    K = gaussian_kernel(X, 2.0).K
    W = knn_kernel_graph(K, 1)
    # oracle: each point's single nearest neighbor by exhaustive distance search
    edges = set()
    for i in range(4):
        j = min((j for j in range(4) if j != i), key=lambda j: (abs(X[0, i] - X[0, j]), j))
        edges.add(frozenset((i, j)))
    assert edges == {frozenset((0, 1)), frozenset((1, 2)), frozenset((2, 3))}
    got = {frozenset((i, j)) for i, j in zip(*np.nonzero(W))}
    assert got == edges
    for e in edges:
        i, j = tuple(e)
        assert W[i, j] == K[i, j]


def test_knn_union_rule_random(rng):
    K = gaussian_kernel(rng.standard_normal((4, 15))).K
    W = knn_kernel_graph(K, 3)
    for i in range(15):
        for j in range(15):
            linked = i != j and (j in brute_neighbors(K, i, 3) or i in brute_neighbors(K, j, 3))
            assert (W[i, j] > 0) == linked
    np.testing.assert_array_equal(W, W.T)
    assert np.all(np.diag(W) == 0)


def test_knn_ties_go_to_lower_index():
    K = np.array([[1.0, 0.5, 0.5], [0.5, 1.0, 0.1], [0.5, 0.1, 1.0]])
    W = knn_kernel_graph(K, 1)
    # node 0 picks node 1 (tie with 2); node 2 picks 0; node 1 picks 0
    assert W[0, 1] == 0.5 and W[0, 2] == 0.5 and W[1, 2] == 0


def test_knn_permutation_equivariance(rng):
    K = gaussian_kernel(rng.standard_normal((3, 10))).K
    p = rng.permutation(10)
    W = knn_kernel_graph(K, 2)
    Wp = knn_kernel_graph(K[np.ix_(p, p)], 2)
    np.testing.assert_allclose(Wp, W[np.ix_(p, p)])


def test_knn_range():
    with pytest.raises(ConfigurationError):
        knn_kernel_graph(np.eye(3), 3)
    with pytest.raises(ConfigurationError):
        knn_kernel_graph(np.eye(3), 0)


def test_supervised_trivial():
    O = np.array([[1.0, 1.0], [0.0, 1.0]])
    W = supervised_cosine_graph(O, [0, 0], 1)
    np.testing.assert_allclose(W, [[0, 2**-0.5], [2**-0.5, 0]])
    O3 = np.array([[1.0, 1.0, 2.0, 2.0], [0.0, 1.0, 1.0, 0.5]])
    W = supervised_cosine_graph(O3, [0, 1, 0, 1], 1)
    assert W[0, 1] == 0 and W[2, 3] == 0 and W[0, 3] == 0


def test_supervised_matches_per_class_oracle(rng):
    O = rng.standard_normal((5, 12))
    O /= np.linalg.norm(O, axis=0)
    labels = np.repeat([0, 1, 2], 4)
    W = supervised_cosine_graph(O, labels, 2)
    cos = O.T @ O
    for i in range(12):
        for j in range(12):
            same_i = labels == labels[i]
            same_j = labels == labels[j]
            linked = (i != j and labels[i] == labels[j]
                      and (j in brute_neighbors(cos, i, 2, same_i)
                           or i in brute_neighbors(cos, j, 2, same_j)))
            if linked:
                assert W[i, j] == pytest.approx(max(cos[i, j], 0.0))
            else:
                assert W[i, j] == 0.0
    assert np.all(W[labels[:, None] != labels[None, :]] == 0)


def test_supervised_errors():
    with pytest.raises(ConfigurationError):
        supervised_cosine_graph(np.eye(3), [0, 0, 1], 1)
    with pytest.raises(InputError):
        supervised_cosine_graph(np.array([[1.0, 0.0], [0.0, 0.0]]), [0, 0], 1)


def test_combine(rng):
    W = random_graph(rng, 6)
    np.testing.assert_array_equal(combine_adjacency([W], [1.0]), W)
    A = np.zeros((3, 3)); A[0, 1] = A[1, 0] = 1
    B = np.zeros((3, 3)); B[1, 2] = B[2, 1] = 1
    np.testing.assert_array_equal(combine_adjacency([A, B]), A + B)
    Gs = [random_graph(rng, 6) for _ in range(3)]
    out = combine_adjacency(Gs, [0.5, 0.3, 0.2])
    for i in range(6):
        for j in range(6):
            assert out[i, j] == pytest.approx(0.5 * Gs[0][i, j] + 0.3 * Gs[1][i, j] + 0.2 * Gs[2][i, j])
    np.testing.assert_array_equal(combine_adjacency(Gs, [0, 0, 0]), np.zeros((6, 6)))
    with pytest.raises(DimensionError):
        combine_adjacency([A, np.zeros((4, 4))])
    with pytest.raises(ConfigurationError):
        combine_adjacency([A, B], [1.0, -1.0])


def test_restrict():
    W = np.ones((4, 4)) - np.eye(4)
    np.testing.assert_array_equal(restrict(W, [0, 2]), [[0, 1], [1, 0]])
