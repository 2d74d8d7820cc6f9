import numpy as np
import pytest

from mvgcca.errors import DegenerateDataError, StateError
from mvgcca.kernels import (KernelMatrix, center_cross_kernel, center_kernel, gaussian_kernel,
                            linear_kernel, mean_pairwise_distance)

from conftest import random_spd


def test_gaussian_diagonal_and_range(rng):
    X = rng.standard_normal((4, 9))
    K = gaussian_kernel(X)
    np.testing.assert_array_equal(np.diag(K.K), 1.0)
    assert np.all(K.K > 0) and np.all(K.K <= 1)
    np.testing.assert_array_equal(K.K, K.K.T)
    assert K.provenance["family"] == "gaussian"
    assert np.linalg.eigvalsh(K.K).min() >= -1e-8 * np.linalg.norm(K.K)


def test_gaussian_closed_form_distance():
    sigma = 0.7
    X = np.array([[0.0, sigma * np.sqrt(2)], [0.0, 0.0]])
    K = gaussian_kernel(X, sigma)
    assert K.K[0, 1] == pytest.approx(np.exp(-1.0), rel=1e-14)
    assert K.K[0, 1] == pytest.approx(0.367879, abs=1e-6)


def test_gaussian_brute_force(rng):
    X = rng.standard_normal((2, 3))
    K = gaussian_kernel(X)
    dists = [np.linalg.norm(X[:, i] - X[:, j]) for i in range(3) for j in range(i + 1, 3)]
    sigma = np.mean(dists)
    assert K.provenance["sigma"] == pytest.approx(sigma)
    for i in range(3):
        for j in range(3):
            expect = np.exp(-np.sum((X[:, i] - X[:, j]) ** 2) / (2 * sigma**2))
            assert K.K[i, j] == pytest.approx(expect, rel=1e-12)


def test_gaussian_auto_degenerate():
    with pytest.raises(DegenerateDataError):
        gaussian_kernel(np.ones((2, 4)))
    with pytest.raises(DegenerateDataError):
        mean_pairwise_distance(np.ones((2, 1)))


def test_linear_kernel(rng):
    np.testing.assert_array_equal(linear_kernel(np.eye(2)).K, np.eye(2))
    X = np.array([[1.0, 0.0], [0.0, 2.0]])
    np.testing.assert_array_equal(linear_kernel(X).K, np.diag([1.0, 4.0]))
    X = rng.standard_normal((3, 4))
    np.testing.assert_allclose(linear_kernel(X).K, X.T @ X, atol=1e-14)


def test_center_examples(rng):
    np.testing.assert_allclose(center_kernel(KernelMatrix(np.ones((4, 4)))).K, 0, atol=1e-15)
    A = random_spd(rng, 5)
    H = np.eye(5) - np.ones((5, 5)) / 5
    Kc = center_kernel(KernelMatrix(A))
    assert Kc.centered
    np.testing.assert_allclose(Kc.K, H @ A @ H, atol=1e-12)
    assert np.abs(Kc.K.sum(0)).max() <= 1e-10 and np.abs(Kc.K.sum(1)).max() <= 1e-10
    again = center_kernel(KernelMatrix(Kc.K))
    np.testing.assert_allclose(again.K, Kc.K, atol=1e-12)


def test_double_centering_is_refused(rng):
    Kc = center_kernel(linear_kernel(rng.standard_normal((2, 4))))
    with pytest.raises(StateError):
        center_kernel(Kc)


def test_centering_consistent_with_feature_centering(rng):
    X = rng.standard_normal((3, 8)) + 5.0
    Xc = X - X.mean(axis=1, keepdims=True)
    np.testing.assert_allclose(center_kernel(linear_kernel(X)).K, linear_kernel(Xc).K, atol=1e-9)


def test_cross_kernel_centering_on_training_points(rng):
    X = rng.standard_normal((3, 7))
    K = gaussian_kernel(X)
    cross = K.evaluate(X, X)
    np.testing.assert_allclose(center_cross_kernel(cross, K.K), center_kernel(K).K, atol=1e-12)


def test_cross_kernel_centering_linear_matches_features(rng):
    X = rng.standard_normal((3, 7))
    Y = rng.standard_normal((3, 4))
    K = linear_kernel(X)
    mu = X.mean(axis=1, keepdims=True)
    # new columns are centered with the training mean
    expect = (X - mu).T @ (Y - mu)
    np.testing.assert_allclose(center_cross_kernel(K.evaluate(X, Y), K.K), expect, atol=1e-10)
