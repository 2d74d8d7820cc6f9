"""Kernel matrices (linear and Gaussian) and their centering.

Samples are columns of ``X`` (shape ``(D, N)``) throughout.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .errors import DegenerateDataError, DimensionError, InputError, StateError
from .linalg import as_matrix


@dataclass(frozen=True)
class KernelMatrix:
    """Symmetric kernel matrix plus how it was produced.

    ``provenance`` holds ``{"family": "linear"}`` or
    ``{"family": "gaussian", "sigma": float}``.
    """

    K: np.ndarray
    centered: bool = False
    provenance: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.K.shape[0]

    def evaluate(self, X, Y):
        """Cross-kernel between columns of ``X`` and ``Y`` with the stored parameters."""
        return kernel_function(self.provenance)(X, Y)


def mean_pairwise_distance(X):
    X = as_matrix(X, "X")
    if X.shape[1] < 2:
        raise DegenerateDataError("need at least two samples for a mean distance")
    return float(pdist(X.T).mean())


def kernel_function(provenance):
    family = provenance.get("family")
    if family == "linear":
        return lambda X, Y: np.asarray(X, float).T @ np.asarray(Y, float)
    if family == "gaussian":
        sigma = float(provenance["sigma"])
        return lambda X, Y: np.exp(
            -cdist(np.asarray(X, float).T, np.asarray(Y, float).T, "sqeuclidean")
            / (2.0 * sigma**2)
        )
    raise InputError(f"unknown kernel family {family!r}")


def gaussian_kernel(X, sigma="auto"):
    """K(i, j) = exp(-||x_i - x_j||^2 / (2 sigma^2)).

    ``sigma="auto"`` uses the mean Euclidean distance over distinct pairs.
    """
    X = as_matrix(X, "X")
    if sigma is None or sigma == "auto":
        sigma = mean_pairwise_distance(X)
        if sigma == 0:
            raise DegenerateDataError("all samples identical; automatic bandwidth is zero")
    sigma = float(sigma)
    if not sigma > 0:
        raise InputError(f"sigma must be positive, got {sigma}")
    prov = {"family": "gaussian", "sigma": sigma}
    K = kernel_function(prov)(X, X)
    K = 0.5 * (K + K.T)
    np.fill_diagonal(K, 1.0)
    return KernelMatrix(K, False, prov)


def linear_kernel(X):
    X = as_matrix(X, "X")
    K = X.T @ X
    return KernelMatrix(0.5 * (K + K.T), False, {"family": "linear"})


def center_kernel(Kbar):
    """Double-center a kernel: H Kbar H with H = I - (1/N) 11^T."""
    if isinstance(Kbar, KernelMatrix):
        if Kbar.centered:
            raise StateError("kernel is already centered")
        K = Kbar.K
    else:
        K = as_matrix(Kbar, "K")
    if K.shape[0] != K.shape[1]:
        raise DimensionError(f"kernel must be square, got {K.shape}")
    col = K.mean(axis=0, keepdims=True)
    row = K.mean(axis=1, keepdims=True)
    Kc = K - col - row + K.mean()
    Kc = 0.5 * (Kc + Kc.T)
    if isinstance(Kbar, KernelMatrix):
        return replace(Kbar, K=Kc, centered=True)
    return KernelMatrix(Kc, True, {})


def center_cross_kernel(K_new, K_train):
    """Center a train-by-new cross kernel consistently with ``center_kernel``.

    ``K_new[i, t] = k(x_i, y_t)`` for training columns ``x_i``; ``K_train`` is
    the *uncentered* training kernel.
    """
    K_new = np.asarray(K_new, dtype=float)
    K_train = np.asarray(K_train, dtype=float)
    if K_new.shape[0] != K_train.shape[0]:
        raise DimensionError(
            f"cross kernel has {K_new.shape[0]} rows, training kernel is {K_train.shape}"
        )
    train_row_means = K_train.mean(axis=1, keepdims=True)
    new_col_means = K_new.mean(axis=0, keepdims=True)
    return K_new - train_row_means - new_col_means + K_train.mean()
