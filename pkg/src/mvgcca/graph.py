"""Source-graph construction: Laplacians, k-NN kernel graphs, supervised
cosine graphs and weighted combinations.

Adjacency matrices are plain symmetric ``(N, N)`` arrays with nonnegative
entries and a zero diagonal.
"""

import numpy as np

from .errors import ConfigurationError, DimensionError, InputError
from .linalg import as_matrix


def validate_adjacency(W, name="W"):
    W = as_matrix(W, name)
    if W.shape[0] != W.shape[1]:
        raise DimensionError(f"{name} must be square, got {W.shape}")
    if not np.array_equal(W, W.T):
        scale = max(1.0, np.abs(W).max(initial=0.0))
        if np.abs(W - W.T).max() > 1e-12 * scale:
            raise InputError(f"{name} is not symmetric")
        W = 0.5 * (W + W.T)
    if np.any(W < 0):
        raise InputError(f"{name} has negative edge weights")
    if np.any(np.diag(W) != 0):
        W = W.copy()
        np.fill_diagonal(W, 0.0)
    return W


def laplacian(W):
    """Combinatorial graph Laplacian L = D - W."""
    W = validate_adjacency(W)
    return np.diag(W.sum(axis=1)) - W


def degree(W):
    return validate_adjacency(W).sum(axis=1)


def _neighbor_mask(sim, k, allowed=None):
    """Boolean (N, N) mask, row i marking the k most similar j != i.

    ``allowed`` restricts candidates (e.g. same label). Ties in similarity go
    to the lower column index.
    """
    n = sim.shape[0]
    mask = np.zeros((n, n), dtype=bool)
    idx = np.arange(n)
    for i in range(n):
        cand = idx != i
        if allowed is not None:
            cand &= allowed[i]
        cols = idx[cand]
        # lexsort: last key is primary -> descending similarity, then index
        order = np.lexsort((cols, -sim[i, cols]))
        mask[i, cols[order[:k]]] = True
    return mask


def knn_kernel_graph(K, k1):
    """k-NN graph weighted by kernel similarity.

    ``w_ij = K[i, j]`` when j is among the ``k1`` most similar samples of i
    or i among those of j; zero otherwise.
    """
    K = as_matrix(getattr(K, "K", K), "K")
    n = K.shape[0]
    if K.shape != (n, n):
        raise DimensionError(f"kernel must be square, got {K.shape}")
    if not np.allclose(K, K.T, rtol=0, atol=1e-10 * max(1.0, np.abs(K).max())):
        raise InputError("kernel matrix is not symmetric")
    if not 1 <= k1 <= n - 1:
        raise ConfigurationError(f"k1={k1} must lie in [1, {n - 1}]")
    mask = _neighbor_mask(K, k1)
    mask |= mask.T
    W = np.where(mask, K, 0.0)
    W = 0.5 * (W + W.T)
    np.fill_diagonal(W, 0.0)
    return validate_adjacency(W)


def supervised_cosine_graph(O, labels, k2):
    """Cosine-similarity graph linking only same-label samples.

    Neighborhoods are the ``k2`` most cosine-similar columns of ``O`` that
    share the label of the query column; an edge exists if either endpoint
    lists the other.
    """
    O = as_matrix(O, "O")
    labels = np.asarray(labels)
    n = O.shape[1]
    if labels.shape != (n,):
        raise DimensionError(f"{labels.size} labels for {n} samples")
    norms = np.linalg.norm(O, axis=0)
    if np.any(norms == 0):
        bad = int(np.flatnonzero(norms == 0)[0])
        raise InputError(f"column {bad} of O is zero; cosine similarity undefined")
    _, counts = np.unique(labels, return_counts=True)
    if k2 < 1 or counts.min() < k2 + 1:
        raise ConfigurationError(
            f"k2={k2} needs every class to have at least {k2 + 1} members "
            f"(smallest has {counts.min()})"
        )
    On = O / norms
    cos = On.T @ On
    same = labels[:, None] == labels[None, :]
    mask = _neighbor_mask(cos, k2, allowed=same)
    mask |= mask.T
    W = np.where(mask, cos, 0.0)
    W = 0.5 * (W + W.T)
    np.fill_diagonal(W, 0.0)
    # cosine can be negative for far-apart same-class samples; edges carry
    # similarity weights, so clip to keep L positive semidefinite
    return np.clip(W, 0.0, None)


def combine_adjacency(graphs, weights=None):
    """Weighted sum of adjacency matrices (unit weights by default)."""
    graphs = [validate_adjacency(W, f"graphs[{i}]") for i, W in enumerate(graphs)]
    if not graphs:
        raise ConfigurationError("need at least one graph")
    if weights is None:
        weights = np.ones(len(graphs))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(graphs),):
        raise DimensionError(f"{weights.size} weights for {len(graphs)} graphs")
    if np.any(weights < 0):
        raise ConfigurationError("graph weights must be nonnegative")
    n = graphs[0].shape[0]
    if any(W.shape != (n, n) for W in graphs):
        raise DimensionError("graphs have different sizes")
    out = np.zeros((n, n))
    for w, W in zip(weights, graphs):
        out += w * W
    return out


def restrict(W, idx):
    """Induced subgraph on the samples ``idx``."""
    W = validate_adjacency(W)
    idx = np.asarray(idx)
    return W[np.ix_(idx, idx)]
