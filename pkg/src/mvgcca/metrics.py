"""Evaluation tools for embeddings: normalization, cosine ranking,
precision/recall/MRR, k-means, clustering accuracy, scatter ratio and a
PCA baseline. Embeddings are ``(d, N)`` arrays with samples as columns.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConfigurationError, DimensionError, InputError
from .linalg import as_matrix, fix_signs, sym_eig_topd


@dataclass(frozen=True)
class RankingResult:
    query_id: object
    ranked_ids: np.ndarray
    relevant: np.ndarray  # bool flags aligned with ranked_ids
    scores: np.ndarray


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray
    k: int
    inertia: float = float("nan")


def zscore(E):
    """Standardize each row to zero mean and unit (population) variance.

    Constant rows become zeros and trigger a warning.
    """
    E = as_matrix(np.atleast_2d(E), "E")
    mu = E.mean(axis=1, keepdims=True)
    sd = E.std(axis=1, keepdims=True)
    flat = sd[:, 0] <= 1e-12 * np.maximum(1.0, np.abs(mu[:, 0]))
    if np.any(flat):
        warnings.warn(f"zscore: rows {np.flatnonzero(flat).tolist()} have zero variance; set to 0",
                      RuntimeWarning, stacklevel=2)
    sd[flat] = 1.0
    Z = (E - mu) / sd
    Z[flat] = 0.0
    return Z


def cosine_scores(query, candidates):
    q = np.asarray(query, dtype=float).ravel()
    C = as_matrix(np.atleast_2d(candidates), "candidates")
    if C.shape[0] != q.size:
        raise DimensionError(f"query has {q.size} entries, candidates have {C.shape[0]} rows")
    qn = np.linalg.norm(q)
    if qn == 0:
        raise InputError("query vector is zero")
    cn = np.linalg.norm(C, axis=0)
    scores = np.full(C.shape[1], -np.inf)
    nz = cn > 0
    scores[nz] = (q @ C[:, nz]) / (qn * cn[nz])
    return scores


def rank_by_cosine(query, candidates, ids=None, relevant=None, query_id=None):
    """Rank candidate columns by descending cosine similarity to ``query``.

    Zero candidates sink to the bottom; ties keep the lower position first.
    """
    scores = cosine_scores(query, candidates)
    n = scores.size
    ids = np.arange(n) if ids is None else np.asarray(ids)
    rel = np.zeros(n, dtype=bool) if relevant is None else np.asarray(relevant, dtype=bool)
    if ids.shape != (n,) or rel.shape != (n,):
        raise DimensionError("ids/relevant must have one entry per candidate")
    order = np.argsort(-scores, kind="stable")
    return RankingResult(query_id, ids[order], rel[order], scores[order])


def precision_recall_mrr(rankings, L):
    """Macro-averaged precision@L, recall@L and MRR over queries.

    MRR uses the rank of the first relevant item over the full list.
    Queries without relevant items are skipped with a warning; L larger than
    a candidate list is clamped to its length.
    """
    if L < 1:
        raise ConfigurationError(f"cutoff L must be >= 1, got {L}")
    P, R, RR = [], [], []
    for r in rankings:
        rel = np.asarray(r.relevant, dtype=bool)
        total = int(rel.sum())
        if total == 0:
            warnings.warn(f"query {r.query_id!r} has no relevant candidates; skipped",
                          RuntimeWarning, stacklevel=2)
            continue
        cut = L
        if L > rel.size:
            warnings.warn(f"L={L} exceeds {rel.size} candidates for query {r.query_id!r}; clamped",
                          RuntimeWarning, stacklevel=2)
            cut = rel.size
        hits = int(rel[:cut].sum())
        P.append(hits / cut)
        R.append(hits / total)
        RR.append(1.0 / (np.argmax(rel) + 1))
    if not P:
        return float("nan"), float("nan"), float("nan")
    return float(np.mean(P)), float(np.mean(R)), float(np.mean(RR))


def _sq_dists(X, C):
    # X: (N, d) points, C: (k, d) centers
    return np.maximum(
        (X**2).sum(1)[:, None] - 2 * X @ C.T + (C**2).sum(1)[None, :], 0.0
    )


def _kmeans_pp(X, k, rng):
    n = X.shape[0]
    centers = [X[rng.integers(n)]]
    d2 = ((X - centers[0]) ** 2).sum(1)
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centers.append(X[idx])
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(1))
    return np.array(centers)


def _lloyd(X, centers, max_iter):
    k = centers.shape[0]
    labels = None
    for _ in range(max_iter):
        new = np.argmin(_sq_dists(X, centers), axis=1)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for j in range(k):
            members = labels == j
            if members.any():
                centers[j] = X[members].mean(0)
            else:
                # empty cluster: move its centroid to the worst-fit point
                dist = ((X - centers[labels]) ** 2).sum(1)
                far = int(np.argmax(dist))
                centers[j] = X[far]
                labels[far] = j
    labels = np.argmin(_sq_dists(X, centers), axis=1)
    inertia = float(((X - centers[labels]) ** 2).sum())
    return labels, inertia


def kmeans(E, k, seed=0, n_init=10, max_iter=300):
    """Lloyd's k-means with k-means++ seeding; best of ``n_init`` restarts.

    Deterministic for fixed ``(E, k, seed)``.
    """
    X = as_matrix(np.atleast_2d(E), "E").T
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ConfigurationError(f"k={k} must satisfy 1 <= k <= N={n}")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(max(1, n_init)):
        labels, inertia = _lloyd(X, _kmeans_pp(X, k, rng), max_iter)
        if best is None or inertia < best[1] - 1e-12:
            best = (labels, inertia)
    return ClusterAssignment(best[0], int(k), best[1])


def confusion_matrix(pred, truth):
    pred = np.asarray(getattr(pred, "labels", pred))
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise DimensionError(f"{pred.size} predictions for {truth.size} labels")
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    M = np.zeros((p.max() + 1, t.max() + 1), dtype=int)
    np.add.at(M, (p, t), 1)
    return M


def clustering_accuracy(pred, truth):
    """Best matching rate over one-to-one cluster-to-class assignments."""
    M = confusion_matrix(pred, truth)
    rows, cols = linear_sum_assignment(-M)
    return float(M[rows, cols].sum() / M.sum())


def scatter_ratio(E, assign):
    """||E||_F^2 divided by the summed within-cluster scatter.

    Returns ``inf`` (with a warning) when every cluster has zero scatter.
    """
    E = as_matrix(np.atleast_2d(E), "E")
    labels = np.asarray(getattr(assign, "labels", assign))
    if labels.shape != (E.shape[1],):
        raise DimensionError(f"{labels.size} labels for {E.shape[1]} samples")
    within = 0.0
    for c in np.unique(labels):
        pts = E[:, labels == c]
        within += float(((pts - pts.mean(axis=1, keepdims=True)) ** 2).sum())
    total = float((E**2).sum())
    if within <= 0:
        warnings.warn("scatter_ratio: zero within-cluster scatter", RuntimeWarning, stacklevel=2)
        return float("inf")
    return total / within


def knn_classify(train_E, train_labels, test_E, j=1):
    """Majority vote among the j nearest training embeddings (Euclidean).

    Vote ties go to the label of the nearest tied neighbor.
    """
    A = as_matrix(np.atleast_2d(train_E), "train_E").T
    B = as_matrix(np.atleast_2d(test_E), "test_E").T
    y = np.asarray(train_labels)
    if y.shape != (A.shape[0],):
        raise DimensionError(f"{y.size} labels for {A.shape[0]} training samples")
    if not 1 <= j <= A.shape[0]:
        raise ConfigurationError(f"j={j} must lie in [1, {A.shape[0]}]")
    D = _sq_dists(B, A)
    order = np.argsort(D, axis=1, kind="stable")[:, :j]
    out = []
    for row in order:
        votes = y[row]
        vals, counts = np.unique(votes, return_counts=True)
        winners = set(vals[counts == counts.max()].tolist())
        out.append(next(v for v in votes if v in winners))
    return np.array(out)


def pca_baseline(concat, d):
    """Top-d principal component scores (d, N) of feature-by-sample data.

    Uses the N x N Gram matrix when features outnumber samples, the feature
    covariance otherwise. Each score row follows the largest-entry-positive
    sign convention.
    """
    X = as_matrix(concat, "concat")
    X = X - X.mean(axis=1, keepdims=True)
    D, N = X.shape
    if not 1 <= d <= min(D, N):
        raise DimensionError(f"d={d} must satisfy 1 <= d <= min(D, N)={min(D, N)}")
    if D > N:
        eig = sym_eig_topd(X.T @ X, d)
        scores = eig.vectors.T * np.sqrt(np.clip(eig.values, 0, None))[:, None]
    else:
        eig = sym_eig_topd(X @ X.T, d)
        scores = eig.vectors.T @ X
    return fix_signs(scores.T).T
