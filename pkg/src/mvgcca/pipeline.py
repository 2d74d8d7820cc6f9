"""Glue between file-level configuration and the solvers: variant dispatch,
embedding, evaluation tasks and the bound-versus-gamma sweep."""

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import graph as graphs
from .bounds import generalization_bound
from .dual import CD_FORMS, dual_loadings, fit_gdmcca, fit_gkmcca, transform_dual, transform_kernel
from .errors import ConfigurationError
from .kernels import center_kernel, gaussian_kernel, linear_kernel
from .mcca import PrimalModel, as_dataset, center_views, fit_gmcca, transform_primal
from .metrics import (clustering_accuracy, kmeans, knn_classify, pca_baseline,
                      precision_recall_mrr, rank_by_cosine, scatter_ratio, zscore)

VARIANTS = ("mcca", "gmcca", "gdmcca", "gkmcca", "pca")


@dataclass
class PipelineConfig:
    variant: str = "gmcca"
    d: int = 2
    gamma: float = 0.0
    epsilon: object = 0.1  # scalar or one value per view
    kernel: str = "gaussian"
    sigma: object = "auto"
    cd_form: str = "derived"
    seed: int = 0
    delta: float = 0.1
    graph: dict = field(default_factory=dict)  # {"file": path} | {"knn": k1, "views": [...]}

    @classmethod
    def from_dict(cls, obj):
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    def validate(self):
        if self.variant not in VARIANTS:
            raise ConfigurationError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if int(self.d) < 1:
            raise ConfigurationError("d must be >= 1")
        if float(self.gamma) < 0:
            raise ConfigurationError("gamma must be >= 0")
        if self.variant in ("gdmcca", "gkmcca"):
            if np.any(np.asarray(self.epsilon, dtype=float) <= 0):
                raise ConfigurationError(f"{self.variant} needs epsilon > 0")
            if self.cd_form not in CD_FORMS:
                raise ConfigurationError(f"cd_form must be one of {CD_FORMS}")
        if self.variant == "gkmcca" and self.kernel not in ("linear", "gaussian"):
            raise ConfigurationError(f"kernel must be linear or gaussian, got {self.kernel!r}")
        if not 0 < float(self.delta) < 1:
            raise ConfigurationError("delta must lie in (0, 1)")
        return self


def knn_graph_from_views(data, k1, views=None, sigma="auto"):
    """Sum of per-view k-NN Gaussian-kernel graphs."""
    data = as_dataset(data)
    views = range(data.n_views) if views is None else views
    return graphs.combine_adjacency(
        [graphs.knn_kernel_graph(gaussian_kernel(data.views[m], sigma), k1) for m in views]
    )


def fit_pca(data, d):
    """PCA on the concatenated views, packaged as a PrimalModel.

    The per-view ``U`` blocks are the principal axes, so ``transform_primal``
    projects new (concatenated) data onto them.
    """
    data = as_dataset(data)
    X = np.vstack(data.views)
    Xc = X - X.mean(axis=1, keepdims=True)
    scores = pca_baseline(Xc, d)
    var = (scores**2).sum(axis=1)
    axes = Xc @ scores.T / np.where(var > 0, var, 1.0)
    splits = np.cumsum(data.dims)[:-1]
    return PrimalModel(scores, np.split(axes, splits, axis=0), var, 0.0, int(d), "pca", data.hashes())


def make_kernels(data, kernel="gaussian", sigma="auto"):
    data = as_dataset(data)
    out = []
    for X in data.views:
        K = linear_kernel(X) if kernel == "linear" else gaussian_kernel(X, sigma)
        out.append(center_kernel(K))
    return out


def fit_variant(config, data, W=None):
    """Fit the configured variant; ``W`` is the sample adjacency (or None)."""
    config.validate()
    data = as_dataset(data)
    L = None if W is None else graphs.laplacian(W)
    v, d = config.variant, int(config.d)
    if v == "mcca":
        return fit_gmcca(data, None, 0.0, d)
    if v == "gmcca":
        return fit_gmcca(data, L, float(config.gamma), d)
    if v == "gdmcca":
        return fit_gdmcca(data, L, float(config.gamma), config.epsilon, d, config.cd_form)
    if v == "gkmcca":
        return fit_gkmcca(make_kernels(data, config.kernel, config.sigma), L, float(config.gamma),
                          config.epsilon, d, train_data=data, cd_form=config.cd_form)
    return fit_pca(data, d)


def embed(model, views, train_data=None):
    """Out-of-sample embedding (d, T) for any fitted variant."""
    if isinstance(model, PrimalModel):
        return transform_primal(model, views)
    if model.kernels is not None:
        return transform_kernel(model, train_data, views)
    return transform_dual(model, views, train_data)


def model_loadings(model, train_data=None):
    if isinstance(model, PrimalModel):
        return model.U
    return dual_loadings(model, train_data)


def stratified_split(labels, train_frac=0.5, rng=None):
    """Per-class random split; returns sorted (train_idx, test_idx)."""
    rng = np.random.default_rng(rng)
    labels = np.asarray(labels)
    if not 0 < train_frac < 1:
        raise ConfigurationError("train_frac must lie in (0, 1)")
    tr, te = [], []
    for c in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == c))
        h = int(round(train_frac * idx.size))
        tr.extend(idx[:h])
        te.extend(idx[h:])
    return np.sort(np.array(tr, dtype=int)), np.sort(np.array(te, dtype=int))


def evaluate_clustering(E, truth, k=None, seed=0):
    truth = np.asarray(truth)
    k = len(np.unique(truth)) if k is None else int(k)
    assign = kmeans(E, k, seed)
    return {"accuracy": clustering_accuracy(assign, truth),
            "scatter_ratio": scatter_ratio(E, assign),
            "parameters": {"k": k, "seed": seed}}


def evaluate_classification(E_train, y_train, E_test, y_test, j=1):
    pred = knn_classify(E_train, y_train, E_test, j)
    return {"accuracy": float(np.mean(pred == np.asarray(y_test))), "parameters": {"j": j}}


def ranking_runs(E, groups, n_seeds=5, L=35, runs=1, seed=0):
    """Rank candidates against the mean of randomly chosen exemplars.

    ``groups`` maps a query label to the ids of the samples that carry it.
    Per run and label, ``n_seeds`` members become exemplars; every other
    sample is a candidate and is relevant iff it carries the label. Returns
    macro averages (per query within a run, then over runs).
    """
    Z = zscore(E)
    n = Z.shape[1]
    rng = np.random.default_rng(seed)
    per_run = []
    for _ in range(runs):
        rankings = []
        for label, members in groups.items():
            members = np.asarray(sorted(set(members)), dtype=int)
            if members.size <= n_seeds:
                warnings.warn(f"label {label!r} has {members.size} members; needs > {n_seeds}",
                              RuntimeWarning, stacklevel=2)
                continue
            chosen = rng.choice(members, size=n_seeds, replace=False)
            query = Z[:, chosen].mean(axis=1)
            cand = np.setdiff1d(np.arange(n), chosen)
            rel = np.isin(cand, members)
            rankings.append(rank_by_cosine(query, Z[:, cand], ids=cand, relevant=rel, query_id=label))
        per_run.append(precision_recall_mrr(rankings, L))
    return np.nanmean(np.array(per_run), axis=0) if per_run else np.full(3, np.nan)


def evaluate_ranking(E, groups, n_seeds=5, L=35, runs=1, seed=0):
    p, r, mrr = ranking_runs(E, groups, n_seeds, L, runs, seed)
    return {f"precision@{L}": float(p), f"recall@{L}": float(r), "mrr": float(mrr),
            "parameters": {"L": L, "n_seeds": n_seeds, "runs": runs, "seed": seed}}


def thread_count():
    raw = os.environ.get("MVGCCA_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigurationError(f"MVGCCA_THREADS must be an integer, got {raw!r}") from None


def sweep_point(train, test, test_labels, L, gamma, d, k, seed, delta):
    """Fit GMCCA on ``train`` and report the bound and test clustering accuracy."""
    model = fit_gmcca(train, L, gamma, d)
    rep = generalization_bound(model.U, center_views(train), delta)
    E = transform_primal(model, as_dataset(test).views)
    acc = clustering_accuracy(kmeans(E, k, seed), test_labels)
    return {"gamma": float(gamma), "bound": rep.bound, "g_bar": rep.g_bar,
            "B": rep.B, "R": rep.R, "accuracy": acc}


def bound_sweep(train, test, test_labels, L, gammas, d=2, k=None, seed=0, delta=0.1, threads=None):
    """One row per gamma, sorted by gamma (stable for duplicates)."""
    if not len(gammas):
        raise ConfigurationError("gamma list is empty")
    test_labels = np.asarray(test_labels)
    k = len(np.unique(test_labels)) if k is None else k
    threads = thread_count() if threads is None else threads
    order = sorted(range(len(gammas)), key=lambda i: float(gammas[i]))
    args = [(train, test, test_labels, L, float(gammas[i]), d, k, seed, delta) for i in order]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda a: sweep_point(*a), args))
    return [sweep_point(*a) for a in args]
