"""Primal MAXVAR MCCA and its graph-regularized extension (GMCCA).

Views are ``(D_m, N)`` arrays whose columns are the N shared samples. The
shared representation ``S_hat`` is ``(d, N)`` with orthonormal rows.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InputError, RankDeficientViewError
from .linalg import as_matrix, sym_eig_topd, trace_quadratic

RANK_TOL = 1e-10


def hash_array(X):
    X = np.ascontiguousarray(np.asarray(X, dtype=float))
    h = hashlib.sha256()
    h.update(str(X.shape).encode())
    h.update(X.tobytes())
    return h.hexdigest()


@dataclass(frozen=True)
class MultiviewDataset:
    """M aligned views sharing N samples (columns)."""

    views: tuple
    centered: bool = False

    def __post_init__(self):
        views = tuple(as_matrix(X, f"view {m}") for m, X in enumerate(self.views))
        if not views:
            raise DimensionError("dataset needs at least one view")
        n = views[0].shape[1]
        for m, X in enumerate(views):
            if X.shape[1] != n:
                raise DimensionError(f"view {m} has {X.shape[1]} samples, view 0 has {n}")
        if n < 2:
            raise DimensionError("dataset needs N >= 2 samples")
        object.__setattr__(self, "views", views)

    @property
    def n_views(self):
        return len(self.views)

    @property
    def n_samples(self):
        return self.views[0].shape[1]

    @property
    def dims(self):
        return [X.shape[0] for X in self.views]

    def hashes(self):
        return [hash_array(X) for X in self.views]

    def subset(self, idx):
        """Dataset restricted to the sample columns ``idx`` (uncentered)."""
        return MultiviewDataset(tuple(X[:, idx] for X in self.views))

    def means(self):
        return [X.mean(axis=1, keepdims=True) for X in self.views]


def as_dataset(data):
    if isinstance(data, MultiviewDataset):
        return data
    return MultiviewDataset(tuple(data))


def center_views(data):
    """Remove each feature's mean across the samples."""
    data = as_dataset(data)
    return MultiviewDataset(tuple(X - X.mean(axis=1, keepdims=True) for X in data.views), True)


def _ensure_centered(data):
    data = as_dataset(data)
    return data if data.centered else center_views(data)


def _view_svd(X, m):
    """Thin SVD of a view, raising RankDeficientViewError if X X^T is singular."""
    D, N = X.shape
    if D > N:
        raise RankDeficientViewError(m, f"view {m}: D_m={D} exceeds N={N}, so X X^T is singular; "
                                        "use the dual variant gdmcca instead")
    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    eig = s**2
    if eig.min() <= RANK_TOL * np.linalg.norm(eig):
        raise RankDeficientViewError(m)
    return U, s, Vt


def _check_laplacian(L, n):
    if L is None:
        return np.zeros((n, n))
    L = as_matrix(L, "L")
    if L.shape != (n, n):
        raise DimensionError(f"Laplacian is {L.shape}, expected ({n}, {n})")
    return L


def build_C(data, L=None, gamma=0.0):
    """C = sum_m X_m^T (X_m X_m^T)^{-1} X_m - gamma L for centered views."""
    data = as_dataset(data)
    if gamma < 0:
        raise InputError(f"gamma must be >= 0, got {gamma}")
    n = data.n_samples
    L = _check_laplacian(L, n)
    C = np.zeros((n, n))
    for m, X in enumerate(data.views):
        _, _, Vt = _view_svd(X, m)
        # X^T (X X^T)^{-1} X is the projector onto the row space of X
        C += Vt.T @ Vt
    C -= gamma * L
    return 0.5 * (C + C.T)


@dataclass(frozen=True)
class PrimalModel:
    S_hat: np.ndarray
    U: list
    eigenvalues: np.ndarray
    gamma: float
    d: int
    variant: str = "gmcca"
    data_hashes: list = field(default_factory=list)

    @property
    def n_views(self):
        return len(self.U)


def fit_gmcca(data, L=None, gamma=0.0, d=1):
    """Fit graph-regularized MCCA.

    Parameters
    ----------
    data : MultiviewDataset or sequence of (D_m, N) arrays
        Centered automatically when not flagged as centered.
    L : (N, N) array or None
        Graph Laplacian of the sample graph; None means no graph.
    gamma : float
        Weight of the graph smoothness term. ``gamma=0`` is plain MAXVAR MCCA.
    d : int
        Number of shared components.

    Returns
    -------
    PrimalModel
    """
    raw = as_dataset(data)
    data = _ensure_centered(raw)
    n = data.n_samples
    if not 1 <= d <= n:
        raise DimensionError(f"d={d} must satisfy 1 <= d <= N={n}")
    C = build_C(data, L, gamma)
    eig = sym_eig_topd(C, d)
    S_hat = eig.vectors.T
    U = []
    for m, X in enumerate(data.views):
        Uv, s, Vt = _view_svd(X, m)
        # (X X^T)^{-1} X S^T = U diag(1/s) V^T S^T
        U.append(Uv @ ((Vt @ S_hat.T) / s[:, None]))
    return PrimalModel(S_hat, U, eig.values, float(gamma), int(d),
                       "gmcca" if gamma > 0 else "mcca", raw.hashes())


def fit_mcca(data, d=1):
    """Plain MAXVAR MCCA (no graph)."""
    return fit_gmcca(data, None, 0.0, d)


def _check_loadings(U, data):
    data = as_dataset(data)
    if len(U) != data.n_views:
        raise DimensionError(f"{len(U)} loading matrices for {data.n_views} views")
    for m, (Um, X) in enumerate(zip(U, data.views)):
        if np.asarray(Um).shape[0] != X.shape[0]:
            raise DimensionError(f"view {m}: loadings have {np.asarray(Um).shape[0]} rows, "
                                 f"data has {X.shape[0]} features")
    return data


def primal_objective(model, data, L=None):
    """sum_m ||U_m^T X_m - S||_F^2 + gamma Tr(S L S^T) at the model's parameters.

    ``data`` is used as given; pass the centered training views.
    """
    data = _check_loadings(model.U, data)
    S = model.S_hat
    if S.shape[1] != data.n_samples:
        raise DimensionError(f"S_hat has {S.shape[1]} columns, data has {data.n_samples}")
    fit = sum(np.linalg.norm(np.asarray(Um).T @ X - S) ** 2 for Um, X in zip(model.U, data.views))
    reg = 0.0
    if L is not None and model.gamma != 0:
        reg = model.gamma * trace_quadratic(S, L)
    return float(fit + reg)


def sumcor_objective(U, data):
    """sum_{m<m'} ||U_m^T X_m - U_m'^T X_m'||_F^2."""
    data = _check_loadings(U, data)
    proj = [np.asarray(Um).T @ X for Um, X in zip(U, data.views)]
    total = 0.0
    for m in range(len(proj)):
        for mp in range(m + 1, len(proj)):
            if proj[m].shape != proj[mp].shape:
                raise DimensionError("projections have different shapes")
            total += np.linalg.norm(proj[m] - proj[mp]) ** 2
    return float(total)


def project_views(U, new_views):
    """sum_m U_m^T X_m for loading matrices ``U`` and matching new views."""
    new_views = [np.atleast_2d(np.asarray(X, dtype=float)) for X in new_views]
    if len(new_views) != len(U):
        raise DimensionError(f"{len(new_views)} views supplied, model has {len(U)}")
    T = new_views[0].shape[1]
    out = np.zeros((np.asarray(U[0]).shape[1], T))
    for m, (Um, X) in enumerate(zip(U, new_views)):
        if X.shape[0] != Um.shape[0]:
            raise DimensionError(f"view {m}: expected {Um.shape[0]} features, got {X.shape[0]}")
        if X.shape[1] != T:
            raise DimensionError(f"view {m} has {X.shape[1]} samples, view 0 has {T}")
        out += Um.T @ X
    return out


def transform_primal(model, new_views):
    """Embed new samples as sum_m U_m^T X_m^new (no centering applied)."""
    return project_views(model.U, new_views)
