"""Graph-regularized dual (GDMCCA) and kernel (GKMCCA) MCCA.

Both variants solve the same ridge-regularized problem over N x N similarity
matrices G_m (Gram matrices X_m^T X_m, or centered kernels K_m)::

    min_{A_m, S}  sum_m ||A_m^T G_m - S||_F^2 + gamma Tr(S L S^T)
                  + sum_m eps_m Tr(A_m^T G_m A_m)      s.t.  S S^T = I

For fixed S the minimizing duals are A_m = (G_m + eps_m I)^{-1} S^T, and
plugging them back leaves sum_m eps_m Tr(S (G_m + eps_m I)^{-1} S^T) +
gamma Tr(S L S^T). Since eps (G + eps I)^{-1} = I - G (G + eps I)^{-1}, the
optimal S spans the top eigenvectors of

    C = sum_m G_m (G_m + eps_m I)^{-1} - gamma L.

``cd_form="printed"`` instead uses sum_m (G_m + eps_m I)^{-1} - gamma L for
comparison with results computed that way; it does not minimize the cost
above.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DimensionError, InputError, StateError
from .kernels import KernelMatrix, center_cross_kernel, kernel_function
from .linalg import ridge_solve, symmetrize, sym_eig_topd, trace_quadratic
from .mcca import as_dataset, center_views, project_views, _check_laplacian

CD_FORMS = ("derived", "printed")


@dataclass(frozen=True)
class DualModel:
    S_hat: np.ndarray
    A: list
    eigenvalues: np.ndarray
    gamma: float
    epsilon: np.ndarray
    d: int
    variant: str = "gdmcca"
    cd_form: str = "derived"
    kernels: list | None = None  # per-view provenance dicts (kernel variant only)
    data_hashes: list = field(default_factory=list)
    train_dims: list = field(default_factory=list)
    train_views: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def n_views(self):
        return len(self.A)


def _epsilons(epsilon, M):
    eps = np.asarray(epsilon, dtype=float)
    if eps.ndim == 0:
        eps = np.full(M, float(eps))
    if eps.shape != (M,):
        raise DimensionError(f"epsilon must be a scalar or have {M} entries, got {eps.shape}")
    if np.any(eps <= 0) or not np.all(np.isfinite(eps)):
        raise ConfigurationError(
            "epsilon must be > 0: without the ridge term the dual solution "
            "no longer depends on the data"
        )
    return eps


def ridge_filter(G, eps, cd_form="derived"):
    """G (G + eps I)^{-1} (derived) or (G + eps I)^{-1} (printed), symmetric."""
    w, Q = np.linalg.eigh(symmetrize(G, "G"))
    if cd_form == "derived":
        f = w / (w + eps)
    elif cd_form == "printed":
        f = 1.0 / (w + eps)
    else:
        raise ConfigurationError(f"cd_form must be one of {CD_FORMS}, got {cd_form!r}")
    F = (Q * f) @ Q.T
    return 0.5 * (F + F.T)


def build_ridge_matrix(grams, L, gamma, epsilon, cd_form="derived"):
    """sum_m filter(G_m, eps_m) - gamma L."""
    if gamma < 0:
        raise InputError(f"gamma must be >= 0, got {gamma}")
    eps = _epsilons(epsilon, len(grams))
    n = grams[0].shape[0]
    L = _check_laplacian(L, n)
    C = np.zeros((n, n))
    for G, e in zip(grams, eps):
        if G.shape != (n, n):
            raise DimensionError(f"similarity matrices differ in size: {G.shape} vs ({n}, {n})")
        C += ridge_filter(G, e, cd_form)
    C -= gamma * L
    return 0.5 * (C + C.T)


def _solve(grams, L, gamma, epsilon, d, cd_form):
    n = grams[0].shape[0]
    if not 1 <= d <= n:
        raise DimensionError(f"d={d} must satisfy 1 <= d <= N={n}")
    eps = _epsilons(epsilon, len(grams))
    C = build_ridge_matrix(grams, L, gamma, eps, cd_form)
    eig = sym_eig_topd(C, d)
    S_hat = eig.vectors.T
    A = [ridge_solve(G, e, S_hat.T, view=m) for m, (G, e) in enumerate(zip(grams, eps))]
    return S_hat, A, eig.values, eps


def fit_gdmcca(data, L=None, gamma=0.0, epsilon=1.0, d=1, cd_form="derived"):
    """Graph-regularized dual MCCA on (centered) views.

    Usable when D_m > N. Implied primal loadings are ``X_m @ A_m``.
    """
    raw = as_dataset(data)
    data = raw if raw.centered else center_views(raw)
    grams = [X.T @ X for X in data.views]
    S_hat, A, vals, eps = _solve(grams, L, gamma, epsilon, d, cd_form)
    return DualModel(S_hat, A, vals, float(gamma), eps, int(d), "gdmcca", cd_form,
                     None, raw.hashes(), raw.dims, raw.views)


def fit_gkmcca(kernels, L=None, gamma=0.0, epsilon=1.0, d=1, train_data=None, cd_form="derived"):
    """Graph-regularized kernel MCCA on centered kernel matrices.

    ``train_data`` (the raw views the kernels were built from) is retained
    for out-of-sample transforms; it may also be supplied later.
    """
    if not kernels:
        raise DimensionError("need at least one kernel")
    for m, K in enumerate(kernels):
        if not isinstance(K, KernelMatrix) or not K.centered:
            raise StateError(f"kernel {m} is not centered; apply center_kernel first")
    grams = [symmetrize(K.K, f"kernel {m}") for m, K in enumerate(kernels)]
    n = grams[0].shape[0]
    if any(G.shape != (n, n) for G in grams):
        raise DimensionError("kernel matrices differ in size")
    S_hat, A, vals, eps = _solve(grams, L, gamma, epsilon, d, cd_form)
    hashes, dims, views = [], [], None
    if train_data is not None:
        raw = as_dataset(train_data)
        if raw.n_samples != n:
            raise DimensionError(f"train data has {raw.n_samples} samples, kernels have {n}")
        hashes, dims, views = raw.hashes(), raw.dims, raw.views
    return DualModel(S_hat, A, vals, float(gamma), eps, int(d), "gkmcca", cd_form,
                     [dict(K.provenance) for K in kernels], hashes, dims, views)


def dual_objective(A, S, grams, L=None, gamma=0.0, epsilon=1.0):
    """Value of the ridge-regularized dual cost at (A, S)."""
    eps = _epsilons(epsilon, len(grams))
    total = 0.0
    for Am, G, e in zip(A, grams, eps):
        total += np.linalg.norm(Am.T @ G - S) ** 2 + e * np.trace(Am.T @ G @ Am)
    if L is not None and gamma:
        total += gamma * trace_quadratic(S, L)
    return float(total)


def _train_views(model, train_data):
    if train_data is None:
        if model.train_views is None:
            raise StateError("model carries no training data; pass train_data")
        return model.train_views
    raw = as_dataset(train_data)
    if len(raw.views) != model.n_views:
        raise DimensionError(f"{raw.n_views} training views for a {model.n_views}-view model")
    if raw.n_samples != model.S_hat.shape[1]:
        raise DimensionError(
            f"training data has {raw.n_samples} samples, model was fit on {model.S_hat.shape[1]}"
        )
    if model.data_hashes and raw.hashes() != list(model.data_hashes):
        raise InputError("training data does not match the hashes stored in the model")
    return raw.views


def dual_loadings(model, train_data=None):
    """Primal loadings U_m = X_m A_m (X_m centered training views)."""
    if model.kernels is not None and any(k.get("family") != "linear" for k in model.kernels):
        raise StateError("explicit loadings exist only for linear kernels")
    views = center_views(_train_views(model, train_data)).views
    return [X @ Am for X, Am in zip(views, model.A)]


def transform_dual(model, new_views, train_data=None):
    """Embed new samples as sum_m U_m^T X_m^new with U_m = X_m^train A_m."""
    return project_views(dual_loadings(model, train_data), new_views)


def transform_kernel(model, train_data, new_views):
    """Out-of-sample embedding for a kernel model.

    Each cross kernel k(x_i^train, x_t^new) is centered with the training
    row means, its own column means and the training grand mean, then
    ``sum_m A_m^T K_m^new`` is returned.
    """
    if model.kernels is None:
        raise StateError("model has no kernel provenance; use transform_dual")
    views = _train_views(model, train_data)
    new_views = [np.atleast_2d(np.asarray(X, dtype=float)) for X in new_views]
    if len(new_views) != model.n_views:
        raise DimensionError(f"{len(new_views)} views supplied, model has {model.n_views}")
    out = None
    for m, (prov, Xtr, Xnew, Am) in enumerate(zip(model.kernels, views, new_views, model.A)):
        if Xnew.shape[0] != Xtr.shape[0]:
            raise DimensionError(f"view {m}: expected {Xtr.shape[0]} features, got {Xnew.shape[0]}")
        k = kernel_function(prov)
        Kc = center_cross_kernel(k(Xtr, Xnew), k(Xtr, Xtr))
        term = Am.T @ Kc
        out = term if out is None else out + term
    return out
