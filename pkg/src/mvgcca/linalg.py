"""Dense symmetric linear algebra used by every solver in the package."""

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import DimensionError, InputError, SingularityError

SYMMETRY_TOL = 1e-8


class EigenResult(NamedTuple):
    values: np.ndarray  # (d,), descending
    vectors: np.ndarray  # (n, d), orthonormal columns


def as_matrix(A, name="matrix"):
    """Return ``A`` as a finite 2-D float64 array or raise InputError."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} contains non-finite entries")
    return A


def symmetrize(A, name="matrix"):
    """(A + A^T)/2 after checking A is square and symmetric within tolerance."""
    A = as_matrix(A, name)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {A.shape}")
    scale = max(1.0, np.linalg.norm(A))
    if np.max(np.abs(A - A.T), initial=0.0) > SYMMETRY_TOL * scale:
        raise InputError(f"{name} is not symmetric")
    return 0.5 * (A + A.T)


def fix_signs(V):
    """Flip each column so its largest-magnitude entry is positive.

    Ties go to the lowest index (``argmax`` returns the first maximum).
    """
    V = np.array(V, dtype=float, copy=True)
    if V.size == 0:
        return V
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def sym_eig_topd(A, d):
    """Top-``d`` eigenpairs of a symmetric matrix, largest eigenvalue first.

    Eigenvectors follow the sign convention of :func:`fix_signs`. Equal
    eigenvalues keep LAPACK's ascending order reversed, which is stable for
    identical input.
    """
    A = symmetrize(A)
    n = A.shape[0]
    if not 1 <= d <= n:
        raise DimensionError(f"d={d} must satisfy 1 <= d <= n={n}")
    w, V = scipy.linalg.eigh(A, subset_by_index=[n - d, n - 1])
    order = np.argsort(-w, kind="stable")
    return EigenResult(w[order], fix_signs(V[:, order]))


def ridge_solve(G, eps, B, view=None):
    """Solve (G + eps I) X = B for symmetric G.

    Raises SingularityError (naming ``view`` if given) when the shifted
    matrix is numerically singular.
    """
    G = symmetrize(G, "G")
    B = np.asarray(B, dtype=float)
    vec = B.ndim == 1
    B = as_matrix(B.reshape(-1, 1) if vec else B, "B")
    if eps < 0:
        raise InputError(f"eps must be >= 0, got {eps}")
    n = G.shape[0]
    if B.shape[0] != n:
        raise DimensionError(f"B has {B.shape[0]} rows, G is {n}x{n}")
    Gs = G + eps * np.eye(n)
    w, Q = np.linalg.eigh(Gs)
    thresh = 1e-12 * max(np.linalg.norm(G), 1e-300)
    if np.min(np.abs(w)) <= thresh:
        where = f"view {view}: " if view is not None else ""
        raise SingularityError(f"{where}G + eps*I is numerically singular (eps={eps})")
    if np.allclose(G, np.diag(np.diag(G)), rtol=0, atol=0):
        X = B / np.diag(Gs)[:, None]
    else:
        X = Q @ ((Q.T @ B) / w[:, None])
    return X.ravel() if vec else X


def trace_quadratic(S, L):
    """Tr(S L S^T); with L = D - W this equals sum_{i<j} w_ij ||s_i - s_j||^2."""
    S = as_matrix(np.atleast_2d(S), "S")
    L = as_matrix(L, "L")
    if L.shape[0] != L.shape[1] or S.shape[1] != L.shape[0]:
        raise DimensionError(f"S is {S.shape}, L is {L.shape}")
    return float(np.einsum("ij,jk,ik->", S, L, S))


def projector_distance(V1, V2):
    """||V1 V1^T - V2 V2^T||_F for orthonormal bases stored as columns."""
    V1 = np.asarray(V1, dtype=float)
    V2 = np.asarray(V2, dtype=float)
    return float(np.linalg.norm(V1 @ V1.T - V2 @ V2.T))
