"""Generalization-bound report for fitted MCCA loadings.

The view feature maps are taken to be the observed features themselves, so
kappa_m(s_n, s_n) = ||x_{m,n}||^2, and the distributional maximum R is
replaced by its maximum over the supplied samples.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DimensionError, InputError
from .mcca import as_dataset, sumcor_objective


@dataclass(frozen=True)
class BoundReport:
    g_bar: float
    trace_term: float
    deviation_term: float
    B: float
    R: float
    delta: float
    n_samples: int

    @property
    def bound(self):
        return self.g_bar + self.trace_term + self.deviation_term

    def to_dict(self):
        out = asdict(self)
        out["bound"] = self.bound
        out["R_is_empirical"] = True
        return out


def _pairs(M):
    return [(m, mp) for m in range(M - 1) for mp in range(m + 1, M)]


def empirical_g(U, data):
    """Mean over samples of sum_{m<m'} ||U_m^T x_{m,n} - U_m'^T x_{m',n}||^2."""
    data = as_dataset(data)
    return sumcor_objective(U, data) / data.n_samples


def compute_B(U):
    """sqrt(sum_{m<m'} ||U_m^T U_m + U_m'^T U_m'||_F^2)."""
    grams = [np.asarray(Um).T @ np.asarray(Um) for Um in U]
    total = 0.0
    for m, mp in _pairs(len(grams)):
        if grams[m].shape != grams[mp].shape:
            raise DimensionError("loading matrices have different column counts")
        total += np.linalg.norm(grams[m] + grams[mp]) ** 2
    return math.sqrt(total)


def _pair_kernel_sums(data):
    """(N,) array of sum_{m<m'} (k_m(n) + k_m'(n))^2 with k_m(n) = ||x_{m,n}||^2."""
    sq = [np.sum(X**2, axis=0) for X in data.views]
    out = np.zeros(data.n_samples)
    for m, mp in _pairs(len(sq)):
        out += (sq[m] + sq[mp]) ** 2
    return out


def compute_R(data):
    """Empirical R: max over samples of sqrt(sum_{m<m'} (k_m + k_m')^2)."""
    data = as_dataset(data)
    return float(np.sqrt(_pair_kernel_sums(data).max()))


def generalization_bound(U, data, delta=0.1, R=None):
    """Assemble the three-term bound on the expected pairwise disagreement.

    ``data`` should be the centered training views the loadings were fit on.
    ``R`` may be supplied when the caller has a better estimate (e.g. the
    maximum over train and test samples); otherwise it is computed from
    ``data``. The loadings need not be optimal, though the guarantee only
    covers fitted models.
    """
    if not 0 < delta < 1:
        raise InputError(f"delta must lie in (0, 1), got {delta}")
    data = as_dataset(data)
    N = data.n_samples
    g_bar = empirical_g(U, data)
    B = compute_B(U)
    if R is None:
        R = compute_R(data)
    trace_term = 4.0 * B / N * math.sqrt(_pair_kernel_sums(data).sum())
    deviation_term = 3.0 * R * B * math.sqrt(math.log(2.0 / delta) / (2.0 * N))
    return BoundReport(g_bar, trace_term, deviation_term, B, float(R), float(delta), N)
