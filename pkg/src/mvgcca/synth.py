"""Synthetic multiview data with a planted source graph.

Latent sources are drawn as Gaussian clusters in R^rho, optionally with
trailing nuisance coordinates that vary independently of the cluster. The
planted graph links every pair of samples in the same cluster with weight 1,
so sources are smooth over it. View m is a random linear map of the sources plus
isotropic Gaussian noise.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .mcca import MultiviewDataset


@dataclass(frozen=True)
class SynthSpec:
    n_samples: int = 200
    n_views: int = 3
    source_dim: int = 2
    view_dims: tuple = (10, 10, 10)
    noise_std: float = 1.0
    n_clusters: int = 3
    separation: float = 2.0  # std of cluster centers; within-cluster std is 1
    nuisance_dim: int = 0  # trailing source dims carrying no cluster information
    nuisance_std: float = 1.0
    balanced: bool = True
    maps: str = "random"  # or "identity" (needs view_dims == source_dim)
    seed: int = 0

    def validate(self):
        if self.n_samples < 2:
            raise ConfigurationError("n_samples must be >= 2")
        if self.n_views < 1 or len(self.view_dims) != self.n_views:
            raise ConfigurationError("view_dims must list one dimension per view")
        if self.source_dim < 1 or self.source_dim > min(self.view_dims):
            raise ConfigurationError("source_dim must be between 1 and min(view_dims)")
        if not 0 <= self.nuisance_dim < self.source_dim:
            raise ConfigurationError("nuisance_dim must lie in [0, source_dim)")
        if self.noise_std < 0 or self.separation < 0 or self.nuisance_std < 0:
            raise ConfigurationError("noise_std and separation must be nonnegative")
        if not 1 <= self.n_clusters <= self.n_samples:
            raise ConfigurationError("n_clusters must lie in [1, n_samples]")
        if self.maps not in ("random", "identity"):
            raise ConfigurationError(f"unknown maps {self.maps!r}")
        if self.maps == "identity" and any(D != self.source_dim for D in self.view_dims):
            raise ConfigurationError("identity maps need view_dims equal to source_dim")


@dataclass(frozen=True)
class SynthData:
    data: MultiviewDataset
    W: np.ndarray
    labels: np.ndarray
    sources: np.ndarray
    maps: list = field(repr=False, default_factory=list)

    def __iter__(self):
        return iter((self.data, self.W, self.labels, self.sources))


def community_graph(labels):
    labels = np.asarray(labels)
    W = (labels[:, None] == labels[None, :]).astype(float)
    np.fill_diagonal(W, 0.0)
    return W


def generate(spec=None, **overrides):
    """Draw a dataset; returns SynthData (unpacks as data, W, labels, sources)."""
    if spec is None:
        spec = SynthSpec(**overrides)
    elif overrides:
        spec = SynthSpec(**{**spec.__dict__, **overrides})
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    N, rho, k = spec.n_samples, spec.source_dim, spec.n_clusters
    if spec.balanced:
        labels = rng.permutation(np.arange(N) % k)
    else:
        labels = rng.integers(k, size=N)
    centers = spec.separation * rng.standard_normal((rho, k))
    scale = np.ones((rho, 1))
    if spec.nuisance_dim:
        centers[rho - spec.nuisance_dim:] = 0.0
        scale[rho - spec.nuisance_dim:] = spec.nuisance_std
    sources = centers[:, labels] + scale * rng.standard_normal((rho, N))
    maps, views = [], []
    for D in spec.view_dims:
        if spec.maps == "identity":
            A = np.eye(rho)
        else:
            A = rng.standard_normal((D, rho)) / np.sqrt(rho)
        maps.append(A)
        views.append(A @ sources + spec.noise_std * rng.standard_normal((D, N)))
    return SynthData(MultiviewDataset(tuple(views)), community_graph(labels), labels, sources, maps)
