import numpy as np
import pytest

from mvgcca.errors import ConfigurationError
from mvgcca.graph import laplacian
from mvgcca.linalg import trace_quadratic
from mvgcca.metrics import clustering_accuracy, kmeans
from mvgcca.synth import SynthSpec, community_graph, generate


def test_identity_noiseless_view_equals_sources():
    out = generate(n_samples=30, n_views=1, source_dim=3, view_dims=(3,), noise_std=0.0, maps="identity")
    np.testing.assert_array_equal(out.data.views[0], out.sources)


def test_far_clusters_separable():
    data, W, labels, sources = generate(n_samples=60, n_clusters=2, separation=50.0, seed=4)
    assert clustering_accuracy(kmeans(sources, 2, seed=0), labels) == 1.0


def test_deterministic_given_seed():
    a, b = generate(seed=11), generate(seed=11)
    assert a.data.hashes() == b.data.hashes()
    assert np.array_equal(a.W, b.W) and np.array_equal(a.labels, b.labels)
    assert generate(seed=12).data.hashes() != a.data.hashes()


def test_shapes_and_graph():
    out = generate(SynthSpec(n_samples=40, n_views=2, view_dims=(5, 7), n_clusters=4))
    assert out.data.dims == [5, 7] and out.data.n_samples == 40
    assert np.bincount(out.labels).tolist() == [10] * 4
    np.testing.assert_array_equal(out.W, community_graph(out.labels))
    assert out.W.sum() == 4 * 10 * 9
    assert np.all(np.diag(out.W) == 0)


def test_nuisance_dims_carry_no_cluster_signal():
    out = generate(n_samples=3000, source_dim=3, nuisance_dim=1, nuisance_std=2.0, seed=2)
    last = out.sources[-1]
    for c in range(3):
        assert abs(last[out.labels == c].mean()) < 0.2
    assert last.std() == pytest.approx(2.0, rel=0.1)


@pytest.mark.parametrize("kw", [
    dict(n_samples=1), dict(view_dims=(10, 10)), dict(source_dim=11),
    dict(noise_std=-1.0), dict(maps="identity"), dict(nuisance_dim=2),
    dict(n_clusters=0), dict(maps="other"),
])
def test_invalid_synth_settings(kw):
    with pytest.raises(ConfigurationError):
        generate(**kw)


def test_sources_smooth_on_planted_graph():
    ok = 0
    for seed in range(100):
        out = generate(seed=seed)
        L = laplacian(out.W)
        perm = np.random.default_rng(seed).permutation(out.sources.shape[1])
        ok += trace_quadratic(out.sources, L) < trace_quadratic(out.sources[:, perm], L)
    assert ok >= 99
