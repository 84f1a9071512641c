import numpy as np
import pytest

from cacluster.core import cac_init, final_labels
from cacluster.errors import GenerationFailure, InvalidInput
from cacluster.kernels import KernelSpec
from cacluster.metrics import accuracy
from cacluster.partition import view_partition
from cacluster.synth import SynthSpec, generate, noise_view_ids, place_centroids


def single_view_acc(view, truth, k, seed=0):
    h = view_partition(view, k, KernelSpec())
    return accuracy(final_labels(cac_init(h, k), k, seed=seed), truth)


def test_deterministic():
    spec = SynthSpec(n=50, k=3, m=2, dims=[3, 7], seed=11)
    (v1, y1), (v2, y2) = generate(spec), generate(spec)
    np.testing.assert_array_equal(y1, y2)
    for a, b in zip(v1, v2):
        assert a.features.tobytes() == b.features.tobytes()
    assert [v.features.shape[1] for v in v1] == [3, 7]


def test_balanced_labels():
    _, y = generate(SynthSpec(n=103, k=5, m=1))
    assert np.bincount(y).min() >= 103 // 5 - 1


@pytest.mark.parametrize("d", [1, 2, 3, 8])
def test_centroid_separation(d, rng):
    c = place_centroids(5, d, 4.0, rng)
    dist = np.linalg.norm(c[:, None] - c[None], axis=-1)
    assert dist[np.triu_indices(5, 1)].min() >= 4.0 - 1e-9


def test_noise_views():
    spec = SynthSpec(n=40, k=2, m=4, separation=5, noise_view_fraction=0.5, seed=2)
    ids = noise_view_ids(spec)
    assert len(ids) == 2
    views, _ = generate(spec)
    for i in ids:
        # no centroid offset: feature means are pure sampling noise
        assert np.abs(views[i].features.mean(0)).max() < 1.0


def test_pure_noise_is_chance_level():
    accs = []
    for seed in range(10):
        views, y = generate(SynthSpec(n=200, k=5, m=1, separation=0.0, seed=seed))
        accs.append(single_view_acc(views[0], y, 5, seed))
    assert abs(np.mean(accs) - 0.2) <= 0.1


def test_well_separated_views_are_easy():
    views, y = generate(SynthSpec(n=300, k=5, m=3, separation=10.0, seed=0))
    for v in views:
        assert single_view_acc(v, y, 5) >= 0.99


def test_spec_validation():
    with pytest.raises(InvalidInput):
        SynthSpec(n=5, k=3)
    with pytest.raises(InvalidInput):
        SynthSpec(m=2, dims=[3])
    with pytest.raises(InvalidInput):
        SynthSpec(noise_view_fraction=1.0)


def test_placement_failure(monkeypatch, rng):
    import cacluster.synth as synth

    monkeypatch.setattr(synth, "MAX_PLACEMENT_TRIES", 1)
    with pytest.raises(GenerationFailure):
        # 40 points on a line at spacing >= 1 inside a cube of side 40 is
        # essentially impossible in a single draw
        place_centroids(40, 1, 1.0, np.random.default_rng(0))
