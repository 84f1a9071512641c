import numpy as np
import pytest

from cacluster.batch import batch_late_fusion
from cacluster.core import CacConfig, ContinualClusterer, cac_init, final_labels
from cacluster.errors import InvalidInput
from cacluster.linalg import orthogonality_error, random_orthogonal
from cacluster.metrics import accuracy

from test_core import synthetic_partitions


def test_single_view_collapse():
    parts, _ = synthetic_partitions(seed=1)
    config = CacConfig(lam=0.0)
    _, labels = batch_late_fusion(parts[:1], config=config)
    ref = final_labels(cac_init(parts[0], 3, config), 3, seed=config.seed)
    assert accuracy(labels, ref) == 1.0


def test_identical_views():
    parts, _ = synthetic_partitions(seed=4)
    lam = 0.5
    single, single_labels = batch_late_fusion(parts[:1], lam=lam)
    rng = np.random.default_rng(0)
    # the same partition in different bases
    copies = [parts[0]] + [parts[0] @ random_orthogonal(3, rng) for _ in range(2)]
    multi, multi_labels = batch_late_fusion(copies, lam=lam)
    assert accuracy(multi_labels, single_labels) == 1.0
    # objective scales as (sqrt(m) + lam) / (1 + lam)
    ratio = (np.sqrt(3) + lam) / (1 + lam)
    assert multi.objective_trace[-1] == pytest.approx(ratio * single.objective_trace[-1], rel=1e-6)


def test_invariants_and_monotonicity():
    parts, _ = synthetic_partitions(n=90, k=3, m=4, separation=2.0, seed=7)
    state, labels = batch_late_fusion(parts, lam=1.0)
    assert np.all(np.diff(state.objective_trace) >= -1e-9)
    assert orthogonality_error(state.b) < 1e-6
    for w in state.ws:
        assert orthogonality_error(w) < 1e-6
    np.testing.assert_array_equal(state.e.sum(1), 1)
    assert np.sum(state.beta**2) == pytest.approx(1.0)
    assert np.all(state.beta >= 0)
    np.testing.assert_allclose(state.m_avg, sum(h @ w for h, w in zip(parts, state.ws)) / 4, atol=1e-12)
    assert labels.shape == (90,)


def test_close_to_continual():
    for seed in range(3):
        parts, truth = synthetic_partitions(n=90, k=3, m=3, seed=seed)
        _, labels = batch_late_fusion(parts)
        cc = ContinualClusterer(3)
        for h in parts:
            cc.partial_fit(h)
        assert abs(accuracy(cc.labels(), truth) - accuracy(labels, truth)) <= 0.05


def test_errors():
    parts, _ = synthetic_partitions()
    with pytest.raises(InvalidInput):
        batch_late_fusion([])
    with pytest.raises(InvalidInput):
        batch_late_fusion([parts[0], parts[1][:30]])
    with pytest.raises(InvalidInput):
        batch_late_fusion(parts, lam=-1)
