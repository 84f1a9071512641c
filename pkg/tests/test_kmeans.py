import numpy as np
import pytest

from cacluster.errors import DegenerateData, InvalidInput
from cacluster.kmeans import kmeans
from cacluster.metrics import accuracy


def test_separated_prototypes(rng):
    protos = np.eye(3) * 5
    truth = np.repeat(np.arange(3), 10)
    x = protos[truth] + 0.1 * rng.standard_normal((30, 3))
    res = kmeans(x, 3, seed=1)
    assert accuracy(res.labels, truth) == 1.0
    order = [res.labels[truth == c][0] for c in range(3)]
    np.testing.assert_allclose(res.centers[order], protos, atol=0.15)


def test_deterministic_given_seed(rng):
    x = rng.standard_normal((50, 2))
    a, b = kmeans(x, 4, seed=7), kmeans(x, 4, seed=7)
    np.testing.assert_array_equal(a.labels, b.labels)
    np.testing.assert_array_equal(a.centers, b.centers)


def test_duplicates_share_labels(rng):
    x = rng.standard_normal((10, 2))
    x = np.vstack([x, x[:4]])
    labels = kmeans(x, 3, seed=0).labels
    np.testing.assert_array_equal(labels[10:], labels[:4])


def test_too_few_distinct_rows():
    with pytest.raises(DegenerateData):
        kmeans(np.ones((6, 2)), 2)


def test_bad_k():
    with pytest.raises(InvalidInput):
        kmeans(np.eye(3), 4)


def test_restarts_do_not_increase_inertia(rng):
    x = rng.standard_normal((80, 2))
    assert kmeans(x, 5, seed=3, n_init=10).inertia <= kmeans(x, 5, seed=3, n_init=1).inertia + 1e-12
