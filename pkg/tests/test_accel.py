import os
import subprocess
import sys

import numpy as np
import pytest

from cacluster import _kernels


def test_pairwise_sq_dists(kernel_impl, rng):
    x = rng.standard_normal((17, 4))
    ref = ((x[:, None, :] - x[None, :, :]) ** 2).sum(-1)
    out = kernel_impl.pairwise_sq_dists(x)
    np.testing.assert_allclose(out, ref, atol=1e-12)
    np.testing.assert_array_equal(out, out.T)
    assert np.all(np.diag(out) == 0)


def test_row_argmax_lowest_index_on_ties(kernel_impl):
    a = np.array([[1.0, 3.0, 3.0], [2.0, 2.0, 2.0], [0.0, -1.0, 5.0]])
    np.testing.assert_array_equal(kernel_impl.row_argmax(a), [1, 0, 2])


def test_group_sum_matches_onehot_product(kernel_impl, rng):
    labels = rng.integers(0, 4, size=30).astype(np.int64)
    x = rng.standard_normal((30, 3))
    e = np.zeros((30, 4))
    e[np.arange(30), labels] = 1
    np.testing.assert_allclose(kernel_impl.group_sum(labels, x, 4), e.T @ x, atol=1e-12)


def test_assign_nearest(kernel_impl, rng):
    x = rng.standard_normal((25, 3))
    c = rng.standard_normal((4, 3))
    labels, dist = kernel_impl.assign_nearest(x, c)
    d2 = ((x[:, None, :] - c[None]) ** 2).sum(-1)
    np.testing.assert_array_equal(labels, d2.argmin(1))
    np.testing.assert_allclose(dist, d2.min(1), atol=1e-12)


@pytest.mark.parametrize("flag, expected", [("1", "numpy"), ("0", "numba"), ("", "numba")])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, CACLUSTER_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "import cacluster; print(cacluster.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    want = expected if _kernels.HAVE_NUMBA else "numpy"
    assert out.stdout.strip() == want
