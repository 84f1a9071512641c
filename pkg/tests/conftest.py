import numpy as np
import pytest

from cacluster import _kernels
from cacluster.linalg import random_orthonormal_columns


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=["numba", "numpy"])
def kernel_impl(request):
    """Namespace exposing one flavour of every accelerated kernel."""

    class Impl:
        pass

    for name in _kernels.KERNELS:
        setattr(Impl, name, staticmethod(getattr(_kernels, f"{name}_{request.param}")))
    Impl.name = request.param
    return Impl


def random_psd(n, rng, rank=None):
    g = rng.standard_normal((n, rank or n))
    return g @ g.T


def projector(h):
    return h @ h.T


def clustered_partition(labels, k, rng, noise=0.0):
    """Column-orthonormal n x k matrix whose rows cluster by ``labels``."""
    n = len(labels)
    ind = np.zeros((n, k))
    ind[np.arange(n), labels] = 1.0
    ind /= np.sqrt(ind.sum(axis=0, keepdims=True))
    if noise:
        ind = ind + noise * rng.standard_normal((n, k))
    q, r = np.linalg.qr(ind)
    return q * np.sign(np.diag(r))


__all__ = ["random_psd", "projector", "clustered_partition", "random_orthonormal_columns"]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
