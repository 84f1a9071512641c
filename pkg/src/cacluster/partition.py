"""Basic partitions: spectral relaxation of single-kernel kernel k-means.

For a fixed kernel ``K`` the relaxed problem ``min Tr(K (I - H H^T))`` over
column-orthonormal ``H`` is solved by the top-``k`` eigenvectors of ``K``.
"""

import logging

import numpy as np

from .errors import InvalidInput
from .kernels import KernelSpec, build_kernel, center_kernel, standardize
from .linalg import as_matrix, is_symmetric, svd, sym_eig_topk, sym_eigh_top

log = logging.getLogger(__name__)

EIGENGAP_WARN = 1e-8


def kernel_kmeans_partition(kernel, k, center=True):
    """n x k column-orthonormal partition matrix of one kernel."""
    kernel = as_matrix(kernel, "kernel")
    n = kernel.shape[0]
    if kernel.shape != (n, n) or not is_symmetric(kernel):
        raise InvalidInput("kernel must be square and symmetric")
    if not 2 <= k <= n:
        raise InvalidInput(f"k must be in [2, {n}], got {k}")
    gram = center_kernel(kernel) if center else kernel
    if k == n:
        return sym_eig_topk(gram, k)
    vals, vecs = sym_eigh_top(gram, k + 1)
    if vals[k - 1] - vals[k] <= EIGENGAP_WARN * max(1.0, abs(vals[0])):
        log.warning("near-degenerate eigengap at position k=%d; partition basis is not unique", k)
    return np.ascontiguousarray(vecs[:, :k])


def linear_partition(features, k, standardize_features=True):
    """Same subspace as ``kernel_kmeans_partition`` on a centred linear kernel.

    Uses the thin SVD of the column-centred features, O(n d^2) instead of
    O(n^3), so it scales to large ``n``.
    """
    x = as_matrix(features, "features")
    n, d = x.shape
    if not 2 <= k <= n:
        raise InvalidInput(f"k must be in [2, {n}], got {k}")
    if standardize_features:
        x = standardize(x)
    x = x - x.mean(axis=0)
    res = svd(x)
    u = res.u
    if u.shape[1] < k:
        # rank-deficient linear kernel: pad with an orthonormal complement
        rng = np.random.default_rng(0)
        extra = rng.standard_normal((n, k - u.shape[1]))
        extra -= u @ (u.T @ extra)
        q, _ = np.linalg.qr(extra)
        u = np.hstack([u, q])
    return np.ascontiguousarray(u[:, :k])


def view_partition(view, k, spec=None):
    """Kernel + partition for one view, dropping the kernel afterwards.

    A centred linear kernel goes through :func:`linear_partition` and never
    forms the n x n Gram matrix.
    """
    spec = spec or KernelSpec()
    if spec.kind == "linear" and spec.center:
        return linear_partition(view.features, k, standardize_features=spec.standardize)
    gram = build_kernel(view, spec)
    return kernel_kmeans_partition(gram, k, center=spec.center)


def partition_objective(kernel, h):
    """``Tr(K (I - H H^T))``, the relaxed kernel k-means loss."""
    return float(np.trace(kernel) - np.einsum("ij,ij->", h, kernel @ h))


def check_partition(h, k=None, tol=1e-6):
    h = as_matrix(h, "partition")
    if k is not None and h.shape[1] != k:
        raise InvalidInput(f"partition has {h.shape[1]} columns, expected {k}")
    err = np.max(np.abs(h.T @ h - np.eye(h.shape[1])))
    if err > tol:
        raise InvalidInput(f"partition columns are not orthonormal (error {err:.3g})")
    return h
