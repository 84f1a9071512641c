"""Dense real-matrix primitives used by the rest of the package.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  The
decompositions are LAPACK calls through numpy/scipy; this module adds input
validation, ordering guarantees and the error types.
"""

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import InvalidInput, NumericalFailure

SYM_TOL = 1e-8


class SvdResult(NamedTuple):
    u: np.ndarray
    singular_values: np.ndarray
    vt: np.ndarray


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D float64 array or raise InvalidInput."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidInput(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} contains NaN or Inf")
    return arr


def svd(a):
    """Thin SVD with singular values in non-increasing order."""
    a = as_matrix(a)
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return SvdResult(u, s, vt)


def is_symmetric(a, tol=SYM_TOL):
    return a.shape[0] == a.shape[1] and np.max(np.abs(a - a.T), initial=0.0) <= tol


def sym_eigh_top(a, k):
    """Top-``k`` eigenpairs of symmetric ``a``: values descending, vectors as columns."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1] or not is_symmetric(a):
        raise InvalidInput("expected a square symmetric matrix")
    n = a.shape[0]
    if not 1 <= k <= n:
        raise InvalidInput(f"k must be in [1, {n}], got {k}")
    sym = 0.5 * (a + a.T)
    try:
        vals, vecs = scipy.linalg.eigh(sym, subset_by_index=[n - k, n - 1])
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    return vals[::-1].copy(), np.ascontiguousarray(vecs[:, ::-1])


def sym_eig_topk(a, k):
    """Orthonormal eigenvectors of the ``k`` largest eigenvalues of symmetric ``a``.

    Columns are ordered by decreasing eigenvalue.  On a repeated eigenvalue
    any orthonormal basis of the invariant subspace may come back.
    """
    return sym_eigh_top(a, k)[1]


def sym_eigvals(a):
    """All eigenvalues of symmetric ``a``, descending."""
    return np.linalg.eigvalsh(0.5 * (a + a.T))[::-1]


def polar_factor(m):
    """Orthogonal factor ``U V^T`` of ``m = U S V^T``.

    This is the maximiser of ``Tr(Q^T m)`` over orthogonal ``Q``.
    """
    res = svd(m)
    return res.u @ res.vt


def nuclear_norm(m):
    return float(np.sum(svd(m).singular_values))


def frobenius(m):
    return float(np.linalg.norm(m, "fro"))


def trace_inner(a, b):
    """``Tr(a^T b)`` without forming the product."""
    return float(np.einsum("ij,ij->", a, b))


def orthogonality_error(q):
    """``max |q^T q - I|``."""
    k = q.shape[1]
    return float(np.max(np.abs(q.T @ q - np.eye(k))))


def random_orthogonal(k, rng):
    """Haar-distributed orthogonal matrix."""
    z = rng.standard_normal((k, k))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))


def random_orthonormal_columns(n, k, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, k)))
    return q * np.sign(np.diag(r))
