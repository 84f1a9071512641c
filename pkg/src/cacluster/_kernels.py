"""Hot inner loops, each in a numba and a pure-numpy flavour.

The public names at the bottom of this module dispatch to one flavour,
chosen once at import time:

* numba is used when it imports and ``CACLUSTER_DISABLE_NUMBA`` is unset
  (or set to ``0``/``false``/empty);
* otherwise the numpy implementations are used.

Both flavours are always importable as ``*_numba`` / ``*_numpy`` so tests
and ``benchmarks/`` can compare them directly.  When numba is missing the
``*_numba`` names are the plain Python loops (slow, but correct).
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def _flag_disabled(value):
    return value is not None and value.strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = HAVE_NUMBA and not _flag_disabled(os.environ.get("CACLUSTER_DISABLE_NUMBA"))
BACKEND = "numba" if USE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# pairwise squared euclidean distances


@njit(cache=True)
def pairwise_sq_dists_numba(x):
    n, d = x.shape
    out = np.empty((n, n))
    for i in range(n):
        out[i, i] = 0.0
        for j in range(i + 1, n):
            s = 0.0
            for c in range(d):
                diff = x[i, c] - x[j, c]
                s += diff * diff
            out[i, j] = s
            out[j, i] = s
    return out


def pairwise_sq_dists_numpy(x):
    sq = np.einsum("ij,ij->i", x, x)
    out = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(out, 0.0, out=out)
    np.fill_diagonal(out, 0.0)
    # the gram trick is asymmetric in the last ulp
    return 0.5 * (out + out.T)


# --------------------------------------------------------------------------
# row-wise argmax, ties to the lowest column


@njit(cache=True)
def row_argmax_numba(a):
    n, k = a.shape
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        best = 0
        val = a[i, 0]
        for j in range(1, k):
            if a[i, j] > val:
                val = a[i, j]
                best = j
        out[i] = best
    return out


def row_argmax_numpy(a):
    return np.argmax(a, axis=1).astype(np.int64)


# --------------------------------------------------------------------------
# grouped row sums: out[c] = sum of x[i] over labels[i] == c  (i.e. E^T X)


@njit(cache=True)
def group_sum_numba(labels, x, k):
    n, d = x.shape
    out = np.zeros((k, d))
    for i in range(n):
        c = labels[i]
        for j in range(d):
            out[c, j] += x[i, j]
    return out


def group_sum_numpy(labels, x, k):
    out = np.zeros((k, x.shape[1]))
    np.add.at(out, labels, x)
    return out


# --------------------------------------------------------------------------
# nearest-centroid assignment for Lloyd iterations


@njit(cache=True)
def assign_nearest_numba(x, centers):
    n, d = x.shape
    k = centers.shape[0]
    labels = np.empty(n, dtype=np.int64)
    dist = np.empty(n)
    for i in range(n):
        best = 0
        bestd = np.inf
        for c in range(k):
            s = 0.0
            for j in range(d):
                diff = x[i, j] - centers[c, j]
                s += diff * diff
            if s < bestd:
                bestd = s
                best = c
        labels[i] = best
        dist[i] = bestd
    return labels, dist


def assign_nearest_numpy(x, centers):
    diff = x[:, None, :] - centers[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    labels = np.argmin(d2, axis=1).astype(np.int64)
    return labels, d2[np.arange(x.shape[0]), labels]


if USE_NUMBA:
    pairwise_sq_dists = pairwise_sq_dists_numba
    row_argmax = row_argmax_numba
    group_sum = group_sum_numba
    assign_nearest = assign_nearest_numba
else:
    pairwise_sq_dists = pairwise_sq_dists_numpy
    row_argmax = row_argmax_numpy
    group_sum = group_sum_numpy
    assign_nearest = assign_nearest_numpy

KERNELS = ("pairwise_sq_dists", "row_argmax", "group_sum", "assign_nearest")
