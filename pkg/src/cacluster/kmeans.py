"""Seeded multi-restart Lloyd k-means on the rows of a small dense matrix."""

from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DegenerateData, InvalidInput


class KMeansResult(NamedTuple):
    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    n_iter: int


def _plusplus(x, k, rng):
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    d2 = np.sum((x - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = rng.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(d2), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        centers[c] = x[idx]
        d2 = np.minimum(d2, np.sum((x - centers[c]) ** 2, axis=1))
    return centers


def _lloyd(x, centers, max_iter, tol):
    k = centers.shape[0]
    labels, dist = _kernels.assign_nearest(x, centers)
    for it in range(1, max_iter + 1):
        sums = _kernels.group_sum(labels, x, k)
        counts = np.bincount(labels, minlength=k)
        empty = np.flatnonzero(counts == 0)
        new = centers.copy()
        full = counts > 0
        new[full] = sums[full] / counts[full, None]
        if empty.size:
            # reseed empty clusters at the points farthest from their centers
            far = np.argsort(-dist, kind="stable")[: empty.size]
            new[empty] = x[far]
        shift = np.sum((new - centers) ** 2)
        centers = new
        new_labels, dist = _kernels.assign_nearest(x, centers)
        if (np.array_equal(new_labels, labels) and not empty.size) or shift <= tol:
            labels = new_labels
            break
        labels = new_labels
    return labels, centers, float(dist.sum()), it


def kmeans(x, k, seed=0, n_init=10, max_iter=300, tol=1e-12):
    """Best-of-``n_init`` k-means by inertia.

    Raises DegenerateData when the rows contain fewer than ``k`` distinct
    points, or when every restart ends with an empty cluster.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise InvalidInput("kmeans expects a 2-D array")
    n = x.shape[0]
    if not 1 <= k <= n:
        raise InvalidInput(f"k must be in [1, {n}], got {k}")
    if np.unique(x, axis=0).shape[0] < k:
        raise DegenerateData(f"fewer than {k} distinct rows; cannot form {k} clusters")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_init):
        labels, centers, inertia, it = _lloyd(x, _plusplus(x, k, rng), max_iter, tol)
        if np.bincount(labels, minlength=k).min() == 0:
            continue
        if best is None or inertia < best.inertia:
            best = KMeansResult(labels, centers, inertia, it)
    if best is None:
        raise DegenerateData("every k-means restart ended with an empty cluster")
    return best
