"""Seeded multi-view Gaussian-mixture data with shared ground truth.

Every view uses the same sample-to-cluster assignment; centroids are drawn
independently per view with pairwise distance at least ``separation`` (in
units of the unit within-cluster standard deviation).  A fraction of views
can be made pure noise (all centroids at the origin).
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import GenerationFailure, InvalidInput
from .kernels import ViewData

MAX_PLACEMENT_TRIES = 2000


@dataclass
class SynthSpec:
    n: int = 300
    k: int = 5
    m: int = 4
    dims: Optional[List[int]] = None
    separation: float = 6.0
    noise_view_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.dims is None:
            self.dims = [10] * self.m
        self.dims = [int(d) for d in self.dims]
        if self.k < 1 or self.n < 2 * self.k:
            raise InvalidInput(f"need n >= 2k, got n={self.n}, k={self.k}")
        if self.m < 1 or len(self.dims) != self.m or min(self.dims) < 1:
            raise InvalidInput("need m >= 1 and one positive dimension per view")
        if not self.separation >= 0:
            raise InvalidInput("separation must be non-negative")
        if not 0.0 <= self.noise_view_fraction < 1.0:
            raise InvalidInput("noise_view_fraction must lie in [0, 1)")

    @property
    def noise_views(self):
        return int(np.floor(self.noise_view_fraction * self.m + 1e-9))


def place_centroids(k, d, separation, rng):
    """``k`` points in ``R^d`` with all pairwise distances >= ``separation``.

    With ``d >= k`` the points are a scaled random orthonormal frame, so every
    pairwise distance is exactly ``separation``.  Otherwise rejection sampling
    in a slowly growing cube.
    """
    if separation == 0 or k == 1:
        return np.zeros((k, d))
    if d >= k:
        q, _ = np.linalg.qr(rng.standard_normal((d, k)))
        return (separation / np.sqrt(2.0)) * q.T
    side = separation * k ** (1.0 / d)
    for attempt in range(MAX_PLACEMENT_TRIES):
        pts = rng.uniform(-side / 2, side / 2, size=(k, d))
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt(np.sum(diff**2, axis=-1))
        dist[np.diag_indices(k)] = np.inf
        if dist.min() >= separation:
            return pts
        side *= 1.005
    raise GenerationFailure(f"could not place {k} centroids in {d} dimensions at separation {separation}")


def generate(spec):
    """Return ``(views, labels)`` for ``spec``; bit-identical for a given seed."""
    rng = np.random.default_rng(spec.seed)
    labels = rng.permutation(np.arange(spec.n) % spec.k).astype(np.int64)
    noisy = set(rng.choice(spec.m, size=spec.noise_views, replace=False).tolist())
    views = []
    for v, d in enumerate(spec.dims):
        sep = 0.0 if v in noisy else spec.separation
        centers = place_centroids(spec.k, d, sep, rng)
        x = centers[labels] + rng.standard_normal((spec.n, d))
        views.append(ViewData(view_id=v, features=x))
    return views, labels


def noise_view_ids(spec):
    """Indices of the pure-noise views ``generate(spec)`` will produce."""
    rng = np.random.default_rng(spec.seed)
    rng.permutation(np.arange(spec.n) % spec.k)
    return sorted(rng.choice(spec.m, size=spec.noise_views, replace=False).tolist())
