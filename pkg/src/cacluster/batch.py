"""All-views-at-once late fusion with a category memory (non-continual baseline).

Maximises ``Tr(B^T E^T X) + lam * Tr(B^T E^T M)`` with ``X = sum_p beta_p H_p W_p``
and ``M = mean_p H_p W_p``.  ``beta`` is held at ``1/sqrt(m)``.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from . import _kernels
from .core import CacConfig, REL_FLOOR, onehot
from .errors import InvalidInput
from .kmeans import kmeans
from .linalg import polar_factor, trace_inner
from .partition import check_partition


@dataclass(eq=False)
class BatchState:
    e: np.ndarray
    b: np.ndarray
    ws: List[np.ndarray]
    beta: np.ndarray
    m_avg: np.ndarray
    objective_trace: List[float]
    converged: bool


def batch_late_fusion(partitions, lam=None, config=None):
    """Returns ``(BatchState, labels)``; labels come from k-means on ``X``.

    Initialisation: each ``W_p`` is the Procrustes rotation of ``H_p`` onto
    ``H_1``, and ``B`` is the polar factor of k-means centroids of ``H_1``
    (the same memory initialisation the continual path uses).
    """
    config = config or CacConfig()
    lam = config.lam if lam is None else float(lam)
    if lam < 0:
        raise InvalidInput("lambda must be non-negative")
    if not partitions:
        raise InvalidInput("need at least one partition")
    shape = np.shape(partitions[0])
    hs = [np.ascontiguousarray(check_partition(h)) for h in partitions]
    if any(h.shape != shape for h in hs):
        raise InvalidInput("all partitions must share n and k")
    n, k = shape
    m = len(hs)
    beta = np.full(m, 1.0 / np.sqrt(m))
    coef = beta + lam / m  # each H_p W_p enters X + lam M with this weight

    ws = [polar_factor(h.T @ hs[0]) for h in hs]
    b = polar_factor(kmeans(hs[0], k, seed=config.seed, n_init=config.kmeans_restarts).centers)
    trace = []
    converged = False
    for it in range(1, config.max_inner_iters + 1):
        aligned = [h @ w for h, w in zip(hs, ws)]
        target = sum(c * hw for c, hw in zip(coef, aligned))
        labels = _kernels.row_argmax(np.ascontiguousarray(target @ b.T))
        d = _kernels.group_sum(labels, np.ascontiguousarray(target), k)
        b = polar_factor(d)
        obj = 0.0
        for p, h in enumerate(hs):
            r = _kernels.group_sum(labels, h, k).T @ b
            ws[p] = polar_factor(r)
            obj += coef[p] * trace_inner(ws[p], r)
        trace.append(obj)
        if it > 1 and abs(obj - trace[-2]) / max(abs(obj), REL_FLOOR) <= config.epsilon:
            converged = True
            break
    aligned = [h @ w for h, w in zip(hs, ws)]
    x = sum(bp * hw for bp, hw in zip(beta, aligned))
    m_avg = sum(aligned) / m
    labels_out = kmeans(x, k, seed=config.seed, n_init=config.kmeans_restarts).labels
    state = BatchState(
        e=onehot(labels, k), b=b, ws=ws, beta=beta, m_avg=m_avg,
        objective_trace=trace, converged=converged,
    )
    return state, labels_out
