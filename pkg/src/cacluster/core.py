"""Continual late-fusion clustering with a category memory.

State carried across views is a :class:`CacState`: the running consensus
``h_star`` (n x k, the sum of aligned basic partitions) and the orthogonal
``k x k`` category memory ``b``.  Each new basic partition ``H`` is absorbed
by alternating three exact coordinate maximisations of

    Tr(B^T E^T H W) + lam * Tr(B^T E^T H~)

over the one-hot assignment ``E``, the memory ``B`` and the alignment ``W``,
where ``H~ = h_star / views_absorbed`` is the mean aligned partition so far.
Afterwards ``h_star += H W``; ``H`` itself is not kept.

The inner loop works on the label vector of ``E`` rather than the dense
one-hot matrix, so every product with ``E`` is an O(nk) grouped sum.
"""

import logging
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np

from . import _kernels
from .errors import InvalidInput
from .kmeans import kmeans
from .linalg import as_matrix, polar_factor, trace_inner
from .partition import check_partition

log = logging.getLogger(__name__)

REL_FLOOR = 1e-12


@dataclass
class CacConfig:
    lam: float = 1.0
    epsilon: float = 1e-4
    max_inner_iters: int = 100
    seed: int = 0
    kmeans_restarts: int = 10

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam < 0:
            raise InvalidInput(f"lambda must be a non-negative real, got {self.lam}")
        if not self.epsilon > 0:
            raise InvalidInput(f"epsilon must be positive, got {self.epsilon}")
        if self.max_inner_iters < 1:
            raise InvalidInput(f"max_inner_iters must be >= 1, got {self.max_inner_iters}")
        if self.kmeans_restarts < 1:
            raise InvalidInput("kmeans_restarts must be >= 1")


@dataclass(eq=False, slots=True)
class CacState:
    """Everything retained between views."""

    h_star: np.ndarray
    b: np.ndarray
    views_absorbed: int

    @property
    def n(self):
        return self.h_star.shape[0]

    @property
    def k(self):
        return self.b.shape[0]

    def h_tilde(self):
        return self.h_star / self.views_absorbed

    def retained_size(self):
        """Number of floats held: exactly ``n*k + k*k``."""
        return self.h_star.size + self.b.size


@dataclass(eq=False)
class CacWorkspace:
    """Intermediates of the last inner iteration plus the objective trace."""

    a: np.ndarray
    d: np.ndarray
    r: np.ndarray
    w: np.ndarray
    objective_trace: List[float] = field(default_factory=list)
    n_iter: int = 0
    converged: bool = False
    h_tilde_norm: float = 0.0


class AbsorbResult(NamedTuple):
    state: CacState
    assignment: np.ndarray
    workspace: CacWorkspace


# ---------------------------------------------------------------------------
# one-hot helpers


def onehot(labels, k):
    e = np.zeros((len(labels), k))
    e[np.arange(len(labels)), labels] = 1.0
    return e


def labels_from_onehot(e):
    e = np.asarray(e)
    if e.ndim != 2 or not np.all((e == 0) | (e == 1)) or not np.all(e.sum(axis=1) == 1):
        raise InvalidInput("assignment matrix must be 0/1 with exactly one 1 per row")
    return np.ascontiguousarray(np.argmax(e, axis=1).astype(np.int64))


def _check_same_shape(*arrays):
    shape = arrays[0].shape
    for a in arrays[1:]:
        if a.shape != shape:
            raise InvalidInput(f"shape mismatch: {a.shape} vs {shape}")


# ---------------------------------------------------------------------------
# coordinate updates, label-vector form


def _assign(target, b):
    return _kernels.row_argmax(np.ascontiguousarray(target @ b.T))


def _group(labels, x, k):
    return _kernels.group_sum(labels, np.ascontiguousarray(x), k)


def update_assignment(ht_aligned, h_tilde, b, lam):
    """One-hot ``E`` with ``E[i, argmax_j A[i, j]] = 1``, ``A = (HW + lam H~) B^T``.

    Ties go to the lowest column index.
    """
    ht_aligned = as_matrix(ht_aligned)
    h_tilde = as_matrix(h_tilde)
    b = as_matrix(b)
    _check_same_shape(ht_aligned, h_tilde)
    if b.shape != (ht_aligned.shape[1],) * 2:
        raise InvalidInput(f"memory shape {b.shape} does not match k={ht_aligned.shape[1]}")
    return onehot(_assign(ht_aligned + lam * h_tilde, b), b.shape[0])


def update_memory(e, ht_aligned, h_tilde, lam):
    """``B = S V^T`` from the SVD ``D = S diag(s) V^T`` of ``D = E^T (HW + lam H~)``."""
    labels = labels_from_onehot(e)
    ht_aligned = as_matrix(ht_aligned)
    h_tilde = as_matrix(h_tilde)
    _check_same_shape(ht_aligned, h_tilde)
    if len(labels) != ht_aligned.shape[0] or e.shape[1] != ht_aligned.shape[1]:
        raise InvalidInput("assignment and partition shapes disagree")
    d = _group(labels, ht_aligned + lam * h_tilde, e.shape[1])
    return polar_factor(d)


def update_alignment(ht, e, b):
    """``W = U V^T`` from the SVD of ``R = H^T E B``."""
    labels = labels_from_onehot(e)
    ht = as_matrix(ht)
    b = as_matrix(b)
    k = ht.shape[1]
    if len(labels) != ht.shape[0] or e.shape[1] != k or b.shape != (k, k):
        raise InvalidInput("assignment, partition and memory shapes disagree")
    r = _group(labels, ht, k).T @ b
    return polar_factor(r)


def objective(e, b, w, ht, h_tilde, lam):
    """``Tr(B^T E^T H W) + lam * Tr(B^T E^T H~)``."""
    e = np.asarray(e, dtype=np.float64)
    ht = as_matrix(ht)
    h_tilde = as_matrix(h_tilde)
    _check_same_shape(ht, h_tilde)
    eb = e @ b
    return trace_inner(eb, ht @ w) + lam * trace_inner(eb, h_tilde)


def objective_upper_bound(k, lam, h_tilde_norm):
    """``k + lam * ||H~||_F * sqrt(k)``, the bound claimed for the objective.

    Note: for binary ``E`` the Cauchy-Schwarz step gives ``||E B||_F = sqrt(n)``,
    not ``sqrt(k)``; :func:`objective_cauchy_schwarz_bound` is the bound that
    actually holds.
    """
    return k + lam * h_tilde_norm * np.sqrt(k)


def objective_cauchy_schwarz_bound(n, k, lam, h_tilde_norm):
    """``sqrt(n) * (sqrt(k) + lam * ||H~||_F)``."""
    return np.sqrt(n) * (np.sqrt(k) + lam * h_tilde_norm)


# ---------------------------------------------------------------------------
# stream operations


def cac_init(h1, k, config=None):
    """State after the first view: consensus ``H1``, memory from k-means on its rows.

    The k x k centroid matrix is projected onto the orthogonal group (its
    polar factor), the nearest orthogonal matrix in Frobenius norm.
    """
    config = config or CacConfig()
    h1 = check_partition(h1, k)
    km = kmeans(h1, k, seed=config.seed, n_init=config.kmeans_restarts)
    b = polar_factor(km.centers)
    return CacState(h_star=h1.copy(), b=b, views_absorbed=1)


def _relative_change(obj, prev):
    return abs(obj - prev) / max(abs(obj), REL_FLOOR)


def absorb_view(state, ht, config=None, on_iteration=None):
    """Fold one basic partition into ``state``; returns a new state.

    ``state`` itself is not modified.  The returned workspace carries the
    per-iteration objective trace and a ``converged`` flag (False means the
    loop stopped at ``max_inner_iters``).  ``on_iteration(i, labels, b, w, obj)``
    is called after every inner iteration if given.
    """
    config = config or CacConfig()
    k = state.k
    ht = as_matrix(ht, "partition")
    if ht.shape != state.h_star.shape:
        raise InvalidInput(f"partition shape {ht.shape} does not match consensus {state.h_star.shape}")
    ht = np.ascontiguousarray(ht)
    lam = config.lam
    h_tilde = state.h_tilde()
    b = state.b
    w = np.eye(k)
    g_tilde = None
    trace = []
    converged = False
    for it in range(1, config.max_inner_iters + 1):
        hw = ht @ w
        target = hw + lam * h_tilde
        a = target @ b.T
        labels = _kernels.row_argmax(np.ascontiguousarray(a))
        # E^T H and E^T H~ are k x k; every E-product below is built from them
        g_h = _group(labels, ht, k)
        g_tilde = _group(labels, h_tilde, k)
        d = g_h @ w + lam * g_tilde
        b = polar_factor(d)
        r = g_h.T @ b
        w = polar_factor(r)
        obj = trace_inner(w, r) + lam * trace_inner(b, g_tilde)
        trace.append(obj)
        if on_iteration is not None:
            on_iteration(it, labels, b, w, obj)
        if it > 1 and _relative_change(obj, trace[-2]) <= config.epsilon:
            converged = True
            break
    if not converged:
        log.info("absorb_view stopped at max_inner_iters=%d without meeting epsilon", config.max_inner_iters)
    new_state = CacState(h_star=state.h_star + ht @ w, b=b, views_absorbed=state.views_absorbed + 1)
    ws = CacWorkspace(
        a=a, d=d, r=r, w=w, objective_trace=trace, n_iter=it, converged=converged,
        h_tilde_norm=float(np.linalg.norm(h_tilde)),
    )
    return AbsorbResult(new_state, onehot(labels, k), ws)


def final_labels(state, k=None, seed=0, n_init=10):
    """Hard labels by k-means on the rows of the mean consensus ``h_star / t``."""
    k = state.k if k is None else k
    return kmeans(state.h_tilde(), k, seed=seed, n_init=n_init).labels


class ContinualClusterer:
    """Stateful driver: feed basic partitions one at a time.

    Only :attr:`state` survives between calls; ``partial_fit`` hands the
    absorption diagnostics back to the caller instead of keeping them.
    """

    def __init__(self, k, config: Optional[CacConfig] = None):
        self.k = k
        self.config = config or CacConfig()
        self.state: Optional[CacState] = None

    def partial_fit(self, h) -> Optional[AbsorbResult]:
        if self.state is None:
            self.state = cac_init(h, self.k, self.config)
            return None
        res = absorb_view(self.state, h, self.config)
        self.state = res.state
        return res

    def labels(self, seed=None):
        if self.state is None:
            raise InvalidInput("no view absorbed yet")
        seed = self.config.seed if seed is None else seed
        return final_labels(self.state, self.k, seed=seed, n_init=self.config.kmeans_restarts)

    def retained_size(self):
        return 0 if self.state is None else self.state.retained_size()
