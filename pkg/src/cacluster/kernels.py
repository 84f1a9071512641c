"""Per-view kernel construction and weighted kernel combination."""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .errors import DegenerateData, InvalidInput
from .linalg import as_matrix, is_symmetric


@dataclass
class ViewData:
    """One view: ``n`` samples by ``d`` features."""

    view_id: int
    features: np.ndarray

    def __post_init__(self):
        self.features = as_matrix(self.features, f"view {self.view_id} features")
        n, d = self.features.shape
        if n < 2 or d < 1:
            raise InvalidInput(f"view {self.view_id}: need n >= 2 and d >= 1, got {n}x{d}")

    @property
    def n(self):
        return self.features.shape[0]


@dataclass(frozen=True)
class KernelSpec:
    """``kind`` is ``"linear"`` or ``"rbf"``; ``bandwidth`` is a float or ``"median"``."""

    kind: str = "rbf"
    bandwidth: Union[float, str] = "median"
    standardize: bool = True
    center: bool = True

    def __post_init__(self):
        if self.kind not in ("linear", "rbf"):
            raise InvalidInput(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf" and self.bandwidth != "median":
            try:
                bw = float(self.bandwidth)
            except (TypeError, ValueError):
                raise InvalidInput(f"bandwidth must be 'median' or a number, got {self.bandwidth!r}")
            if not np.isfinite(bw) or bw <= 0:
                raise InvalidInput(f"bandwidth must be positive, got {self.bandwidth!r}")
            object.__setattr__(self, "bandwidth", bw)


def standardize(x):
    """Z-score each column; constant columns become all-zero."""
    mu = x.mean(axis=0)
    sd = x.std(axis=0)
    sd[sd == 0] = 1.0
    return (x - mu) / sd


def center_kernel(gram):
    """``(I - 11^T/n) K (I - 11^T/n)`` computed without the projector."""
    row = gram.mean(axis=0)
    out = gram - row[None, :] - row[:, None] + row.mean()
    return 0.5 * (out + out.T)


def median_bandwidth(sq_dists):
    n = sq_dists.shape[0]
    iu = np.triu_indices(n, k=1)
    med = float(np.median(np.sqrt(sq_dists[iu])))
    if med <= 0.0:
        raise DegenerateData("median pairwise distance is zero; use an explicit bandwidth")
    return med


def build_kernel(view, spec=None):
    """Gram matrix of one view.

    RBF entries are ``exp(-||x_i - x_j||^2 / (2 * bandwidth^2))``.  Centering is
    *not* applied here (see ``center_kernel``) so the RBF diagonal stays 1.
    """
    spec = spec or KernelSpec()
    x = view.features
    if spec.standardize:
        x = standardize(x)
    x = np.ascontiguousarray(x)
    if spec.kind == "linear":
        gram = x @ x.T
        return 0.5 * (gram + gram.T)
    sq = _kernels.pairwise_sq_dists(x)
    bw = median_bandwidth(sq) if spec.bandwidth == "median" else float(spec.bandwidth)
    return np.exp(-sq / (2.0 * bw * bw))


def normalize_beta(beta):
    beta = np.asarray(beta, dtype=np.float64)
    norm = np.sqrt(np.sum(beta**2))
    if norm == 0:
        raise InvalidInput("beta is all zero")
    return beta / norm


def combine_kernels(kernels: Sequence[np.ndarray], beta):
    """``sum_p beta_p^2 K_p``."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.ndim != 1 or len(beta) != len(kernels) or len(kernels) == 0:
        raise InvalidInput(f"got {len(kernels)} kernels but beta of shape {beta.shape}")
    if np.any(beta < 0) or not np.all(np.isfinite(beta)):
        raise InvalidInput("beta must be finite and non-negative")
    n = kernels[0].shape[0]
    out = np.zeros((n, n))
    for p, (b, g) in enumerate(zip(beta, kernels)):
        if g.shape != (n, n):
            raise InvalidInput(f"kernel {p} has shape {g.shape}, expected {(n, n)}")
        out += (b * b) * g
    return out


def check_kernel(gram, tol=1e-8):
    """Raise InvalidInput unless ``gram`` is square, symmetric and PSD."""
    gram = as_matrix(gram, "kernel")
    if gram.shape[0] != gram.shape[1] or not is_symmetric(gram, tol):
        raise InvalidInput("kernel matrix must be square and symmetric")
    lo = np.linalg.eigvalsh(gram)[0]
    if lo < -1e-6 * max(np.linalg.norm(gram), 1.0):
        raise InvalidInput(f"kernel matrix is not PSD (min eigenvalue {lo:.3g})")
    return gram
