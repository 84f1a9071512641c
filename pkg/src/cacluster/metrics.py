"""Clustering quality: ACC (best one-to-one matching), NMI and purity.

NMI is normalised by the geometric mean of the two entropies,
``I(P; T) / sqrt(H(P) H(T))``.
"""

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InvalidInput

NMI_NORMALIZATION = "sqrt"


def _as_labels(labels, name):
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise InvalidInput(f"{name} must be a 1-D label vector")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise InvalidInput(f"{name} must contain integer labels")
        arr = arr.astype(np.int64)
    if arr.size and arr.min() < 0:
        raise InvalidInput(f"{name} must be non-negative")
    return arr.astype(np.int64)


def contingency(pred, truth):
    """Counts table: rows are predicted clusters, columns are true classes."""
    pred = _as_labels(pred, "pred")
    truth = _as_labels(truth, "truth")
    if pred.shape != truth.shape:
        raise InvalidInput(f"label vectors differ in length: {pred.size} vs {truth.size}")
    if pred.size == 0:
        raise InvalidInput("empty label vectors")
    table = np.zeros((pred.max() + 1, truth.max() + 1), dtype=np.int64)
    np.add.at(table, (pred, truth), 1)
    return table


def accuracy(pred, truth):
    table = contingency(pred, truth)
    rows, cols = linear_sum_assignment(-table)
    return float(table[rows, cols].sum() / table.sum())


def purity(pred, truth):
    table = contingency(pred, truth)
    return float(table.max(axis=1).sum() / table.sum())


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log(p)))


def nmi(pred, truth):
    table = contingency(pred, truth)
    n = table.sum()
    hp = _entropy(table.sum(axis=1), n)
    ht = _entropy(table.sum(axis=0), n)
    if hp == 0.0 and ht == 0.0:
        # both partitions are a single block: they agree
        return 1.0
    if hp == 0.0 or ht == 0.0:
        return 0.0
    joint = table / n
    outer = np.outer(table.sum(axis=1), table.sum(axis=0)) / (n * n)
    nz = joint > 0
    mi = float(np.sum(joint[nz] * np.log(joint[nz] / outer[nz])))
    return float(min(1.0, max(0.0, mi / np.sqrt(hp * ht))))


def evaluate(pred, truth):
    return {"acc": accuracy(pred, truth), "nmi": nmi(pred, truth), "purity": purity(pred, truth)}
