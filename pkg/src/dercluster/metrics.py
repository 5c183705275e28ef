"""Comparing two hard partitions of the same vertex set."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import InvalidInputError

__all__ = ["contingency", "partition_entropy", "mutual_information", "nmi", "misclassified"]


def _as_labels(p):
    labels = getattr(p, "labels", p)
    return np.asarray(labels)


def contingency(P, Q):
    """Joint counts ``n_ab = |P_a & Q_b|`` over the labels present in each partition."""
    a, b = _as_labels(P), _as_labels(Q)
    if a.shape != b.shape:
        raise InvalidInputError(f"partitions cover different vertex sets ({a.size} vs {b.size})")
    if a.size == 0:
        raise InvalidInputError("partitions are empty")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def _h(counts, n, base):
    p = counts[counts > 0] / n
    # fsum is correctly rounded, so the result does not depend on label order
    return -math.fsum(p * np.log(p)) / math.log(base)


def partition_entropy(P, base=np.e):
    _, counts = np.unique(_as_labels(P), return_counts=True)
    return _h(counts, counts.sum(), base)


def mutual_information(P, Q, base=np.e):
    table = contingency(P, Q)
    n = table.sum()
    rows = table.sum(axis=1, keepdims=True)
    cols = table.sum(axis=0, keepdims=True)
    nz = table > 0
    ratio = (table * n) / (rows * cols)
    return math.fsum(table[nz] / n * np.log(ratio[nz])) / math.log(base)


def nmi(P, Q, base=np.e):
    """Normalized mutual information ``2 I(P,Q) / (H(P) + H(Q))``.

    Each vertex has weight one. Two single-cluster partitions give 1.
    """
    table = contingency(P, Q)
    nz = table > 0
    if np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1):
        return 1.0
    n = table.sum()
    hp = _h(table.sum(axis=1), n, base)
    hq = _h(table.sum(axis=0), n, base)
    if hp + hq == 0:
        return 1.0
    value = 2.0 * mutual_information(P, Q, base) / (hp + hq)
    return float(min(max(value, 0.0), 1.0))


def misclassified(P, Q):
    """Vertices left over after the best one-to-one matching of cluster labels.

    Clusters without a partner (unequal cluster counts) contribute all their
    vertices.
    """
    table = contingency(P, Q)
    r, c = linear_sum_assignment(table, maximize=True)
    return int(table.sum() - table[r, c].sum())
