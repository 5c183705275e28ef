"""Consensus over repeated DER runs via a co-occurrence matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._utils import check_positive_int, derive_seed, parallel_map, resolve_seed
from .der import Partition, run
from .diffusion import walk_measures
from .exceptions import InvalidInputError

__all__ = ["CoOccurrence", "cooccurrence", "threshold", "threshold_cluster", "run_repeats"]


@dataclass(frozen=True)
class CoOccurrence:
    """Symmetric pair counts over ``R`` runs.

    ``counts`` is a CSR matrix holding ``count(i, j) >= 1`` for ``i != j``;
    the diagonal (always ``R``) is not stored.
    """

    n: int
    R: int
    counts: sp.csr_matrix

    def count(self, i, j):
        if i == j:
            return self.R
        return int(self.counts[i, j])

    def pairs(self):
        """``(i, j, count)`` with ``i < j`` in lexicographic order."""
        up = sp.triu(self.counts, k=1, format="coo")
        order = np.lexsort((up.col, up.row))
        return [(int(up.row[o]), int(up.col[o]), int(up.data[o])) for o in order]

    def to_text(self, ids=None):
        name = (lambda i: ids[i]) if ids is not None else str
        return "".join(f"{name(i)} {name(j)} {c}\n" for i, j, c in self.pairs())


def _labels(p):
    return p.labels if isinstance(p, Partition) else np.asarray(p, dtype=np.int64)


def cooccurrence(partitions):
    """Count, for every vertex pair, the runs that put both in one cluster."""
    partitions = list(partitions)
    if not partitions:
        raise InvalidInputError("need at least one partition")
    labels = [_labels(p) for p in partitions]
    n = len(labels[0])
    if any(len(lab) != n for lab in labels):
        raise InvalidInputError("partitions cover different vertex sets")
    total = sp.csr_matrix((n, n), dtype=np.int64)
    for lab in labels:
        _, lab = np.unique(lab, return_inverse=True)
        Z = sp.csr_matrix(
            (np.ones(n, dtype=np.int64), (np.arange(n), lab)), shape=(n, lab.max() + 1)
        )
        total = total + Z @ Z.T
    total = sp.csr_matrix(total)
    total.setdiag(0)
    total.eliminate_zeros()
    total.sort_indices()
    return CoOccurrence(n=n, R=len(labels), counts=total)


def threshold(R):
    return math.ceil(R / 2)


def threshold_cluster(co):
    """Greedy threshold clustering with ``T = ceil(R/2)``.

    Repeatedly take the lowest remaining vertex ``i`` and emit ``i`` together
    with every remaining ``j`` whose count with ``i`` reaches ``T``. The
    number of clusters is whatever the data gives.
    """
    T = threshold(co.R)
    C = co.counts
    labels = np.full(co.n, -1, dtype=np.int64)
    k = 0
    for i in range(co.n):
        if labels[i] >= 0:
            continue
        lo, hi = C.indptr[i], C.indptr[i + 1]
        nbrs = C.indices[lo:hi][C.data[lo:hi] >= T]
        nbrs = nbrs[labels[nbrs] < 0]
        labels[i] = k
        labels[nbrs] = k
        k += 1
    return Partition(labels, k)


def run_repeats(g, k, L=5, R=5, restarts=3, seed=0, max_iters=100, n_jobs=1):
    """Run DER ``R`` times with derived seeds and merge the runs by co-occurrence.

    Returns ``(partition, cooccurrence, runs)`` where ``partition`` labels the
    active vertices and ``runs`` holds the best state of each repeat.
    """
    R = check_positive_int("R", R)
    seed = resolve_seed(seed)
    diffusion = walk_measures(g, check_positive_int("L", L))

    def one(r):
        best, _ = run(
            g, k, L=L, seed=derive_seed(seed, r), max_iters=max_iters,
            restarts=restarts, diffusion=diffusion,
        )
        return best

    runs = parallel_map(one, range(R), n_jobs)
    co = cooccurrence([st.partition for st in runs])
    return threshold_cluster(co), co, runs
