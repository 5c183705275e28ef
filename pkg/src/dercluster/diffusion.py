"""Walk distributions, cluster measures and the log-likelihood score.

Every vertex ``i`` is embedded as ``w_i``, the average of the ``t``-step
random walk distributions started at ``i`` for ``t = 1..L``. A set of
vertices ``S`` is summarised by ``mu_S``, the degree weighted mean of its
members' walk distributions. The similarity between a measure ``nu`` and a
candidate centre ``mu`` is ``sum_j nu(j) log mu(j)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exceptions import EmptyClusterError, IsolatedVertexError, ParameterError
from .graph import active_vertices

__all__ = [
    "SparseMeasure",
    "DiffusionSet",
    "transition_matrix",
    "transition_row",
    "walk_measures",
    "cluster_measure",
    "cluster_measures",
    "score",
    "score_matrix",
]


class SparseMeasure:
    """Non-negative measure stored as sorted ``(vertex, mass)`` pairs, mass > 0."""

    __slots__ = ("indices", "masses")

    def __init__(self, indices, masses):
        indices = np.asarray(indices, dtype=np.int64)
        masses = np.asarray(masses, dtype=np.float64)
        keep = masses > 0
        indices, masses = indices[keep], masses[keep]
        order = np.argsort(indices, kind="stable")
        self.indices = indices[order]
        self.masses = masses[order]

    @classmethod
    def from_dict(cls, d):
        return cls(list(d.keys()), list(d.values()))

    @classmethod
    def from_row(cls, M, i):
        lo, hi = M.indptr[i], M.indptr[i + 1]
        return cls(M.indices[lo:hi], M.data[lo:hi])

    def total(self):
        return float(self.masses.sum())

    def get(self, j):
        pos = np.searchsorted(self.indices, j)
        if pos < len(self.indices) and self.indices[pos] == j:
            return float(self.masses[pos])
        return 0.0

    def to_dict(self):
        return {int(i): float(m) for i, m in zip(self.indices, self.masses)}

    def to_dense(self, n):
        out = np.zeros(n)
        out[self.indices] = self.masses
        return out

    def __len__(self):
        return len(self.indices)

    def __repr__(self):
        return f"SparseMeasure({self.to_dict()})"


@dataclass(frozen=True)
class DiffusionSet:
    """Walk measures of all active vertices.

    ``W`` has one row per entry of ``active`` and ``n`` columns (global vertex
    indices), row ``r`` being ``w_{active[r]}``.
    """

    L: int
    active: np.ndarray
    W: sp.csr_matrix
    degrees: np.ndarray

    @property
    def n(self):
        return self.W.shape[1]

    def row_of(self, i):
        r = np.searchsorted(self.active, i)
        if r >= len(self.active) or self.active[r] != i:
            raise IsolatedVertexError(f"vertex {i} has zero degree")
        return r

    def measure(self, i):
        return SparseMeasure.from_row(self.W, self.row_of(i))

    def dump(self):
        """Debug dump, one ``"i j mass"`` line per stored entry."""
        coo = self.W.tocoo()
        return "".join(
            f"{self.active[r]} {c} {float(m)!r}\n" for r, c, m in zip(coo.row, coo.col, coo.data)
        )


def transition_matrix(g):
    """Row-normalised adjacency ``D^-1 A``; rows of isolated vertices are empty."""
    d = g.degrees
    inv = np.zeros_like(d)
    np.divide(1.0, d, out=inv, where=d > 0)
    T = sp.diags(inv) @ g.adjacency
    T = sp.csr_matrix(T)
    T.sort_indices()
    return T


def transition_row(g, i):
    if g.degrees[i] <= 0:
        raise IsolatedVertexError(f"vertex {i} has zero degree; transition row undefined")
    nbrs, w = g.neighbors(i)
    return SparseMeasure(nbrs, w / g.degrees[i])


def walk_measures(g, L):
    """Average of the 1..L step walk distributions for every active vertex.

    The ``t``-step rows are obtained by repeatedly multiplying the sparse
    block of active rows by the sparse transition matrix; no dense power of
    ``T`` is formed.
    """
    if not isinstance(L, (int, np.integer)) or L < 1:
        raise ParameterError(f"walk length L must be a positive integer, got {L!r}")
    T = transition_matrix(g)
    active = active_vertices(g)
    step = T[active]
    acc = step.copy()
    for _ in range(1, L):
        step = step @ T
        acc = acc + step
    W = sp.csr_matrix(acc / L)
    W.eliminate_zeros()
    W.sort_indices()
    return DiffusionSet(L=int(L), active=active, W=W, degrees=g.degrees[active])


def cluster_measure(g, ds, S):
    """``mu_S = (1/d_S) sum_{i in S} d_i w_i`` for a set of global vertex indices."""
    S = np.unique(np.asarray(list(S), dtype=np.int64))
    if S.size == 0:
        raise EmptyClusterError("cluster measure of an empty set")
    if np.any(g.degrees[S] <= 0):
        raise IsolatedVertexError("cluster contains an isolated vertex")
    rows = np.array([ds.row_of(i) for i in S])
    d = ds.degrees[rows]
    v = sp.csr_matrix(d[None, :]) @ ds.W[rows]
    v = v.toarray().ravel() / d.sum()
    nz = np.flatnonzero(v)
    return SparseMeasure(nz, v[nz])


def cluster_measures(ds, labels, k):
    """Cluster measures for a labelling of the active rows.

    Returns a ``(k, n)`` CSR matrix and the cluster degree totals ``d_S``.
    Rows of empty clusters are left empty with zero total.
    """
    labels = np.asarray(labels)
    m = len(labels)
    Z = sp.csr_matrix((ds.degrees, (labels, np.arange(m))), shape=(k, m))
    mass = np.asarray(Z.sum(axis=1)).ravel()
    M = sp.csr_matrix(Z @ ds.W)
    inv = np.zeros(k)
    np.divide(1.0, mass, out=inv, where=mass > 0)
    M = sp.csr_matrix(sp.diags(inv) @ M)
    M.eliminate_zeros()
    M.sort_indices()
    return M, mass


def score(nu, mu):
    """``sum_i nu(i) ln mu(i)``; ``-inf`` if ``nu`` charges a point ``mu`` misses."""
    pos = np.searchsorted(mu.indices, nu.indices)
    pos = np.minimum(pos, max(len(mu.indices) - 1, 0))
    if len(mu.indices) == 0 or np.any(mu.indices[pos] != nu.indices):
        return -math.inf if len(nu) else 0.0
    return float(np.dot(nu.masses, np.log(mu.masses[pos])))


def score_matrix(W, M):
    """Scores of every row of ``W`` against every row of ``M``.

    Entry ``(r, s)`` is ``score(W[r], M[s])``; pairs where the support of
    ``W[r]`` is not contained in that of ``M[s]`` get ``-inf``.
    """
    logM = M.copy()
    logM.data = np.log(logM.data)
    finite = (W @ logM.T).toarray()
    support = M.copy()
    support.data = np.ones_like(support.data)
    Wb = W.copy()
    Wb.data = np.ones_like(Wb.data)
    covered = (Wb @ support.T).toarray()
    need = np.diff(W.indptr)[:, None]
    return np.where(covered < need, -np.inf, finite)
