"""Undirected weighted graphs, edge-list I/O and the stationary measure."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .exceptions import DegenerateGraphError, EdgeListError, InvalidInputError

__all__ = [
    "Graph",
    "from_edge_list",
    "read_edge_list",
    "stationary",
    "active_vertices",
]


class Graph:
    """Symmetric sparse graph with external vertex ids.

    Parameters
    ----------
    adjacency : sparse or dense array of shape (n, n)
        Symmetric, non-negative weights. Zero entries are dropped.
    ids : sequence of str, optional
        External vertex names, defaults to ``"0" .. "n-1"``.

    Notes
    -----
    A self-loop of weight ``w`` contributes ``w`` (not ``2w``) to the degree,
    i.e. degrees are plain row sums of the adjacency matrix.
    """

    def __init__(self, adjacency, ids=None):
        A = sp.csr_matrix(adjacency, dtype=np.float64, copy=True)
        if A.shape[0] != A.shape[1]:
            raise InvalidInputError(f"adjacency must be square, got {A.shape}")
        A.eliminate_zeros()
        A.sort_indices()
        if A.nnz and (A.data.min() < 0 or not np.all(np.isfinite(A.data))):
            raise InvalidInputError("edge weights must be finite and non-negative")
        if (A != A.T).nnz:
            raise InvalidInputError("adjacency must be symmetric")
        self.adjacency = A
        n = A.shape[0]
        if ids is None:
            ids = [str(i) for i in range(n)]
        ids = [str(v) for v in ids]
        if len(ids) != n:
            raise InvalidInputError(f"got {len(ids)} ids for {n} vertices")
        self.ids = ids
        self.index = {v: i for i, v in enumerate(ids)}
        if len(self.index) != n:
            raise InvalidInputError("vertex ids must be unique")
        self.degrees = np.asarray(A.sum(axis=1)).ravel()
        self.total_degree = float(self.degrees.sum())

    @property
    def n(self):
        return self.adjacency.shape[0]

    @property
    def n_edges(self):
        """Number of undirected edges, self-loops included."""
        A = self.adjacency
        return int((A.nnz + A.diagonal().astype(bool).sum()) // 2)

    def neighbors(self, i):
        A = self.adjacency
        lo, hi = A.indptr[i], A.indptr[i + 1]
        return A.indices[lo:hi], A.data[lo:hi]

    def is_unweighted(self):
        return bool(np.all(self.adjacency.data == 1.0))

    def edges(self):
        """Yield ``(i, j, w)`` with ``i <= j``."""
        coo = sp.triu(self.adjacency, format="coo")
        order = np.lexsort((coo.col, coo.row))
        for r, c, w in zip(coo.row[order], coo.col[order], coo.data[order]):
            yield int(r), int(c), float(w)

    def to_edge_list(self):
        lines = []
        for i, j, w in self.edges():
            u, v = self.ids[i], self.ids[j]
            if w == 1.0:
                lines.append(f"{u} {v}")
            else:
                lines.append(f"{u} {v} {w!r}")
        return "\n".join(lines) + ("\n" if lines else "")

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.n_edges})"


def from_edge_list(text):
    """Parse a whitespace separated edge list.

    Each non-empty line not starting with ``#`` is ``u v`` or ``u v w``.
    Duplicate edges (in either orientation) have their weights summed and
    vertices are indexed in first-seen order.

    Raises
    ------
    EdgeListError
        On a malformed line; the message carries the 1-based line number.
    """
    index = {}
    rows, cols, vals = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise EdgeListError(lineno, f"expected 2 or 3 fields, got {len(tokens)}")
        w = 1.0
        if len(tokens) == 3:
            try:
                w = float(tokens[2])
            except ValueError:
                raise EdgeListError(lineno, f"non-numeric weight {tokens[2]!r}") from None
            if not (w > 0 and np.isfinite(w)):
                raise EdgeListError(lineno, f"weight must be positive, got {tokens[2]!r}")
        u = index.setdefault(tokens[0], len(index))
        v = index.setdefault(tokens[1], len(index))
        rows.append(u)
        cols.append(v)
        vals.append(w)
        if u != v:
            rows.append(v)
            cols.append(u)
            vals.append(w)
    n = len(index)
    # coo -> csr sums duplicates
    A = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    return Graph(A, ids=list(index))


def read_edge_list(path):
    with open(path, encoding="utf-8") as fh:
        return from_edge_list(fh.read())


def stationary(g):
    """Degree-proportional stationary measure ``d_i / d_V``."""
    if g.total_degree <= 0:
        raise DegenerateGraphError("graph has no edges; stationary measure undefined")
    return g.degrees / g.total_degree


def active_vertices(g):
    """Indices of vertices with positive degree, ascending."""
    return np.flatnonzero(g.degrees > 0)
