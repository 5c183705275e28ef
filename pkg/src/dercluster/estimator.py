"""scikit-learn style front end for DER clustering."""

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import der, ensemble, overlap
from ._utils import check_positive_int, resolve_seed
from .validation import check_graph, check_theta

__all__ = ["DiffusionEntropyReducer"]


class DiffusionEntropyReducer(
    ClusterMixin, TransformerMixin, BaseEstimator, auto_wrap_output_keys=None
):
    """Community detection by k-means over random-walk distributions.

    Parameters
    ----------
    n_clusters : int, default=2
        Number of clusters ``k`` per run.
    walk_length : int, default=5
        Walk length ``L``; each vertex is embedded as the mean of its
        1..L step walk distributions.
    n_restarts : int, default=3
        Random initialisations per run; the one with the best cost is kept.
    n_repeats : int, default=1
        Independent runs merged through co-occurrence thresholding. With
        more than one repeat the final number of clusters is data driven.
    max_iter : int, default=100
    random_state : int or None, default=None
    n_jobs : int or None, default=None
        Worker threads for restarts/repeats; ``None`` uses one.

    Attributes
    ----------
    labels_ : ndarray of shape (n_vertices,)
        Cluster per vertex. Isolated vertices get their own trailing labels.
    state_ : DerState
    cost_ : float
    cost_trace_ : list of float
        Costs of the selected run (per iteration). Empty for repeats.
    n_iter_ : int
    membership_ : ndarray of shape (n_vertices, n_clusters_)
        Probability that a walk ending at the vertex started in each
        cluster. Rows of isolated vertices are zero.
    cooccurrence_ : CoOccurrence or None
    """

    def __init__(
        self,
        n_clusters=2,
        walk_length=5,
        n_restarts=3,
        n_repeats=1,
        max_iter=100,
        random_state=None,
        n_jobs=None,
    ):
        self.n_clusters = n_clusters
        self.walk_length = walk_length
        self.n_restarts = n_restarts
        self.n_repeats = n_repeats
        self.max_iter = max_iter
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        """Cluster the graph given as a ``Graph`` or a symmetric adjacency matrix."""
        g = check_graph(X)
        k = check_positive_int("n_clusters", self.n_clusters)
        L = check_positive_int("walk_length", self.walk_length)
        repeats = check_positive_int("n_repeats", self.n_repeats)
        seed = resolve_seed(self.random_state)
        n_jobs = 1 if self.n_jobs is None else self.n_jobs

        if repeats == 1:
            state, _ = der.run(
                g, k, L=L, seed=seed, max_iters=self.max_iter,
                restarts=self.n_restarts, n_jobs=n_jobs,
            )
            self.cooccurrence_ = None
            self.cost_trace_ = list(state.cost_trace)
            self.n_iter_ = state.n_iter
        else:
            part, co, runs = ensemble.run_repeats(
                g, k, L=L, R=repeats, restarts=self.n_restarts, seed=seed,
                max_iters=self.max_iter, n_jobs=n_jobs,
            )
            ds = runs[0].diffusion
            state = der.init_state(g, ds, part)
            self.cooccurrence_ = co
            self.cost_trace_ = []
            self.n_iter_ = max(r.n_iter for r in runs)

        self.graph_ = g
        self.state_ = state
        self.n_clusters_ = state.k
        self.labels_ = state.full_labels()
        self.cost_ = der.cost(state)
        profile = np.zeros((g.n, state.k))
        profile[state.diffusion.active] = overlap.membership(state)
        self.membership_ = profile
        return self

    def transform(self, X=None):
        """Membership probabilities of the fitted graph's vertices."""
        check_is_fitted(self, "membership_")
        return self.membership_

    def fit_transform(self, X, y=None):
        return self.fit(X).membership_

    def cover(self, theta=0.5):
        """Overlapping communities: list of community index arrays per vertex."""
        check_is_fitted(self, "membership_")
        theta = check_theta(theta)
        active = self.state_.diffusion.active
        out = [np.array([self.labels_[i]]) for i in range(self.graph_.n)]
        rows = overlap.extract_cover(self.membership_[active], theta)
        for i, row in zip(active, rows):
            out[i] = np.flatnonzero(row)
        return out

