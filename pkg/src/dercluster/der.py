"""The DER k-means loop over walk measures.

Vertices are points ``w_i`` with multiplicity ``d_i``; cluster centres are
the measures ``mu_s`` and a vertex joins the centre with the largest score.
Each full iteration never decreases the cost

    C = sum_s sum_{i in P_s} d_i * score(w_i, mu_s),

so the loop stops once the partition is a fixed point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._utils import check_positive_int, derive_seed, parallel_map, resolve_seed
from .diffusion import cluster_measures, score_matrix, walk_measures
from .exceptions import EmptyClusterError, ParameterError

log = logging.getLogger(__name__)

__all__ = [
    "Partition",
    "DerState",
    "random_equal_partition",
    "init_state",
    "means_step",
    "assign_step",
    "cost",
    "entropy_decomposition",
    "run",
]


@dataclass(frozen=True)
class Partition:
    """Hard assignment of ``len(labels)`` items to clusters ``0..k-1``."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise ParameterError(f"labels must lie in [0, {self.k})")
        object.__setattr__(self, "labels", labels)

    @cached_property
    def members(self):
        order = np.argsort(self.labels, kind="stable")
        bounds = np.searchsorted(self.labels[order], np.arange(self.k + 1))
        return [order[bounds[s] : bounds[s + 1]] for s in range(self.k)]

    @property
    def sizes(self):
        return np.bincount(self.labels, minlength=self.k)

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        return (
            isinstance(other, Partition)
            and self.k == other.k
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None


@dataclass
class DerState:
    """Working state of one DER run.

    ``labels`` index the active vertices of ``diffusion`` (row order), and
    ``measures`` is a ``(k, n)`` CSR matrix of cluster measures.
    """

    graph: object
    diffusion: object
    partition: Partition
    measures: object = None
    cluster_mass: np.ndarray = None
    scores: np.ndarray = None
    n_iter: int = 0
    converged: bool = False
    cost_trace: list = field(default_factory=list)
    seed: int = None

    @property
    def k(self):
        return self.partition.k

    @property
    def labels(self):
        return self.partition.labels

    @property
    def cost(self):
        return cost(self)

    def full_labels(self):
        """Labels for all ``n`` vertices; isolated ones get ``k, k+1, ...``."""
        n = self.graph.n
        out = np.empty(n, dtype=np.int64)
        mask = np.ones(n, dtype=bool)
        mask[self.diffusion.active] = False
        out[self.diffusion.active] = self.labels
        out[mask] = self.k + np.arange(mask.sum())
        return out


def random_equal_partition(n_active, k, seed):
    """Uniformly random partition into ``k`` blocks whose sizes differ by at most one."""
    k = check_positive_int("k", k)
    n_active = check_positive_int("n_active", n_active, minimum=0)
    if k > n_active:
        raise ParameterError(f"k={k} exceeds the number of active vertices ({n_active})")
    rng = np.random.default_rng(resolve_seed(seed))
    labels = np.empty(n_active, dtype=np.int64)
    labels[rng.permutation(n_active)] = np.arange(n_active) % k
    return Partition(labels, k)


def init_state(g, diffusion, partition, seed=None):
    state = DerState(graph=g, diffusion=diffusion, partition=partition, seed=seed)
    means_step(state)
    return state


def means_step(state):
    """Rebuild every cluster measure from the current partition."""
    M, mass = cluster_measures(state.diffusion, state.labels, state.k)
    if np.any(mass <= 0):
        empty = np.flatnonzero(mass <= 0).tolist()
        raise EmptyClusterError(f"clusters {empty} are empty")
    state.measures = M
    state.cluster_mass = mass
    state.scores = score_matrix(state.diffusion.W, M)
    return M


def _repair_empty(labels, own_scores, k):
    """Give each empty cluster the worst-fitting vertex of a cluster that can spare one."""
    labels = labels.copy()
    sizes = np.bincount(labels, minlength=k)
    for s in np.flatnonzero(sizes == 0):
        candidates = sizes[labels] > 1
        vals = np.where(candidates, own_scores, np.inf)
        i = int(np.argmin(vals))
        sizes[labels[i]] -= 1
        labels[i] = s
        sizes[s] = 1
        log.debug("reseeded empty cluster %d with vertex row %d", s, i)
    return labels


def assign_step(state):
    """Move every vertex to its best-scoring cluster.

    Ties go to the lowest cluster index. A vertex scoring ``-inf`` against
    every cluster keeps its current label. Clusters left empty are reseeded
    so that ``k`` stays fixed.
    """
    S = state.scores
    if S is None:
        S = state.scores = score_matrix(state.diffusion.W, state.measures)
    best = np.argmax(S, axis=1)
    hopeless = np.all(np.isneginf(S), axis=1)
    labels = np.where(hopeless, state.labels, best)
    if np.any(np.bincount(labels, minlength=state.k) == 0):
        own = S[np.arange(len(labels)), labels]
        labels = _repair_empty(labels, own, state.k)
    return Partition(labels, state.k)


def cost(state):
    """``sum_i d_i * score(w_i, mu_{label(i)})`` for the current measures."""
    S = state.scores
    if S is None:
        S = score_matrix(state.diffusion.W, state.measures)
    own = S[np.arange(len(state.labels)), state.labels]
    return float(np.dot(state.diffusion.degrees, own))


def _entropy(p):
    p = p[p > 0]
    return float(-np.dot(p, np.log(p)))


def entropy_decomposition(state):
    """Entropies (nats) of ``X ~ pi``, ``Z`` = cluster of ``X``, ``Y ~ w_X``.

    Returns ``(H(Y|Z), H(Y), H(Z), H(Z|Y))``. The joint law of ``(Z, Y)`` is
    ``pi(P_s) * mu_s(j)``.
    """
    M = state.measures.tocoo()
    d_V = state.cluster_mass.sum()
    pz = state.cluster_mass / d_V
    joint = pz[M.row] * M.data
    h_y_given_z = float(-np.dot(joint, np.log(M.data)))
    py = np.bincount(M.col, weights=joint, minlength=M.shape[1])
    h_y = _entropy(py)
    h_z = _entropy(pz)
    h_z_given_y = float(-np.dot(joint, np.log(joint / py[M.col])))
    return h_y_given_z, h_y, h_z, h_z_given_y


def iterate(state, max_iters=100):
    """Alternate assign/means steps until the partition is stable."""
    if not state.cost_trace:
        state.cost_trace.append(cost(state))
    while state.n_iter < max_iters:
        new = assign_step(state)
        if new == state.partition:
            state.converged = True
            break
        state.partition = new
        means_step(state)
        state.n_iter += 1
        state.cost_trace.append(cost(state))
    return state


def _single(g, diffusion, k, seed, max_iters):
    partition = random_equal_partition(len(diffusion.active), k, seed)
    state = init_state(g, diffusion, partition, seed=seed)
    iterate(state, max_iters)
    log.info(
        "restart seed=%d: %d iterations, cost=%.6f, converged=%s",
        seed, state.n_iter, state.cost_trace[-1], state.converged,
    )
    return state


def run(g, k, L=5, seed=0, max_iters=100, restarts=1, diffusion=None, n_jobs=1):
    """Run DER ``restarts`` times and keep the state with the largest final cost.

    Returns
    -------
    best : DerState
    states : list of DerState
        All restarts, in restart order.
    """
    k = check_positive_int("k", k)
    L = check_positive_int("L", L)
    max_iters = check_positive_int("max_iters", max_iters)
    restarts = check_positive_int("restarts", restarts)
    seed = resolve_seed(seed)
    if diffusion is None:
        diffusion = walk_measures(g, L)
    if k > len(diffusion.active):
        raise ParameterError(
            f"k={k} exceeds the number of active vertices ({len(diffusion.active)})"
        )
    seeds = [derive_seed(seed, r) for r in range(restarts)]
    states = parallel_map(lambda s: _single(g, diffusion, k, s, max_iters), seeds, n_jobs)
    finals = [st.cost_trace[-1] for st in states]
    best = states[int(np.argmax(finals))]
    return best, states
