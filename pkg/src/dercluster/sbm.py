"""Planted-partition graphs and the one-iteration recovery experiment.

Also hosts the length-two path statistics that explain why a single
means/assign pass from a random bisection already separates two dense
blocks: at ``L = 1`` comparing scores of ``w_i`` against the two initial
cluster measures is, to first order, comparing the number of 2-paths from
``i`` into each half.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ._utils import check_positive_int, derive_seed, parallel_map, resolve_seed
from .der import (
    Partition,
    assign_step,
    init_state,
    iterate,
    means_step,
    random_equal_partition,
)
from .diffusion import walk_measures
from .exceptions import InvalidInputError, ParameterError
from .graph import Graph
from .metrics import misclassified, nmi

__all__ = [
    "SbmSpec",
    "RecoveryReport",
    "sample_sbm",
    "count_two_paths",
    "expected_two_paths",
    "exact_expected_two_paths",
    "recovery_experiment",
    "sign_diagnostic",
]


@dataclass(frozen=True)
class SbmSpec:
    """``k`` equal blocks of ``N/k`` vertices; edges inside a block appear
    with probability ``p``, across blocks with ``q``, all independently.
    """

    N: int
    p: float
    q: float
    k: int = 2
    seed: int = 0

    def __post_init__(self):
        check_positive_int("N", self.N)
        check_positive_int("k", self.k)
        if self.N % self.k:
            raise ParameterError(f"N={self.N} is not divisible by k={self.k}")
        if not (0 <= self.q <= self.p <= 1):
            raise ParameterError(f"need 0 <= q <= p <= 1, got p={self.p}, q={self.q}")


def sample_sbm(spec):
    """Draw a graph and its planted labels. No self-loops; one draw per pair."""
    N, k = spec.N, spec.k
    rng = np.random.default_rng(resolve_seed(spec.seed))
    planted = np.repeat(np.arange(k), N // k)
    iu, ju = np.triu_indices(N, k=1)
    prob = np.where(planted[iu] == planted[ju], spec.p, spec.q)
    keep = rng.random(iu.size) < prob
    r, c = iu[keep], ju[keep]
    A = sp.coo_matrix(
        (np.ones(2 * r.size), (np.concatenate([r, c]), np.concatenate([c, r]))), shape=(N, N)
    )
    return Graph(A.tocsr()), Partition(planted, k)


def count_two_paths(g, i, S):
    """Number of walks ``i -> j -> v`` with ``v`` in ``S`` (backtracking included)."""
    if not g.is_unweighted():
        raise InvalidInputError("2-path counts are defined for unweighted graphs only")
    ind = np.zeros(g.n)
    ind[np.asarray(list(S), dtype=np.int64)] = 1.0
    hits = g.adjacency @ ind
    nbrs, _ = g.neighbors(i)
    return int(round(hits[nbrs].sum()))


def expected_two_paths(N, N1, N2, p, q, side, target):
    """Mean 2-path count from a vertex of planted block ``side`` into initial half ``target``.

    ``N1 = |C1 & P1| = |C2 & P2|`` and ``N2 = |C1 & P2| = |C2 & P1|``; each
    of the four path types (first step inside/outside the own block, landing
    in either part of the target half) contributes ``N/2 * size * prob``.
    """
    if side not in (1, 2) or target not in (1, 2):
        raise ParameterError("side and target must be 1 or 2")
    # size of target & own block, target & other block
    same, other = (N1, N2) if side == target else (N2, N1)
    return 0.5 * N * (same * p * p + 2 * p * q * other + same * q * q)


def exact_expected_two_paths(planted, j, S, p, q):
    """Finite-size mean of ``count_two_paths(g, j, S)`` over SBM draws.

    Unlike :func:`expected_two_paths` this keeps the terms the leading-order
    formula drops: the first step cannot stay at ``j``, the second cannot
    stay at the middle vertex, and the walk may return to ``j`` itself.
    """
    planted = np.asarray(getattr(planted, "labels", planted))
    N = planted.size
    P = np.where(planted[:, None] == planted[None, :], p, q).astype(float)
    np.fill_diagonal(P, 0.0)
    in_S = np.zeros(N)
    in_S[np.asarray(list(S), dtype=np.int64)] = 1.0
    # sum over v in S, v not in {u, j}, of P[u, v]
    onward = P @ in_S - in_S[j] * P[:, j]
    per_u = P[j] * (in_S[j] + onward)
    return float(per_u.sum())


@dataclass
class RecoveryReport:
    trials: int
    successes: int
    nmi: list = field(default_factory=list)
    iterations: list = field(default_factory=list)
    converged_success: list = field(default_factory=list)
    changed_after_first: list = field(default_factory=list)
    wall_time: list = field(default_factory=list)
    records: list = field(default_factory=list)

    @property
    def success_rate(self):
        return self.successes / self.trials if self.trials else 0.0

    @property
    def mean_nmi(self):
        return float(np.mean(self.nmi)) if self.nmi else 0.0

    @property
    def mean_wall_time(self):
        return float(np.mean(self.wall_time)) if self.wall_time else 0.0

    def summary(self):
        return {
            "summary": True,
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "mean_nmi": self.mean_nmi,
            "converged_success_rate": float(np.mean(self.converged_success))
            if self.converged_success else 0.0,
            "mean_iterations": float(np.mean(self.iterations)) if self.iterations else 0.0,
            "mean_wall_time": self.mean_wall_time,
        }


def _trial(spec, L, trial_seed, max_iters):
    t0 = time.perf_counter()
    g, planted = sample_sbm(SbmSpec(spec.N, spec.p, spec.q, spec.k, derive_seed(trial_seed, 0)))
    ds = walk_measures(g, L)
    truth = planted.labels[ds.active]
    init = random_equal_partition(len(ds.active), spec.k, derive_seed(trial_seed, 1))
    state = init_state(g, ds, init)
    first = assign_step(state)
    one_nmi = nmi(first, truth)
    success = misclassified(first, truth) == 0
    state.partition = first
    means_step(state)
    state.n_iter = 1
    iterate(state, max_iters)
    final = state.partition
    return {
        "seed": trial_seed,
        "success": bool(success),
        "nmi": one_nmi,
        "converged_nmi": nmi(final, truth),
        "converged_success": misclassified(final, truth) == 0,
        "changed_after_first": bool(final != first),
        "iterations": state.n_iter,
        "wall_time": time.perf_counter() - t0,
    }


def recovery_experiment(spec, L=1, trials=20, seed=0, max_iters=100, n_jobs=1):
    """Fresh graph and fresh random bisection per trial; success means one
    means+assign pass reproduces the planted blocks exactly.
    """
    trials = check_positive_int("trials", trials)
    seed = resolve_seed(seed)
    recs = parallel_map(
        lambda t: _trial(spec, L, derive_seed(seed, t), max_iters), range(trials), n_jobs
    )
    report = RecoveryReport(trials=trials, successes=sum(r["success"] for r in recs))
    for t, r in enumerate(recs):
        report.nmi.append(r["nmi"])
        report.iterations.append(r["iterations"])
        report.converged_success.append(r["converged_success"])
        report.changed_after_first.append(r["changed_after_first"])
        report.wall_time.append(r["wall_time"])
        report.records.append({"trial": t, **r})
    return report


def sign_diagnostic(g, planted, init):
    """Agreement between exact score comparison and its 2-path linearisation.

    For each vertex ``i`` with ``L = 1``,

        d_i * (score(w_i, mu_C1) - score(w_i, mu_C2))
            = sum_{j ~ i} log(d(j,C1) / d(j,C2)) + d_i log(d_C2 / d_C1),

    and linearising the logarithm around a common scale ``lam`` (half the
    mean degree) gives ``(d2(i,C1) - d2(i,C2)) / lam + d_i log(d_C2 / d_C1)``.

    Returns
    -------
    dict
        ``agreement``: fraction of active vertices where both signs agree;
        ``exact_matches_planted``: fraction whose exact preference points to
        the initial half holding the majority of its planted block.
    """
    if not g.is_unweighted():
        raise InvalidInputError("sign diagnostic needs an unweighted graph")
    planted = np.asarray(getattr(planted, "labels", planted))
    init = np.asarray(getattr(init, "labels", init))
    A = g.adjacency
    d = g.degrees
    active = np.flatnonzero(d > 0)
    c1 = (init == 0).astype(float)
    c2 = (init == 1).astype(float)
    dC1, dC2 = d @ c1, d @ c2
    to1, to2 = A @ c1, A @ c2
    with np.errstate(divide="ignore"):
        logratio = np.log(to1) - np.log(to2)
        exact = np.zeros(g.n)
        for i in active:
            nbrs, _ = g.neighbors(i)
            lr = logratio[nbrs]
            if np.any(np.isposinf(lr)) and np.any(np.isneginf(lr)):
                exact[i] = np.nan
            else:
                exact[i] = lr.sum() + d[i] * (np.log(dC2) - np.log(dC1))
    lam = d[active].mean() / 2.0
    linear = (A @ (to1 - to2)) / lam + d * (np.log(dC2) - np.log(dC1))
    ok = active[~np.isnan(exact[active])]
    agree = np.sign(exact[ok]) == np.sign(linear[ok])
    # which initial half each planted block leans towards
    lean = {}
    for b in np.unique(planted):
        mask = planted == b
        lean[b] = 1.0 if (init[mask] == 0).sum() >= (init[mask] == 1).sum() else -1.0
    want = np.array([lean[b] for b in planted[ok]])
    return {
        "agreement": float(agree.mean()) if ok.size else float("nan"),
        "exact_matches_planted": float(np.mean(np.sign(exact[ok]) == want)) if ok.size else float("nan"),
        "vertices": int(ok.size),
    }


def report_lines(report):
    """JSON-lines: one record per trial, then a summary record."""
    for rec in report.records:
        yield json.dumps(rec, sort_keys=True)
    yield json.dumps(report.summary(), sort_keys=True)

