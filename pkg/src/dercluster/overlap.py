"""Overlapping communities from a converged DER state."""

from __future__ import annotations

import numpy as np

from .exceptions import EmptyClusterError, ParameterError

__all__ = ["membership", "extract_cover", "cover_from_state"]


def membership(state):
    """Posterior probability of each cluster given the walk ended at a vertex.

    ``m[r, s] = mu_s(i) * pi(P_s) / pi(i)`` for the vertex ``i`` of active
    row ``r``. Rows sum to one because ``pi`` is the ``pi(P_s)``-mixture of
    the cluster measures.

    Returns
    -------
    ndarray of shape (n_active, k)
    """
    if np.any(state.cluster_mass <= 0):
        raise EmptyClusterError("membership needs every cluster to be nonempty")
    active = state.diffusion.active
    d = state.diffusion.degrees
    d_V = state.cluster_mass.sum()
    weighted = (state.measures[:, active].toarray().T) * (state.cluster_mass / d_V)
    return weighted / (d / d_V)[:, None]


def extract_cover(profile, theta=0.5):
    """Boolean ``(n_active, k)`` matrix: row ``r`` joins cluster ``t`` iff
    ``m[r, t] >= theta * max_s m[r, s]``.
    """
    if not (0 < theta <= 1):
        raise ParameterError(f"theta must lie in (0, 1], got {theta!r}")
    profile = np.asarray(profile, dtype=np.float64)
    top = profile.max(axis=1, keepdims=True)
    return profile >= theta * top


def cover_from_state(state, theta=0.5):
    """Community index lists per active row."""
    cover = extract_cover(membership(state), theta)
    return [np.flatnonzero(row) for row in cover]
