"""Input checks shared by the estimator and the CLI."""

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import InvalidInputError, ParameterError
from .graph import Graph

__all__ = ["check_graph", "check_theta"]


def check_graph(X):
    """Coerce ``X`` to a :class:`Graph`.

    Accepts a ``Graph`` (returned as is), a scipy sparse matrix, or a dense
    array-like, which must be a square, symmetric, non-negative adjacency.
    """
    if isinstance(X, Graph):
        return X
    A = check_array(X, accept_sparse="csr", dtype=np.float64, ensure_min_samples=1)
    if A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"adjacency must be square, got shape {A.shape}")
    return Graph(A)


def check_theta(theta):
    if not isinstance(theta, (int, float, np.floating)) or not (0 < theta <= 1):
        raise ParameterError(f"theta must lie in (0, 1], got {theta!r}")
    return float(theta)
