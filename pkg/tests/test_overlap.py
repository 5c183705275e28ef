import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dercluster.der import Partition, init_state, run
from dercluster.diffusion import walk_measures
from dercluster.exceptions import ParameterError
from dercluster.graph import from_edge_list
from dercluster.overlap import cover_from_state, extract_cover, membership

from conftest import random_graph


def test_single_cluster_membership(rng):
    g = random_graph(rng, 20, 0.3)
    ds = walk_measures(g, 2)
    state = init_state(g, ds, Partition(np.zeros(len(ds.active), dtype=int), 1))
    np.testing.assert_allclose(membership(state), 1.0, atol=1e-12)


def test_disjoint_triangles(two_triangles):
    ds = walk_measures(two_triangles, 1)
    state = init_state(two_triangles, ds, Partition([0, 0, 0, 1, 1, 1], 2))
    m = membership(state)
    np.testing.assert_allclose(m, np.repeat(np.eye(2), 3, axis=0), atol=1e-15)


@pytest.mark.parametrize(
    "row, expected",
    [
        ([1.0, 0.0], [True, False]),
        ([0.5, 0.3, 0.2], [True, True, False]),
        ([0.5, 0.5], [True, True]),
    ],
)
def test_extract_cover_examples(row, expected):
    assert extract_cover(np.array([row])).tolist() == [expected]


@pytest.mark.parametrize("theta", [0, -0.1, 1.5])
def test_theta_validated(theta):
    with pytest.raises(ParameterError):
        extract_cover(np.ones((1, 2)), theta)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(2, 5))
def test_rows_sum_to_one_and_cover_properties(seed, L, k):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, 40, 0.12, weighted=bool(seed % 2), isolated=int(seed % 2))
    if len(np.flatnonzero(g.degrees)) < k:
        return
    best, _ = run(g, k, L=L, seed=seed)
    m = membership(best)
    np.testing.assert_allclose(m.sum(axis=1), 1.0, atol=1e-10)
    assert np.all(m >= 0) and np.all(m <= 1 + 1e-12)
    covers = {theta: extract_cover(m, theta) for theta in (0.25, 0.5, 0.75, 1.0)}
    top = np.argmax(m, axis=1)
    for theta, cov in covers.items():
        assert np.all(cov.sum(axis=1) >= 1)
        assert np.all(cov[np.arange(len(top)), top])
    # a stricter factor never adds memberships
    thetas = sorted(covers)
    for lo, hi in zip(thetas, thetas[1:]):
        assert np.all(covers[hi] <= covers[lo])


def test_membership_argmax_vs_der_labels(rng):
    # the most likely source cluster is not the score argmax in general; on
    # well separated blocks the two agree
    lines = [f"{i} {j}" for b in (0, 6, 12) for i in range(b, b + 6) for j in range(i + 1, b + 6)]
    lines += ["0 6", "6 12"]
    g = from_edge_list("\n".join(lines))
    best, _ = run(g, 3, L=2, seed=1, restarts=3)
    assert np.array_equal(np.argmax(membership(best), axis=1), best.labels)


def test_theta_one_is_hard_partition(rng):
    g = random_graph(rng, 60, 0.1)
    best, _ = run(g, 3, L=2, seed=3)
    lists = cover_from_state(best, theta=1.0)
    m = membership(best)
    for r, comms in enumerate(lists):
        assert comms.tolist() == np.flatnonzero(m[r] == m[r].max()).tolist()


def test_barbell_cover():
    lines = [f"a{i} a{j}" for i in range(5) for j in range(i + 1, 5)]
    lines += [f"b{i} b{j}" for i in range(5) for j in range(i + 1, 5)]
    lines.append("a0 b0")
    g = from_edge_list("\n".join(lines))
    best, _ = run(g, 2, L=2, seed=0, restarts=3)
    comms = cover_from_state(best)
    assert all(len(c) >= 1 for c in comms)
    labels = best.labels
    a_side = [g.index[f"a{i}"] for i in range(5)]
    assert len(set(labels[a_side])) == 1
    interior = [g.index[f"a{i}"] for i in range(1, 5)] + [g.index[f"b{i}"] for i in range(1, 5)]
    assert all(len(comms[i]) == 1 for i in interior)
