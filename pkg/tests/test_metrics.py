import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dercluster.exceptions import InvalidInputError
from dercluster.metrics import contingency, misclassified, mutual_information, nmi, partition_entropy


def brute_misclassified(P, Q):
    """Best injective label matching by enumeration."""
    a_labels, b_labels = sorted(set(P)), sorted(set(Q))
    swap = len(a_labels) > len(b_labels)
    if swap:
        P, Q, a_labels, b_labels = Q, P, b_labels, a_labels
    best = 0
    for image in itertools.permutations(b_labels, len(a_labels)):
        match = dict(zip(a_labels, image))
        best = max(best, sum(match[p] == q for p, q in zip(P, Q)))
    return len(P) - best


def direct_nmi(P, Q, log=math.log):
    n = len(P)
    cp = {a: P.count(a) / n for a in set(P)}
    cq = {b: Q.count(b) / n for b in set(Q)}
    joint = {}
    for a, b in zip(P, Q):
        joint[a, b] = joint.get((a, b), 0) + 1 / n
    h = lambda d: -sum(v * log(v) for v in d.values())
    mi = sum(v * log(v / (cp[a] * cq[b])) for (a, b), v in joint.items())
    return 2 * mi / (h(cp) + h(cq)) if h(cp) + h(cq) else 1.0


def test_identity_and_relabel():
    P = [0, 0, 1, 1, 2, 2, 2]
    assert nmi(P, P) == 1.0
    assert nmi([0, 0, 1, 1], ["b", "b", "a", "a"]) == 1.0


def test_independent_halves():
    P, Q = [0, 0, 1, 1], [0, 1, 0, 1]
    assert contingency(P, Q).tolist() == [[1, 1], [1, 1]]
    assert mutual_information(P, Q) == pytest.approx(0.0, abs=1e-15)
    assert nmi(P, Q) == pytest.approx(0.0, abs=1e-15)
    assert direct_nmi(P, Q) == pytest.approx(0.0, abs=1e-15)


def test_trivial_partitions():
    assert nmi([0, 0, 0], [5, 5, 5]) == 1.0
    assert nmi([0, 0, 0], [0, 1, 2]) == 0.0


def test_entropy():
    assert partition_entropy([0, 0, 1, 1]) == pytest.approx(math.log(2))
    assert partition_entropy([0, 0, 1, 1], base=2) == pytest.approx(1.0)


def test_mismatch():
    with pytest.raises(InvalidInputError):
        nmi([0, 1], [0, 1, 1])
    with pytest.raises(InvalidInputError):
        nmi([], [])


def test_misclassified_examples():
    assert misclassified([0, 0, 1, 1], [0, 0, 1, 1]) == 0
    assert misclassified([0, 0, 1, 1], [0, 0, 1, 0]) == 1
    # unmatched cluster counts fully
    assert misclassified([0, 0, 1, 1, 2], [0, 0, 1, 1, 1]) == 1


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 10), st.integers(1, 4), st.integers(1, 4))
def test_against_oracles(seed, n, kp, kq):
    rng = np.random.default_rng(seed)
    P = rng.integers(0, kp, n).tolist()
    Q = rng.integers(0, kq, n).tolist()
    v = nmi(P, Q)
    assert 0.0 <= v <= 1.0
    assert v == nmi(Q, P)
    assert v == pytest.approx(direct_nmi(P, Q), abs=1e-12)
    assert v == pytest.approx(nmi(P, Q, base=2), abs=1e-12)
    assert v == pytest.approx(direct_nmi(P, Q, log=math.log10), abs=1e-12)
    assert misclassified(P, Q) == brute_misclassified(P, Q)
    if len(set(P)) == len(set(Q)):
        assert misclassified(P, Q) == misclassified(Q, P)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 12), st.integers(1, 5))
def test_nmi_one_iff_same_partition(seed, n, k):
    rng = np.random.default_rng(seed)
    P = rng.integers(0, k, n)
    perm = rng.permutation(k) + 10
    assert nmi(P, perm[P]) == 1.0
    Q = P.copy()
    i = int(rng.integers(n))
    Q[i] = k + 1  # split i off into a new cluster
    if np.sum(P == P[i]) > 1:
        assert nmi(P, Q) < 1.0


def test_misclassified_k3_n8_brute_force():
    rng = np.random.default_rng(8)
    for _ in range(50):
        P = rng.integers(0, 3, 8).tolist()
        Q = rng.integers(0, 3, 8).tolist()
        best = min(
            sum(perm[p] != q for p, q in zip(P, Q)) for perm in itertools.permutations(range(3))
        ) if len(set(P)) == 3 and len(set(Q)) == 3 else brute_misclassified(P, Q)
        assert misclassified(P, Q) == best
