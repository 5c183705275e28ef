from pathlib import Path

import numpy as np
import pytest
import scipy.sparse as sp

from dercluster.graph import Graph, from_edge_list

DATA = Path(__file__).resolve().parents[1] / "src" / "dercluster" / "data"


def random_graph(rng, n, density, weighted=False, isolated=0):
    """Symmetric random graph; the last ``isolated`` vertices have no edges."""
    m = n - isolated
    upper = np.triu(rng.random((m, m)) < density, k=1)
    W = upper * (rng.uniform(0.5, 3.0, (m, m)) if weighted else 1.0)
    A = np.zeros((n, n))
    A[:m, :m] = W + W.T
    return Graph(sp.csr_matrix(A))


def dense_walk_measures(g, L):
    """Oracle: rows of (1/L) sum_t T^t via dense matrix powers."""
    A = g.adjacency.toarray()
    d = A.sum(axis=1)
    T = np.divide(A, d[:, None], out=np.zeros_like(A), where=d[:, None] > 0)
    acc = np.zeros_like(T)
    P = np.eye(len(T))
    for _ in range(L):
        P = P @ T
        acc += P
    return acc / L


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def triangle():
    return from_edge_list("0 1\n1 2\n2 0")


@pytest.fixture
def path3():
    return from_edge_list("a b\nb c")


@pytest.fixture
def two_triangles():
    return from_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3")


@pytest.fixture
def two_cliques():
    lines = [f"{i} {j}" for i in range(5) for j in range(i + 1, 5)]
    lines += [f"{i} {j}" for i in range(5, 10) for j in range(i + 1, 10)]
    return from_edge_list("\n".join(lines))


@pytest.fixture
def karate():
    g = from_edge_list((DATA / "karate.edges").read_text())
    truth = {}
    for line in (DATA / "karate.truth").read_text().splitlines():
        v, c = line.split()
        truth[v] = int(c)
    return g, np.array([truth[v] for v in g.ids])


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance(request):
    """Record one verdict line per criterion; shown in the terminal summary."""

    def record(number, ok, detail, verdict=None):
        verdict = verdict or ("PASS" if ok else "FAIL")
        line = f"criterion {number}: {verdict} {detail}"
        request.config.acceptance_lines.append(line)
        print(line)
        return ok

    return record
