import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from distclosure import DistanceGraph, ProximityGraph

INF = float("inf")


def random_proximity(rng, n, low=0.0, density=1.0):
    """Random symmetric proximity graph, off-diagonal weights uniform(low, 1)."""
    w = np.ones((n, n))
    iu = np.triu_indices(n, k=1)
    vals = rng.uniform(low, 1.0, len(iu[0]))
    if density < 1.0:
        vals[rng.uniform(size=len(vals)) >= density] = 0.0
    w[iu] = vals
    w.T[iu] = vals
    return ProximityGraph(w)


def random_distance(rng, n, density=0.5, low=0.1, high=10.0, connected=False):
    """Random symmetric distance graph; absent edges are +inf."""
    w = np.full((n, n), INF)
    np.fill_diagonal(w, 0.0)
    iu = np.triu_indices(n, k=1)
    vals = rng.uniform(low, high, len(iu[0]))
    keep = rng.uniform(size=len(vals)) < density
    for (i, j), v, k in zip(zip(*iu), vals, keep):
        if k:
            w[i, j] = w[j, i] = v
    if connected:
        order = rng.permutation(n)
        for a, b in zip(order, order[1:]):
            if not np.isfinite(w[a, b]):
                v = rng.uniform(low, high)
                w[a, b] = w[b, a] = v
    return DistanceGraph(w)


def random_crisp_connected(rng, n, extra=0.3):
    """Random connected {0,1} proximity graph."""
    w = np.eye(n)
    order = rng.permutation(n)
    for a, b in zip(order, order[1:]):
        w[a, b] = w[b, a] = 1.0
    iu = np.triu_indices(n, k=1)
    add = rng.uniform(size=len(iu[0])) < extra
    for (i, j), k in zip(zip(*iu), add):
        if k:
            w[i, j] = w[j, i] = 1.0
    return ProximityGraph(w)


@pytest.fixture
def rng():
    return np.random.default_rng(1729)
