"""Derived network measures built on top of the closure engine.

Covers semi-metric edge extraction, closure distortion, asymmetry of
diffusion powers, the community hierarchy traced along an n-diffusion, a
deterministic directed-modularity detector, and the coefficient-of-
variability machinery used to pick the generator parameter lambda.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .algebra import dombi_generator
from .closure import diffusion_power, metric_closure
from .errors import DomainError, NoRootError, NumericError, ValidationError
from .graphs import DistanceGraph, ProximityGraph

INF = float("inf")


# ---------------------------------------------------------------------------
# Semi-metric behaviour
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemiMetricEdge:
    source: str
    target: str
    distance: float
    closed_distance: float
    ratio: float


@dataclass(frozen=True)
class SemiMetricReport:
    """Edges whose direct distance exceeds their shortest indirect path.

    ``edges`` is sorted by decreasing ratio ``d_ij / d^mc_ij``; every listed
    edge violates the triangle route strictly.  ``indirect_only`` lists
    vertex pairs with no direct edge but a finite indirect distance (latent
    associations).  ``fraction`` is relative to the finite original edges.
    """

    edges: tuple
    count: int
    fraction: float
    indirect_only: tuple


def semimetric_edges(d: DistanceGraph, backend: str = "auto") -> SemiMetricReport:
    if not isinstance(d, DistanceGraph):
        raise DomainError("semimetric_edges expects a DistanceGraph")
    mc = metric_closure(d, backend=backend).closed.weights
    w = d.weights
    n = d.n
    if d.directed:
        index_pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        index_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = []
    indirect = []
    finite_edges = 0
    for i, j in index_pairs:
        dij = float(w[i, j])
        mij = float(mc[i, j])
        if np.isfinite(dij):
            finite_edges += 1
            if dij > mij:
                ratio = dij / mij if mij > 0.0 else INF
                edges.append(SemiMetricEdge(d.labels[i], d.labels[j], dij, mij, ratio))
        elif np.isfinite(mij):
            indirect.append((d.labels[i], d.labels[j], mij))
    edges.sort(key=lambda e: (-e.ratio, e.source, e.target))
    fraction = len(edges) / finite_edges if finite_edges else 0.0
    return SemiMetricReport(tuple(edges), len(edges), fraction, tuple(indirect))


# ---------------------------------------------------------------------------
# Distortion and asymmetry
# ---------------------------------------------------------------------------

def distortion(original: ProximityGraph, closed: ProximityGraph) -> float:
    """Total absolute entrywise change a closure imposed, in proximity space."""
    if original.weights.shape != closed.weights.shape:
        raise ValidationError(
            f"dimension mismatch: {original.weights.shape} vs {closed.weights.shape}"
        )
    return float(np.abs(closed.weights - original.weights).sum())


def asymmetry(d: DistanceGraph) -> float:
    """Sum over the upper triangle of ``|d_ij - d_ji|``.

    Pairs that are infinite in both directions contribute zero.
    """
    if not isinstance(d, DistanceGraph):
        raise DomainError("asymmetry expects a DistanceGraph")
    w = d.weights
    both_inf = np.isinf(w) & np.isinf(w.T)
    with np.errstate(invalid="ignore"):
        diff = np.where(both_inf, 0.0, np.abs(w - w.T))
    iu = np.triu_indices(d.n, k=1)
    return float(diff[iu].sum())


# ---------------------------------------------------------------------------
# Deterministic directed-modularity detector
# ---------------------------------------------------------------------------

_GAIN_TOL = 1e-12


def _louvain_level(w):
    """One local-move phase of greedy directed-modularity optimisation.

    Vertices are scanned in index order; a vertex moves to the community
    with the largest positive modularity gain, ties broken by the lowest
    community index.  Self-loops travel with their vertex and are excluded
    from the link terms.
    """
    n = w.shape[0]
    m = float(w.sum())
    comm = np.arange(n)
    if m <= 0.0:
        return comm, False
    sout = w.sum(axis=1)
    sin = w.sum(axis=0)
    agg_out = sout.copy()
    agg_in = sin.copy()
    improved = False
    moved = True
    while moved:
        moved = False
        for i in range(n):
            ci = comm[i]
            agg_out[ci] -= sout[i]
            agg_in[ci] -= sin[i]
            wi_out = np.bincount(comm, weights=w[i], minlength=n)
            wi_in = np.bincount(comm, weights=w[:, i], minlength=n)
            wi_out[ci] -= w[i, i]
            wi_in[ci] -= w[i, i]
            gain = (wi_out + wi_in) / m - (sout[i] * agg_in + sin[i] * agg_out) / (m * m)
            best = int(np.argmax(gain))
            if best != ci and gain[best] > gain[ci] + _GAIN_TOL:
                comm[i] = best
                moved = True
                improved = True
            agg_out[comm[i]] += sout[i]
            agg_in[comm[i]] += sin[i]
    return comm, improved


def directed_modularity(w, partition) -> float:
    """Directed modularity of a partition over a nonnegative weight matrix."""
    w = np.asarray(w, dtype=float)
    m = float(w.sum())
    if m <= 0.0:
        return 0.0
    part = np.asarray(partition)
    sout = w.sum(axis=1)
    sin = w.sum(axis=0)
    same = part[:, None] == part[None, :]
    return float((w[same].sum() - (np.outer(sout, sin)[same]).sum() / m) / m)


def cluster_directed(g, tol: float = _GAIN_TOL) -> list:
    """Deterministic greedy directed-modularity partition (Louvain style).

    Accepts a proximity graph or a nonnegative weight matrix; the matrix
    diagonal is kept as self-loop weight.  Returns one community id per
    vertex, numbered by first appearance.  Identical input bytes always
    produce the identical partition.
    """
    if isinstance(g, ProximityGraph):
        w = np.array(g.weights, dtype=float)
    else:
        w = np.array(g, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValidationError("weight matrix must be square")
    if np.any(w < 0.0) or np.any(~np.isfinite(w)):
        raise ValidationError("community detection requires finite nonnegative weights")
    n = w.shape[0]
    mapping = np.arange(n)
    level_w = w
    while True:
        comm, improved = _louvain_level(level_w)
        uniq, compressed = np.unique(comm, return_inverse=True)
        mapping = compressed[mapping]
        k = len(uniq)
        if not improved or k == level_w.shape[0]:
            break
        agg = np.zeros((k, k))
        np.add.at(agg, (compressed[:, None], compressed[None, :]), level_w)
        level_w = agg
    renumber = {}
    out = []
    for c in mapping:
        if c not in renumber:
            renumber[c] = len(renumber)
        out.append(renumber[c])
    return out


# ---------------------------------------------------------------------------
# n-diffusion trace
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiffusionTrace:
    """Asymmetry and community structure along successive diffusion powers.

    Index ``k`` of each sequence corresponds to the power ``n = k + 1``.
    ``dissolve_n`` is the first power whose partition is all singletons,
    or None if that never happens within the trace.
    """

    asymmetry: tuple
    community_counts: tuple
    partitions: tuple
    dissolve_n: int | None


def modularity_weights(d: DistanceGraph, on_distance: bool = False) -> np.ndarray:
    """Weights handed to the community detector for a diffusion power.

    By default distances are mapped to proximity weights through the
    canonical generator (so the unit diagonal acts as a self-loop); with
    ``on_distance=True`` finite distances are inverted as ``1/d`` instead,
    for comparison runs.
    """
    w = d.weights
    if not on_distance:
        return dombi_generator(1.0).inverse(w)
    with np.errstate(divide="ignore"):
        out = np.where(np.isfinite(w) & (w > 0.0), 1.0 / w, 0.0)
    np.fill_diagonal(out, 0.0)
    return out


def diffusion_trace(d: DistanceGraph, n_max: int,
                    on_distance: bool = False) -> DiffusionTrace:
    """Asymmetry, community count and partition for each power ``D^1..D^n_max``."""
    seq = diffusion_power(d, n_max, scheme="left-fold")
    asyms = []
    counts = []
    parts = []
    dissolve = None
    for k, g in enumerate(seq.powers, start=1):
        asyms.append(asymmetry(g))
        partition = cluster_directed(modularity_weights(g, on_distance))
        counts.append(len(set(partition)))
        parts.append(dict(zip(g.labels, partition)))
        if dissolve is None and counts[-1] == d.n:
            dissolve = k
    return DiffusionTrace(tuple(asyms), tuple(counts), tuple(parts), dissolve)


# ---------------------------------------------------------------------------
# Coefficient-of-variability study (generator parameter selection)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaStudy:
    mu: float
    cv_d: float
    cv_p_target: float
    lambda_opt: float
    cv_p_opt: float


def _quad_checked(fn, lo, hi):
    val, err = integrate.quad(fn, lo, hi, epsabs=1e-12, epsrel=1e-10, limit=200)
    if err > 1e-8:
        raise NumericError(f"quadrature error {err:.2e} exceeds tolerance")
    return val


def cv_proximity(mu: float, cv_d: float, lam: float) -> float:
    """Coefficient of variability of path strength induced in proximity space.

    Models the shortest-path distribution in distance space as a normal
    density with mean ``mu`` and deviation ``mu * cv_d``, pushes it through
    ``j(x) = 1 / (x**(1/lam) + 1)`` and returns ``sqrt(<Y^2> - <Y>^2) / <Y>``.
    The density is truncated to ``[max(0, mu - 8 sigma), mu + 8 sigma]`` and
    renormalised there.
    """
    if not (mu > 0.0 and cv_d > 0.0 and lam > 0.0):
        raise DomainError("mu, cv_d and lambda must be positive")
    sigma = mu * cv_d
    lo = max(0.0, mu - 8.0 * sigma)
    hi = mu + 8.0 * sigma
    norm = 1.0 / np.sqrt(2.0 * np.pi * sigma * sigma)

    def density(x):
        return norm * np.exp(-((x - mu) ** 2) / (2.0 * sigma * sigma))

    def j(x):
        return 1.0 / (x ** (1.0 / lam) + 1.0)

    z = _quad_checked(density, lo, hi)
    y1 = _quad_checked(lambda x: j(x) * density(x), lo, hi) / z
    y2 = _quad_checked(lambda x: j(x) ** 2 * density(x), lo, hi) / z
    var = max(y2 - y1 * y1, 0.0)
    return float(np.sqrt(var) / y1)


def find_lambda(mu: float, cv_d: float, cv_p_target: float,
                bracket=(0.05, 50.0), tol: float = 1e-4,
                max_steps: int = 200) -> float:
    """Bisect for the lambda matching a target proximity-space variability.

    Returns lambda with ``|cv_proximity(mu, cv_d, lambda) - cv_p_target| < tol``.
    Raises :class:`NoRootError` when the bracket does not straddle the target.
    """
    if cv_p_target <= 0.0:
        raise DomainError("cv_p_target must be positive")
    lo, hi = bracket
    f_lo = cv_proximity(mu, cv_d, lo) - cv_p_target
    f_hi = cv_proximity(mu, cv_d, hi) - cv_p_target
    if abs(f_lo) < tol:
        return float(lo)
    if abs(f_hi) < tol:
        return float(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoRootError(
            f"no root in bracket [{lo}, {hi}]: f(lo)={f_lo:.4g}, f(hi)={f_hi:.4g}"
        )
    for _ in range(max_steps):
        mid = 0.5 * (lo + hi)
        f_mid = cv_proximity(mu, cv_d, mid) - cv_p_target
        if abs(f_mid) < tol:
            return float(mid)
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise NoRootError("bisection did not reach the requested tolerance")


def lambda_study(mu: float, cv_d: float, cv_p_target: float) -> LambdaStudy:
    lam = find_lambda(mu, cv_d, cv_p_target)
    return LambdaStudy(mu, cv_d, cv_p_target, lam, cv_proximity(mu, cv_d, lam))
