"""Graph composition, transitive/distance closures and convergence control.

The composition of two graphs aggregates, for every vertex pair ``(i, j)``
and over every intermediary ``k``, the edge accumulation ``g(a_ik, b_kj)``
(``and`` in proximity space) with the path aggregation ``f`` (``or`` in
proximity space).  A closure folds successive left powers
``W^p = W^(p-1) o W`` into an accumulator with the same aggregation used as
the entrywise union, until a fixed point or a cutoff.

The left-fold orientation matters: the diffusion pair is not distributive,
so right-folded powers are different matrices.  Power-of-two composition
``W^(2^eta) = W^(2^(eta-1)) o W^(2^(eta-1))`` is provided separately and
preserves symmetry exactly for symmetric input.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .algebra import (
    ExtendedOperatorPair,
    GeneratorMap,
    OperatorBundle,
    UnitOperatorPair,
    dombi_generator,
    f_harmonic,
    get_bundle,
)
from .errors import DomainError, ValidationError
from .graphs import (DistanceGraph, IsomorphismMap, ProximityGraph, is_symmetric,
                     to_distance, to_proximity)

INF = float("inf")

Graph = Union[ProximityGraph, DistanceGraph]
PairLike = Union[str, OperatorBundle, UnitOperatorPair, ExtendedOperatorPair]

# Cap on float64 temporaries per composition block (~16 MB).
_BLOCK_ELEMS = 1 << 21


@dataclass(frozen=True)
class ClosureReport:
    """Result of a closure computation.

    ``kappa`` is the number of graph powers that contributed information
    (the power at which the union stabilised, or the cutoff power).
    ``distortion`` is the total absolute entrywise change measured in
    proximity space.  ``iterations_log`` records the max entry change per
    accumulated power.
    """

    closed: Graph
    kappa: int
    converged: bool
    distortion: float
    method: str
    iterations_log: tuple | None = None


@dataclass(frozen=True)
class PowerSequence:
    """Successive powers of a distance graph under the diffusion pair."""

    powers: tuple
    scheme: str
    exponents: tuple


# ---------------------------------------------------------------------------
# Pair resolution and space plumbing
# ---------------------------------------------------------------------------

def _space_of(g: Graph) -> str:
    if isinstance(g, ProximityGraph):
        return "proximity"
    if isinstance(g, DistanceGraph):
        return "distance"
    raise DomainError(f"expected a graph, got {type(g).__name__}")


def _resolve(pair: PairLike, space: str):
    """Return (space pair, method name, generator or None)."""
    if isinstance(pair, str):
        pair = get_bundle(pair)
    if isinstance(pair, OperatorBundle):
        p = pair.unit if space == "proximity" else pair.dist
        return p, pair.name, pair.generator
    if space == "proximity" and isinstance(pair, UnitOperatorPair):
        return pair, pair.name, None
    if space == "distance" and isinstance(pair, ExtendedOperatorPair):
        return pair, pair.name, None
    raise DomainError(f"operator pair {pair!r} does not match {space} space")


def _combine_reduce(p, space):
    """Split a space pair into (edge combiner, reduce kind, reduce fn, union fn)."""
    if space == "proximity":
        kind = "max" if p.disjunction_kind == "max" else "generic"
        return p.conjunction, kind, p.disjunction, p.disjunction
    kind = p.f_kind if p.f_kind in ("min", "harmonic") else "generic"
    return p.g, kind, p.f, p.f


def _finite_kind(p, space) -> bool:
    if space == "proximity":
        return p.disjunction_kind == "max"
    return p.f_kind == "min"


# ---------------------------------------------------------------------------
# Array-level composition
# ---------------------------------------------------------------------------

def _compose_arrays(wa, wb, combine, reduce_kind, reduce_fn):
    n = wa.shape[0]
    out = np.empty((n, n), dtype=float)
    block = max(1, _BLOCK_ELEMS // max(n * n, 1))
    for s in range(0, n, block):
        t = combine(wa[s:s + block, :, None], wb[None, :, :])
        if reduce_kind == "min":
            out[s:s + block] = t.min(axis=1)
        elif reduce_kind == "max":
            out[s:s + block] = t.max(axis=1)
        elif reduce_kind == "harmonic":
            with np.errstate(divide="ignore"):
                r = 1.0 / t
                out[s:s + block] = 1.0 / r.sum(axis=1)
        else:
            acc = t[:, 0, :]
            for k in range(1, n):
                acc = reduce_fn(acc, t[:, k, :])
            out[s:s + block] = acc
    return out


def _compose_exact(wa, wb, p, space):
    """Scalar composition for object-dtype matrices (e.g. Fractions).

    Only available for the closed-form operator kinds; used to cross-check
    the float engine against exact arithmetic.
    """
    if space == "proximity":
        raise DomainError("exact composition is only supported in distance space")
    if p.g_kind not in ("add", "max") or p.f_kind not in ("min", "harmonic"):
        raise DomainError("exact composition requires closed-form operator kinds")
    n = wa.shape[0]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            if p.g_kind == "add":
                terms = [wa[i, k] + wb[k, j] for k in range(n)]
            else:
                terms = [max(wa[i, k], wb[k, j]) for k in range(n)]
            if p.f_kind == "min":
                out[i, j] = min(terms)
            else:
                finite = [t for t in terms if t != INF]
                if any(t == 0 for t in finite):
                    out[i, j] = 0
                elif not finite:
                    out[i, j] = INF
                else:
                    out[i, j] = 1 / sum(1 / t for t in finite)
    return out


def compose(a: Graph, b: Graph, pair: PairLike) -> Graph:
    """Compose two graphs of the same space and size under an operator pair.

    In distance space ``c_ij = f_k g(a_ik, b_kj)``; in proximity space
    ``c_ij = or_k and(a_ik, b_kj)``.  Composing a symmetric graph with
    itself yields an exactly symmetric result; mixed compositions are
    marked directed.
    """
    space = _space_of(a)
    if _space_of(b) != space:
        raise DomainError("cannot compose graphs from different spaces")
    if a.n != b.n:
        raise ValidationError(f"dimension mismatch: {a.n} vs {b.n}")
    p, _, _ = _resolve(pair, space)
    if a.weights.dtype.kind == "O" or b.weights.dtype.kind == "O":
        w = _compose_exact(a.weights, b.weights, p, space)
    else:
        combine, kind, red, _ = _combine_reduce(p, space)
        w = _compose_arrays(a.weights, b.weights, combine, kind, red)
    directed = a.directed or b.directed or (a is not b)
    cls = type(a)
    return cls(w, a.labels, directed)


# ---------------------------------------------------------------------------
# Closure engines
# ---------------------------------------------------------------------------

def _max_delta(a, b):
    both_inf = np.isinf(a) & np.isinf(b)
    with np.errstate(invalid="ignore"):
        d = np.where(both_inf, 0.0, np.abs(a - b))
    return float(d.max()) if d.size else 0.0


def _fold_closure(w, combine, kind, red, union, max_iter, epsilon):
    """Accumulate left-fold powers; returns (acc, kappa, converged, log).

    kappa counts the powers that changed the accumulator by at least
    ``epsilon``; a power contributing less ends the iteration.
    """
    acc = w
    power = w
    log = []
    for p in range(2, max_iter + 1):
        power = _compose_arrays(power, w, combine, kind, red)
        new = union(acc, power)
        if np.array_equal(new, acc):
            log.append(0.0)
            return new, p - 1, True, log
        delta = _max_delta(new, acc)
        log.append(delta)
        if delta <= epsilon:
            # sub-tolerance change: stationary under the comparison policy
            return acc, p - 1, True, log
        acc = new
    return acc, max_iter, False, log


def _square_closure(w, combine, kind, red, union, max_iter, epsilon):
    """Iterate ``R' = R union (R o R)``; returns (acc, kappa, converged, log)."""
    r = w
    log = []
    for t in range(1, max_iter + 1):
        rn = union(r, _compose_arrays(r, r, combine, kind, red))
        if np.array_equal(rn, r):
            log.append(0.0)
            return rn, t, True, log
        delta = _max_delta(rn, r)
        log.append(delta)
        r = rn
        if delta <= epsilon:
            return r, t, True, log
    return r, max_iter, False, log


def _defaults(g, p, space, max_iter, epsilon):
    if max_iter is None:
        max_iter = max(10 * g.n, 2)
    if epsilon is None:
        epsilon = 1e-9 if _finite_kind(p, space) else 1e-6
    if g.weights.dtype.kind == "O":
        raise DomainError("closures require float weights; exact arithmetic is "
                          "supported by compose only")
    return max_iter, epsilon


def _prox_distortion(orig_w, closed_w, space, gen: GeneratorMap | None):
    gen = gen or dombi_generator(1.0)
    if space == "proximity":
        return float(np.abs(closed_w - orig_w).sum())
    inv = gen.inverse
    return float(np.abs(inv(closed_w) - inv(orig_w)).sum())


def _report(g, closed_w, kappa, converged, method, log, gen):
    space = _space_of(g)
    cls = type(g)
    # non-min aggregations (diffusion) genuinely break symmetry mid-closure
    directed = g.directed or not is_symmetric(closed_w)
    closed = cls(closed_w, g.labels, directed)
    distortion = _prox_distortion(g.weights, closed_w, space, gen)
    return ClosureReport(closed, kappa, converged, distortion, method,
                         tuple(log) if log is not None else None)


def transitive_closure_alg1(g: Graph, pair: PairLike, max_iter: int | None = None,
                            epsilon: float | None = None) -> ClosureReport:
    """Closure by iterated squaring, ``R' = R union (R o R)``.

    Reaches the exact fixed point within ``n - 1`` iterations when the
    aggregation is max (proximity) or min (distance).  With other pairs the
    iteration stops on the epsilon criterion; exhaustion of ``max_iter`` is
    reported through ``converged=False``, never silently.
    """
    space = _space_of(g)
    p, name, gen = _resolve(pair, space)
    max_iter, epsilon = _defaults(g, p, space, max_iter, epsilon)
    combine, kind, red, union = _combine_reduce(p, space)
    w, kappa, conv, log = _square_closure(g.weights, combine, kind, red, union,
                                          max_iter, epsilon)
    return _report(g, w, kappa, conv, name, log, gen)


def transitive_closure_alg2(g: Graph, pair: PairLike, max_iter: int | None = None,
                            epsilon: float | None = None) -> ClosureReport:
    """Closure by accumulating successive left powers, ``R_p = R o R_(p-1)``.

    ``kappa`` is the largest power that still added information.  For pairs
    that do not form a dioid the loop runs to the epsilon criterion or the
    cutoff, and the cutoff is flagged via ``converged=False``.
    """
    space = _space_of(g)
    p, name, gen = _resolve(pair, space)
    max_iter, epsilon = _defaults(g, p, space, max_iter, epsilon)
    combine, kind, red, union = _combine_reduce(p, space)
    w, kappa, conv, log = _fold_closure(g.weights, combine, kind, red, union,
                                        max_iter, epsilon)
    return _report(g, w, kappa, conv, name, log, gen)


def distance_closure(d: DistanceGraph, pair: PairLike, max_iter: int | None = None,
                     epsilon: float | None = None) -> ClosureReport:
    """Distance closure: entrywise ``f``-union of successive powers.

    For the min-aggregating pairs this reaches the fixed point with
    ``kappa <= n - 1``; the diffusion pair converges only through the
    epsilon criterion.
    """
    if not isinstance(d, DistanceGraph):
        raise DomainError("distance_closure expects a DistanceGraph")
    return transitive_closure_alg2(d, pair, max_iter, epsilon)


# ---------------------------------------------------------------------------
# Named closures
# ---------------------------------------------------------------------------

def _apsp_dijkstra(w):
    """All-pairs shortest paths with per-pair minimal hop counts.

    Runs a lexicographic (distance, hops) Dijkstra from every source.
    Returns the distance matrix and the largest hop count used by any
    optimal path, which equals the power at which the min-plus fold
    stabilises.
    """
    n = w.shape[0]
    adj = [[] for _ in range(n)]
    for i in range(n):
        row = w[i]
        for j in range(n):
            if i != j and np.isfinite(row[j]):
                adj[i].append((j, float(row[j])))
    out = np.full((n, n), INF)
    np.fill_diagonal(out, 0.0)
    kappa = 1
    for s in range(n):
        dist = [INF] * n
        hops = [0] * n
        dist[s] = 0.0
        done = [False] * n
        heap = [(0.0, 0, s)]
        while heap:
            du, hu, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for v, wt in adj[u]:
                nd = du + wt
                nh = hu + 1
                if nd < dist[v] or (nd == dist[v] and nh < hops[v]):
                    dist[v] = nd
                    hops[v] = nh
                    heapq.heappush(heap, (nd, nh, v))
        for v in range(n):
            if v != s:
                out[s, v] = dist[v]
                if np.isfinite(dist[v]):
                    kappa = max(kappa, hops[v])
    return out, kappa


def edge_density(d: DistanceGraph) -> float:
    n = d.n
    if n < 2:
        return 0.0
    finite = int(np.isfinite(d.weights).sum()) - n
    return finite / (n * (n - 1))


def metric_closure(d: DistanceGraph, backend: str = "auto",
                   max_iter: int | None = None) -> ClosureReport:
    """All-pairs shortest paths: the closure under ``<min, +>``.

    ``backend`` is one of ``auto`` (Dijkstra for edge density below 10%,
    min-plus matrix powering otherwise), ``dijkstra`` or ``minplus``.  Both
    backends compute the same matrix and are kept available for
    cross-checking.
    """
    if not isinstance(d, DistanceGraph):
        raise DomainError("metric_closure expects a DistanceGraph")
    if backend == "auto":
        backend = "dijkstra" if edge_density(d) < 0.10 else "minplus"
    if backend == "minplus":
        rep = distance_closure(d, "metric", max_iter=max_iter)
        return ClosureReport(rep.closed, rep.kappa, rep.converged, rep.distortion,
                             "metric", rep.iterations_log)
    if backend != "dijkstra":
        raise DomainError(f"unknown metric backend {backend!r}")
    w, kappa = _apsp_dijkstra(d.weights)
    return _report(d, w, kappa, True, "metric", None, dombi_generator(1.0))


def ultrametric_closure(d: DistanceGraph, max_iter: int | None = None) -> ClosureReport:
    """Closure under ``<min, max>``: path length is the largest edge on the path.

    The output satisfies the strong inequality
    ``d_ij <= max(d_ik, d_kj)`` for every ``k``.
    """
    if not isinstance(d, DistanceGraph):
        raise DomainError("ultrametric_closure expects a DistanceGraph")
    rep = distance_closure(d, "ultrametric", max_iter=max_iter)
    return ClosureReport(rep.closed, rep.kappa, rep.converged, rep.distortion,
                         "ultrametric", rep.iterations_log)


def generalized_metric_closure(p: ProximityGraph, lam: float, backend: str = "auto",
                               method_name: str | None = None) -> ClosureReport:
    """Proximity-space closure swept through the Dombi generator.

    Transforms entries by the generator with parameter ``lam``, runs the
    canonical ``<min, +>`` closure, and maps back.  The result equals the
    direct ``<max, dombi_tnorm(lam)>`` transitive closure of the input.
    """
    if not isinstance(p, ProximityGraph):
        raise DomainError("generalized_metric_closure expects a ProximityGraph")
    bundle = get_bundle(f"dombi:{float(lam):g}")
    iso = IsomorphismMap(bundle.generator)
    rep = metric_closure(to_distance(p, iso), backend=backend)
    closed = to_proximity(rep.closed, iso)
    distortion = float(np.abs(closed.weights - p.weights).sum())
    return ClosureReport(closed, rep.kappa, rep.converged, distortion,
                         method_name or bundle.name, rep.iterations_log)


def diffusion_power(d: DistanceGraph, n: int, scheme: str = "left-fold") -> PowerSequence:
    """Successive powers of a distance graph under the diffusion pair.

    ``left-fold`` computes ``D^p = D^(p-1) o D`` for ``p = 1..n``; any
    power beyond 2 may break symmetry.  ``power-of-two`` squares the running
    matrix, computing ``D^(2^eta)`` for ``eta = 0..n``, and stays exactly
    symmetric for symmetric input.
    """
    if not isinstance(d, DistanceGraph):
        raise DomainError("diffusion_power expects a DistanceGraph")
    if n < 1:
        raise DomainError("n must be at least 1")
    pair = get_bundle("diffusion").dist
    combine, kind, red, _ = _combine_reduce(pair, "distance")
    w = d.weights
    if scheme == "left-fold":
        mats = [w]
        for _ in range(2, n + 1):
            mats.append(_compose_arrays(mats[-1], w, combine, kind, red))
        powers = tuple(
            DistanceGraph(m, d.labels, d.directed or p >= 3)
            for p, m in enumerate(mats, start=1)
        )
        return PowerSequence(powers, scheme, tuple(range(1, n + 1)))
    if scheme == "power-of-two":
        mats = [w]
        for _ in range(n):
            mats.append(_compose_arrays(mats[-1], mats[-1], combine, kind, red))
        powers = tuple(DistanceGraph(m, d.labels, d.directed) for m in mats)
        return PowerSequence(powers, scheme, tuple(2 ** e for e in range(n + 1)))
    raise DomainError(f"unknown power scheme {scheme!r}")
