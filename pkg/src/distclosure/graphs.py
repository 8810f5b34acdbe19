"""Proximity and distance graph data model and the map between the two spaces.

A proximity graph stores association strengths in ``[0, 1]`` with a unit
diagonal; a distance graph stores values in ``[0, +inf]`` with a zero
diagonal, where an absent edge is exactly ``+inf``.  Both are immutable
dense-matrix values; every operation returns a new graph.  Vertex labels are
carried through all transformations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import GeneratorMap, dombi_generator
from .errors import ValidationError

INF = float("inf")


def _default_labels(n):
    return tuple(str(i) for i in range(n))


def _check_square(w):
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValidationError(f"weight matrix must be square, got shape {w.shape}")


def is_symmetric(w, tol=1e-9) -> bool:
    """Symmetry check treating +inf pairs as equal."""
    if w.dtype.kind == "O":
        return bool(np.all(w == w.T))
    both_inf = np.isinf(w) & np.isinf(w.T)
    with np.errstate(invalid="ignore"):
        diff = np.where(both_inf, 0.0, np.abs(w - w.T))
    return bool(np.all(diff <= tol))


def _prepare(weights):
    w = np.asarray(weights)
    if w.dtype.kind != "O":
        w = np.array(w, dtype=float, copy=True)
    else:
        w = np.array(w, copy=True)
    _check_square(w)
    w.setflags(write=False)
    return w


@dataclass(frozen=True)
class ProximityGraph:
    """Square matrix of association strengths ``p_ij`` in ``[0, 1]``, ``p_ii = 1``."""

    weights: np.ndarray
    labels: tuple = ()
    directed: bool = False

    def __post_init__(self):
        w = _prepare(self.weights)
        object.__setattr__(self, "weights", w)
        n = w.shape[0]
        labels = tuple(str(x) for x in self.labels) or _default_labels(n)
        if len(labels) != n:
            raise ValidationError(f"expected {n} labels, got {len(labels)}")
        object.__setattr__(self, "labels", labels)
        if w.dtype.kind == "O":
            if any(w[i, i] != 1 for i in range(n)):
                raise ValidationError("proximity diagonal must be 1")
        else:
            if np.any(np.isnan(w)):
                raise ValidationError("proximity weights contain NaN")
            if not np.all(np.diag(w) == 1.0):
                i = int(np.argmin(np.diag(w) == 1.0))
                raise ValidationError(f"proximity diagonal must be 1 (vertex {labels[i]})")
            if np.any(w < 0.0) or np.any(w > 1.0):
                bad = np.argwhere((w < 0.0) | (w > 1.0))[0]
                raise ValidationError(
                    f"proximity weight out of [0, 1] at ({labels[bad[0]]}, {labels[bad[1]]})"
                )
        if not self.directed and not is_symmetric(w):
            raise ValidationError("undirected proximity graph must be symmetric")
        if self.directed and not is_symmetric(w):
            warnings.warn("asymmetric proximity graph; closures assume symmetric input",
                          stacklevel=3)

    @property
    def n(self):
        return self.weights.shape[0]

    def index(self, label) -> int:
        return self.labels.index(str(label))


@dataclass(frozen=True)
class DistanceGraph:
    """Square matrix of distances ``d_ij`` in ``[0, +inf]``, ``d_ii = 0``.

    A missing edge is exactly ``+inf``.
    """

    weights: np.ndarray
    labels: tuple = ()
    directed: bool = False

    def __post_init__(self):
        w = _prepare(self.weights)
        object.__setattr__(self, "weights", w)
        n = w.shape[0]
        labels = tuple(str(x) for x in self.labels) or _default_labels(n)
        if len(labels) != n:
            raise ValidationError(f"expected {n} labels, got {len(labels)}")
        object.__setattr__(self, "labels", labels)
        if w.dtype.kind == "O":
            if any(w[i, i] != 0 for i in range(n)):
                raise ValidationError("distance diagonal must be 0")
            if any(w[i, j] < 0 for i in range(n) for j in range(n)):
                raise ValidationError("distance weights must be nonnegative")
        else:
            if np.any(np.isnan(w)):
                raise ValidationError("distance weights contain NaN")
            if not np.all(np.diag(w) == 0.0):
                i = int(np.argmin(np.diag(w) == 0.0))
                raise ValidationError(f"distance diagonal must be 0 (vertex {labels[i]})")
            if np.any(w < 0.0):
                bad = np.argwhere(w < 0.0)[0]
                raise ValidationError(
                    f"negative distance at ({labels[bad[0]]}, {labels[bad[1]]})"
                )
        if not self.directed and not is_symmetric(w):
            raise ValidationError("undirected distance graph must be symmetric")

    @property
    def n(self):
        return self.weights.shape[0]

    def index(self, label) -> int:
        return self.labels.index(str(label))


@dataclass(frozen=True)
class IsomorphismMap:
    """Entrywise application of a generator, mapping between the two spaces."""

    generator: GeneratorMap = field(default_factory=dombi_generator)


CANONICAL_ISO = IsomorphismMap(dombi_generator(1.0))


def to_distance(p: ProximityGraph, iso: IsomorphismMap = CANONICAL_ISO) -> DistanceGraph:
    """Map a proximity graph to its distance graph, ``d_ij = phi(p_ij)``.

    ``p = 1`` maps to ``d = 0`` and ``p = 0`` to ``d = +inf`` exactly;
    symmetry is preserved and reflexivity becomes anti-reflexivity.
    """
    return DistanceGraph(iso.generator.forward(p.weights), p.labels, p.directed)


def to_proximity(d: DistanceGraph, iso: IsomorphismMap = CANONICAL_ISO) -> ProximityGraph:
    """Map a distance graph back to proximity space, ``p_ij = phi_inv(d_ij)``."""
    return ProximityGraph(iso.generator.inverse(d.weights), d.labels, d.directed)


def from_correlation(series, labels=None, method="pearson",
                     absolute=False) -> ProximityGraph:
    """Build a proximity graph from per-vertex time series.

    ``series`` has one column per vertex and one row per observation.
    Pairwise Pearson correlations become proximity weights; negative
    correlations are clamped to 0 (no association) unless ``absolute=True``,
    in which case their magnitude is used.
    """
    if method != "pearson":
        raise ValidationError(f"unsupported correlation method {method!r}")
    x = np.asarray(series, dtype=float)
    if x.ndim != 2:
        raise ValidationError("series must be a 2-D array (observations x vertices)")
    t, n = x.shape
    if t < 2:
        raise ValidationError("need at least 2 observations per series")
    if np.any(np.isnan(x)):
        raise ValidationError("series contain NaN")
    sd = x.std(axis=0)
    if np.any(sd == 0.0):
        i = int(np.argmin(sd > 0.0))
        name = labels[i] if labels else str(i)
        raise ValidationError(f"series {name} is constant; correlation undefined")
    c = np.corrcoef(x, rowvar=False)
    if absolute:
        c = np.abs(c)
    w = np.clip(c, 0.0, 1.0)
    np.fill_diagonal(w, 1.0)
    return ProximityGraph(w, tuple(labels) if labels else (), directed=False)
