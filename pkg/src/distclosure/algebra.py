"""Binary operator pairs behind weighted-graph closures.

This module defines the disjunction/conjunction pairs on the unit interval
(T-conorms and T-norms), their counterparts on the extended half-line
``[0, +inf]`` used to compose distance graphs, the parametric Dombi family
with its generator, and the axiomatic checks (duality under a complement,
total deviation from the De Morgan laws).

Every operator is a plain callable that accepts floats or numpy arrays and
broadcasts elementwise.  Endpoint values (0 and 1 on the unit interval, 0 and
+inf on the half-line) are handled by explicit identity/annihilator branches
because the closed-form Dombi expressions are singular there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError

INF = float("inf")

# Absolute comparison tolerance used by sampled axiom checks.
TOL = 1e-9


def _as_float_pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.broadcast_arrays(a, b)


def _ret(x):
    """Collapse 0-d arrays back to Python floats."""
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _check_unit(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")


def _check_lambda(lam):
    lam = float(lam)
    if not lam > 0.0 or math.isinf(lam):
        raise DomainError("lambda must be a positive finite real")
    return lam


# ---------------------------------------------------------------------------
# Dombi family on the unit interval
# ---------------------------------------------------------------------------

def _ratio_small_big(small, big):
    """``small / big`` guarded against 0/0 and inf/inf (both map to 1)."""
    return np.where(small == big, 1.0, small / np.where(big > 0.0, big, 1.0))


def _lambda_norm(u, v, lam):
    """``(u**lam + v**lam)**(1/lam)`` factored for stability at extremes."""
    big = np.maximum(u, v)
    small = np.minimum(u, v)
    ratio = _ratio_small_big(small, big)
    return big * (1.0 + ratio ** lam) ** (1.0 / lam)


def _lambda_conorm(u, v, lam):
    """``(u**-lam + v**-lam)**(-1/lam)`` factored for stability at extremes."""
    big = np.maximum(u, v)
    small = np.minimum(u, v)
    ratio = _ratio_small_big(small, big)
    return small * (1.0 + ratio ** lam) ** (-1.0 / lam)


def dombi_tnorm(a, b, lam=1.0):
    """Dombi conjunction with parameter ``lam``.

    For interior arguments this is
    ``1 / (1 + ((1/a - 1)**lam + (1/b - 1)**lam)**(1/lam))``; for ``lam = 1``
    it reduces to ``a*b / (a + b - a*b)``.  Arguments equal to 0 or 1 follow
    the T-norm boundary axioms exactly (0 annihilates, 1 is the identity).
    """
    lam = _check_lambda(lam)
    _check_unit(a, "a")
    _check_unit(b, "b")
    a, b = _as_float_pair(a, b)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        s = _lambda_norm(1.0 / a - 1.0, 1.0 / b - 1.0, lam)
        out = 1.0 / (1.0 + s)
    out = np.where(a == 1.0, b, out)
    out = np.where(b == 1.0, np.where(a == 1.0, 1.0, a), out)
    out = np.where((a == 0.0) | (b == 0.0), 0.0, out)
    return _ret(out)


def dombi_tconorm(a, b, lam=1.0):
    """Dombi disjunction with parameter ``lam``.

    For ``lam = 1`` it reduces to ``(a + b - 2ab) / (1 - ab)``; as
    ``lam -> inf`` it approaches ``max(a, b)``.  Endpoints follow the
    T-conorm boundary axioms exactly (1 annihilates, 0 is the identity).
    """
    lam = _check_lambda(lam)
    _check_unit(a, "a")
    _check_unit(b, "b")
    a, b = _as_float_pair(a, b)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        w = _lambda_conorm(1.0 / a - 1.0, 1.0 / b - 1.0, lam)
        out = 1.0 / (1.0 + w)
    out = np.where(a == 0.0, b, out)
    out = np.where(b == 0.0, np.where(a == 0.0, 0.0, a), out)
    out = np.where((a == 1.0) | (b == 1.0), 1.0, out)
    return _ret(out)


def maximum(a, b):
    return _ret(np.maximum(np.asarray(a, float), np.asarray(b, float)))


def minimum(a, b):
    return _ret(np.minimum(np.asarray(a, float), np.asarray(b, float)))


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorMap:
    """Strictly decreasing bijection ``[0,1] -> [0,+inf]`` and its inverse.

    ``forward(1) == 0`` and ``forward(0) == +inf`` hold exactly; applying
    ``inverse`` after ``forward`` recovers the input to within 1e-9.
    """

    forward: Callable
    inverse: Callable
    descriptor: str


def _dombi_phi(x, lam):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        out = ((1.0 - x) / x) ** lam
    return _ret(out)


def _dombi_phi_inv(y, lam):
    y = np.asarray(y, dtype=float)
    with np.errstate(over="ignore"):
        out = 1.0 / (y ** (1.0 / lam) + 1.0)
    return _ret(out)


def dombi_generator(lam=1.0) -> GeneratorMap:
    """Generator ``phi(x) = ((1 - x)/x)**lam`` of the Dombi conjunction.

    For ``lam = 1`` this is the classic proximity-to-distance map
    ``phi(x) = 1/x - 1``.
    """
    lam = _check_lambda(lam)
    return GeneratorMap(
        forward=partial(_dombi_phi, lam=lam),
        inverse=partial(_dombi_phi_inv, lam=lam),
        descriptor=f"dombi:{lam:g}",
    )


# ---------------------------------------------------------------------------
# Operator pair containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitOperatorPair:
    """Disjunction/conjunction pair on ``[0, 1]``.

    ``disjunction_kind`` is "max" when the disjunction is the plain maximum,
    which both guarantees finite closure convergence in at most ``n - 1``
    powers and enables an exact vectorised aggregation; any other disjunction
    is reduced by an ordered fold.
    """

    name: str
    disjunction: Callable
    conjunction: Callable
    is_dioid: bool
    disjunction_kind: str = "generic"


@dataclass(frozen=True)
class ExtendedOperatorPair:
    """TD-conorm/TD-norm pair ``<f, g>`` on ``[0, +inf]``.

    ``f`` aggregates path alternatives, ``g`` accumulates edges along a
    path.  Boundary conditions: ``f(a, inf) == a`` and ``g(a, 0) == a``.
    ``f_kind`` selects the aggregation strategy: "min", "harmonic"
    (reciprocal-sum, where a zero-length term forces the result to 0 and
    infinite terms drop out) or "generic" (ordered fold of ``f``).
    """

    name: str
    f: Callable
    g: Callable
    f_kind: str = "generic"
    g_kind: str = "generic"


@dataclass(frozen=True)
class OperatorBundle:
    """A registered closure method: matched unit pair, distance pair and generator."""

    name: str
    unit: UnitOperatorPair
    dist: ExtendedOperatorPair
    generator: GeneratorMap


# Closed-form distance-space operators.

def f_min(x, y):
    return _ret(np.minimum(np.asarray(x, float), np.asarray(y, float)))


def g_add(x, y):
    with np.errstate(over="ignore"):
        return _ret(np.add(np.asarray(x, float), np.asarray(y, float)))


def g_max(x, y):
    return _ret(np.maximum(np.asarray(x, float), np.asarray(y, float)))


def f_harmonic(x, y):
    """Two-path diffusion aggregation ``1 / (1/x + 1/y)``.

    Infinite arguments are identities (the path does not exist); a zero
    argument forces the result to zero.
    """
    x, y = _as_float_pair(x, y)
    with np.errstate(divide="ignore"):
        out = 1.0 / (1.0 / x + 1.0 / y)
    out = np.where(np.isinf(x), y, out)
    out = np.where(np.isinf(y), np.where(np.isinf(x), INF, x), out)
    return _ret(out)


def derive_distance_pair(pair: UnitOperatorPair, gen: GeneratorMap,
                         name: str | None = None) -> ExtendedOperatorPair:
    """Conjugate a unit pair through a generator to obtain ``<f, g>``.

    ``g(x, y) = phi(phi_inv(x) and phi_inv(y))`` and
    ``f(x, y) = phi(phi_inv(x) or phi_inv(y))``.  The construction is total;
    overflow saturates to +inf.
    """
    fwd, inv = gen.forward, gen.inverse

    def f(x, y):
        return fwd(pair.disjunction(inv(x), inv(y)))

    def g(x, y):
        return fwd(pair.conjunction(inv(x), inv(y)))

    return ExtendedOperatorPair(
        name=name or f"{pair.name}/{gen.descriptor}", f=f, g=g,
        f_kind="generic", g_kind="generic",
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def _dombi_unit_pair(lam: float, name: str) -> UnitOperatorPair:
    return UnitOperatorPair(
        name=name,
        disjunction=maximum,
        conjunction=partial(dombi_tnorm, lam=lam),
        is_dioid=True,
        disjunction_kind="max",
    )


_MINPLUS = ExtendedOperatorPair("minplus", f=f_min, g=g_add, f_kind="min", g_kind="add")
_MINMAX = ExtendedOperatorPair("minmax", f=f_min, g=g_max, f_kind="min", g_kind="max")
_DIFFUSION = ExtendedOperatorPair("diffusion", f=f_harmonic, g=g_add,
                                  f_kind="harmonic", g_kind="add")


def get_bundle(name: str) -> OperatorBundle:
    """Resolve a serialized operator name.

    Accepted names: ``metric``, ``ultrametric``, ``diffusion`` and
    ``dombi:<lambda>`` with a positive decimal parameter, e.g. ``dombi:1.5``.
    """
    key = name.strip().lower()
    if key == "metric":
        return OperatorBundle("metric", _dombi_unit_pair(1.0, "max/dombi1"),
                              _MINPLUS, dombi_generator(1.0))
    if key == "ultrametric":
        unit = UnitOperatorPair("maxmin", maximum, minimum,
                                is_dioid=True, disjunction_kind="max")
        return OperatorBundle("ultrametric", unit, _MINMAX, dombi_generator(1.0))
    if key == "diffusion":
        unit = UnitOperatorPair(
            "dombi1/dombi1",
            disjunction=partial(dombi_tconorm, lam=1.0),
            conjunction=partial(dombi_tnorm, lam=1.0),
            is_dioid=False,
        )
        return OperatorBundle("diffusion", unit, _DIFFUSION, dombi_generator(1.0))
    if key.startswith("dombi:"):
        try:
            lam = float(key.split(":", 1)[1])
        except ValueError:
            raise DomainError(f"bad operator name {name!r}") from None
        lam = _check_lambda(lam)
        return OperatorBundle(f"dombi:{lam:g}",
                              _dombi_unit_pair(lam, f"max/dombi{lam:g}"),
                              _MINPLUS, dombi_generator(lam))
    raise DomainError(
        f"unknown operator name {name!r}; expected metric, ultrametric, "
        "diffusion or dombi:<lambda>"
    )


def bundle_from_generator(name: str, unit: UnitOperatorPair,
                          gen: GeneratorMap) -> OperatorBundle:
    """Build a custom bundle whose distance pair is derived from ``gen``.

    Restricting custom pairs to generator-based constructions keeps the
    proximity/distance isomorphism guarantees intact.
    """
    return OperatorBundle(name, unit, derive_distance_pair(unit, gen), gen)


# ---------------------------------------------------------------------------
# Axiomatic checks
# ---------------------------------------------------------------------------

def demorgan_residual(x, y, lam):
    """Pointwise De Morgan defect of ``<dombi_tconorm(lam), dombi_tnorm(1)>``.

    With the standard complement ``c(t) = 1 - t`` the law
    ``c(x and y) == c(x) or c(y)`` reduces, after clearing denominators, to
    ``x + y - 2xy - xy * ((1/x-1)**lam + (1/y-1)**lam)**(1/lam) == 0``.
    The returned value is that left-hand side, evaluated in a form that is
    stable for large ``lam``.
    """
    x, y = _as_float_pair(x, y)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        s = _lambda_norm(1.0 / x - 1.0, 1.0 / y - 1.0, lam)
        out = x + y - 2.0 * x * y - x * y * s
    return _ret(out)


def demorgan_deviation(lam, grid=None, tol=1e-6):
    """Total De Morgan deviation of the pair ``<dombi_tconorm(lam), dombi_tnorm(1)>``.

    Integrates :func:`demorgan_residual` over the open unit square and
    returns the magnitude of the integral.  The deviation is exactly zero at
    ``lam = 1`` (the unique dual pair in the family), approaches 1/12 as
    ``lam -> inf`` (the max disjunction), and grows without bound as
    ``lam -> 0`` (the drastic disjunction).

    ``grid=None`` uses adaptive quadrature; an integer ``grid >= 64`` selects
    a reproducible midpoint rule with that many points per axis.
    """
    lam = _check_lambda(lam)
    if grid is not None:
        grid = int(grid)
        if grid < 64:
            raise DomainError("fixed-grid resolution must be at least 64 points per axis")
        pts = (np.arange(grid) + 0.5) / grid
        gx, gy = np.meshgrid(pts, pts, indexing="ij")
        return abs(float(np.mean(demorgan_residual(gx, gy, lam))))
    val, err = integrate.dblquad(
        lambda y, x: demorgan_residual(x, y, lam),
        0.0, 1.0, 0.0, 1.0, epsabs=min(tol, 1e-8) * 1e-1, epsrel=1e-9,
    )
    return abs(float(val))


@dataclass(frozen=True)
class DualityReport:
    holds: bool
    max_error: float
    witness: tuple | None


def check_duality(pair: UnitOperatorPair, complement: Callable = lambda x: 1.0 - x,
                  samples: int = 33) -> DualityReport:
    """Check both De Morgan laws on a deterministic grid.

    The complement must be involutive on the sampled points.  Returns whether
    the laws hold to within 1e-9, the largest observed defect and, when they
    fail, an (a, b, error) witness.
    """
    xs = np.linspace(0.0, 1.0, samples)
    if np.max(np.abs(complement(complement(xs)) - xs)) > TOL:
        raise DomainError("complement is not involutive on the sample grid")
    a, b = np.meshgrid(xs, xs, indexing="ij")
    ca, cb = complement(a), complement(b)
    err1 = np.abs(complement(pair.conjunction(a, b)) - pair.disjunction(ca, cb))
    err2 = np.abs(complement(pair.disjunction(a, b)) - pair.conjunction(ca, cb))
    err = np.maximum(err1, err2)
    worst = float(np.max(err))
    if worst <= TOL:
        return DualityReport(True, worst, None)
    i, j = np.unravel_index(int(np.argmax(err)), err.shape)
    return DualityReport(False, worst, (float(xs[i]), float(xs[j]), worst))
