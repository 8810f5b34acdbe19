import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distclosure import (
    DistanceGraph,
    IsomorphismMap,
    ProximityGraph,
    ValidationError,
    dombi_generator,
    from_correlation,
    to_distance,
    to_proximity,
)

from conftest import random_proximity
from oracles import pearson_reference

INF = float("inf")


class TestValidation:
    def test_proximity_diagonal_enforced(self):
        w = np.array([[0.9, 0.5], [0.5, 1.0]])
        with pytest.raises(ValidationError):
            ProximityGraph(w)

    def test_proximity_range_enforced(self):
        w = np.array([[1.0, 1.5], [1.5, 1.0]])
        with pytest.raises(ValidationError):
            ProximityGraph(w)

    def test_distance_diagonal_enforced(self):
        w = np.array([[0.5, 1.0], [1.0, 0.0]])
        with pytest.raises(ValidationError):
            DistanceGraph(w)

    def test_negative_distance_rejected(self):
        w = np.array([[0.0, -1.0], [-1.0, 0.0]])
        with pytest.raises(ValidationError):
            DistanceGraph(w)

    def test_undirected_symmetry_enforced(self):
        w = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(ValidationError):
            DistanceGraph(w)
        DistanceGraph(w, directed=True)

    def test_asymmetric_proximity_warns_when_directed(self):
        w = np.array([[1.0, 0.2], [0.8, 1.0]])
        with pytest.warns(UserWarning):
            ProximityGraph(w, directed=True)

    def test_weights_immutable(self):
        g = DistanceGraph(np.zeros((2, 2)) + np.diag([0.0, 0.0]))
        with pytest.raises(ValueError):
            g.weights[0, 1] = 3.0

    def test_labels(self):
        g = DistanceGraph(np.array([[0.0, 1.0], [1.0, 0.0]]), labels=("a", "b"))
        assert g.index("b") == 1
        with pytest.raises(ValidationError):
            DistanceGraph(np.zeros((2, 2)), labels=("a",))


class TestConversions:
    def test_boundary_values_exact(self):
        p = ProximityGraph(np.array([[1.0, 0.0], [0.0, 1.0]]))
        d = to_distance(p)
        assert d.weights[0, 1] == INF and d.weights[0, 0] == 0.0
        back = to_proximity(d)
        assert back.weights[0, 1] == 0.0 and back.weights[0, 0] == 1.0

    def test_half_maps_to_one(self):
        p = ProximityGraph(np.array([[1.0, 0.5], [0.5, 1.0]]))
        assert to_distance(p).weights[0, 1] == pytest.approx(1.0, abs=1e-15)

    def test_dombi2_generator_value(self):
        # ((1 - 0.2) / 0.2)^2 = 16
        p = ProximityGraph(np.array([[1.0, 0.2], [0.2, 1.0]]))
        iso = IsomorphismMap(dombi_generator(2.0))
        assert to_distance(p, iso).weights[0, 1] == pytest.approx(16.0, rel=1e-12)

    def test_distance_round_trip(self, rng):
        w = rng.uniform(0.01, 10.0, (5, 5))
        w = (w + w.T) / 2.0
        np.fill_diagonal(w, 0.0)
        d = DistanceGraph(w)
        for lam in [0.5, 1.0, 2.0]:
            iso = IsomorphismMap(dombi_generator(lam))
            back = to_distance(to_proximity(d, iso), iso)
            assert np.max(np.abs(back.weights - w)) < 1e-9

    def test_symmetry_and_antireflexivity_preserved(self, rng):
        p = random_proximity(rng, 7)
        d = to_distance(p)
        assert np.array_equal(d.weights, d.weights.T)
        assert np.all(np.diag(d.weights) == 0.0)
        assert d.labels == p.labels

    def test_order_reversal(self, rng):
        gen = dombi_generator(1.0)
        xs = np.sort(rng.uniform(0.01, 0.99, 20))
        ys = gen.forward(xs)
        assert np.all(np.diff(ys) < 0)

    @given(st.floats(min_value=0.001, max_value=0.999))
    @settings(max_examples=50)
    def test_pointwise_round_trip(self, p):
        gen = dombi_generator(1.0)
        assert gen.inverse(gen.forward(p)) == pytest.approx(p, abs=1e-9)


class TestFromCorrelation:
    def test_identical_series(self):
        t = np.linspace(0, 1, 30)
        series = np.stack([np.sin(t), np.sin(t)], axis=1)
        g = from_correlation(series)
        assert g.weights[0, 1] == 1.0

    def test_negated_series_clamped(self):
        t = np.linspace(0, 1, 30)
        series = np.stack([np.sin(t), -np.sin(t)], axis=1)
        g = from_correlation(series)
        assert g.weights[0, 1] == 0.0
        g_abs = from_correlation(series, absolute=True)
        assert g_abs.weights[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_against_reference_formula(self, rng):
        series = rng.normal(size=(40, 3)).cumsum(axis=0)
        ref = np.clip(pearson_reference(series), 0.0, 1.0)
        np.fill_diagonal(ref, 1.0)
        g = from_correlation(series, labels=("x", "y", "z"))
        assert np.max(np.abs(g.weights - ref)) < 1e-12
        assert g.labels == ("x", "y", "z")

    def test_constant_series_rejected(self):
        series = np.stack([np.ones(10), np.arange(10.0)], axis=1)
        with pytest.raises(ValidationError):
            from_correlation(series)

    def test_nan_rejected(self):
        series = np.array([[1.0, 2.0], [np.nan, 3.0], [2.0, 1.0]])
        with pytest.raises(ValidationError):
            from_correlation(series)

    def test_too_few_observations(self):
        with pytest.raises(ValidationError):
            from_correlation(np.array([[1.0, 2.0]]))
