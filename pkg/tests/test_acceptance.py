"""End-to-end acceptance suite.

One test per criterion; each prints a PASS/FAIL verdict line with the
measured quantities (run pytest with ``-s`` to see the lines for passing
criteria too) and then asserts the criterion at its stated tolerance.
"""

import time
from fractions import Fraction

import numpy as np

from distclosure import (
    DistanceGraph,
    IsomorphismMap,
    ProximityGraph,
    asymmetry,
    compose,
    cv_proximity,
    demorgan_deviation,
    diffusion_power,
    diffusion_trace,
    distance_closure,
    distortion,
    find_lambda,
    get_bundle,
    metric_closure,
    to_distance,
    to_proximity,
    toy_network,
    transitive_closure_alg2,
    ultrametric_closure,
)

from conftest import random_crisp_connected, random_distance, random_proximity
from oracles import (
    bottleneck_closure,
    harmonic_two_walks_exact,
    max_abs_diff,
    mc_cv_proximity,
    reachability_closure,
)

INF = float("inf")


def _verdict(num, name, ok, detail=""):
    line = f"[criterion {num:>2}] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    return ok


def _corpus_1(seed=11):
    rng = np.random.default_rng(seed)
    for _ in range(200):
        n = int(rng.integers(4, 21))
        yield random_proximity(rng, n)


def test_criterion_1_distortion_ordering():
    t0 = time.perf_counter()
    violations = 0
    for p in _corpus_1():
        d = to_distance(p)
        um = distortion(p, to_proximity(ultrametric_closure(d).closed))
        mc = distortion(p, to_proximity(metric_closure(d, backend="minplus").closed))
        if um < mc:
            violations += 1
    elapsed = time.perf_counter() - t0
    ok = _verdict(1, "distortion ordering um >= mc on 200 graphs",
                  violations == 0 and elapsed < 10.0,
                  f"violations={violations}/200, {elapsed:.2f}s")
    assert ok


def test_criterion_2_convergence_bound():
    bad = 0
    for p in _corpus_1():
        d = to_distance(p)
        for rep in (metric_closure(d, backend="minplus"), ultrametric_closure(d)):
            if not rep.converged or rep.kappa > p.n - 1:
                bad += 1
    ok = _verdict(2, "metric/ultrametric converged with kappa <= n-1",
                  bad == 0, f"violations={bad}/400 closures")
    assert ok


def test_criterion_3_isomorphism_commutation():
    rng = np.random.default_rng(12)
    methods = ["metric", "ultrametric", "dombi:0.5", "dombi:1", "dombi:2"]
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(3, 13))
        p = random_proximity(rng, n, low=0.05)
        for method in methods:
            bundle = get_bundle(method)
            pt = transitive_closure_alg2(p, bundle).closed
            iso = IsomorphismMap(bundle.generator)
            dt = distance_closure(to_distance(p, iso), bundle).closed
            diff = max_abs_diff(bundle.generator.forward(pt.weights), dt.weights)
            worst = max(worst, diff)
    ok = _verdict(3, "Phi(P^T) vs D^T across metric/ultrametric/dombi pairs",
                  worst < 1e-9, f"max diff={worst:.3e}")
    assert ok


def test_criterion_4_oracle_equivalence():
    rng = np.random.default_rng(13)
    # exhaustive best-bottleneck-path search on small graphs, exact equality
    exact_fail = 0
    for k in range(30):
        n = int(rng.integers(2, 7))
        p = random_proximity(rng, n, density=0.7 if k % 2 else 1.0)
        closed = transitive_closure_alg2(p, "ultrametric").closed.weights
        if not np.array_equal(closed, bottleneck_closure(p.weights)):
            exact_fail += 1
    ok_a = _verdict(4, "max-min closure equals exhaustive bottleneck search (n<=6)",
                    exact_fail == 0, f"mismatches={exact_fail}/30")
    # Dijkstra vs min-plus powering on larger graphs
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(8, 65))
        d = random_distance(rng, n, density=0.3, low=0.1, high=10.0)
        a = metric_closure(d, backend="dijkstra").closed.weights
        b = metric_closure(d, backend="minplus").closed.weights
        worst = max(worst, max_abs_diff(a, b))
    ok_b = _verdict(4, "metric closure Dijkstra vs min-plus powering (n<=64)",
                    worst < 1e-12, f"max diff={worst:.3e}")
    assert ok_a and ok_b


def test_criterion_5_diffusion_square_rational_oracle():
    rng = np.random.default_rng(14)
    mismatches = 0
    for k in range(12):
        n = int(rng.integers(3, 7))
        w = np.empty((n, n), dtype=object)
        for i in range(n):
            w[i, i] = Fraction(0)
            for j in range(i + 1, n):
                if k % 3 == 0 and rng.uniform() < 0.3:
                    w[i, j] = w[j, i] = INF
                else:
                    v = Fraction(int(rng.integers(1, 30)), int(rng.integers(1, 12)))
                    w[i, j] = w[j, i] = v
        d = DistanceGraph(w)
        engine = compose(d, d, "diffusion").weights
        oracle = harmonic_two_walks_exact(w, w)
        if not np.array_equal(engine, oracle):
            mismatches += 1
    ok = _verdict(5, "diffusion D^2 equals exact rational 2-walk oracle",
                  mismatches == 0, f"mismatches={mismatches}/12")
    assert ok


def test_criterion_6_toy_network():
    toy = toy_network()
    seq = diffusion_power(toy, 10)
    asyms = [asymmetry(g) for g in seq.powers]
    argmax_n = int(np.argmax(asyms)) + 1
    ok_a = _verdict(6, "toy asymmetry: A1=A2=0, A3>0, argmax at 5+-1",
                    asyms[0] == 0.0 and asyms[1] == 0.0 and asyms[2] > 0.0
                    and argmax_n in (4, 5, 6),
                    f"A3={asyms[2]:.4f}, argmax={argmax_n}")

    um = ultrametric_closure(toy).closed.weights
    ok_b = _verdict(6, "toy ultrametric closure is the all-ones complete graph",
                    bool(np.array_equal(um, 1.0 - np.eye(10))))

    mc = metric_closure(toy).closed.weights
    indirect = mc[np.isinf(toy.weights)]
    vals = set(np.unique(indirect).tolist())
    ok_c = _verdict(6, "toy metric indirect distances within {2,3,4,5}",
                    vals <= {2.0, 3.0, 4.0, 5.0}, f"values={sorted(vals)}")

    trace = diffusion_trace(toy, 50)
    ok_d = _verdict(6, "toy communities: 3 at n=1, singletons in n=[20,50]",
                    trace.community_counts[0] == 3
                    and trace.dissolve_n is not None
                    and 20 <= trace.dissolve_n <= 50,
                    f"count(1)={trace.community_counts[0]}, "
                    f"dissolve={trace.dissolve_n}")
    assert ok_a and ok_b and ok_c and ok_d


def test_criterion_7_demorgan_deviation():
    t0 = time.perf_counter()
    lams = [1.0, 2.0, 5.0, 10.0, 50.0, 100.0]
    vals = {lam: demorgan_deviation(lam, tol=1e-6) for lam in lams}
    elapsed = time.perf_counter() - t0
    ok_a = _verdict(7, "F(1) < 1e-6", vals[1.0] < 1e-6, f"F(1)={vals[1.0]:.2e}")
    ok_b = _verdict(7, "F(100) within [0.09, 0.11]",
                    0.09 <= vals[100.0] <= 0.11, f"F(100)={vals[100.0]:.6f}")
    seq = [vals[lam] for lam in lams]
    monotone = all(a <= b for a, b in zip(seq, seq[1:]))
    ok_c = _verdict(7, "F monotone along lambda sweep toward its asymptote",
                    monotone, "F=" + ", ".join(f"{v:.4f}" for v in seq))
    ok_t = _verdict(7, "runtime < 30 s", elapsed < 30.0, f"{elapsed:.2f}s")
    assert ok_a and ok_b and ok_c and ok_t


def test_criterion_8_lambda_optimizer():
    lam = find_lambda(10.0, 0.2, 0.2)
    ok_a = _verdict(8, "find_lambda(mu=10, cv_d=0.2, cv_p=0.2) in [0.8, 1.2]",
                    0.8 <= lam <= 1.2, f"lambda={lam:.4f}")
    points = [(10.0, 0.2, 1.0), (10.0, 0.2, 2.0), (30.0, 0.3, 1.5)]
    worst = 0.0
    for mu, cv_d, lam_p in points:
        quad = cv_proximity(mu, cv_d, lam_p)
        mc = mc_cv_proximity(mu, cv_d, lam_p)
        worst = max(worst, abs(quad - mc) / mc)
    ok_b = _verdict(8, "cv_proximity Monte-Carlo cross-check within 1%",
                    worst < 0.01, f"worst rel err={worst:.4%}")
    assert ok_a and ok_b


def test_criterion_9_power_of_two_symmetry():
    rng = np.random.default_rng(15)
    bad = 0
    for _ in range(20):
        n = int(rng.integers(4, 13))
        d = random_distance(rng, n, density=0.5, low=0.5, high=3.0)
        seq = diffusion_power(d, 3, scheme="power-of-two")
        for eta in (1, 2, 3):
            if asymmetry(seq.powers[eta]) != 0.0:
                bad += 1
    ok = _verdict(9, "A(D^(2^eta)) = 0 exactly for eta in {1,2,3}",
                  bad == 0, f"violations={bad}/60")
    assert ok


def test_criterion_10_crisp_collapse():
    rng = np.random.default_rng(16)
    methods = ["metric", "ultrametric", "diffusion", "dombi:2"]
    bad = 0
    for _ in range(20):
        n = int(rng.integers(3, 10))
        p = random_crisp_connected(rng, n)
        want = reachability_closure(p.weights > 0.0).astype(float)
        for method in methods:
            closed = transitive_closure_alg2(p, method).closed.weights
            if not np.array_equal(closed, want):
                bad += 1
    ok = _verdict(10, "all registered closures collapse to reachability on crisp graphs",
                  bad == 0, f"violations={bad}/80 closures")
    assert ok
