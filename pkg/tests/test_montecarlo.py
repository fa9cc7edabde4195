import numpy as np
import pytest

from lib.graph import SignedGraph
from lib.montecarlo import estimate_opinion
from lib.propagation import build_transition, propagate_forward


def test_zero_horizon(three_node):
    g, _, _ = three_node
    c0 = np.array([0.2, -0.7, 1.0])
    assert estimate_opinion(g, c0, 1, 0, 100, rng_seed=0) == (-0.7, 0.0)


def test_deterministic_walk():
    # every node has one out-edge, so every walk takes the same path
    g = SignedGraph.from_edges(3, [0, 1, 2], [1, 2, 0], [-1.0, 2.0, -0.5])
    c0 = np.array([0.5, 1.0, -0.25])
    estimate, stderr = estimate_opinion(g, c0, 0, 2, 50, rng_seed=1)
    assert estimate == pytest.approx(-(-0.25))
    assert stderr == pytest.approx(0.0, abs=1e-15)


def test_sink_holds_walker():
    g = SignedGraph.from_edges(2, [0], [1], [-3.0])
    c0 = np.array([0.0, 0.8])
    estimate, _ = estimate_opinion(g, c0, 0, 10, 20, rng_seed=0)
    assert estimate == pytest.approx(-0.8)


def test_matches_matrix_propagation(three_node):
    g, _, P = three_node
    c0 = np.array([1.0, -0.5, 0.3])
    exact = propagate_forward(P, c0, 3).values
    for u in range(3):
        estimate, stderr = estimate_opinion(g, c0, u, 3, 20000, rng_seed=u)
        assert abs(estimate - exact[u]) <= 4 * stderr + 1e-12


def test_positive_graph_stays_in_range():
    g = SignedGraph.from_edges(4, [0, 0, 1, 2, 3], [1, 2, 3, 3, 0], [1.0, 3.0, 0.5, 2.0, 1.0])
    c0 = np.array([1.0, 1.0, 1.0, 1.0])
    estimate, stderr = estimate_opinion(g, c0, 0, 7, 5000, rng_seed=2)
    assert estimate == pytest.approx(1.0)
    assert stderr == pytest.approx(0.0, abs=1e-15)


def test_row_keeps_resolution_next_to_heavy_rows():
    # row 0 dwarfs the rest of the weight table; node 1 must still split its walkers evenly
    g = SignedGraph.from_edges(3, [0, 1, 1, 2], [1, 0, 2, 0], [1e17, 1.0, 1.0, 1.0])
    c0 = np.array([1.0, 0.0, -1.0])
    estimate, stderr = estimate_opinion(g, c0, 1, 1, 20000, rng_seed=3)
    assert stderr > 0.0
    assert abs(estimate - 0.0) <= 4 * stderr


def test_tiny_weights_after_large_ones():
    g = SignedGraph.from_edges(3, [0, 1, 1, 2], [1, 0, 2, 0], [1e8, 1e-9, 3e-9, 1.0])
    c0 = np.array([1.0, 0.0, -1.0])
    exact = propagate_forward(build_transition(g), c0, 1).values[1]
    assert exact == pytest.approx(-0.5)
    estimate, stderr = estimate_opinion(g, c0, 1, 1, 20000, rng_seed=4)
    assert stderr > 0.0
    assert abs(estimate - exact) <= 4 * stderr


def test_mixed_magnitudes_match_propagation():
    rng = np.random.default_rng(5)
    n = 6
    src, dst = np.nonzero(~np.eye(n, dtype=bool))
    # each row lives on its own scale, 1e-9 up to 1e6
    scale = 10.0 ** (3 * src - 9)
    weights = rng.choice([-1.0, 1.0], size=src.size) * rng.uniform(0.5, 2.0, size=src.size) * scale
    g = SignedGraph.from_edges(n, src, dst, weights)
    c0 = rng.uniform(-1.0, 1.0, size=n)
    exact = propagate_forward(build_transition(g), c0, 3).values
    for u in range(n):
        estimate, stderr = estimate_opinion(g, c0, u, 3, 20000, rng_seed=u)
        assert abs(estimate - exact[u]) <= 4 * stderr + 1e-12


def test_threads_do_not_change_estimate(three_node):
    g, _, _ = three_node
    c0 = np.array([1.0, -0.5, 0.3])
    single = estimate_opinion(g, c0, 0, 4, 10000, rng_seed=9, threads=1)
    pooled = estimate_opinion(g, c0, 0, 4, 10000, rng_seed=9, threads=2)
    assert single == pooled


def test_arguments_checked(three_node):
    g, _, _ = three_node
    with pytest.raises(ValueError):
        estimate_opinion(g, np.zeros(2), 0, 1, 10, rng_seed=0)
    with pytest.raises(ValueError):
        estimate_opinion(g, np.zeros(3), 3, 1, 10, rng_seed=0)
    with pytest.raises(ValueError):
        estimate_opinion(g, np.zeros(3), 0, 1, 0, rng_seed=0)


@pytest.mark.slow
def test_probe_batch(instances):
    rng = np.random.default_rng(0)
    inside = 0
    probes = 0
    for g, rho, P in instances(50, n_min=5, n_max=40):
        c0 = rng.uniform(-1.0, 1.0, size=g.n)
        for _ in range(10):
            u, t = int(rng.integers(g.n)), int(rng.integers(1, 8))
            exact = propagate_forward(P, c0, t).values[u]
            estimate, stderr = estimate_opinion(g, c0, u, t, 20000, rng_seed=probes)
            inside += abs(estimate - exact) <= 4 * stderr + 1e-12
            probes += 1
    assert probes == 500
    assert inside >= 498
