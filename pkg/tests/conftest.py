import numpy as np
import pytest

from datasets.synth import gen_random_signed
from lib.graph import SignedGraph, PartitionVector
from lib.propagation import build_transition


def three_node_graph():
    return SignedGraph.from_edges(3, [0, 0, 1, 2], [1, 2, 2, 1], [1.0, -1.0, 2.0, 1.0])


def random_instance(seed, n_min=2, n_max=8, sink_fraction=0.2):
    """
    Random signed graph (mixed signs, some nodes stripped of their out-edges to make sinks)
    with a random partition vector holding at least one target.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    g = gen_random_signed(n, float(rng.uniform(0.2, 0.7)), float(rng.uniform(0.1, 0.6)), rng_seed=seed)
    sinks = rng.random(n) < sink_fraction
    src = g.sources()
    keep = ~sinks[src]
    g = SignedGraph.from_edges(n, src[keep], g.indices[keep], g.weights[keep])
    labels = rng.choice([-1, 0, 1], size=n)
    if not labels.any():
        labels[int(rng.integers(n))] = 1
    return g, PartitionVector(labels)


@pytest.fixture
def three_node():
    g = three_node_graph()
    return g, PartitionVector([0, 1, -1]), build_transition(g)


@pytest.fixture
def instances():
    """factory: list of (graph, rho, P) for seeds 0..count-1"""
    def make(count, **kwargs):
        out = []
        for seed in range(count):
            g, rho = random_instance(seed, **kwargs)
            out.append((g, rho, build_transition(g)))
        return out
    return make
