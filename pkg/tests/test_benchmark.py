import numpy as np
import pytest

from datasets.synth import gen_balanced, gen_random_signed, sample_targets
from lib.benchmark import ALGORITHMS, run_benchmark, select_seeds, sensitivity_budget, sensitivity_targets
from lib.propagation import build_transition
from lib.seedselect import CampaignConfig, cosinemax
from lib.timer import Timer


@pytest.fixture(scope='module')
def balanced():
    return gen_balanced(20, 20, 0.2, 0.1, rng_seed=0)


def test_rows_cover_every_horizon(balanced):
    g, rho = balanced
    rows = run_benchmark(g, rho, k=4, t_max=5)
    assert len(rows) == len(ALGORITHMS) * 6
    for algo in ALGORITHMS:
        assert [r['t'] for r in rows if r['algorithm'] == algo] == list(range(6))
    assert all(float(r['runtime_ms']) >= 0 for r in rows)


def test_cosinemax_row_leads(balanced):
    g, rho = balanced
    rows = run_benchmark(g, rho, k=4, t_max=8)
    for t in range(9):
        at_t = {r['algorithm']: float(r['epsilon']) for r in rows if r['t'] == t}
        assert all(value <= at_t['cosinemax'] + 1e-9 for value in at_t.values())


def test_unknown_algorithm(balanced):
    g, rho = balanced
    with pytest.raises(ValueError):
        run_benchmark(g, rho, k=2, t_max=1, algos=['greedy'])
    with pytest.raises(ValueError):
        select_seeds('greedy', g, build_transition(g), rho, CampaignConfig(1, 2), 0)


def test_sensitivity_budget(balanced):
    g, rho = balanced
    rows = sensitivity_budget(g, rho, [1, 3, 5], t=3, algos=['cosinemax'])
    values = [float(r['epsilon']) for r in rows]
    assert [r['k'] for r in rows] == [1, 3, 5]
    # each extra seed adds a non-negative contribution
    assert values == sorted(values)


def test_sensitivity_targets(balanced):
    g, _ = balanced
    rows = sensitivity_targets(g, [0.1, 0.5], k=2, t=2, algos=['cosinemax', 'degree'])
    assert [(r['target_fraction'], r['algorithm']) for r in rows] == [
        (0.1, 'cosinemax'), (0.1, 'degree'), (0.5, 'cosinemax'), (0.5, 'degree')]


def test_baseline_selection_is_fast():
    g = gen_random_signed(20000, 5e-4, 0.2, rng_seed=1)
    rho = sample_targets(g.n, 0.5, rng_seed=1)
    P = build_transition(g)
    cfg = CampaignConfig(t=1, k=100)
    timer = Timer()
    for algo in ('random', 'degree'):
        timer.tic()
        select_seeds(algo, g, P, rho, cfg, 0)
        # no propagation involved, generous bound for noisy machines
        assert timer.toc(average=False) < 2000.0


def _best_time(fn, repeats):
    """fastest of `repeats` runs, in ms"""
    timer = Timer()
    best = float('inf')
    for _ in range(repeats):
        timer.tic()
        fn()
        best = min(best, timer.toc(average=False))
    return best


@pytest.fixture(scope='module')
def million_edges():
    g = gen_random_signed(100000, 1.05e-4, 0.2, rng_seed=0)
    rho = sample_targets(g.n, 0.1, rng_seed=0)
    return g, rho, build_transition(g)


@pytest.mark.slow
def test_cosinemax_on_a_million_edges(million_edges):
    g, rho, P = million_edges
    assert g.edge_count >= 10 ** 6
    with Timer() as timer:
        seeds = cosinemax(P, rho, CampaignConfig(t=10, k=100))
    assert len(seeds) == 100
    assert np.isfinite(seeds.predicted_objective)
    assert timer.diff < 60000.0


@pytest.mark.slow
def test_selection_time_linear_in_horizon(million_edges):
    g, rho, P = million_edges
    t20 = _best_time(lambda: cosinemax(P, rho, CampaignConfig(t=20, k=100)), 3)
    t40 = _best_time(lambda: cosinemax(P, rho, CampaignConfig(t=40, k=100)), 3)
    assert t40 <= 2.5 * 2 * t20


@pytest.mark.slow
@pytest.mark.parametrize('algo', ['random', 'degree'])
def test_baseline_time_independent_of_horizon(million_edges, algo):
    g, rho, P = million_edges
    times = [_best_time(lambda: select_seeds(algo, g, P, rho, CampaignConfig(t=t, k=100), 0), 15)
             for t in (1, 20, 40)]
    assert max(times) < 1.2 * min(times)
