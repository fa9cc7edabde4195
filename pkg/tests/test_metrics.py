import io

import numpy as np
import pytest

from datasets.synth import gen_balanced
from lib.graph import SignedGraph, PartitionVector
from lib.metrics import (CSV_FIELDS, all_seed_effectiveness, effectiveness, expected_correct, influence_pct,
                         report_row, trajectory_report, write_report_csv)
from lib.propagation import build_transition, propagate_forward
from lib.seedselect import CampaignConfig, SeedSet, all_targets_seedset, cosinemax, simulate_objective


def test_effectiveness_example():
    rho = PartitionVector([1, 1, -1])
    assert effectiveness(np.array([0.5, -0.2, -1.0]), rho) == pytest.approx(1.3)


def test_expected_correct_example():
    rho = PartitionVector([1, 1, -1, 0])
    c = np.array([0.6, -0.2, -1.0, 1.0])
    # 0.8 from node 0, node 1 leans the wrong way, 1.0 from node 2, node 3 is not targeted
    assert expected_correct(c, rho) == pytest.approx(1.8)


def test_expected_correct_undecided_excluded():
    rho = PartitionVector([1, -1])
    assert expected_correct(np.zeros(2), rho) == 0.0


def test_expected_correct_threshold():
    rho = PartitionVector([1, -1])
    c = np.array([0.4, -0.8])
    assert expected_correct(c, rho, threshold=0.5) == pytest.approx(0.7 + 0.9)
    assert expected_correct(c, rho, threshold=0.8) == pytest.approx(0.9)


def test_expected_correct_at_start(three_node):
    _, rho, P = three_node
    seeds = cosinemax(P, rho, CampaignConfig(t=1, k=1))
    report = trajectory_report(P, rho, seeds, 0)[0]
    # node 1 (V1) seeded with O2 at t = 0 is wrong, nothing else is decided
    assert report.expected_correct == 0.0
    assert report.epsilon == pytest.approx(-1.0)


def test_all_targets_is_exactly_full(instances):
    for g, rho, P in instances(30, n_max=20):
        for t in (0, 1, 4):
            pct = influence_pct(P, rho, all_targets_seedset(rho), t)
            if pct is not None:
                assert pct == 100.0


def test_empty_seedset_is_zero(instances):
    for g, rho, P in instances(10, n_max=20):
        pct = influence_pct(P, rho, SeedSet([], 1), 2)
        assert pct is None or pct == 0.0


def test_undefined_total():
    # the two targets pull each other to zero
    g = SignedGraph.from_edges(2, [0, 1], [1, 0], [1.0, 1.0])
    P = build_transition(g)
    rho = PartitionVector([1, -1])
    assert all_seed_effectiveness(P, rho, 1) == pytest.approx(-2.0)
    g = SignedGraph.from_edges(3, [0, 1, 2], [2, 2, 2], [1.0, 1.0, 1.0])
    P = build_transition(g)
    rho = PartitionVector([1, -1, 0])
    seeds = cosinemax(P, rho, CampaignConfig(t=1, k=1))
    assert influence_pct(P, rho, seeds, 1) is None
    report = trajectory_report(P, rho, seeds, 1)[-1]
    assert report.influence_pct is None
    assert report.warnings == ['undefined_T']


def test_negative_total_flagged():
    g = SignedGraph.from_edges(2, [0, 1], [1, 0], [1.0, 1.0])
    P = build_transition(g)
    rho = PartitionVector([1, -1])
    report = trajectory_report(P, rho, cosinemax(P, rho, CampaignConfig(t=1, k=1)), 1)[-1]
    assert report.T_t == pytest.approx(-2.0)
    assert report.warnings == ['negative_T']


def test_percentage_above_hundred():
    # three targets in a negative/positive ring, each mostly feeding an untargeted sink
    src, dst, w = [], [], []
    for i in range(3):
        src += [i, i, i]
        dst += [3, (i + 1) % 3, (i - 1) % 3]
        w += [6.0, -1.0, 2.0]
    P = build_transition(SignedGraph.from_edges(4, src, dst, w))
    rho = PartitionVector([1, 1, 1, 0])
    assert all_seed_effectiveness(P, rho, 1) == pytest.approx(1.0 / 3.0)
    seeds = cosinemax(P, rho, CampaignConfig(t=1, k=1))
    assert seeds.nodes == [3]
    assert influence_pct(P, rho, seeds, 1) == pytest.approx(600.0)


def test_trajectory_consistent_with_forward(instances):
    for g, rho, P in instances(20, n_max=25):
        seeds = cosinemax(P, rho, CampaignConfig(t=3, k=min(3, g.n)))
        reports = trajectory_report(P, rho, seeds, 6)
        assert [r.t for r in reports] == list(range(7))
        for r in reports:
            c = propagate_forward(P, seeds.to_vector(g.n), r.t)
            assert r.epsilon == pytest.approx(simulate_objective(P, rho, seeds, r.t), abs=1e-10)
            assert r.expected_correct == pytest.approx(expected_correct(c, rho), abs=1e-10)
            assert r.T_t == pytest.approx(all_seed_effectiveness(P, rho, r.t), abs=1e-10)
        # the reported objective at the selection horizon is the predicted one
        assert reports[3].epsilon == pytest.approx(seeds.predicted_objective, abs=1e-9)


def test_balanced_saturation():
    g, rho = gen_balanced(10, 10, 0.3, 0.2, rng_seed=3)
    P = build_transition(g)
    seeds = cosinemax(P, rho, CampaignConfig(t=500, k=3))
    report = trajectory_report(P, rho, seeds, 500)[-1]
    # opinions converge to a consensus pattern with every target on its own side
    assert report.influence_pct == pytest.approx(100.0 * report.epsilon / report.T_t)
    assert report.epsilon > 0
    assert report.warnings == []


def test_csv_schema():
    g = SignedGraph.from_edges(2, [0, 1], [1, 0], [1.0, 1.0])
    P = build_transition(g)
    rho = PartitionVector([1, 1])
    seeds = cosinemax(P, rho, CampaignConfig(t=1, k=1))
    rows = [report_row(r, 'cosinemax', 1.25) for r in trajectory_report(P, rho, seeds, 2)]
    buf = io.StringIO()
    write_report_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ','.join(CSV_FIELDS)
    assert len(lines) == 4
    assert lines[1].startswith('0,cosinemax,1.0,1.0,50.0,2.0,1.250,')

    buf = io.StringIO()
    write_report_csv([dict(k=1, **rows[0])], buf, extra_fields=['k'])
    assert buf.getvalue().splitlines()[0] == 'k,' + ','.join(CSV_FIELDS)
