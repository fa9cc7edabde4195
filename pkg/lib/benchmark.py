"""
Benchmark protocol for seed-selection strategies

For each algorithm and horizon, seeds are selected (timed) and evaluated at that horizon; rows
follow the metrics CSV schema. Sensitivity sweeps vary the seed budget or the targeted share of
users at a fixed horizon.
"""

import logging
from typing import Iterable, List

from tqdm import tqdm

from datasets.synth import sample_targets
from lib.baselines import random_seeds, degree_seeds, individual_infmax_seeds
from lib.graph import SignedGraph, PartitionVector
from lib.metrics import DEFAULT_THRESHOLD, trajectory_report, report_row
from lib.propagation import TransitionMatrix, build_transition
from lib.seedselect import CampaignConfig, SeedSet, cosinemax
from lib.timer import Timer, AverageMeter

_logger = logging.getLogger(__name__)

ALGORITHMS = ('cosinemax', 'random', 'degree', 'indinfmax')


def select_seeds(algo: str, g: SignedGraph, P: TransitionMatrix, rho: PartitionVector,
                 cfg: CampaignConfig, rng_seed: int) -> SeedSet:
    """
    Run one named strategy; P must be the transition matrix of g.
    """
    if algo == 'cosinemax':
        return cosinemax(P, rho, cfg)
    elif algo == 'random':
        return random_seeds(rho, cfg, rng_seed)
    elif algo == 'degree':
        return degree_seeds(g, rho, cfg)
    elif algo == 'indinfmax':
        return individual_infmax_seeds(P, rho, cfg)
    raise ValueError(f"unknown algorithm '{algo}', choose from {', '.join(ALGORITHMS)}")


def _check_algos(algos):
    algos = list(algos)
    for algo in algos:
        if algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm '{algo}', choose from {', '.join(ALGORITHMS)}")
    return algos


def _evaluate(algo, g, P, rho, cfg, rng_seed, threshold, repeats):
    """select at horizon cfg.t (timed), return the metrics row at that horizon"""
    meter = AverageMeter()
    timer = Timer()
    seeds = None
    for _ in range(max(repeats, 1)):
        timer.tic()
        seeds = select_seeds(algo, g, P, rho, cfg, rng_seed)
        meter.update(timer.toc(average=False))
    if repeats > 1:
        _logger.debug('%s t=%d: %.3f +- %.3f ms', algo, cfg.t, meter.avg, meter.var ** 0.5)
    report = trajectory_report(P, rho, seeds, cfg.t, threshold)[-1]
    return report_row(report, algo, meter.avg)


def run_benchmark(g: SignedGraph, rho: PartitionVector, k: int, t_max: int, algos: Iterable[str] = ALGORITHMS,
                  rng_seed: int = 0, threshold: float = DEFAULT_THRESHOLD, repeats: int = 1,
                  verbose: bool = False) -> List[dict]:
    """
    One row per (algorithm, t) for t = 0..t_max. The transition matrix is built once, outside the timing.
    """
    algos = _check_algos(algos)
    P = build_transition(g)
    rows = []
    jobs = [(algo, t) for algo in algos for t in range(t_max + 1)]
    for algo, t in tqdm(jobs, disable=not verbose):
        rows.append(_evaluate(algo, g, P, rho, CampaignConfig(t, k), rng_seed, threshold, repeats))
    for algo in algos:
        times = [float(r['runtime_ms']) for r in rows if r['algorithm'] == algo]
        _logger.info('%-10s mean selection time %.3f ms over %d horizons', algo, sum(times) / len(times), len(times))
    return rows


def sensitivity_budget(g: SignedGraph, rho: PartitionVector, budgets: Iterable[int], t: int,
                       algos: Iterable[str] = ALGORITHMS, rng_seed: int = 0,
                       threshold: float = DEFAULT_THRESHOLD, verbose: bool = False) -> List[dict]:
    """rows with a leading `k` column, one per (budget, algorithm)"""
    algos = _check_algos(algos)
    P = build_transition(g)
    rows = []
    for k in tqdm(list(budgets), disable=not verbose):
        for algo in algos:
            row = _evaluate(algo, g, P, rho, CampaignConfig(t, int(k)), rng_seed, threshold, 1)
            rows.append(dict(k=int(k), **row))
    return rows


def sensitivity_targets(g: SignedGraph, fractions: Iterable[float], k: int, t: int,
                        algos: Iterable[str] = ALGORITHMS, rng_seed: int = 0,
                        threshold: float = DEFAULT_THRESHOLD, verbose: bool = False) -> List[dict]:
    """rows with a leading `target_fraction` column; targets are re-drawn (and split in half) per fraction"""
    algos = _check_algos(algos)
    P = build_transition(g)
    rows = []
    for fraction in tqdm(list(fractions), disable=not verbose):
        rho = sample_targets(g.n, float(fraction), rng_seed)
        for algo in algos:
            row = _evaluate(algo, g, P, rho, CampaignConfig(t, k), rng_seed, threshold, 1)
            rows.append(dict(target_fraction=float(fraction), **row))
    return rows
