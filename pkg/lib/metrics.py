"""
Campaign evaluation metrics

epsilon        rho^T C_t
expected       expected number of correctly influenced targets (undecided nodes excluded)
influence_pct  epsilon as a percentage of T_t, the effectiveness of seeding every target
"""

import csv
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from lib.graph import PartitionVector
from lib.propagation import TransitionMatrix, iter_forward, propagate_forward
from lib.seedselect import SeedSet
from lib.utils import ZERO_TOL

_logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.5

CSV_FIELDS = ['t', 'algorithm', 'epsilon', 'expected_correct', 'influence_pct', 'T_t', 'runtime_ms', 'warnings']


@dataclass
class EffectivenessReport:
    t: int
    epsilon: float
    expected_correct: float
    influence_pct: Optional[float]
    T_t: float
    warnings: List[str] = field(default_factory=list)


def _vector(c):
    return np.asarray(getattr(c, 'values', c), dtype=np.float64)


def effectiveness(c, rho: PartitionVector) -> float:
    c = _vector(c)
    rho.check_size(c.size)
    return float(np.dot(rho.as_float(), c))


def expected_correct(c, rho: PartitionVector, threshold: float = DEFAULT_THRESHOLD) -> float:
    """
    sum over V1 with p(O1) > threshold of (1+C)/2, plus sum over V2 with p(O2) > threshold of (1-C)/2.
    At threshold 0.5 this is C > 0 on V1 and C < 0 on V2.
    """
    c = _vector(c)
    rho.check_size(c.size)
    p_o1 = (1.0 + c) / 2.0
    p_o2 = (1.0 - c) / 2.0
    in_v1 = (rho.labels > 0) & (p_o1 > threshold)
    in_v2 = (rho.labels < 0) & (p_o2 > threshold)
    return float(p_o1[in_v1].sum() + p_o2[in_v2].sum())


def all_seed_effectiveness(P: TransitionMatrix, rho: PartitionVector, t: int) -> float:
    """T_t = rho^T P^t rho"""
    return effectiveness(propagate_forward(P, rho.as_float(), t), rho)


def _ratio(epsilon, T_t):
    if abs(T_t) < ZERO_TOL:
        return None
    return epsilon / T_t * 100.0


def influence_pct(P: TransitionMatrix, rho: PartitionVector, seeds: SeedSet, t: int) -> Optional[float]:
    """
    Percentage of the all-targets effectiveness reached by `seeds`; None when |T_t| < 1e-12.
    Values above 100 are possible when the all-targets run cancels itself out.
    """
    epsilon = effectiveness(propagate_forward(P, seeds.to_vector(P.n), t), rho)
    return _ratio(epsilon, all_seed_effectiveness(P, rho, t))


def _warnings(T_t):
    if abs(T_t) < ZERO_TOL:
        return ['undefined_T']
    if T_t < 0:
        return ['negative_T']
    return []


def trajectory_report(P: TransitionMatrix, rho: PartitionVector, seeds: SeedSet, t_max: int,
                      threshold: float = DEFAULT_THRESHOLD) -> List[EffectivenessReport]:
    """
    Metrics for t = 0..t_max from one forward pass of the seed vector (and one of rho for T_t).
    """
    rho.check_size(P.n)
    r = rho.as_float()
    reports = []
    seed_run = iter_forward(P, seeds.to_vector(P.n), t_max)
    all_run = iter_forward(P, r, t_max)
    for (t, c), (_, c_all) in zip(seed_run, all_run):
        epsilon = float(np.dot(r, c))
        T_t = float(np.dot(r, c_all))
        report = EffectivenessReport(t, epsilon, expected_correct(c, rho, threshold), _ratio(epsilon, T_t),
                                     T_t, _warnings(T_t))
        if report.warnings:
            _logger.debug('t=%d: %s (T_t=%.3g)', t, ','.join(report.warnings), T_t)
        reports.append(report)
    return reports


def report_row(report: EffectivenessReport, algorithm: str, runtime_ms: Optional[float] = None):
    return {
        't': report.t,
        'algorithm': algorithm,
        'epsilon': repr(report.epsilon),
        'expected_correct': repr(report.expected_correct),
        'influence_pct': '' if report.influence_pct is None else repr(report.influence_pct),
        'T_t': repr(report.T_t),
        'runtime_ms': '' if runtime_ms is None else f'{runtime_ms:.3f}',
        'warnings': ';'.join(report.warnings),
    }


def write_report_csv(rows, stream, extra_fields=()):
    """rows: dicts produced by report_row (optionally with leading sweep columns)"""
    writer = csv.DictWriter(stream, fieldnames=list(extra_fields) + CSV_FIELDS, lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
