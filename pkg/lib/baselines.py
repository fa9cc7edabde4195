"""
Comparison seed-selection strategies

All three pick seeds among the targeted nodes V1 u V2 and give each seed the opinion of its
own partition (O1 in V1, O2 in V2).
"""

import logging

import numpy as np

from lib.graph import SignedGraph, PartitionVector
from lib.propagation import TransitionMatrix, propagate_reverse
from lib.seedselect import CampaignConfig, Opinion, SeedSet
from lib.utils import make_rng

_logger = logging.getLogger(__name__)


def _membership_opinion(rho: PartitionVector, node):
    return Opinion.O1 if rho.labels[node] > 0 else Opinion.O2


def _top_among(scores, candidates, count):
    """`count` candidates with the largest score, ties to the lower id"""
    candidates = np.asarray(candidates, dtype=np.int64)
    if count <= 0 or candidates.size == 0:
        return np.empty(0, dtype=np.int64)
    # lexsort: last key is primary
    order = np.lexsort((candidates, -scores[candidates]))
    return candidates[order[:count]]


def random_seeds(rho: PartitionVector, cfg: CampaignConfig, rng_seed) -> SeedSet:
    """
    k distinct targets drawn uniformly without replacement.
    """
    targets = rho.targets
    if targets.size < cfg.k:
        raise ValueError(f'random baseline needs k={cfg.k} targets, only {targets.size} are targeted')
    picks = make_rng(rng_seed).choice(targets, size=cfg.k, replace=False)
    return SeedSet([(int(i), _membership_opinion(rho, i), 0.0) for i in picks], cfg.k)


def degree_seeds(g: SignedGraph, rho: PartitionVector, cfg: CampaignConfig) -> SeedSet:
    """
    Targets with the highest out-degree.
    """
    rho.check_size(g.n)
    cfg.validate(g.n)
    degree = g.out_degree.astype(np.float64)
    picks = _top_among(degree, rho.targets, cfg.k)
    if picks.size < cfg.k:
        _logger.warning('degree baseline: only %d targeted nodes for k=%d', picks.size, cfg.k)
    return SeedSet([(int(i), _membership_opinion(rho, i), degree[i]) for i in picks], cfg.k)


def individual_infmax_seeds(P: TransitionMatrix, rho: PartitionVector, cfg: CampaignConfig) -> SeedSet:
    """
    Two independent single-opinion maximizations of floor(k/2) seeds each: O1 spread over V1
    (scores of rho+), then O2 spread over V2 (negated scores of rho-), skipping stage-1 picks.
    """
    rho.check_size(P.n)
    cfg.validate(P.n)
    if cfg.k < 2:
        raise ValueError(f'individual InfMax needs k >= 2 (floor(k/2) seeds per opinion), got k={cfg.k}')
    half = cfg.k // 2
    candidates = rho.targets

    eps_1 = propagate_reverse(P, rho.positive_part(), cfg.t).values
    stage_1 = _top_among(eps_1, candidates, half)

    eps_2 = -propagate_reverse(P, rho.negative_part(), cfg.t).values
    stage_2 = _top_among(eps_2, np.setdiff1d(candidates, stage_1), half)

    entries = [(int(i), _membership_opinion(rho, i), eps_1[i]) for i in stage_1]
    entries += [(int(i), _membership_opinion(rho, i), eps_2[i]) for i in stage_2]
    return SeedSet(entries, cfg.k)
