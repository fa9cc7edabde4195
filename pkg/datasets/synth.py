"""
Synthetic signed graphs

Two-block generators make the long-term dynamics premises true by construction:
    balanced       intra-partition edges positive, inter-partition edges negative
    anti-balanced  intra-partition edges negative, inter-partition edges positive
V1 holds nodes 0..n1-1 and V2 holds n1..n1+n2-1. Edges are drawn row by row (binomial out-degree,
then distinct targets), so memory is O(n + |E|) even for graphs with millions of edges.
"""

import logging
from typing import Tuple

import numpy as np

from lib.graph import SignedGraph, PartitionVector
from lib.utils import make_rng

_logger = logging.getLogger(__name__)

DEFAULT_WEIGHT_RANGE = (0.0, 1.0)


def _check_probability(name, p, allow_zero=False):
    lo_ok = p >= 0 if allow_zero else p > 0
    if not (lo_ok and p <= 1):
        interval = '[0, 1]' if allow_zero else '(0, 1]'
        raise ValueError(f'{name} must be in {interval}, got {p}')


def _check_weight_range(weight_range):
    low, high = weight_range
    if not 0 <= low < high:
        raise ValueError(f'weight range must satisfy 0 <= low < high, got {weight_range}')


def _magnitudes(rng, size, weight_range):
    """uniform on (low, high], never zero"""
    low, high = weight_range
    return high - rng.uniform(0.0, high - low, size=size)


def _sample_block(rng, sources, lo, hi, p):
    """
    Independent edges i -> j with probability p for i in `sources`, j in [lo, hi), j != i.

    Returns (src, dst) arrays.
    """
    sources = np.asarray(sources, dtype=np.int64)
    width = hi - lo
    inside = (sources >= lo) & (sources < hi)
    pool = width - inside.astype(np.int64)
    degree = rng.binomial(pool, p)
    src = np.repeat(sources, degree)
    dst = np.empty(int(degree.sum()), dtype=np.int64)
    pos = 0
    for i, d, m, own in zip(sources.tolist(), degree.tolist(), pool.tolist(), inside.tolist()):
        if d == 0:
            continue
        picks = rng.choice(m, size=d, replace=False)
        picks.sort()
        if own:
            # slot (i - lo) is skipped to exclude the self-loop
            picks[picks >= i - lo] += 1
        dst[pos:pos + d] = picks + lo
        pos += d
    return src, dst


def _two_block(n1, n2, p_intra, p_inter, weight_range, rng_seed, ensure_strong, intra_sign):
    if n1 < 1 or n2 < 1:
        raise ValueError(f'both partitions need at least one node, got n1={n1}, n2={n2}')
    _check_probability('p_intra', p_intra)
    _check_probability('p_inter', p_inter)
    _check_weight_range(weight_range)
    rng = make_rng(rng_seed)
    n = n1 + n2
    v1, v2 = np.arange(n1), np.arange(n1, n)

    parts = [
        _sample_block(rng, v1, 0, n1, p_intra),
        _sample_block(rng, v1, n1, n, p_inter),
        _sample_block(rng, v2, n1, n, p_intra),
        _sample_block(rng, v2, 0, n1, p_inter),
    ]
    src = np.concatenate([s for s, _ in parts])
    dst = np.concatenate([d for _, d in parts])

    if ensure_strong:
        # directed cycle 0 -> 1 -> ... -> n-1 -> 0, only links not already drawn are added
        cyc_src = np.arange(n, dtype=np.int64)
        cyc_dst = (cyc_src + 1) % n
        keep = cyc_src != cyc_dst
        existing = set(zip(src.tolist(), dst.tolist()))
        new = [(s, d) for s, d in zip(cyc_src[keep].tolist(), cyc_dst[keep].tolist()) if (s, d) not in existing]
        if new:
            src = np.concatenate([src, np.array([s for s, _ in new], dtype=np.int64)])
            dst = np.concatenate([dst, np.array([d for _, d in new], dtype=np.int64)])

    same_side = (src < n1) == (dst < n1)
    sign = np.where(same_side, intra_sign, -intra_sign).astype(np.float64)
    weights = sign * _magnitudes(rng, src.size, weight_range)
    rho = PartitionVector.from_groups(n, v1, v2)
    g = SignedGraph.from_edges(n, src, dst, weights)
    _logger.debug('generated %r with %r', g, rho)
    return g, rho


def gen_balanced(n1, n2, p_intra, p_inter, weight_range=DEFAULT_WEIGHT_RANGE, rng_seed=0,
                 ensure_strong=True) -> Tuple[SignedGraph, PartitionVector]:
    """
    Socially balanced two-partition graph: positive inside V1 and V2, negative across.

    Args:
        n1, n2 (int): partition sizes
        p_intra, p_inter (float): edge probabilities inside / across partitions, in (0, 1]
        weight_range (tuple): magnitudes are uniform on (low, high]
        rng_seed (int): generator seed
        ensure_strong (bool): add a directed cycle through all nodes so the graph is strongly connected
    """
    return _two_block(n1, n2, p_intra, p_inter, weight_range, rng_seed, ensure_strong, intra_sign=1.0)


def gen_anti_balanced(n1, n2, p_intra, p_inter, weight_range=DEFAULT_WEIGHT_RANGE, rng_seed=0,
                      ensure_strong=True) -> Tuple[SignedGraph, PartitionVector]:
    """
    Anti-balanced two-partition graph: negative inside V1 and V2, positive across.
    """
    return _two_block(n1, n2, p_intra, p_inter, weight_range, rng_seed, ensure_strong, intra_sign=-1.0)


def gen_random_signed(n, p_edge, p_negative, rng_seed=0, weight_range=DEFAULT_WEIGHT_RANGE) -> SignedGraph:
    """
    Directed graph without self-loops, each ordered pair an edge with probability p_edge,
    each edge negative with probability p_negative.
    """
    if n < 1:
        raise ValueError(f'n must be >= 1, got {n}')
    _check_probability('p_edge', p_edge, allow_zero=True)
    _check_probability('p_negative', p_negative, allow_zero=True)
    _check_weight_range(weight_range)
    rng = make_rng(rng_seed)
    src, dst = _sample_block(rng, np.arange(n), 0, n, p_edge)
    sign = np.where(rng.random(src.size) < p_negative, -1.0, 1.0)
    weights = sign * _magnitudes(rng, src.size, weight_range)
    return SignedGraph.from_edges(n, src, dst, weights)


def sample_targets(n, fraction, rng_seed, split=0.5) -> PartitionVector:
    """
    Pick floor(fraction * n) targets uniformly, the first `split` share of the draw forming V1.
    """
    if not 0 < fraction <= 1:
        raise ValueError(f'target fraction must be in (0, 1], got {fraction}')
    count = max(1, int(np.floor(fraction * n)))
    picks = make_rng(rng_seed).choice(n, size=count, replace=False)
    cut = int(round(count * split))
    return PartitionVector.from_groups(n, picks[:cut], picks[cut:])


def sign_pattern_holds(c, rho: PartitionVector, flipped=False, slack=1e-12) -> bool:
    """
    C >= 0 on V1 and C <= 0 on V2 (the reverse when `flipped`), up to `slack`.
    """
    c = np.asarray(getattr(c, 'values', c), dtype=np.float64)
    side = -1.0 if flipped else 1.0
    oriented = side * c * rho.as_float()
    return bool(np.all(oriented[rho.labels != 0] >= -slack))
