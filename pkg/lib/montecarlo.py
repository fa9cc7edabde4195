"""
Random-walk estimate of voter-model opinions

C_t(u) is the expected value of sign(path) * C_0(v) over t-step walks that start at u and follow
edge (i, j) with probability |A_ij| / sum_l |A_il|; sinks hold the walker in place. This is an
independent check of the matrix propagation, not a fast path.

Walks run in blocks of WALK_BLOCK walks, block b drawing from a generator seeded by (rng_seed, b).
The block size is fixed, so the estimate depends only on (rng_seed, walks) and not on how blocks
are spread over worker processes.
"""

import logging
import math
import multiprocessing as mp
from typing import Tuple

import numpy as np

from lib.graph import SignedGraph
from lib.timer import AverageMeter

_logger = logging.getLogger(__name__)

WALK_BLOCK = 4096


class WalkTable(object):
    """
    Per-row transition keys: edge e of row i holds i + (cumulative |w| within row i) / row total,
    the last edge of a row exactly i + 1. A step from node i searches i + r, r uniform on [0, 1),
    so every row keeps full resolution whatever the weights of other rows.
    """

    def __init__(self, g: SignedGraph):
        self.indptr = np.asarray(g.indptr)
        self.indices = np.asarray(g.indices)
        self.sign = np.sign(g.weights)
        self.has_edges = g.out_degree > 0
        src = g.sources()
        magnitude = np.abs(g.weights)
        row_total = np.bincount(src, weights=magnitude, minlength=g.n)
        share = np.cumsum(magnitude / row_total[src])
        start = self.indptr[:-1]
        offset = np.where(start > 0, share[np.maximum(start - 1, 0)], 0.0)
        self.keys = src + np.clip(share - offset[src], 0.0, 1.0)
        last = self.indptr[1:][self.has_edges] - 1
        self.keys[last] = np.flatnonzero(self.has_edges) + 1.0

    def step(self, rng, position, sign):
        """advance every walker by one step in place"""
        moving = np.flatnonzero(self.has_edges[position])
        if moving.size == 0:
            return
        node = position[moving]
        edge = np.searchsorted(self.keys, node + rng.random(moving.size), side='right')
        # node + r can round up to node + 1 for large ids
        edge = np.clip(edge, self.indptr[node], self.indptr[node + 1] - 1)
        sign[moving] *= self.sign[edge]
        position[moving] = self.indices[edge]


def _run_block(args):
    """
    Summary (AverageMeter) of sign(path) * C_0(end) over one block of walks.
    """
    table, c0, u, t, size, rng_seed, block = args
    rng = np.random.default_rng([rng_seed, block])
    position = np.full(size, u, dtype=np.int64)
    sign = np.ones(size)
    for _ in range(t):
        table.step(rng, position, sign)
    values = sign * c0[position]
    mean = float(values.mean())
    return AverageMeter.from_summary(size, mean, float(np.sum((values - mean) ** 2)))


def estimate_opinion(g: SignedGraph, c0, u: int, t: int, walks: int, rng_seed: int,
                     threads: int = 1) -> Tuple[float, float]:
    """
    Monte-Carlo estimate of C_t(u).

    Args:
        g: signed graph
        c0: initial opinions (OpinionVector or array of length n)
        u (int): start node
        t (int): walk length
        walks (int): number of walks N >= 1
        rng_seed (int): base seed
        threads (int): worker processes

    Returns:
        (estimate, stderr)
    """
    c0 = np.asarray(getattr(c0, 'values', c0), dtype=np.float64)
    if c0.size != g.n:
        raise ValueError(f'initial opinions have length {c0.size}, graph has {g.n} nodes')
    if not 0 <= u < g.n:
        raise ValueError(f'start node {u} out of range for a graph with {g.n} nodes')
    if walks < 1:
        raise ValueError(f'need at least one walk, got {walks}')
    if t < 0:
        raise ValueError(f'walk length must be >= 0, got {t}')
    if t == 0 or g.edge_count == 0:
        return float(c0[u]), 0.0

    table = WalkTable(g)
    n_blocks = math.ceil(walks / WALK_BLOCK)
    jobs = [(table, c0, u, t, min(WALK_BLOCK, walks - b * WALK_BLOCK), rng_seed, b) for b in range(n_blocks)]
    if threads > 1 and n_blocks > 1:
        with mp.Pool(processes=min(threads, n_blocks)) as pool:
            summaries = pool.map(_run_block, jobs)
    else:
        summaries = [_run_block(job) for job in jobs]

    total = AverageMeter()
    for summary in summaries:
        total.merge(summary)
    mean, stderr, n = total.avg, total.stderr, total.count
    _logger.debug('walk estimate C_%d(%d) = %.6f +- %.2g over %d walks', t, u, mean, stderr, n)
    return mean, stderr
