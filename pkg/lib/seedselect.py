"""
Exact top-k seed selection for two contrasting opinions

The campaign objective rho^T C_t is linear in the seed vector, so it splits into independent
per-seed contributions eps_t(i) (one reverse propagation computes all of them). Seeding the k
nodes with the largest |eps_t(i)|, each with the opinion matching the sign of eps_t(i), is optimal.
brute_force_best re-derives the optimum by exhaustive simulation for small instances.
"""

import csv
import heapq
import io
import itertools
import json
import logging
import math
from enum import IntEnum
from typing import List, NamedTuple, Tuple

import numpy as np
from tqdm import tqdm

from lib.graph import PartitionVector
from lib.propagation import TransitionMatrix, propagate_forward, propagate_batch, propagate_reverse

_logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_NODES = 20
BRUTE_FORCE_MAX_CANDIDATES = 10 ** 6


class InstanceTooLargeError(ValueError):
    pass


class Opinion(IntEnum):
    O1 = 1
    O2 = -1

    @classmethod
    def parse(cls, text):
        try:
            return cls[str(text).strip().upper()]
        except KeyError:
            raise ValueError(f"opinion must be O1 or O2, got '{text}'")

    @classmethod
    def for_score(cls, score):
        # zero falls through to O2, like the else-branch of the selection loop
        return cls.O1 if score > 0 else cls.O2


class SeedEntry(NamedTuple):
    node: int
    opinion: Opinion
    score: float


class CampaignConfig(NamedTuple):
    t: int
    k: int

    def validate(self, n):
        if self.t < 0:
            raise ValueError(f'horizon t must be >= 0, got {self.t}')
        if self.k < 1:
            raise ValueError(f'seed budget k must be >= 1, got {self.k}')
        if self.k > n:
            raise ValueError(f'seed budget k={self.k} exceeds the number of nodes n={n}')
        return self


class SeedSet(object):
    """
    At most k distinct seeds, each with one opinion. Entries are kept sorted by score
    (descending), ties by node id (ascending).
    """

    def __init__(self, entries, k):
        entries = [SeedEntry(int(e[0]), Opinion(e[1]), float(e[2])) for e in entries]
        entries.sort(key=lambda e: (-e.score, e.node))
        nodes = [e.node for e in entries]
        if any(node < 0 for node in nodes):
            raise ValueError(f'seed node ids must be non-negative, got {min(nodes)}')
        if len(set(nodes)) != len(nodes):
            raise ValueError('seed nodes must be distinct')
        if len(entries) > k:
            raise ValueError(f'{len(entries)} seeds exceed the budget k={k}')
        self.entries = entries
        self.k = int(k)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def nodes(self):
        return [e.node for e in self.entries]

    @property
    def omega1(self):
        return sorted(e.node for e in self.entries if e.opinion == Opinion.O1)

    @property
    def omega2(self):
        return sorted(e.node for e in self.entries if e.opinion == Opinion.O2)

    @property
    def predicted_objective(self):
        return float(sum(e.score for e in self.entries))

    def to_vector(self, n):
        """the seed vector e: +1 for O1 seeds, -1 for O2 seeds, 0 elsewhere"""
        e = np.zeros(n, dtype=np.float64)
        for entry in self.entries:
            if entry.node >= n:
                raise ValueError(f'seed node {entry.node} out of range for a graph with {n} nodes')
            e[entry.node] = float(entry.opinion)
        return e

    def to_records(self):
        return [{'node': e.node, 'opinion': e.opinion.name, 'score': e.score} for e in self.entries]

    def to_json(self):
        return json.dumps(self.to_records(), indent=2)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(['node', 'opinion', 'score'])
        for e in self.entries:
            writer.writerow([e.node, e.opinion.name, repr(e.score)])
        return buf.getvalue()

    def save(self, path):
        with open(path, 'w') as f:
            f.write(self.to_csv() if str(path).endswith('.csv') else self.to_json() + '\n')

    @classmethod
    def from_records(cls, records, k=None):
        entries = [(int(r['node']), Opinion.parse(r['opinion']), float(r.get('score') or 0.0)) for r in records]
        return cls(entries, len(entries) if k is None else k)

    @classmethod
    def load(cls, path, k=None):
        with open(path, 'r') as f:
            if str(path).endswith('.csv'):
                return cls.from_records(list(csv.DictReader(f)), k)
            text = f.read().strip()
            return cls.from_records(json.loads(text) if text else [], k)

    def __repr__(self):
        return f'SeedSet(k={self.k}, |O1|={len(self.omega1)}, |O2|={len(self.omega2)})'


def parse_budget(text, n):
    """
    '25' -> 25 seeds, '5%' -> 5 percent of the n users (at least one)
    """
    text = str(text).strip()
    if text.endswith('%'):
        pct = float(text[:-1])
        if not 0 < pct <= 100:
            raise ValueError(f'budget percentage must be in (0, 100], got {text}')
        return max(1, int(math.floor(n * pct / 100.0)))
    return int(text)


def top_k_by_magnitude(scores: np.ndarray, k: int) -> List[int]:
    """
    Ids of the k largest |scores|, ties to the lower id.

    A partition pass keeps only nodes whose magnitude reaches the k-th largest value (all ties
    included); those candidates go through a size-k heap in ascending id order.
    """
    magnitude = np.abs(scores)
    n = magnitude.size
    if k >= n:
        candidates = np.arange(n)
    else:
        kth = np.partition(magnitude, n - k)[n - k]
        candidates = np.flatnonzero(magnitude >= kth)
    return heapq.nlargest(k, candidates.tolist(), key=magnitude.__getitem__)


def _check_campaign(P: TransitionMatrix, rho: PartitionVector, cfg: CampaignConfig):
    rho.check_size(P.n)
    rho.require_targets()
    cfg.validate(P.n)


def cosinemax(P: TransitionMatrix, rho: PartitionVector, cfg: CampaignConfig) -> SeedSet:
    """
    Top-k seeds maximizing rho^T C_t, with the opinion of each seed.

    Args:
        P: transition matrix of the graph
        rho: target partition vector (at least one targeted node)
        cfg: horizon t and budget k

    Returns:
        SeedSet whose entries carry |eps_t(i)|; predicted_objective is the achieved rho^T C_t
    """
    _check_campaign(P, rho, cfg)
    eps = propagate_reverse(P, rho, cfg.t).values
    chosen = top_k_by_magnitude(eps, cfg.k)
    seeds = SeedSet([(i, Opinion.for_score(eps[i]), abs(eps[i])) for i in chosen], cfg.k)
    _logger.debug('cosinemax t=%d k=%d objective=%.6g', cfg.t, cfg.k, seeds.predicted_objective)
    return seeds


def simulate_objective(P: TransitionMatrix, rho: PartitionVector, seeds: SeedSet, t: int) -> float:
    """rho^T C_t obtained by forward-simulating the seed vector"""
    rho.check_size(P.n)
    c_t = propagate_forward(P, seeds.to_vector(P.n), t)
    return float(np.dot(rho.as_float(), c_t.values))


def individual_influence(P: TransitionMatrix, rho: PartitionVector, t: int, node: int, opinion) -> float:
    """rho^T C_t when `node` is the only seed, holding `opinion`"""
    seeds = SeedSet([(node, Opinion(opinion), 0.0)], 1)
    return simulate_objective(P, rho, seeds, t)


def all_targets_seedset(rho: PartitionVector) -> SeedSet:
    """every target seeded with its own partition's opinion"""
    targets = rho.targets
    entries = [(int(i), Opinion(int(rho.labels[i])), 0.0) for i in targets]
    return SeedSet(entries, max(len(entries), 1))


def brute_force_best(P: TransitionMatrix, rho: PartitionVector, cfg: CampaignConfig,
                     verbose: bool = False) -> Tuple[float, SeedSet]:
    """
    Exhaustive optimum over every k-subset of nodes and every opinion assignment, each evaluated
    by forward simulation of its +-1 seed vector. Small instances only.
    """
    rho.check_size(P.n)
    cfg.validate(P.n)
    n, k = P.n, cfg.k
    n_candidates = math.comb(n, k) * 2 ** k
    if n > BRUTE_FORCE_MAX_NODES or n_candidates > BRUTE_FORCE_MAX_CANDIDATES:
        raise InstanceTooLargeError(
            f'brute force needs n <= {BRUTE_FORCE_MAX_NODES} and C(n,k)*2^k <= {BRUTE_FORCE_MAX_CANDIDATES}, '
            f'got n={n}, k={k} ({n_candidates} candidates)')

    r = rho.as_float()
    # columns: every opinion assignment of one subset
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=k))).T  # [k, 2^k]
    best_value, best_seeds = -math.inf, None
    for subset in tqdm(itertools.combinations(range(n), k), total=math.comb(n, k), disable=not verbose):
        block = np.zeros((n, signs.shape[1]))
        block[list(subset), :] = signs
        values = r @ propagate_batch(P, block, cfg.t)
        j = int(np.argmax(values))
        if values[j] > best_value:
            best_value = float(values[j])
            best_seeds = [(node, Opinion(int(s)), 0.0) for node, s in zip(subset, signs[:, j])]
    return best_value, SeedSet(best_seeds, k)
