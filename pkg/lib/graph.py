"""
Signed graph data model

SignedGraph stores the weighted adjacency A in compressed sparse row layout (rows = source
nodes, columns sorted per row). A+ and A- are derived on demand and never stored.
PartitionVector holds the per-node target labels rho in {+1, -1, 0}.
"""

import logging
from collections import Counter
from typing import Dict, Tuple

import numpy as np
import scipy.sparse as sp

_logger = logging.getLogger(__name__)


def _frozen(array, dtype):
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


class SignedGraph(object):
    """
    Immutable directed graph with nonzero, finite, signed edge weights.

    Args:
        n (int): number of nodes, ids are 0..n-1
        indptr (np.ndarray): [n+1] row pointers
        indices (np.ndarray): [E] target ids, sorted within each row
        weights (np.ndarray): [E] signed weights A_ij
    """

    def __init__(self, n, indptr, indices, weights):
        if n < 1:
            raise ValueError(f'graph must have at least one node, got n={n}')
        self._n = int(n)
        self._indptr = _frozen(indptr, np.int64)
        self._indices = _frozen(indices, np.int64)
        self._weights = _frozen(weights, np.float64)
        self._validate()
        self._out_degree = _frozen(np.diff(self._indptr), np.int64)
        self._positive_count = int(np.count_nonzero(self._weights > 0))
        self._adjacency = None

    @classmethod
    def from_edges(cls, n, src, dst, weights):
        """
        Build from parallel edge arrays (any order). Duplicate (src, dst) pairs are an error.
        """
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        weights = np.asarray(weights, dtype=np.float64)
        if not (src.shape == dst.shape == weights.shape) or src.ndim != 1:
            raise ValueError('src, dst and weights must be 1-d arrays of equal length')
        if src.size and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise ValueError(f'edge endpoint outside 0..{n - 1}')

        order = np.lexsort((dst, src))
        src, dst, weights = src[order], dst[order], weights[order]
        dup = (src[1:] == src[:-1]) & (dst[1:] == dst[:-1])
        if dup.any():
            k = int(np.flatnonzero(dup)[0])
            raise ValueError(f'duplicate edge ({src[k]}, {dst[k]})')

        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst, weights)

    def _validate(self):
        n, indptr, indices, weights = self._n, self._indptr, self._indices, self._weights
        if indptr.shape != (n + 1,) or indptr[0] != 0 or np.any(np.diff(indptr) < 0):
            raise ValueError('malformed row pointer array')
        if indices.shape != weights.shape or indptr[-1] != indices.size:
            raise ValueError('row pointers do not match the edge arrays')
        if indices.size:
            if indices.min() < 0 or indices.max() >= n:
                raise ValueError(f'edge target outside 0..{n - 1}')
            if not np.all(np.isfinite(weights)):
                raise ValueError('edge weights must be finite')
            if np.any(weights == 0):
                raise ValueError('edge weights must be nonzero')
            # within a row targets must be strictly increasing (sorted, no duplicates)
            step = np.diff(indices)
            row_start = np.zeros(indices.size, dtype=bool)
            row_start[indptr[:-1][np.diff(indptr) > 0]] = True
            if np.any((step <= 0) & ~row_start[1:]):
                raise ValueError('targets must be sorted and unique within each row')

    @property
    def n(self):
        return self._n

    @property
    def indptr(self):
        return self._indptr

    @property
    def indices(self):
        return self._indices

    @property
    def weights(self):
        return self._weights

    @property
    def edge_count(self):
        return int(self._indices.size)

    @property
    def positive_count(self):
        return self._positive_count

    @property
    def negative_count(self):
        return self.edge_count - self._positive_count

    @property
    def out_degree(self):
        return self._out_degree

    @property
    def sinks(self):
        """ids of nodes with zero out-degree"""
        return np.flatnonzero(self._out_degree == 0)

    def sources(self):
        """[E] source id of every edge, in storage order"""
        return np.repeat(np.arange(self._n, dtype=np.int64), self._out_degree)

    def neighbors(self, i) -> Tuple[np.ndarray, np.ndarray]:
        lo, hi = self._indptr[i], self._indptr[i + 1]
        return self._indices[lo:hi], self._weights[lo:hi]

    def adjacency(self):
        """A as a scipy CSR matrix sharing the (read-only) edge arrays"""
        if self._adjacency is None:
            self._adjacency = sp.csr_matrix((self._weights, self._indices, self._indptr),
                                            shape=(self._n, self._n))
        return self._adjacency

    def positive_part(self):
        """A+ : magnitudes of the positive entries"""
        return self._signed_part(self._weights > 0)

    def negative_part(self):
        """A- : magnitudes of the negative entries"""
        return self._signed_part(self._weights < 0)

    def _signed_part(self, mask):
        data = np.where(mask, np.abs(self._weights), 0.0)
        part = sp.csr_matrix((data, self._indices.copy(), self._indptr.copy()), shape=(self._n, self._n))
        part.eliminate_zeros()
        return part

    def __repr__(self):
        return (f'SignedGraph(n={self.n}, edges={self.edge_count}, '
                f'positive={self.positive_count}, negative={self.negative_count})')


class PartitionVector(object):
    """
    Target labels: +1 for V1, -1 for V2, 0 for untargeted nodes.
    One label per node, so V1 and V2 are disjoint by construction.
    """

    def __init__(self, labels):
        labels = np.asarray(labels)
        if labels.ndim != 1 or labels.size < 1:
            raise ValueError('partition labels must be a non-empty 1-d array')
        if not np.all(np.isin(labels, (-1, 0, 1))):
            raise ValueError('partition labels must be in {-1, 0, +1}')
        self._labels = _frozen(labels, np.int8)

    @classmethod
    def from_groups(cls, n, v1, v2):
        labels = np.zeros(n, dtype=np.int8)
        v1, v2 = np.asarray(v1, dtype=np.int64), np.asarray(v2, dtype=np.int64)
        if np.intersect1d(v1, v2).size:
            raise ValueError('V1 and V2 must be disjoint')
        labels[v1] = 1
        labels[v2] = -1
        return cls(labels)

    @property
    def labels(self):
        return self._labels

    @property
    def n(self):
        return int(self._labels.size)

    @property
    def v1(self):
        return np.flatnonzero(self._labels == 1)

    @property
    def v2(self):
        return np.flatnonzero(self._labels == -1)

    @property
    def targets(self):
        """V1 u V2 in ascending id order"""
        return np.flatnonzero(self._labels != 0)

    @property
    def n_targets(self):
        return int(np.count_nonzero(self._labels))

    def as_float(self):
        return self._labels.astype(np.float64)

    def positive_part(self):
        """rho clamped to {0, +1}"""
        return PartitionVector(np.maximum(self._labels, 0))

    def negative_part(self):
        """rho clamped to {-1, 0}"""
        return PartitionVector(np.minimum(self._labels, 0))

    def require_targets(self):
        if self.n_targets == 0:
            raise ValueError('partition vector has no targeted node (V1 and V2 are both empty)')

    def check_size(self, n):
        if self.n != n:
            raise ValueError(f'partition vector has length {self.n}, graph has {n} nodes')

    def __repr__(self):
        return f'PartitionVector(n={self.n}, |V1|={self.v1.size}, |V2|={self.v2.size})'


def graph_stats(g: SignedGraph) -> Dict:
    """
    Node/edge counts, out-degree histogram and sink count, JSON-serializable
    """
    histogram = Counter(g.out_degree.tolist())
    return {
        'n': g.n,
        'edges': g.edge_count,
        'positive': g.positive_count,
        'negative': g.negative_count,
        'positive_fraction': g.positive_count / g.edge_count if g.edge_count else 0.0,
        'sinks': int(g.sinks.size),
        'out_degree_histogram': {str(d): c for d, c in sorted(histogram.items())},
    }


def edge_census(g: SignedGraph, rho: PartitionVector) -> Dict:
    """
    Count edges by sign and by whether they stay inside a target partition, cross between V1 and V2,
    or touch an untargeted node.
    """
    rho.check_size(g.n)
    src_label = rho.labels[g.sources()].astype(np.int64)
    dst_label = rho.labels[g.indices].astype(np.int64)
    positive = g.weights > 0
    relation = src_label * dst_label
    intra, inter, untargeted = relation > 0, relation < 0, relation == 0
    return {
        'intra_positive': int(np.count_nonzero(intra & positive)),
        'intra_negative': int(np.count_nonzero(intra & ~positive)),
        'inter_positive': int(np.count_nonzero(inter & positive)),
        'inter_negative': int(np.count_nonzero(inter & ~positive)),
        'untargeted': int(np.count_nonzero(untargeted)),
    }
