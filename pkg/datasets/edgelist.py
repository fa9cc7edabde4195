"""
Edge-list and partition TSV ingestion

    edges:       src <TAB> dst <TAB> weight      ('#' lines are comments)
    partitions:  node <TAB> group                 (group 1 -> V1, group 2 -> V2)
"""

import logging
import math
from typing import Iterable, Optional

import numpy as np

from lib.graph import SignedGraph, PartitionVector

_logger = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Malformed input file; carries the 1-based line number when there is one."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f'line {lineno}: {message}'
        super(GraphFormatError, self).__init__(message)


class NodeIndex(object):
    """
    Mapping between sparse external node ids and dense 0-based ids (ascending external order).
    """

    def __init__(self, external_ids):
        external_ids = np.asarray(external_ids, dtype=np.int64)
        if np.any(np.diff(external_ids) <= 0):
            raise ValueError('external ids must be strictly increasing')
        self.external_ids = external_ids
        self._lookup = {int(e): i for i, e in enumerate(external_ids.tolist())}

    def __len__(self):
        return int(self.external_ids.size)

    def to_dense(self, external_id):
        try:
            return self._lookup[int(external_id)]
        except KeyError:
            raise ValueError(f'unknown node id {external_id}')

    def to_external(self, dense_id):
        return int(self.external_ids[dense_id])


def _data_lines(stream: Iterable[str]):
    """yield (lineno, fields) for every non-comment, non-blank line"""
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip('\r\n')
        if not line.strip() or line.lstrip().startswith('#'):
            continue
        yield lineno, line.split('\t')


def _parse_node_id(token, lineno):
    token = token.strip()
    if not (token.isascii() and token.isdigit()):
        raise GraphFormatError(f"node id must be a non-negative integer, got '{token}'", lineno)
    return int(token)


def parse_edge_list(stream: Iterable[str], remap: bool = False):
    """
    Parse a signed edge list.

    Args:
        stream: iterable of text lines (an open file works)
        remap (bool): map sparse external ids onto 0..n-1; returns (graph, NodeIndex) when set

    Returns:
        SignedGraph over nodes 0..max_id (or (SignedGraph, NodeIndex) with remap)
    """
    src, dst, weights, linenos = [], [], [], []
    for lineno, fields in _data_lines(stream):
        if len(fields) != 3:
            raise GraphFormatError(f'expected 3 tab-separated fields, got {len(fields)}', lineno)
        s = _parse_node_id(fields[0], lineno)
        d = _parse_node_id(fields[1], lineno)
        try:
            w = float(fields[2])
        except ValueError:
            raise GraphFormatError(f"weight is not a number: '{fields[2].strip()}'", lineno)
        if not math.isfinite(w):
            raise GraphFormatError(f'weight must be finite, got {fields[2].strip()}', lineno)
        if w == 0.0:
            raise GraphFormatError('weight must be nonzero (a zero entry means no edge)', lineno)
        src.append(s)
        dst.append(d)
        weights.append(w)
        linenos.append(lineno)

    if not src:
        raise GraphFormatError('empty graph: no edges in input')

    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    index = None
    if remap:
        external, inverse = np.unique(np.concatenate([src, dst]), return_inverse=True)
        index = NodeIndex(external)
        src, dst = inverse[:src.size], inverse[src.size:]
        n = len(index)
    else:
        n = int(max(src.max(), dst.max())) + 1

    # report the first repeated pair with the line that repeats it
    order = np.lexsort((dst, src))
    dup = (src[order][1:] == src[order][:-1]) & (dst[order][1:] == dst[order][:-1])
    if dup.any():
        pair = order[np.flatnonzero(dup) + 1]
        first = int(pair[np.argmin(np.asarray(linenos)[pair])])
        raise GraphFormatError(f'duplicate edge ({src[first]}, {dst[first]})', linenos[first])

    graph = SignedGraph.from_edges(n, src, dst, weights)
    _logger.debug('parsed %r', graph)
    if remap:
        return graph, index
    return graph


def parse_partitions(stream: Iterable[str], n: int, index: Optional[NodeIndex] = None) -> PartitionVector:
    """
    Parse `node <TAB> group` lines; unlisted nodes stay untargeted.
    """
    labels = np.zeros(n, dtype=np.int8)
    seen = dict()
    for lineno, fields in _data_lines(stream):
        if len(fields) != 2:
            raise GraphFormatError(f'expected 2 tab-separated fields, got {len(fields)}', lineno)
        node = _parse_node_id(fields[0], lineno)
        group = fields[1].strip()
        if group not in ('1', '2'):
            raise GraphFormatError(f"group must be 1 or 2, got '{group}'", lineno)
        if index is not None:
            try:
                node = index.to_dense(node)
            except ValueError as e:
                raise GraphFormatError(str(e), lineno)
        elif node >= n:
            raise GraphFormatError(f'node id {node} out of range for a graph with {n} nodes', lineno)
        if node in seen:
            raise GraphFormatError(f'node {fields[0].strip()} listed twice (first on line {seen[node]}); '
                                   f'V1 and V2 must be disjoint', lineno)
        seen[node] = lineno
        labels[node] = 1 if group == '1' else -1
    return PartitionVector(labels)


def write_edge_list(g: SignedGraph, stream, index: Optional[NodeIndex] = None):
    """
    Serialize in parse_edge_list's format; repr() gives the shortest float that round-trips exactly.
    """
    for s, d, w in zip(g.sources().tolist(), g.indices.tolist(), g.weights.tolist()):
        if index is not None:
            s, d = index.to_external(s), index.to_external(d)
        stream.write(f'{s}\t{d}\t{w!r}\n')


def write_partitions(rho: PartitionVector, stream, index: Optional[NodeIndex] = None):
    for node, label in enumerate(rho.labels.tolist()):
        if label == 0:
            continue
        if index is not None:
            node = index.to_external(node)
        stream.write(f'{node}\t{1 if label > 0 else 2}\n')


def load_graph(path, remap=False):
    with open(path, 'r') as f:
        return parse_edge_list(f, remap=remap)


def load_partitions(path, n, index=None):
    with open(path, 'r') as f:
        return parse_partitions(f, n, index=index)
