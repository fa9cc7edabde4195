"""
Voter-model propagation on a signed graph

P = D^-1 A with D = diag(|A| 1). Forward propagation iterates C_t = P C_{t-1}; reverse propagation
iterates eps = eps P starting from rho, giving every node's individual influence at horizon t.
Sink rows (zero out-degree) act as identity rows: the node keeps its opinion and a walk stays put.
P^t is never formed; each step is one sparse matrix-vector product.
"""

import logging
from typing import Iterator, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from lib.graph import SignedGraph, PartitionVector

_logger = logging.getLogger(__name__)

_BOUND_SLACK = 1e-12


class TransitionMatrix(object):
    """
    Row-normalized signed operator in CSR layout, plus the sink mask.

    The transpose is kept as its own CSR matrix so reverse steps are row-wise gathers
    with the same fixed reduction order as forward steps.
    """

    def __init__(self, matrix: sp.csr_matrix, sinks: np.ndarray):
        self.matrix = matrix
        self.matrix_t = matrix.transpose().tocsr()
        self.sinks = np.asarray(sinks, dtype=bool)
        self.sinks.setflags(write=False)

    @property
    def n(self):
        return int(self.matrix.shape[0])

    @property
    def nnz(self):
        return int(self.matrix.nnz)

    def row(self, i):
        """dense row i of P as seen by propagation (identity row for sinks)"""
        if self.sinks[i]:
            out = np.zeros(self.n)
            out[i] = 1.0
            return out
        return self.matrix.getrow(i).toarray().ravel()

    def to_dense(self):
        dense = self.matrix.toarray()
        idx = np.flatnonzero(self.sinks)
        dense[idx, idx] = 1.0
        return dense

    def save(self, path):
        """binary dump: n, nnz, then the CSR arrays and the sink mask"""
        np.savez(path, n=self.n, nnz=self.nnz, indptr=self.matrix.indptr, indices=self.matrix.indices,
                 data=self.matrix.data, sinks=self.sinks)

    @classmethod
    def load(cls, path):
        with np.load(path) as f:
            n, nnz = int(f['n']), int(f['nnz'])
            matrix = sp.csr_matrix((f['data'], f['indices'], f['indptr']), shape=(n, n))
            sinks = f['sinks']
        if matrix.nnz != nnz or sinks.shape != (n,):
            raise ValueError(f'corrupt transition dump {path}')
        return cls(matrix, sinks)

    def __repr__(self):
        return f'TransitionMatrix(n={self.n}, nnz={self.nnz}, sinks={int(self.sinks.sum())})'


class OpinionVector(object):
    """
    Per-node opinions C_t in [-1, 1].
    """

    def __init__(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError('opinion vector must be 1-d')
        if values.size and np.max(np.abs(values)) > 1.0 + _BOUND_SLACK:
            raise ValueError('opinion values must lie in [-1, 1]')
        self.values = values

    @property
    def n(self):
        return int(self.values.size)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f'OpinionVector(n={self.n}, sup={np.max(np.abs(self.values)) if self.n else 0.0:.4g})'


class InfluenceScores(object):
    """
    values[i] = eps_t(i), component i of rho^T P^t, at horizon t.
    """

    def __init__(self, values, t):
        self.values = np.asarray(values, dtype=np.float64)
        self.t = int(t)

    @property
    def n(self):
        return int(self.values.size)

    def __repr__(self):
        return f'InfluenceScores(n={self.n}, t={self.t})'


def build_transition(g: SignedGraph) -> TransitionMatrix:
    """
    P_ij = A_ij / sum_l |A_il| for rows with out-degree >= 1; zero-out-degree rows are flagged as sinks.
    """
    row_abs = np.bincount(g.sources(), weights=np.abs(g.weights), minlength=g.n)
    sinks = g.out_degree == 0
    row_abs[sinks] = 1.0
    data = g.weights / np.repeat(row_abs, g.out_degree)
    matrix = sp.csr_matrix((data, g.indices.copy(), g.indptr.copy()), shape=(g.n, g.n))
    P = TransitionMatrix(matrix, sinks)
    _logger.debug('built %r', P)
    return P


def _values(c, n):
    if isinstance(c, PartitionVector):
        values = c.as_float()
    elif isinstance(c, (OpinionVector, InfluenceScores)):
        values = c.values
    else:
        values = np.asarray(c, dtype=np.float64)
    if values.shape[0] != n:
        raise ValueError(f'vector has length {values.shape[0]}, transition matrix has {n} rows')
    return values


def _check_steps(t):
    if t < 0:
        raise ValueError(f'number of steps must be >= 0, got {t}')


def _forward_step(P: TransitionMatrix, x: np.ndarray) -> np.ndarray:
    y = P.matrix @ x
    y[P.sinks] = x[P.sinks]
    return y


def _reverse_step(P: TransitionMatrix, x: np.ndarray) -> np.ndarray:
    # (x^T P)^T = P^T x, plus the identity contribution of sink rows
    y = P.matrix_t @ x
    y[P.sinks] += x[P.sinks]
    return y


def iter_forward(P: TransitionMatrix, c0, t: int) -> Iterator[Tuple[int, np.ndarray]]:
    """
    Stream (s, C_s) for s = 0..t; only the current vector is held in memory.
    """
    _check_steps(t)
    x = _values(c0, P.n).copy()
    yield 0, x
    for s in range(1, t + 1):
        x = _forward_step(P, x)
        yield s, x


def propagate_forward(P: TransitionMatrix, c0, t: int, trajectory: bool = False):
    """
    C_t = P^t C_0.

    Args:
        P: transition matrix
        c0: OpinionVector or array of length n
        t (int): number of steps, >= 0
        trajectory (bool): return [C_1, ..., C_t] instead of only C_t

    Returns:
        OpinionVector (or list of OpinionVector)
    """
    if trajectory:
        return [OpinionVector(x) for s, x in iter_forward(P, c0, t) if s > 0]
    x = None
    for _, x in iter_forward(P, c0, t):
        pass
    return OpinionVector(x)


def propagate_batch(P: TransitionMatrix, C0: np.ndarray, t: int) -> np.ndarray:
    """
    Forward-propagate an [n, m] block of opinion vectors (one per column).
    """
    _check_steps(t)
    X = np.array(C0, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != P.n:
        raise ValueError(f'expected an [{P.n}, m] block, got shape {X.shape}')
    for _ in range(t):
        X = _forward_step(P, X)
    return X


def propagate_reverse(P: TransitionMatrix, rho, t: int) -> InfluenceScores:
    """
    rho^T P^t as a vector: the signed mass of reverse random walks from the targets ending at each node.
    """
    _check_steps(t)
    x = _values(rho, P.n).copy()
    for _ in range(t):
        x = _reverse_step(P, x)
    return InfluenceScores(x, t)


def write_trajectory_csv(P: TransitionMatrix, c0, t: int, stream, nodes: Optional[np.ndarray] = None):
    """
    Export `t,node,value` rows for s = 0..t (all nodes, or only `nodes`).
    """
    stream.write('t,node,value\n')
    for s, x in iter_forward(P, c0, t):
        ids = range(P.n) if nodes is None else nodes
        for i in ids:
            stream.write(f'{s},{int(i)},{float(x[i])!r}\n')
