import logging

import numpy as np
from scipy import sparse

from analytics.exceptions import EmptyGraph, EmptySeedSet, ParameterOutOfRange

from .results import NodeScores, NodeSet

logger = logging.getLogger(__name__)

DEFAULT_DAMPING = 0.85
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200


def _transposed_transition(g, weighted):
    n = g.n
    if weighted and g.weights is not None:
        data = g.weights
    else:
        data = np.ones(len(g.targets))
    adjacency = sparse.csr_matrix((data, g.targets, g.offsets), shape=(n, n))
    out_mass = np.asarray(adjacency.sum(axis=1)).ravel()
    dangling = out_mass <= 0
    inverse = np.zeros(n)
    inverse[~dangling] = 1.0 / out_mass[~dangling]
    transition = sparse.diags(inverse) @ adjacency
    return transition.T.tocsr(), dangling


def _power_iteration(g, teleport, damping, tol, max_iter, weighted):
    if not 0.0 < damping < 1.0:
        raise ParameterOutOfRange('damping must lie in (0, 1), got %r' % damping, param='damping')
    if max_iter < 1:
        raise ParameterOutOfRange('max_iter must be positive', param='max_iter')
    transition_t, dangling = _transposed_transition(g, weighted)
    x = teleport.copy()
    delta = float('inf')
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        dangling_mass = x[dangling].sum()
        new = damping * (transition_t @ x) + (damping * dangling_mass + (1.0 - damping)) * teleport
        delta = float(np.abs(new - x).sum())
        x = new
        if delta < tol:
            converged = True
            break
    if not converged:
        logger.info('power iteration stopped after %d iterations, L1 delta %.3g', iterations, delta)
    return NodeScores(x, g.keys, converged=converged, iterations=iterations, delta=delta)


def pagerank(g, damping=DEFAULT_DAMPING, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, weighted=False):
    """
    PageRank by power iteration with a uniform teleport.

    Dangling mass is redistributed uniformly. ``converged`` on the result is only
    set when the final L1 delta is below ``tol``.
    """
    if g.n < 1:
        raise EmptyGraph('pagerank needs at least one node')
    teleport = np.full(g.n, 1.0 / g.n)
    return _power_iteration(g, teleport, damping, tol, max_iter, weighted)


def personalized_pagerank(g, seeds, damping=DEFAULT_DAMPING, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                          weighted=False):
    """
    PageRank whose teleport (and dangling mass) goes uniformly to ``seeds``.
    """
    if g.n < 1:
        raise EmptyGraph('personalized pagerank needs at least one node')
    seed_ids = sorted({g.index_of(s) for s in seeds})
    if not seed_ids:
        raise EmptySeedSet('personalized pagerank needs at least one seed')
    teleport = np.zeros(g.n)
    teleport[seed_ids] = 1.0 / len(seed_ids)
    return _power_iteration(g, teleport, damping, tol, max_iter, weighted)


def top_k(scores, k):
    """
    The ``k`` best scored nodes, descending by score with ties broken by node id.
    """
    if k < 1:
        raise ParameterOutOfRange('k must be at least 1', param='k')
    ids = np.arange(len(scores.values))
    order = np.lexsort((ids, -scores.values))[:k]
    return NodeSet([scores.keys[i] for i in order], scores=[float(scores.values[i]) for i in order])
