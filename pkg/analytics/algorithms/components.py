import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .results import NodeScores

WEAK = 'weak'
STRONG = 'strong'


def connected_components(g, mode=WEAK):
    """
    Label every node with the smallest id of its component.

    ``strong`` uses scipy's Pearce/Tarjan strongly connected components search.
    """
    if mode not in (WEAK, STRONG):
        raise ValueError('mode must be %r or %r' % (WEAK, STRONG))
    n = g.n
    if n == 0:
        return NodeScores([], (), labeling=True)
    matrix = sparse.csr_matrix((np.ones(len(g.targets)), g.targets, g.offsets), shape=(n, n))
    _, labels = csgraph.connected_components(matrix, directed=g.directed, connection=mode)
    representative = np.full(labels.max() + 1, n, dtype=np.int64)
    np.minimum.at(representative, labels, np.arange(n))
    return NodeScores(representative[labels].astype(np.float64), g.keys, labeling=True)


def component_sizes(labels):
    """
    Map representative id → component size for a labeling.
    """
    values, counts = np.unique(labels.values.astype(np.int64), return_counts=True)
    return dict(zip(values.tolist(), counts.tolist()))
