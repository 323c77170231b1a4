import numpy as np

from analytics.exceptions import ParameterOutOfRange

from .results import NodeSet


def khop(g, seeds, k):
    """
    Nodes within ``k`` out-hops of any seed, in node id order.

    The induced edge count of the returned set is recorded on the NodeSet.
    """
    if k < 0:
        raise ParameterOutOfRange('k must be non-negative', param='k')
    reached = np.zeros(g.n, dtype=bool)
    frontier = np.unique(np.array([g.index_of(s) for s in seeds], dtype=np.int64))
    reached[frontier] = True
    for _ in range(k):
        if not len(frontier):
            break
        starts = g.offsets[frontier]
        ends = g.offsets[frontier + 1]
        neighbors = np.concatenate([g.targets[a:b] for a, b in zip(starts, ends)])
        neighbors = np.unique(neighbors)
        frontier = neighbors[~reached[neighbors]]
        reached[frontier] = True
    members = np.flatnonzero(reached)
    sources = g.sources()
    induced = int(np.count_nonzero(reached[sources] & reached[g.targets])) if g.edge_count else 0
    return NodeSet([g.keys[i] for i in members], edge_count=induced)
