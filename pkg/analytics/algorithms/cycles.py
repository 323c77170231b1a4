import logging
from collections import deque

import numpy as np

from analytics.exceptions import LengthBoundError, MissingWeightColumn

from .results import CycleSet

logger = logging.getLogger(__name__)

DEFAULT_MIN_LEN = 2
DEFAULT_MAX_LEN = 6
LENGTH_CAP = 8
MAX_CYCLES = 10000


def check_length_bounds(min_len, max_len, length_cap=LENGTH_CAP):
    if min_len < 2:
        raise LengthBoundError('min_len must be at least 2, got %d' % min_len, param='min_len')
    if max_len > length_cap:
        raise LengthBoundError('max_len %d exceeds the cap of %d' % (max_len, length_cap), param='max_len')
    if min_len > max_len:
        raise LengthBoundError('min_len %d is above max_len %d' % (min_len, max_len), param='max_len')


def _collapsed_adjacency(g, min_weight):
    """
    Unique successor lists (self-loops dropped) and the summed flow of every pair
    whose edges pass the weight filter.
    """
    sources = g.sources()
    targets = g.targets
    weights = g.weights if g.weights is not None else np.ones(len(targets))
    keep = sources != targets
    if min_weight is not None:
        if g.weights is None:
            raise MissingWeightColumn('a weight filter needs a weighted graph')
        keep &= weights >= min_weight
    flows = {}
    for u, v, w in zip(sources[keep].tolist(), targets[keep].tolist(), weights[keep].tolist()):
        flows[(u, v)] = flows.get((u, v), 0.0) + w
    successors = [[] for _ in range(g.n)]
    predecessors = [[] for _ in range(g.n)]
    for u, v in sorted(flows):
        successors[u].append(v)
        predecessors[v].append(u)
    return successors, predecessors, flows


def _distances_to(target, predecessors, allowed, limit):
    dist = {target: 0}
    queue = deque([target])
    while queue:
        v = queue.popleft()
        if dist[v] >= limit:
            continue
        for u in predecessors[v]:
            if u not in dist and allowed(u):
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


class _BoundedCycleSearch(object):
    """
    Depth-bounded simple cycle search rooted at one node.

    Extensions are pruned when the shortest way back to the root cannot close the
    cycle within ``max_len`` edges.
    """

    def __init__(self, successors, predecessors, min_len, max_len, budget):
        self.successors = successors
        self.predecessors = predecessors
        self.min_len = min_len
        self.max_len = max_len
        self.budget = budget
        self.found = []

    @property
    def exhausted(self):
        return len(self.found) >= self.budget

    def run(self, root, allowed):
        dist = _distances_to(root, self.predecessors, allowed, self.max_len)
        path = [root]
        on_path = {root}

        def visit(u):
            for v in self.successors[u]:
                if self.exhausted:
                    return
                if v == root:
                    if len(path) >= self.min_len:
                        self.found.append(tuple(path))
                    continue
                if v in on_path or v not in dist or len(path) + dist[v] > self.max_len:
                    continue
                path.append(v)
                on_path.add(v)
                visit(v)
                on_path.discard(v)
                path.pop()

        visit(root)


def canonical_rotation(cycle):
    i = cycle.index(min(cycle))
    return tuple(cycle[i:]) + tuple(cycle[:i])


def enumerate_cycles(g, min_len=DEFAULT_MIN_LEN, max_len=DEFAULT_MAX_LEN, anchor=None, min_weight=None,
                     max_cycles=MAX_CYCLES, length_cap=LENGTH_CAP):
    """
    All simple directed cycles with ``min_len <= length <= max_len``.

    Cycles are reported in canonical rotation (smallest node id first, traversal
    direction kept) and sorted lexicographically on those id sequences. With an
    ``anchor`` only cycles through that node are reported; ``min_weight`` drops
    edges lighter than the threshold before searching. At most ``max_cycles`` are
    returned and ``truncated`` tells whether the cap was hit.
    """
    check_length_bounds(min_len, max_len, length_cap)
    successors, predecessors, flows = _collapsed_adjacency(g, min_weight)
    search = _BoundedCycleSearch(successors, predecessors, min_len, max_len, max_cycles + 1)

    if anchor is not None:
        root = g.index_of(anchor)
        search.run(root, lambda v: True)
        found = sorted(canonical_rotation(c) for c in search.found)
    else:
        for root in range(g.n):
            if search.exhausted:
                break
            search.run(root, lambda v, root=root: v > root)
        found = sorted(search.found)

    truncated = len(found) > max_cycles
    if truncated:
        logger.warning('cycle enumeration truncated at %d cycles', max_cycles)
        found = found[:max_cycles]

    cycle_flows = None
    if g.weights is not None:
        cycle_flows = [[flows[(c[i], c[(i + 1) % len(c)])] for i in range(len(c))] for c in found]
    keyed = [[g.keys[v] for v in c] for c in found]
    return CycleSet(keyed, flows=cycle_flows, truncated=truncated)
