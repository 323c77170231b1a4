"""
Execution layouts: turning a property graph relation into a CsrGraph.
"""
import numpy as np

from analytics.exceptions import MissingWeightColumn

from .csr import CsrGraph

OUT = 'out'
IN = 'in'
SYMMETRIZED = 'symmetrized'
DIRECTIONS = (OUT, IN, SYMMETRIZED)

WEIGHT_NONE = 'none'
WEIGHT_COLUMN = 'column'
WEIGHT_COUNT = 'count'
WEIGHTINGS = (WEIGHT_NONE, WEIGHT_COLUMN, WEIGHT_COUNT)


class NodeSpace(object):
    """
    Dense CSR ids for the nodes of a relation, optionally restricted to members.

    Bipartite relations place the destination label after the source label.
    """

    def __init__(self, pg, relation, members=None):
        labels = [relation.src_label]
        if relation.bipartite:
            labels.append(relation.dst_label)
        self.keys = []
        self.id_map = []
        self.remap = {}
        self.offset = {}
        for label in labels:
            table = pg.nodes[label]
            ids = np.arange(len(table)) if members is None else np.asarray(members.get(label, ()), dtype=np.int64)
            remap = np.full(len(table), -1, dtype=np.int64)
            remap[ids] = np.arange(len(ids)) + len(self.keys)
            self.remap[label] = remap
            self.offset[label] = len(self.keys)
            self.keys.extend(table.keys[i] for i in ids.tolist())
            self.id_map.extend((label, int(i)) for i in ids.tolist())

    @property
    def n(self):
        return len(self.keys)


def _collapse(n, sources, targets, weights):
    if not len(sources):
        return sources, targets, weights, np.zeros(0)
    pairs = sources * max(n, 1) + targets
    unique, inverse = np.unique(pairs, return_inverse=True)
    inverse = inverse.reshape(-1)
    counts = np.bincount(inverse).astype(np.float64)
    summed = None if weights is None else np.bincount(inverse, weights=weights)
    return unique // max(n, 1), unique % max(n, 1), summed, counts


def relation_csr(pg, relation_label, direction=OUT, weighting=WEIGHT_NONE, edge_ids=None, members=None):
    relation = pg.relation(relation_label)
    if direction not in DIRECTIONS:
        raise ValueError('direction must be one of %s' % ', '.join(DIRECTIONS))
    if weighting not in WEIGHTINGS:
        raise ValueError('weighting must be one of %s' % ', '.join(WEIGHTINGS))
    if weighting == WEIGHT_COLUMN and relation.weights is None:
        raise MissingWeightColumn('relation %r has no weight column' % relation_label)

    space = NodeSpace(pg, relation, members)
    if edge_ids is None:
        edge_ids = np.arange(len(relation))
    sources = space.remap[relation.src_label][relation.src_ids[edge_ids]]
    targets = space.remap[relation.dst_label][relation.dst_ids[edge_ids]]
    weights = relation.weights[edge_ids] if weighting == WEIGHT_COLUMN else None

    if direction == IN:
        sources, targets = targets, sources
    elif direction == SYMMETRIZED:
        loops = sources == targets
        sources, targets = (np.concatenate([sources, targets[~loops]]), np.concatenate([targets, sources[~loops]]))
        if weights is not None:
            weights = np.concatenate([weights, weights[~loops]])

    if direction == SYMMETRIZED or weighting == WEIGHT_COUNT:
        sources, targets, summed, counts = _collapse(space.n, sources, targets, weights)
        weights = counts if weighting == WEIGHT_COUNT else summed

    return CsrGraph.from_edges(
        space.n, sources, targets, weights,
        keys=space.keys, directed=relation.directed and direction != SYMMETRIZED, id_map=space.id_map,
    )


def to_csr(pg, relation_label, direction=OUT, weighting=WEIGHT_NONE):
    """
    Execution-ready adjacency of one relation.

    Rows are sorted by target id. ``symmetrized`` inserts both directions and keeps
    one entry per ordered pair; ``count`` weighting collapses parallel edges into
    their multiplicity.
    """
    return relation_csr(pg, relation_label, direction, weighting)
