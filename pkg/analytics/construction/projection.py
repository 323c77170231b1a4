import logging

import numpy as np
from scipy import sparse

from analytics.exceptions import ProjectionMismatch

from .extract import EdgeRelation, PropertyGraph

logger = logging.getLogger(__name__)


class ProjectionRule(object):
    """
    Two-hop projection: outer endpoints of ``left`` and ``right`` become linked when
    they share at least ``min_shared`` neighbors of the ``middle`` entity.
    """

    def __init__(self, left, right, middle, label, min_shared=1):
        if min_shared < 1:
            raise ProjectionMismatch('min_shared must be at least 1')
        self.left = left
        self.right = right
        self.middle = middle
        self.label = label
        self.min_shared = min_shared


def _incidence(pg, relation, middle):
    if relation.dst_label == middle:
        outer_label, outer_ids, middle_ids = relation.src_label, relation.src_ids, relation.dst_ids
    elif relation.src_label == middle:
        outer_label, outer_ids, middle_ids = relation.dst_label, relation.dst_ids, relation.src_ids
    else:
        raise ProjectionMismatch('relation %r does not touch entity %r' % (relation.label, middle))
    shape = (len(pg.nodes[outer_label]), len(pg.nodes[middle]))
    matrix = sparse.csr_matrix((np.ones(len(outer_ids)), (outer_ids, middle_ids)), shape=shape)
    # parallel edges count once
    matrix.data[:] = 1.0
    return outer_label, matrix


def project(pg, rule):
    """
    Return a new property graph holding ``pg``'s tables plus the projected relation.

    Edge weights are co-neighbor counts. Projecting an entity onto itself yields one
    undirected edge per unordered pair.
    """
    if rule.label in pg.relations:
        raise ProjectionMismatch('relation %r already exists' % rule.label)
    left_label, left = _incidence(pg, pg.relation(rule.left), rule.middle)
    right_label, right = _incidence(pg, pg.relation(rule.right), rule.middle)

    shared = (left @ right.T).tocoo()
    keep = shared.data >= rule.min_shared
    if left_label == right_label:
        keep &= shared.row < shared.col
    rows, cols, counts = shared.row[keep], shared.col[keep], shared.data[keep]
    order = np.lexsort((cols, rows))

    projected = PropertyGraph(pg.nodes, pg.relations)
    projected.skipped = dict(pg.skipped)
    projected.columns_read = dict(pg.columns_read)
    projected.relations[rule.label] = EdgeRelation(
        rule.label, left_label, right_label, rows[order], cols[order], counts[order], directed=False,
    )
    logger.info('projected %s over %s: %d edges (min_shared=%d)', rule.label, rule.middle, len(order), rule.min_shared)
    return projected
