import threading

import numpy as np

from analytics.algorithms.results import CycleSet, NodeSet
from analytics.exceptions import InvalidNode, KindMismatch

from .layout import OUT, SYMMETRIZED, WEIGHT_COLUMN, WEIGHT_NONE, relation_csr


class StageGraphView(object):
    """
    An induced subgraph of one relation of a property graph.

    ``members`` maps entity label → sorted property graph ids, or is None for the
    full relation. An edge belongs to the view iff both endpoints are members.
    """

    def __init__(self, pg, relation_label, members=None, provenance=None):
        self.pg = pg
        self.relation_label = relation_label
        self.relation = pg.relation(relation_label)
        self.members = None if members is None else {
            label: np.unique(np.asarray(ids, dtype=np.int64)) for label, ids in members.items()
        }
        self.provenance = provenance
        self._edge_ids = None
        self._csr = {}
        self._lock = threading.Lock()

    @classmethod
    def full(cls, pg, relation_label, provenance=None):
        return cls(pg, relation_label, None, provenance)

    @property
    def labels(self):
        relation = self.relation
        return (relation.src_label, relation.dst_label) if relation.bipartite else (relation.src_label,)

    @property
    def directed(self):
        return self.relation.directed

    @property
    def weighted(self):
        return self.relation.weights is not None

    def _mask(self, label):
        size = len(self.pg.nodes[label])
        if self.members is None:
            return np.ones(size, dtype=bool)
        mask = np.zeros(size, dtype=bool)
        mask[self.members.get(label, np.zeros(0, dtype=np.int64))] = True
        return mask

    @property
    def edge_ids(self):
        if self._edge_ids is None:
            relation = self.relation
            if self.members is None:
                self._edge_ids = np.arange(len(relation))
            else:
                keep = self._mask(relation.src_label)[relation.src_ids]
                keep &= self._mask(relation.dst_label)[relation.dst_ids]
                self._edge_ids = np.flatnonzero(keep)
        return self._edge_ids

    @property
    def node_count(self):
        return sum(int(self._mask(label).sum()) for label in self.labels)

    @property
    def edge_count(self):
        return len(self.edge_ids)

    @property
    def node_keys(self):
        keys = []
        for label in self.labels:
            table = self.pg.nodes[label]
            keys.extend(table.keys[i] for i in np.flatnonzero(self._mask(label)).tolist())
        return keys

    def csr(self, direction=None, weighting=None):
        """
        The view laid out as a CsrGraph; layouts are built once per view.

        Undirected relations default to the symmetrized layout.
        """
        if direction is None:
            direction = OUT if self.directed else SYMMETRIZED
        if weighting is None:
            weighting = WEIGHT_COLUMN if self.weighted else WEIGHT_NONE
        key = (direction, weighting)
        with self._lock:
            if key not in self._csr:
                self._csr[key] = relation_csr(
                    self.pg, self.relation_label, direction, weighting,
                    edge_ids=self.edge_ids, members=self.members,
                )
            return self._csr[key]

    def edge_table(self):
        return self.pg.edge_table(self.relation_label, self.edge_ids)

    def resolve(self, ref):
        """
        External key of a node reference, looked up on every label of the relation.
        """
        error = None
        for label in self.labels:
            try:
                return self.pg.resolve_key(label, ref)
            except InvalidNode as e:
                error = e
        raise error

    @property
    def item_count(self):
        return self.node_count

    def to_data(self):
        table = self.edge_table()
        return {
            'relation': self.relation_label,
            'directed': self.directed,
            'provenance': self.provenance,
            'nodes': self.node_keys,
            'edges': table.to_data()['rows'],
        }

    def __repr__(self):
        return '<StageGraphView %s nodes=%d edges=%d from=%s>' % (
            self.relation_label, self.node_count, self.edge_count, self.provenance)


def _member_ids(pg, labels, keys):
    members = {label: [] for label in labels}
    for key in keys:
        found = False
        for label in labels:
            node_id = pg.nodes[label].index.get(key)
            if node_id is not None:
                members[label].append(node_id)
                found = True
        if not found:
            raise InvalidNode('node %r is not part of the graph' % (key,), node=str(key))
    return members


def materialize_stage_input(upstream, pg, relation_label, provenance=None):
    """
    Turn an upstream NodeSet or CycleSet into the induced view it spans.

    A CycleSet contributes the union of its cycle members.
    """
    if isinstance(upstream, CycleSet):
        keys = upstream.node_union()
    elif isinstance(upstream, NodeSet):
        keys = list(upstream.nodes)
    else:
        raise KindMismatch('only NodeSet and CycleSet outputs can become a graph view, got %s'
                           % upstream.__class__.__name__)
    relation = pg.relation(relation_label)
    labels = (relation.src_label, relation.dst_label) if relation.bipartite else (relation.src_label,)
    return StageGraphView(pg, relation_label, _member_ids(pg, labels, keys), provenance)
