import logging

import numpy as np
import pandas as pd

from analytics.algorithms.results import EdgeTable
from analytics.exceptions import ExtractionError, InvalidNode, UnknownRelation

from .catalog import FLOAT, INT, STRING, TIMESTAMP
from .schema import Predicate

logger = logging.getLogger(__name__)


class NodeTable(object):
    """
    Nodes of one entity label: dense ids assigned in first-seen order.
    """

    def __init__(self, label, attribute_names=()):
        self.label = label
        self.keys = []
        self.index = {}
        self.attribute_names = list(attribute_names)
        self.attributes = {name: [] for name in self.attribute_names}

    def __len__(self):
        return len(self.keys)

    def intern(self, key, attributes=None):
        node_id = self.index.get(key)
        if node_id is None:
            node_id = len(self.keys)
            self.index[key] = node_id
            self.keys.append(key)
            for name in self.attribute_names:
                self.attributes[name].append((attributes or {}).get(name))
        return node_id

    def find(self, ref):
        if ref in self.index:
            return self.index[ref]
        if isinstance(ref, str) and ref.lstrip('-').isdigit() and int(ref) in self.index:
            return self.index[int(ref)]
        matches = [
            i for name in self.attribute_names
            for i, value in enumerate(self.attributes[name]) if value == ref
        ]
        matches = sorted(set(matches))
        if len(matches) == 1:
            return matches[0]
        if len(matches) > 1:
            raise InvalidNode('%r names %d %s nodes' % (ref, len(matches), self.label), node=str(ref))
        raise InvalidNode('no %s node %r' % (self.label, ref), node=str(ref))


class EdgeRelation(object):
    def __init__(self, label, src_label, dst_label, src_ids, dst_ids, weights=None, attributes=None,
                 row_index=None, directed=True, weight_column=None):
        self.label = label
        self.src_label = src_label
        self.dst_label = dst_label
        self.src_ids = np.asarray(src_ids, dtype=np.int64)
        self.dst_ids = np.asarray(dst_ids, dtype=np.int64)
        self.weights = None if weights is None else np.asarray(weights, dtype=np.float64)
        self.attributes = dict(attributes or {})
        self.row_index = np.asarray(row_index if row_index is not None else np.arange(len(self.src_ids)))
        self.directed = directed
        self.weight_column = weight_column

    def __len__(self):
        return len(self.src_ids)

    @property
    def bipartite(self):
        return self.src_label != self.dst_label


class PropertyGraph(object):
    """
    Typed node tables per entity label and typed edge tables per relation label.
    """

    def __init__(self, nodes=None, relations=None):
        self.nodes = dict(nodes or {})
        self.relations = dict(relations or {})
        self.skipped = {}
        self.columns_read = {}

    def node_table(self, label):
        return self.nodes[label]

    def relation(self, label):
        try:
            return self.relations[label]
        except KeyError:
            raise UnknownRelation('graph has no relation %r' % (label,))

    def key_of(self, label, node_id):
        return self.nodes[label].keys[node_id]

    def resolve(self, label, ref):
        return self.nodes[label].find(ref)

    def resolve_key(self, label, ref):
        return self.key_of(label, self.resolve(label, ref))

    def edge_table(self, relation_label, edge_ids=None):
        relation = self.relation(relation_label)
        src_keys = self.nodes[relation.src_label].keys
        dst_keys = self.nodes[relation.dst_label].keys
        src_ids = relation.src_ids if edge_ids is None else relation.src_ids[edge_ids]
        dst_ids = relation.dst_ids if edge_ids is None else relation.dst_ids[edge_ids]
        weights = relation.weights
        if weights is not None and edge_ids is not None:
            weights = weights[edge_ids]
        return EdgeTable(
            [src_keys[i] for i in src_ids.tolist()], [dst_keys[i] for i in dst_ids.tolist()], weights,
            src_label=relation.src_label, dst_label=relation.dst_label, relation=relation_label,
            resolver=lambda ref: self.resolve_key(relation.src_label, ref),
        )

    def graph(self, relation_label):
        from .views import StageGraphView

        return StageGraphView.full(self, relation_label)

    def summary(self):
        return {
            'nodes': {label: len(table) for label, table in sorted(self.nodes.items())},
            'relations': {
                label: {
                    'edges': len(r), 'src': r.src_label, 'dst': r.dst_label,
                    'directed': r.directed, 'weighted': r.weights is not None,
                }
                for label, r in sorted(self.relations.items())
            },
            'skipped_rows': dict(sorted(self.skipped.items())),
        }


############
# Coercion #
############

def coerce(series, column_type):
    """
    Parse a string column; returns (values, invalid mask).
    """
    text = series.astype(str)
    if column_type == STRING:
        return text.to_numpy(dtype=object), np.zeros(len(text), dtype=bool)
    if column_type in (INT, FLOAT):
        numbers = pd.to_numeric(text.str.strip(), errors='coerce').to_numpy(dtype=np.float64)
        invalid = ~np.isfinite(numbers)
        if column_type == INT:
            invalid |= np.where(invalid, False, np.mod(np.nan_to_num(numbers), 1) != 0)
            values = np.array([int(v) if not bad else None for v, bad in zip(numbers, invalid)], dtype=object)
            return values, invalid
        return numbers, invalid
    if column_type == TIMESTAMP:
        stamps = pd.to_datetime(text, errors='coerce', utc=True, format='ISO8601')
        invalid = stamps.isna().to_numpy()
        return stamps.dt.tz_convert(None).to_numpy(), invalid
    raise ValueError('unknown column type %r' % (column_type,))


def _literal(value, column_type):
    if column_type == TIMESTAMP:
        return np.datetime64(pd.Timestamp(value, tz='UTC').tz_convert(None))
    return value


class _RowAudit(object):
    def __init__(self, source_id, size):
        self.source_id = source_id
        self.invalid = np.zeros(size, dtype=bool)
        self.reasons = {}

    def mark(self, bad, column, raw):
        for i in np.flatnonzero(bad & ~self.invalid):
            self.reasons[int(i)] = 'column %r: cannot parse %r' % (column, raw.iloc[i])
        self.invalid |= bad


def _parse_columns(frame, source, columns, audit, key_columns=()):
    parsed = {}
    for name in columns:
        column_type = source.column(name).type
        values, bad = coerce(frame[name], column_type)
        if name in key_columns:
            bad = bad | (frame[name].astype(str).str.strip() == '').to_numpy()
        audit.mark(bad, name, frame[name])
        parsed[name] = values
    return parsed


def _log_skipped(owner, audit, considered):
    skipped = np.flatnonzero(audit.invalid & considered)
    for i in skipped:
        # header is line 1 of the CSV
        logger.warning('%s: skipped %s line %d, %s', owner, audit.source_id, i + 2, audit.reasons[int(i)])
    return len(skipped)


def extract(frames, schema, catalog):
    """
    Materialize the schema's property graph from raw source frames.

    Row filters are applied first; rows that fail type coercion are skipped, logged
    and counted. An entity that has a dedicated source gets one node per distinct
    key of that source; other entities only exist as relation endpoints.
    """
    pg = PropertyGraph()
    pg.columns_read = {k: list(v) for k, v in frames.columns_read.items()}
    relation_sources = {r.source for r in schema.relations}
    for entity in schema.entities:
        pg.nodes[entity.label] = NodeTable(entity.label, entity.attributes)

    for entity in schema.entities:
        if entity.source in relation_sources:
            continue
        frame = frames[entity.source]
        source = catalog.get(entity.source)
        audit = _RowAudit(entity.source, len(frame))
        parsed = _parse_columns(frame, source, entity.columns(), audit, key_columns=(entity.key,))
        considered = np.ones(len(frame), dtype=bool)
        pg.skipped[entity.label] = _log_skipped(entity.label, audit, considered)
        if len(frame) and audit.invalid.all():
            raise ExtractionError('every row of %r is invalid' % entity.source)
        table = pg.nodes[entity.label]
        keys = parsed[entity.key]
        for i in np.flatnonzero(~audit.invalid):
            table.intern(keys[i], {name: _plain(parsed[name][i]) for name in entity.attributes})

    for relation in schema.relations:
        pg.relations[relation.label] = _extract_relation(relation, frames[relation.source],
                                                         catalog.get(relation.source), schema, pg)
    logger.info('extracted graph: %s', pg.summary())
    return pg


def _extract_relation(relation, frame, source, schema, pg):
    size = len(frame)
    audit = _RowAudit(relation.source, size)

    keep = np.ones(size, dtype=bool)
    for predicate in relation.filters:
        column_type = source.column(predicate.column).type
        values, bad = coerce(frame[predicate.column], column_type)
        audit.mark(bad, predicate.column, frame[predicate.column])
        literal = _literal(predicate.value, column_type)
        passes = np.zeros(size, dtype=bool)
        good = ~bad
        if good.any():
            passes[good] = Predicate(predicate.column, predicate.op, literal).mask(values[good])
        keep &= passes | bad

    others = [c for c in relation.columns() if c not in {p.column for p in relation.filters}]
    parsed = _parse_columns(frame, source, others, audit,
                            key_columns=(relation.src_column, relation.dst_column))
    pg.skipped[relation.label] = _log_skipped(relation.label, audit, keep)
    if size and audit.invalid.all():
        raise ExtractionError('every row of %r is invalid for relation %r' % (relation.source, relation.label))

    used = np.flatnonzero(keep & ~audit.invalid)
    src_table = pg.nodes[relation.src_entity]
    dst_table = pg.nodes[relation.dst_entity]
    src_keys = parsed[relation.src_column]
    dst_keys = parsed[relation.dst_column]
    src_ids = np.empty(len(used), dtype=np.int64)
    dst_ids = np.empty(len(used), dtype=np.int64)
    for j, i in enumerate(used):
        src_ids[j] = src_table.intern(src_keys[i])
        dst_ids[j] = dst_table.intern(dst_keys[i])
    weights = None
    if relation.weight:
        weights = np.asarray(parsed[relation.weight][used], dtype=np.float64)
    attributes = {name: np.asarray(parsed[name])[used] for name in relation.attributes}
    logger.info('relation %s: %d edges kept of %d rows (%d skipped)',
                relation.label, len(used), size, pg.skipped[relation.label])
    return EdgeRelation(
        relation.label, relation.src_entity, relation.dst_entity, src_ids, dst_ids, weights,
        attributes=attributes, row_index=used, directed=relation.directed, weight_column=relation.weight,
    )


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    return value
