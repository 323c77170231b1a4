"""
JSON encoding of tool values for the wire.

Every encoded value is an object carrying its ``kind``. Graphs travel as edge
lists; an edge with a third element makes the graph weighted.
"""
from analytics.algorithms.results import CycleSet, EdgeTable, NodeScores, NodeSet, Scalar, Table
from analytics.construction.extract import EdgeRelation, NodeTable, PropertyGraph
from analytics.construction.views import StageGraphView
from analytics.exceptions import SchemaViolation

from .kinds import CYCLE_SET, GRAPH, NODE_SCORES, NODE_SET, SCALAR, TABLE, kind_of

WIRE_ENTITY = 'node'
WIRE_RELATION = 'edge'


def encode_value(value):
    kind = kind_of(value)
    if kind is None:
        raise SchemaViolation('cannot encode %s' % value.__class__.__name__, given=value.__class__.__name__)
    if kind == GRAPH and not isinstance(value, StageGraphView):
        data = {
            'directed': value.directed,
            'nodes': list(value.keys),
            'edges': [[value.keys[u], value.keys[v], w] if value.weighted else [value.keys[u], value.keys[v]]
                      for u, v, w in value.edges()],
        }
    elif kind == GRAPH:
        data = value.to_data()
        data['edges'] = [row if value.weighted else row[:2] for row in data['edges']]
        data.pop('relation')
        data.pop('provenance')
    else:
        data = value.to_data()
    return dict(data, kind=kind)


def graph_from_edges(edges, directed=True, nodes=()):
    """
    A single-relation property graph and its full view from an edge list.
    """
    table = NodeTable(WIRE_ENTITY)
    for key in nodes:
        table.intern(key)
    weighted = bool(edges) and all(len(edge) == 3 for edge in edges)
    if edges and not weighted and any(len(edge) != 2 for edge in edges):
        raise SchemaViolation('edges must all be [src, dst] or all [src, dst, weight]', field='edges')
    sources = [table.intern(edge[0]) for edge in edges]
    targets = [table.intern(edge[1]) for edge in edges]
    weights = [float(edge[2]) for edge in edges] if weighted else None
    relation = EdgeRelation(WIRE_RELATION, WIRE_ENTITY, WIRE_ENTITY, sources, targets, weights, directed=directed)
    pg = PropertyGraph({WIRE_ENTITY: table}, {WIRE_RELATION: relation})
    return StageGraphView.full(pg, WIRE_RELATION)


def _decode(kind, data):
    if kind == GRAPH:
        return graph_from_edges(data['edges'], data.get('directed', True), data.get('nodes', ()))
    if kind == NODE_SCORES:
        pairs = data['scores']
        return NodeScores([p[1] for p in pairs], [p[0] for p in pairs], data.get('converged', True),
                          data.get('iterations', 0), labeling=data.get('labeling', False))
    if kind == NODE_SET:
        return NodeSet(data['nodes'], data.get('scores'), data.get('edge_count'))
    if kind == CYCLE_SET:
        return CycleSet(data['cycles'], truncated=data.get('truncated', False))
    if kind == TABLE:
        columns = list(data['columns'])
        rows = data['rows']
        if columns == list(EdgeTable.columns):
            weights = [r[2] for r in rows] if all(r[2] is not None for r in rows) else None
            return EdgeTable([r[0] for r in rows], [r[1] for r in rows], weights)
        return Table(columns, rows)
    if kind == SCALAR:
        return Scalar(data['value'])
    raise SchemaViolation('unknown value kind %r' % (kind,), field='kind', given=kind)


def decode_value(data, field=None):
    if not isinstance(data, dict) or 'kind' not in data:
        raise SchemaViolation('encoded values are objects with a "kind"', field=field, given=data)
    try:
        return _decode(data['kind'], data)
    except (KeyError, IndexError, TypeError, ValueError) as e:
        raise SchemaViolation('malformed %s value: %s' % (data['kind'], e), field=field, expected=data['kind'])
