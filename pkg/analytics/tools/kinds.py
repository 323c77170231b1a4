from analytics.algorithms.results import CycleSet, EdgeTable, NodeScores, NodeSet, Scalar, Table
from analytics.construction.csr import CsrGraph
from analytics.construction.views import StageGraphView

GRAPH = 'Graph'
NODE_SCORES = 'NodeScores'
NODE_SET = 'NodeSet'
CYCLE_SET = 'CycleSet'
TABLE = 'Table'
SCALAR = 'Scalar'
KINDS = (GRAPH, NODE_SCORES, NODE_SET, CYCLE_SET, TABLE, SCALAR)

_PAYLOAD_KINDS = (
    (StageGraphView, GRAPH),
    (CsrGraph, GRAPH),
    (NodeScores, NODE_SCORES),
    (NodeSet, NODE_SET),
    (CycleSet, CYCLE_SET),
    (EdgeTable, TABLE),
    (Table, TABLE),
    (Scalar, SCALAR),
)


def kind_of(value):
    for cls, kind in _PAYLOAD_KINDS:
        if isinstance(value, cls):
            return kind
    return None
