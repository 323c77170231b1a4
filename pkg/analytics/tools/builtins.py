"""
The built-in analytical tools and their descriptors.
"""
from django.conf import settings

from analytics.algorithms import (
    aggregate_flows, connected_components, enumerate_cycles, khop, pagerank, personalized_pagerank, top_k
)
from analytics.algorithms.components import STRONG, WEAK
from analytics.algorithms.cycles import DEFAULT_MAX_LEN, DEFAULT_MIN_LEN, LENGTH_CAP, MAX_CYCLES
from analytics.algorithms.ranking import DEFAULT_DAMPING, DEFAULT_MAX_ITER, DEFAULT_TOL
from analytics.algorithms.results import EdgeTable
from analytics.construction.csr import CsrGraph
from analytics.exceptions import ConstraintViolation

from .descriptors import BOOL, DIRECTED, FLOAT, INT, NODE, STR, WEIGHTED, InputSlot, ParamSpec, ToolDescriptor
from .kinds import CYCLE_SET, GRAPH, NODE_SCORES, NODE_SET, TABLE


def _layout(graph):
    return graph if isinstance(graph, CsrGraph) else graph.csr()


def _resolve(graph, ref):
    if ref is None or isinstance(graph, CsrGraph):
        return ref
    return graph.resolve(ref)


def _ranking_params():
    return [
        ParamSpec('damping', FLOAT, DEFAULT_DAMPING, minimum=0.0, maximum=1.0, exclusive_minimum=True,
                  exclusive_maximum=True, description='probability of following an edge'),
        ParamSpec('tol', FLOAT, DEFAULT_TOL, minimum=0.0, maximum=1.0, exclusive_minimum=True,
                  description='L1 convergence tolerance'),
        ParamSpec('max_iter', INT, DEFAULT_MAX_ITER, minimum=1, maximum=10000),
        ParamSpec('weighted', BOOL, False, description='follow edges proportionally to their weight'),
    ]


#############
# Executors #
#############

def run_pagerank(inputs, params):
    return pagerank(_layout(inputs['graph']), params['damping'], params['tol'], params['max_iter'],
                    params['weighted'])


def run_personalized_pagerank(inputs, params):
    graph = inputs['graph']
    seeds = [_resolve(graph, s) for s in inputs['seeds']]
    return personalized_pagerank(_layout(graph), seeds, params['damping'], params['tol'], params['max_iter'],
                                 params['weighted'])


def run_enumerate_cycles(inputs, params):
    graph = inputs['graph']
    return enumerate_cycles(
        _layout(graph), params['min_len'], params['max_len'], anchor=_resolve(graph, params['anchor']),
        min_weight=params['min_weight'], max_cycles=params['max_cycles'],
        length_cap=getattr(settings, 'AAG_CYCLE_LENGTH_CAP', LENGTH_CAP),
    )


def run_connected_components(inputs, params):
    return connected_components(_layout(inputs['graph']), params['mode'])


def run_khop(inputs, params):
    graph = inputs['graph']
    return khop(_layout(graph), [_resolve(graph, s) for s in inputs['seeds']], params['k'])


def run_aggregate_flows(inputs, params):
    table = inputs['table']
    if not isinstance(table, EdgeTable):
        raise ConstraintViolation('aggregate_flows needs an edge table with src, dst and weight columns')
    return aggregate_flows(table, params['group'], params['focus'], params['min_amount'])


def run_top_k(inputs, params):
    return top_k(inputs['scores'], params['k'])


###############
# Descriptors #
###############

PAGERANK = ToolDescriptor(
    'pagerank', 'ranking',
    'Global importance of every node by PageRank power iteration with uniform teleport.',
    [InputSlot('graph', GRAPH)],
    _ranking_params(),
    NODE_SCORES,
    'Dangling mass is redistributed uniformly; scores sum to 1.',
)

PERSONALIZED_PAGERANK = ToolDescriptor(
    'personalized_pagerank', 'ranking',
    'Proximity of every node to a seed set: PageRank teleporting to the seeds only.',
    [InputSlot('graph', GRAPH), InputSlot('seeds', NODE_SET)],
    _ranking_params(),
    NODE_SCORES,
    'Teleport and dangling mass go uniformly to the seeds.',
)

ENUMERATE_CYCLES = ToolDescriptor(
    'enumerate_cycles', 'cycle_detection',
    'All simple directed cycles within a length range, optionally through one anchor node and over edges '
    'at or above a weight threshold.',
    [InputSlot('graph', GRAPH, constraints=(DIRECTED,))],
    [
        ParamSpec('min_len', INT, DEFAULT_MIN_LEN, minimum=2, maximum=LENGTH_CAP),
        ParamSpec('max_len', INT, DEFAULT_MAX_LEN, minimum=2, maximum=LENGTH_CAP),
        ParamSpec('anchor', NODE, None, description='only cycles through this node'),
        ParamSpec('min_weight', FLOAT, None, minimum=0.0, description='drop lighter edges before searching'),
        ParamSpec('max_cycles', INT, MAX_CYCLES, minimum=1, maximum=MAX_CYCLES),
    ],
    CYCLE_SET,
    'Depth-bounded search; output is capped at max_cycles with a truncation flag.',
)

CONNECTED_COMPONENTS = ToolDescriptor(
    'connected_components', 'connectivity',
    'Weakly or strongly connected components, each node labeled by the smallest id of its component.',
    [InputSlot('graph', GRAPH)],
    [ParamSpec('mode', STR, WEAK, choices=(WEAK, STRONG))],
    NODE_SCORES,
    'Values are component representatives, not scores.',
)

KHOP = ToolDescriptor(
    'khop', 'neighborhood',
    'Nodes reachable from the seeds in at most k out-hops.',
    [InputSlot('graph', GRAPH), InputSlot('seeds', NODE_SET)],
    [ParamSpec('k', INT, 2, minimum=0, maximum=10)],
    NODE_SET,
)

AGGREGATE_FLOWS = ToolDescriptor(
    'aggregate_flows', 'flow_aggregation',
    'Incoming and outgoing amount totals and counts per node over an edge table.',
    [InputSlot('table', TABLE, constraints=(WEIGHTED,))],
    [
        ParamSpec('group', STR, None, description='entity label to group by on bipartite relations'),
        ParamSpec('focus', NODE, None, description='report this node only'),
        ParamSpec('min_amount', FLOAT, None, minimum=0.0),
    ],
    TABLE,
    'Whole-cent amounts are summed exactly.',
)

TOP_K = ToolDescriptor(
    'top_k', 'ranking',
    'The k best scored nodes, ties broken by node id.',
    [InputSlot('scores', NODE_SCORES)],
    [ParamSpec('k', INT, 10, minimum=1, maximum=10000)],
    NODE_SET,
)

BUILTIN_TOOLS = (
    (PAGERANK, run_pagerank),
    (PERSONALIZED_PAGERANK, run_personalized_pagerank),
    (ENUMERATE_CYCLES, run_enumerate_cycles),
    (CONNECTED_COMPONENTS, run_connected_components),
    (KHOP, run_khop),
    (AGGREGATE_FLOWS, run_aggregate_flows),
    (TOP_K, run_top_k),
)
