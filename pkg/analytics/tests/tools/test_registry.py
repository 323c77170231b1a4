import pytest

from analytics.algorithms.results import NodeScores, NodeSet, Scalar
from analytics.exceptions import (
    ConstraintViolation, DescriptorInvalid, DuplicateTool, EmptySeedSet, ExecutorError, KindMismatch,
    SchemaViolation, UnknownTool
)
from analytics.tools import (
    NODE_SCORES, NODE_SET, InputSlot, InvocationRequest, ParamSpec, ToolDescriptor, ToolRegistry, builtin_registry
)
from analytics.tools.builtins import PAGERANK
from analytics.tools.codec import graph_from_edges
from analytics.tools.descriptors import DIRECTED, FLOAT, INT

TRIANGLE = [['a', 'b', 5.0], ['b', 'c', 7.0], ['c', 'a', 2.0]]


def echo_descriptor(name='echo', **overrides):
    data = dict(
        name=name, family='testing', description='returns its scores',
        inputs=[InputSlot('scores', NODE_SCORES)],
        params=[ParamSpec('factor', FLOAT, 1.0, minimum=0.0, maximum=10.0)],
        output_kind=NODE_SCORES,
    )
    data.update(overrides)
    return ToolDescriptor(**data)


def test_builtin_registry_names():
    registry = builtin_registry()
    assert registry.names() == [
        'aggregate_flows', 'connected_components', 'enumerate_cycles', 'khop', 'pagerank',
        'personalized_pagerank', 'top_k',
    ]
    assert len(registry) == 7
    assert 'pagerank' in registry
    assert [d['name'] for d in registry.describe_all()] == registry.names()


def test_describe_pagerank():
    data = builtin_registry().describe('pagerank')
    assert data['family'] == 'ranking'
    assert data['output_kind'] == 'NodeScores'
    damping = [p for p in data['params'] if p['name'] == 'damping'][0]
    assert damping['default'] == 0.85
    assert damping['exclusive_minimum'] and damping['exclusive_maximum']


def test_register_duplicate_fails():
    registry = ToolRegistry()
    registry.register(echo_descriptor(), lambda inputs, params: inputs['scores'])
    with pytest.raises(DuplicateTool):
        registry.register(echo_descriptor(), lambda inputs, params: inputs['scores'])
    assert registry.names() == ['echo']


@pytest.mark.parametrize('overrides', [
    {'params': [ParamSpec('factor', FLOAT, 20.0, minimum=0.0, maximum=10.0)]},
    {'params': [ParamSpec('factor', 'complex', 1.0)]},
    {'params': [ParamSpec('factor', FLOAT, 1.0), ParamSpec('factor', INT, 1)]},
    {'inputs': [InputSlot('scores', 'Matrix')]},
    {'inputs': [InputSlot('scores', NODE_SCORES, constraints=('sorted',))]},
    {'output_kind': 'Matrix'},
])
def test_invalid_descriptor_is_rejected(overrides):
    with pytest.raises(DescriptorInvalid):
        ToolRegistry().register(echo_descriptor(**overrides), lambda inputs, params: None)


def test_unknown_tool():
    with pytest.raises(UnknownTool) as excinfo:
        builtin_registry().invoke(InvocationRequest('betweenness'))
    assert excinfo.value.rpc_code == 1001


def test_invoke_pagerank():
    raw = builtin_registry().invoke(InvocationRequest('pagerank', {'graph': graph_from_edges(TRIANGLE)}))
    assert raw.kind == NODE_SCORES
    assert raw.tool == 'pagerank'
    assert sorted(raw.payload.keys) == ['a', 'b', 'c']
    assert sum(v for _, v in raw.payload.items()) == pytest.approx(1.0)
    assert raw.stats['item_count'] == 3
    assert raw.stats['byte_size'] > 0


def test_invoke_fills_defaults_and_coerces():
    seen = {}

    def executor(inputs, params):
        seen.update(params)
        return inputs['scores']

    registry = ToolRegistry()
    registry.register(echo_descriptor(params=[
        ParamSpec('factor', FLOAT, 1.0, minimum=0.0, maximum=10.0), ParamSpec('rounds', INT, 3, minimum=1),
    ]), executor)
    registry.invoke(InvocationRequest('echo', {'scores': NodeScores([1.0], ['a'])}, {'factor': 2, 'rounds': 4.0}))
    assert seen == {'factor': 2.0, 'rounds': 4}
    assert isinstance(seen['factor'], float) and isinstance(seen['rounds'], int)


@pytest.mark.parametrize('params,field', [
    ({'damping': 1.0}, 'damping'),
    ({'damping': 0.0}, 'damping'),
    ({'damping': 'high'}, 'damping'),
    ({'max_iter': 2.5}, 'max_iter'),
    ({'weighted': 1}, 'weighted'),
    ({'alpha': 0.5}, 'alpha'),
])
def test_param_violations(params, field):
    request = InvocationRequest('pagerank', {'graph': graph_from_edges(TRIANGLE)}, params)
    with pytest.raises(SchemaViolation) as excinfo:
        builtin_registry().invoke(request)
    assert excinfo.value.field == field
    assert excinfo.value.rpc_code == 1002


def test_input_kind_violation():
    request = InvocationRequest('top_k', {'scores': NodeSet(['a'])})
    with pytest.raises(SchemaViolation) as excinfo:
        builtin_registry().invoke(request)
    assert excinfo.value.field == 'scores'


def test_missing_input():
    with pytest.raises(SchemaViolation) as excinfo:
        builtin_registry().invoke(InvocationRequest('pagerank'))
    assert excinfo.value.field == 'graph'


def test_cycles_need_a_directed_graph():
    request = InvocationRequest('enumerate_cycles', {'graph': graph_from_edges(TRIANGLE, directed=False)})
    with pytest.raises(ConstraintViolation) as excinfo:
        builtin_registry().invoke(request)
    assert excinfo.value.rpc_code == 1003
    assert excinfo.value.details == {'slot': 'graph', 'constraint': DIRECTED}


def test_executor_failure_is_wrapped():
    graph = graph_from_edges(TRIANGLE)
    request = InvocationRequest('personalized_pagerank', {'graph': graph, 'seeds': NodeSet([])})
    with pytest.raises(ExecutorError) as excinfo:
        builtin_registry().invoke(request)
    assert isinstance(excinfo.value.cause, EmptySeedSet)
    assert excinfo.value.rpc_code == 1004
    assert excinfo.value.details['cause'] == 'EmptySeedSet'


def test_wrong_output_kind_is_an_executor_error():
    registry = ToolRegistry()
    registry.register(echo_descriptor(), lambda inputs, params: Scalar(1))
    with pytest.raises(ExecutorError) as excinfo:
        registry.invoke(InvocationRequest('echo', {'scores': NodeScores([1.0], ['a'])}))
    assert isinstance(excinfo.value.cause, KindMismatch)


def test_personalized_pagerank_by_seed():
    graph = graph_from_edges(TRIANGLE + [['d', 'a', 1.0]])
    raw = builtin_registry().invoke(
        InvocationRequest('personalized_pagerank', {'graph': graph, 'seeds': NodeSet(['d'])})
    )
    scores = dict(raw.payload.items())
    assert scores['d'] == pytest.approx(0.15, abs=1e-6)
    assert scores['a'] > scores['b'] > scores['c']


def test_slot_violations_report_unknown_slots():
    violations = PAGERANK.slot_violations({'graph': 'Graph', 'seeds': NODE_SET})
    assert [v.field for v in violations] == ['seeds']
